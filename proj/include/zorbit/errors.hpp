#pragma once

#include <stdexcept>
#include <string>

namespace zorbit {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An iteration request whose projected term size exceeds the digit cap.
// Signals an infeasible request, not a math failure.
struct digit_cap_exceeded : error {
    using error::error;
};

// Zero is preperiodic for these parameters; the requested operation only
// makes sense for wandering orbits.
struct preperiodic_orbit : error {
    using error::error;
};

struct index_out_of_range : error {
    using error::error;
};

struct precondition_violated : error {
    using error::error;
};

// v_p(0) is not defined.
struct zero_valuation_undefined : error {
    using error::error;
};

// A composite (or < 2) value was passed where a prime is required.
struct not_prime : error {
    using error::error;
};

// The non-primitive part failed to divide the term exactly.  For z^d + c
// zero orbits this must never fire; seeing it means an implementation bug
// or corrupted input, never a slow path.
struct rigidity_violation : error {
    using error::error;
};

} // namespace zorbit
