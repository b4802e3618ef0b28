#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <string>

namespace zorbit {

// Exact arbitrary-precision integer.  Orbit terms grow doubly exponentially,
// so there is no fixed-width representation anywhere in the orbit path.
using Int = mpz_class;

// Number of decimal digits of |x| (0 counts as one digit).  May overshoot by
// one for values near a power of ten; callers use it for size projections
// only, never for exact arithmetic.
inline unsigned long decimal_digits(const Int& x) {
    if (sgn(x) == 0) return 1;
    return mpz_sizeinbase(x.get_mpz_t(), 10);
}

inline bool fits_u64(const Int& x) {
    // unsigned long is 64-bit on every platform we target
    static_assert(sizeof(unsigned long) == 8);
    return sgn(x) >= 0 && x.fits_ulong_p();
}

// gmpxx has no long long overloads; route through long (same width here)
inline Int from_ll(long long v) {
    static_assert(sizeof(long) == sizeof(long long));
    return Int(static_cast<long>(v));
}

inline std::uint64_t to_u64(const Int& x) {
    return static_cast<std::uint64_t>(x.get_ui());
}

inline Int gcd_int(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int pow_int(const Int& base, unsigned long exp) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

// x mod m normalized to [0, m)
inline Int mod_int(const Int& x, const Int& m) {
    Int r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline std::string to_decimal(const Int& x) {
    return x.get_str();
}

} // namespace zorbit
