#pragma once

#include <string>
#include <utility>
#include <vector>

#include "zorbit/bigint.hpp"
#include "zorbit/errors.hpp"

namespace zorbit {

inline constexpr long default_digit_cap = 1'000'000;

// The map z -> z^d + c over the integers.
struct map_params {
    long long c;
    int d;

    map_params(long long c_, int d_) : c(c_), d(d_) {
        if (d_ < 2) throw precondition_violated("map_params: degree must be >= 2");
    }

    friend bool operator==(const map_params&, const map_params&) = default;
};

enum class orbit_kind { wandering, preperiodic };

// The three parameter families with a finite zero orbit.
enum class finite_orbit_case {
    none,              // wandering
    zero_fixed,        // c = 0
    two_cycle,         // c = -1, d even
    eventually_fixed,  // c = -2, d = 2
};

struct orbit_class {
    orbit_kind kind;
    finite_orbit_case why;

    bool wandering() const { return kind == orbit_kind::wandering; }
};

// Closed-form classification of the zero orbit: preperiodic exactly for
// c = 0, for c = -1 with d even, and for c = -2 with d = 2.  No iteration
// needed; simulation is only ever used as a test oracle against this.
inline orbit_class classify(const map_params& p) {
    if (p.c == 0) return {orbit_kind::preperiodic, finite_orbit_case::zero_fixed};
    if (p.c == -1 && p.d % 2 == 0) return {orbit_kind::preperiodic, finite_orbit_case::two_cycle};
    if (p.c == -2 && p.d == 2) return {orbit_kind::preperiodic, finite_orbit_case::eventually_fixed};
    return {orbit_kind::wandering, finite_orbit_case::none};
}

// A computed orbit prefix: term(n) is the n-th iterate of the map at the
// seed, 1-indexed; the seed itself is not a term.  Exact arithmetic
// throughout.  Immutable through the const interface; extension appends
// only.
class orbit {
public:
    orbit(map_params params, Int seed) : params_(params), seed_(std::move(seed)) {}

    const map_params& params() const { return params_; }
    const Int& seed() const { return seed_; }
    long size() const { return static_cast<long>(terms_.size()); }

    const Int& term(long n) const {
        if (n < 1 || n > size()) {
            throw index_out_of_range("orbit: term " + std::to_string(n) + " of " +
                                     std::to_string(size()));
        }
        return terms_[static_cast<std::size_t>(n - 1)];
    }

    Int abs_term(long n) const { return abs(term(n)); }

    const std::vector<Int>& terms() const { return terms_; }

    // Grow to n terms, refusing any step whose projected result would
    // exceed digit_cap decimal digits.  The projection multiplies the
    // current value's digit count by d, mirroring how iteration compounds.
    void extend_to(long n, long digit_cap = default_digit_cap) {
        while (size() < n) {
            const Int& cur = terms_.empty() ? seed_ : terms_.back();
            const unsigned long projected =
                static_cast<unsigned long>(params_.d) * decimal_digits(cur);
            if (digit_cap >= 0 && projected > static_cast<unsigned long>(digit_cap)) {
                throw digit_cap_exceeded("orbit: term " + std::to_string(size() + 1) +
                                         " projects to ~" + std::to_string(projected) +
                                         " digits, cap " + std::to_string(digit_cap));
            }
            Int next = pow_int(cur, static_cast<unsigned long>(params_.d));
            next += static_cast<long>(params_.c);
            terms_.push_back(std::move(next));
        }
    }

    // Like extend_to but clamps at the cap instead of throwing.
    // Returns the number of terms actually available.
    long extend_up_to(long n, long digit_cap = default_digit_cap) {
        try {
            extend_to(n, digit_cap);
        } catch (const digit_cap_exceeded&) {
        }
        return size();
    }

private:
    map_params params_;
    Int seed_;
    std::vector<Int> terms_;
};

// n exact iterates of the map at the seed.
inline orbit iterate(const map_params& params, const Int& seed, long n,
                     long digit_cap = default_digit_cap) {
    if (n < 1) throw precondition_violated("iterate: need n >= 1");
    orbit o(params, seed);
    o.extend_to(n, digit_cap);
    return o;
}

// True iff |a| >= |c| and |a| > 2, the hypothesis under which every orbit
// of a is strictly increasing in absolute value.
inline bool increasing_hypothesis_holds(const Int& a, const map_params& params) {
    const Int mag = abs(a);
    const Int cmag = abs(from_ll(params.c));
    return mag >= cmag && mag > 2;
}

// Growth facts about a wandering zero orbit.  Three per-index series, all
// expected true:
//   increasing:     |b_m| > |b_{m-1}|                      for m >= 2
//   gap_bound:      |b_m| > |b_{m-1}| (|b_{m-1}| - 1)      for m >= 3
//   product_bound:  |b_1| ... |b_{m-1}| < |b_m|            for m >= 3
// The product bound at m = 2 is not claimed; it is recorded informationally
// and does not affect all_ok().
struct growth_report {
    long terms_checked = 0;
    std::vector<bool> increasing;       // entry i covers m = i + 2
    std::vector<bool> gap_bound;        // entry i covers m = i + 3
    std::vector<bool> product_bound;    // entry i covers m = i + 3
    bool product_bound_at_2 = true;

    struct failure {
        std::string series;
        long m;
    };
    std::vector<failure> failures;

    bool all_ok() const { return failures.empty(); }
};

inline growth_report verify_growth(const orbit& orb) {
    if (sgn(orb.seed()) != 0) {
        throw preperiodic_orbit("verify_growth: growth bounds are stated for the zero orbit");
    }
    if (!classify(orb.params()).wandering()) {
        throw preperiodic_orbit("verify_growth: zero orbit is finite for these parameters");
    }

    growth_report rep;
    rep.terms_checked = orb.size();
    Int prefix_product = 1;  // |b_1| ... |b_{m-1}|
    for (long m = 2; m <= orb.size(); ++m) {
        const Int prev = orb.abs_term(m - 1);
        const Int cur = orb.abs_term(m);

        const bool inc = cur > prev;
        rep.increasing.push_back(inc);
        if (!inc) rep.failures.push_back({"increasing", m});

        prefix_product *= prev;
        if (m == 2) {
            rep.product_bound_at_2 = prefix_product < cur;
            continue;
        }
        const bool gap = cur > prev * (prev - 1);
        rep.gap_bound.push_back(gap);
        if (!gap) rep.failures.push_back({"gap_bound", m});

        const bool prod = prefix_product < cur;
        rep.product_bound.push_back(prod);
        if (!prod) rep.failures.push_back({"product_bound", m});
    }
    return rep;
}

} // namespace zorbit
