#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "zorbit/bigint.hpp"
#include "zorbit/errors.hpp"
#include "zorbit/factor.hpp"
#include "zorbit/orbit.hpp"

namespace zorbit {

enum class factor_status { not_requested, complete, partial };

inline const char* to_string(factor_status s) {
    switch (s) {
        case factor_status::not_requested: return "not_requested";
        case factor_status::complete: return "complete";
        case factor_status::partial: return "partial";
    }
    return "?";
}

inline factor_status factor_status_from_string(const std::string& s) {
    if (s == "not_requested") return factor_status::not_requested;
    if (s == "complete") return factor_status::complete;
    if (s == "partial") return factor_status::partial;
    throw precondition_violated("unknown factor_status: " + s);
}

// Split of |b_n| into the primitive part P_n (prime powers appearing for
// the first time at index n) and the non-primitive part N_n (prime powers
// already seen earlier).  Always P_n * N_n = |b_n|, with no factoring
// needed: N_n is the product of the primitive parts over the proper
// divisors of n.
struct decomposition {
    long n = 0;
    Int abs_term;
    Int primitive_part;
    Int nonprimitive_part;
    std::vector<prime_power> primitive_primes;  // factorization of P_n, when requested
    factor_status status = factor_status::not_requested;
    Int unresolved_cofactor = 1;  // divides primitive_part; > 1 only when partial
    cofactor_class cofactor_cls = cofactor_class::unit;
};

// Per-(c, d) memo table over the zero orbit.  Entries are built bottom-up
// along the divisor lattice and never change once computed, except that a
// factoring request can upgrade status from not_requested.  Rejects
// preperiodic parameters outright: the decomposition presumes the rigid
// divisibility structure of an infinite orbit.
class decomposition_table {
public:
    explicit decomposition_table(map_params params, long digit_cap = default_digit_cap)
        : params_(params), digit_cap_(digit_cap), orbit_(params, Int(0)) {
        if (!classify(params).wandering()) {
            throw preperiodic_orbit("decomposition_table: zero orbit is finite for c=" +
                                    std::to_string(params.c) + ", d=" + std::to_string(params.d));
        }
    }

    const map_params& params() const { return params_; }
    long digit_cap() const { return digit_cap_; }
    const orbit& zero_orbit() const { return orbit_; }

    // Largest index <= n whose term fits under the digit cap.
    long extend_up_to(long n) { return orbit_.extend_up_to(n, digit_cap_); }

    // Decomposition of term n; computes (and memoizes) P_d for every
    // divisor d of n on first use.  No factoring.
    const decomposition& at(long n) {
        if (n < 1) throw precondition_violated("decomposition_table: index must be >= 1");
        auto it = memo_.find(n);
        if (it != memo_.end()) return it->second;

        orbit_.extend_to(n, digit_cap_);
        Int nonprim = 1;
        for (long dd = 1; dd < n; ++dd) {
            if (n % dd == 0) nonprim *= at(dd).primitive_part;
        }
        decomposition dec;
        dec.n = n;
        dec.abs_term = orbit_.abs_term(n);
        if (!mpz_divisible_p(dec.abs_term.get_mpz_t(), nonprim.get_mpz_t())) {
            throw rigidity_violation("N_" + std::to_string(n) + " = " + to_decimal(nonprim) +
                                     " does not divide |b_" + std::to_string(n) + "| = " +
                                     to_decimal(dec.abs_term));
        }
        dec.nonprimitive_part = nonprim;
        dec.primitive_part = dec.abs_term / nonprim;
        return memo_.emplace(n, std::move(dec)).first->second;
    }

    Int nonprimitive_part(long n) { return at(n).nonprimitive_part; }
    Int primitive_part(long n) { return at(n).primitive_part; }

    // P_n > 1, i.e. some prime divides b_n but no earlier term.
    // Needs no factorization.
    bool has_primitive_prime(long n) { return at(n).primitive_part > 1; }

    // Factor P_n under the budget and record the outcome on the entry.
    const decomposition& primitive_primes(long n, const factor_budget& budget = {}) {
        decomposition& dec = mutable_at(n);
        if (dec.status == factor_status::complete) return dec;
        const factor_result fr = factor(dec.primitive_part, budget);
        dec.primitive_primes = fr.known_factors;
        dec.unresolved_cofactor = fr.cofactor;
        dec.cofactor_cls = fr.cls;
        dec.status = fr.complete() ? factor_status::complete : factor_status::partial;
        return dec;
    }

    // Adopt factor data from a previously computed decomposition (e.g. a
    // cache row).  P_n and N_n are always recomputed from the recursion --
    // they are cheap and a multiplicatively-consistent but wrong split
    // would silently poison every multiple of n -- so only the
    // factorization of P_n is taken from the candidate, after validation.
    // Returns false (storing nothing) on any mismatch.
    bool adopt(const decomposition& dec) {
        if (dec.n < 1) return false;
        if (orbit_.extend_up_to(dec.n, digit_cap_) < dec.n) return false;
        const decomposition& own = at(dec.n);
        if (dec.abs_term != own.abs_term || dec.primitive_part != own.primitive_part ||
            dec.nonprimitive_part != own.nonprimitive_part) {
            return false;
        }
        if (dec.status == factor_status::not_requested) return true;
        if (dec.unresolved_cofactor < 1) return false;
        if (dec.status == factor_status::complete && dec.unresolved_cofactor != 1) return false;
        if (dec.status == factor_status::partial && dec.unresolved_cofactor == 1) return false;
        Int prod = dec.unresolved_cofactor;
        for (const auto& f : dec.primitive_primes) {
            if (f.exponent < 1 || !is_probable_prime(f.prime)) return false;
            prod *= pow_int(f.prime, f.exponent);
        }
        if (prod != own.primitive_part) return false;
        decomposition& entry = mutable_at(dec.n);
        if (entry.status == factor_status::not_requested) {
            entry.primitive_primes = dec.primitive_primes;
            entry.unresolved_cofactor = dec.unresolved_cofactor;
            entry.cofactor_cls = dec.cofactor_cls;
            entry.status = dec.status;
        }
        return true;
    }

private:
    decomposition& mutable_at(long n) {
        at(n);
        return memo_.find(n)->second;
    }

    map_params params_;
    long digit_cap_;
    orbit orbit_;
    std::map<long, decomposition> memo_;
};

// Per-index comparison of "b_n has a primitive prime" against the expected
// pattern: true for every n >= 2, and at n = 1 exactly when |c| != 1.
struct theorem_check {
    long n = 0;
    bool predicted = false;
    bool actual = false;
};

struct theorem_violation {
    long n = 0;
    bool predicted = false;
    bool actual = false;
    Int abs_term;
    Int primitive_part;
    Int nonprimitive_part;
};

struct theorem_report {
    long n_checked = 0;
    std::vector<theorem_check> checks;
    std::vector<theorem_violation> violations;

    bool conforms() const { return violations.empty(); }
};

inline bool primitive_prime_predicted(const map_params& params, long n) {
    if (n >= 2) return true;
    return params.c != 1 && params.c != -1;
}

inline theorem_report verify_theorem(decomposition_table& table, long n_max) {
    if (n_max < 1) throw precondition_violated("verify_theorem: need n_max >= 1");
    theorem_report rep;
    rep.n_checked = n_max;
    for (long n = 1; n <= n_max; ++n) {
        const decomposition& dec = table.at(n);
        theorem_check chk{n, primitive_prime_predicted(table.params(), n),
                          dec.primitive_part > 1};
        rep.checks.push_back(chk);
        if (chk.predicted != chk.actual) {
            rep.violations.push_back({n, chk.predicted, chk.actual, dec.abs_term,
                                      dec.primitive_part, dec.nonprimitive_part});
        }
    }
    return rep;
}

} // namespace zorbit
