#pragma once

#include <numeric>
#include <string>

#include "zorbit/bigint.hpp"
#include "zorbit/errors.hpp"
#include "zorbit/factor.hpp"
#include "zorbit/orbit.hpp"

namespace zorbit {

struct valuation_record {
    Int p;
    long n;
    unsigned long e;  // e = v_p(b_n)
};

// v_p(x): the exponent of p in x.  Signs are irrelevant to divisibility, so
// the valuation is taken on |x|.  p must be (probable) prime.
inline unsigned long vp(const Int& x, const Int& p) {
    if (sgn(x) == 0) throw zero_valuation_undefined("vp: v_p(0) is undefined");
    if (p < 2 || !is_probable_prime(p)) {
        throw not_prime("vp: " + to_decimal(p) + " is not prime");
    }
    Int reduced;
    const Int mag = abs(x);
    return mpz_remove(reduced.get_mpz_t(), mag.get_mpz_t(), p.get_mpz_t());
}

// Outcome of a divisibility-structure check.  A violation is a research
// signal rather than an error, so it comes back as the first violated
// instance instead of a throw.
struct check_outcome {
    bool ok = true;
    std::string witness;  // empty when ok

    explicit operator bool() const { return ok; }
};

namespace detail {

inline void require_term(const orbit& orb, long n, const char* what) {
    if (n < 1 || n > orb.size()) {
        throw index_out_of_range(std::string(what) + ": needs term " + std::to_string(n) +
                                 ", orbit holds " + std::to_string(orb.size()));
    }
}

} // namespace detail

// Once p divides b_n, the valuation repeats along every multiple index:
// v_p(b_{nk}) = v_p(b_n) for all k >= 1.  Checks k = 1..kmax.
inline check_outcome check_rds_property1(const orbit& orb, const Int& p, long n, long kmax) {
    if (kmax < 1) throw precondition_violated("check_rds_property1: kmax must be >= 1");
    detail::require_term(orb, n, "check_rds_property1");
    detail::require_term(orb, n * kmax, "check_rds_property1");
    const unsigned long e = vp(orb.term(n), p);
    if (e == 0) {
        throw precondition_violated("check_rds_property1: v_" + to_decimal(p) + "(b_" +
                                    std::to_string(n) + ") = 0");
    }
    for (long k = 2; k <= kmax; ++k) {
        const unsigned long ek = vp(orb.term(n * k), p);
        if (ek != e) {
            return {false, "k=" + std::to_string(k) + ": v_" + to_decimal(p) + "(b_" +
                               std::to_string(n * k) + ")=" + std::to_string(ek) +
                               " != v_" + to_decimal(p) + "(b_" + std::to_string(n) +
                               ")=" + std::to_string(e)};
        }
    }
    return {};
}

// When p divides both b_m and b_n, all three of v_p(b_m), v_p(b_n),
// v_p(b_{gcd(m,n)}) agree.
inline check_outcome check_rds_property2(const orbit& orb, const Int& p, long m, long n) {
    detail::require_term(orb, m, "check_rds_property2");
    detail::require_term(orb, n, "check_rds_property2");
    const unsigned long em = vp(orb.term(m), p);
    const unsigned long en = vp(orb.term(n), p);
    if (em == 0 || en == 0) {
        throw precondition_violated("check_rds_property2: p must divide both terms");
    }
    const long g = static_cast<long>(std::gcd(static_cast<unsigned long long>(m),
                                              static_cast<unsigned long long>(n)));
    const unsigned long eg = vp(orb.term(g), p);
    if (em != en || en != eg) {
        return {false, "v_" + to_decimal(p) + ": b_" + std::to_string(m) + " -> " +
                           std::to_string(em) + ", b_" + std::to_string(n) + " -> " +
                           std::to_string(en) + ", b_gcd=" + std::to_string(g) + " -> " +
                           std::to_string(eg)};
    }
    return {};
}

// The congruence driving both properties: with e = v_p(b_n) > 0,
// b_{kn+r} == b_r (mod p^{e+1}).
inline check_outcome check_congruence(const orbit& orb, const Int& p, long n, long k, long r) {
    if (k < 1 || r < 1) throw precondition_violated("check_congruence: need k >= 1 and r >= 1");
    detail::require_term(orb, n, "check_congruence");
    detail::require_term(orb, k * n + r, "check_congruence");
    const unsigned long e = vp(orb.term(n), p);
    if (e == 0) {
        throw precondition_violated("check_congruence: v_" + to_decimal(p) + "(b_" +
                                    std::to_string(n) + ") = 0");
    }
    const Int modulus = pow_int(p, e + 1);
    if (mpz_congruent_p(orb.term(k * n + r).get_mpz_t(), orb.term(r).get_mpz_t(),
                        modulus.get_mpz_t())) {
        return {};
    }
    return {false, "b_" + std::to_string(k * n + r) + " !== b_" + std::to_string(r) +
                       " (mod " + to_decimal(modulus) + ")"};
}

} // namespace zorbit
