#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <vector>

#include "zorbit/bigint.hpp"
#include "zorbit/errors.hpp"

namespace zorbit {

// Compute budget for factor().  Results are a deterministic function of
// (input, budget) as long as wall_time is unset; the wall clock cap is the
// one knob that trades reproducibility for latency.
struct factor_budget {
    std::uint64_t trial_limit = 1'000'000;     // largest trial divisor
    std::uint64_t rho_iterations = 1'000'000;  // Brent steps per cofactor
    std::optional<std::chrono::milliseconds> wall_time{};
};

// Epistemic status of the unfactored remainder.
//   unit           - nothing left, factorization complete
//   probable_prime - passes BPSW but is >= 2^64, so primality is unproven;
//                    reported as a cofactor, never asserted as a prime factor
//   composite      - provably composite, splitting budget exhausted
//   unknown        - wall clock expired before the remainder was classified
enum class cofactor_class { unit, probable_prime, composite, unknown };

struct prime_power {
    Int prime;
    unsigned long exponent = 1;
    friend bool operator==(const prime_power&, const prime_power&) = default;
};

struct factor_result {
    Int input = 1;
    std::vector<prime_power> known_factors;  // ascending; each proven prime (< 2^64)
    Int cofactor = 1;
    cofactor_class cls = cofactor_class::unit;

    bool complete() const { return cofactor == 1; }

    Int reconstruct() const {
        Int r = cofactor;
        for (const auto& f : known_factors) r *= pow_int(f.prime, f.exponent);
        return r;
    }
};

namespace detail {

inline const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> table = [] {
        constexpr std::uint32_t bound = 65536;
        std::vector<bool> sieve(bound, true);
        std::vector<std::uint32_t> ps;
        for (std::uint32_t i = 2; i < bound; ++i) {
            if (!sieve[i]) continue;
            ps.push_back(i);
            for (std::uint64_t j = std::uint64_t(i) * i; j < bound; j += i) sieve[j] = false;
        }
        return ps;
    }();
    return table;
}

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

// Strong probable prime test to base a; true means "passes".
inline bool sprp_u64(std::uint64_t n, std::uint64_t a) {
    a %= n;
    if (a == 0) return true;
    std::uint64_t q = n - 1;
    int j = 0;
    while ((q & 1) == 0) {
        q >>= 1;
        ++j;
    }
    std::uint64_t x = powmod_u64(a, q, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < j; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return true;
        if (x == 1) return false;
    }
    return false;
}

// Exact for all 64-bit inputs: the first twelve prime bases are a proven
// deterministic witness set well past 2^64.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (!sprp_u64(n, a)) return false;
    }
    return true;
}

inline bool miller_rabin_mpz(const Int& n, unsigned long base) {
    Int q = n - 1;
    unsigned long j = 0;
    while (mpz_even_p(q.get_mpz_t())) {
        q >>= 1;
        ++j;
    }
    Int x;
    Int b(base);
    mpz_powm(x.get_mpz_t(), b.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
    Int nm1 = n - 1;
    if (x == 1 || x == nm1) return true;
    for (unsigned long i = 1; i < j; ++i) {
        x = mod_int(x * x, n);
        if (x == nm1) return true;
        if (x == 1) return false;
    }
    return false;
}

// Strong Lucas test with Selfridge's parameter choice (P = 1, Q = (1-D)/4,
// D the first of 5, -7, 9, -11, ... with Jacobi(D, n) = -1).  Caller must
// have ruled out even n, small prime factors, and perfect squares.
inline bool strong_lucas_selfridge(const Int& n) {
    long dmag = 5;
    int dsign = 1;
    Int D;
    while (true) {
        D = dsign * Int(dmag);
        int j = mpz_jacobi(D.get_mpz_t(), n.get_mpz_t());
        if (j == -1) break;
        if (j == 0) return false;  // shares a factor with n (n > |D| here)
        dmag += 2;
        dsign = -dsign;
        if (dmag > 1'000'000) {
            // Unreachable for non-squares; fall back to extra MR rounds.
            for (unsigned long a : {3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul}) {
                if (!miller_rabin_mpz(n, a)) return false;
            }
            return true;
        }
    }
    const Int Q = (1 - D) / 4;
    if (gcd_int(n, Q) > 1 && gcd_int(n, Q) < n) return false;

    Int s = n + 1;
    unsigned long t = 0;
    while (mpz_even_p(s.get_mpz_t())) {
        s >>= 1;
        ++t;
    }

    // halve x mod odd n
    auto halve = [&n](Int& x) {
        if (mpz_odd_p(x.get_mpz_t())) x += n;
        x >>= 1;
    };

    // Compute U_s, V_s, Q^s by a left-to-right binary chain (P = 1).
    Int U = 1, V = 1, Qk = mod_int(Q, n);
    const std::size_t bits = mpz_sizeinbase(s.get_mpz_t(), 2);
    for (std::size_t i = bits - 1; i-- > 0;) {
        // index doubling: (U, V, Q^k) -> (U V, V^2 - 2 Q^k, Q^2k)
        U = mod_int(U * V, n);
        V = mod_int(V * V - 2 * Qk, n);
        Qk = mod_int(Qk * Qk, n);
        if (mpz_tstbit(s.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) {
            // increment: U' = (P U + V)/2, V' = (D U + P V)/2
            Int U2 = U + V;
            Int V2 = D * U + V;
            halve(U2);
            halve(V2);
            U = mod_int(U2, n);
            V = mod_int(V2, n);
            Qk = mod_int(Qk * Q, n);
        }
    }

    if (U == 0 || V == 0) return true;
    for (unsigned long r = 1; r < t; ++r) {
        V = mod_int(V * V - 2 * Qk, n);
        if (V == 0) return true;
        Qk = mod_int(Qk * Qk, n);
    }
    return false;
}

} // namespace detail

// Primality verdict.
//   x < 2^64: exact (deterministic Miller-Rabin witness set).
//   x >= 2^64: Baillie-PSW (strong base-2 test plus strong Lucas-Selfridge).
//   No composite passing BPSW is known; treat a positive verdict for large x
//   as "probable prime", never as proof.
inline bool is_probable_prime(const Int& x) {
    if (x < 2) return false;
    if (fits_u64(x)) return detail::is_prime_u64(to_u64(x));
    if (mpz_even_p(x.get_mpz_t())) return false;
    for (std::uint32_t p : detail::small_primes()) {
        if (p > 997) break;
        if (mpz_divisible_ui_p(x.get_mpz_t(), p)) return false;
    }
    if (mpz_perfect_square_p(x.get_mpz_t())) return false;
    if (!detail::miller_rabin_mpz(x, 2)) return false;
    return detail::strong_lucas_selfridge(x);
}

namespace detail {

using clock = std::chrono::steady_clock;
using deadline_t = std::optional<clock::time_point>;

inline bool expired(const deadline_t& dl) {
    return dl && clock::now() > *dl;
}

// Brent's cycle-finding variant of Pollard rho on 64-bit values.
// Returns a nontrivial factor of odd composite n, or 0 on failure.
// `used` accumulates iteration count toward `max_steps`.
inline std::uint64_t brent_u64(std::uint64_t n, std::uint64_t cinc, std::uint64_t x0,
                               std::uint64_t max_steps, std::uint64_t& used) {
    auto f = [n, cinc](std::uint64_t v) {
        return (mulmod_u64(v, v, n) + cinc) % n;
    };
    std::uint64_t y = x0 % n, r = 1, q = 1, g = 1, x = 0, ys = 0;
    constexpr std::uint64_t batch = 128;
    while (g == 1 && used < max_steps) {
        x = y;
        for (std::uint64_t i = 0; i < r && used < max_steps; ++i) {
            y = f(y);
            ++used;
        }
        for (std::uint64_t k = 0; k < r && g == 1 && used < max_steps; k += batch) {
            ys = y;
            const std::uint64_t lim = std::min(batch, r - k);
            for (std::uint64_t i = 0; i < lim && used < max_steps; ++i) {
                y = f(y);
                ++used;
                q = mulmod_u64(q, x > y ? x - y : y - x, n);
            }
            g = std::gcd(q, n);
        }
        r *= 2;
    }
    if (g == n) {
        g = 1;
        while (g == 1) {
            ys = f(ys);
            g = std::gcd(x > ys ? x - ys : ys - x, n);
        }
    }
    return (g == 1 || g == n) ? 0 : g;
}

inline Int brent_mpz(const Int& n, unsigned long cinc, unsigned long x0,
                     std::uint64_t max_steps, std::uint64_t& used) {
    auto f = [&n, cinc](const Int& v) { return mod_int(v * v + cinc, n); };
    Int y = x0, q = 1, g = 1, x, ys;
    std::uint64_t r = 1;
    constexpr std::uint64_t batch = 128;
    while (g == 1 && used < max_steps) {
        x = y;
        for (std::uint64_t i = 0; i < r && used < max_steps; ++i) {
            y = f(y);
            ++used;
        }
        for (std::uint64_t k = 0; k < r && g == 1 && used < max_steps; k += batch) {
            ys = y;
            const std::uint64_t lim = std::min(batch, r - k);
            for (std::uint64_t i = 0; i < lim && used < max_steps; ++i) {
                y = f(y);
                ++used;
                q = mod_int(q * (x - y), n);
            }
            g = gcd_int(q, n);
        }
        r *= 2;
    }
    if (g == n) {
        g = 1;
        while (g == 1) {
            ys = f(ys);
            g = gcd_int(x - ys, n);
        }
    }
    return (g == 1 || g == n) ? Int(0) : g;
}

// Divide out every prime <= limit.  Returns false when the wall clock cut
// the scan short (work may then retain small factors).  Leftover work > 1
// is classified by the caller, not here.
inline bool trial_divide(Int& work, std::uint64_t limit, std::map<Int, unsigned long>& found,
                         const deadline_t& dl) {
    bool small = fits_u64(work);
    std::uint64_t w64 = small ? to_u64(work) : 0;
    std::uint64_t scanned = 0;

    auto sync = [&] {
        if (small) work = Int(static_cast<unsigned long>(w64));
    };
    auto divide_out = [&](std::uint64_t p) {
        unsigned long e = 0;
        if (small) {
            while (w64 % p == 0) {
                w64 /= p;
                ++e;
            }
        } else {
            while (mpz_divisible_ui_p(work.get_mpz_t(), static_cast<unsigned long>(p))) {
                mpz_divexact_ui(work.get_mpz_t(), work.get_mpz_t(), static_cast<unsigned long>(p));
                ++e;
            }
            if (e && fits_u64(work)) {
                w64 = to_u64(work);
                small = true;
            }
        }
        if (e) found[Int(static_cast<unsigned long>(p))] += e;
    };
    // true once the remaining cofactor can have no divisor in (1, p]
    auto exhausted = [&](std::uint64_t p) {
        return small && (w64 == 1 || p > w64 / p);
    };

    for (std::uint32_t sp : small_primes()) {
        const std::uint64_t p = sp;
        if (p > limit) {
            sync();
            return true;
        }
        if (exhausted(p)) {
            sync();
            return true;
        }
        if ((++scanned & 4095) == 0 && expired(dl)) {
            sync();
            return false;
        }
        divide_out(p);
    }
    // continue past the prime table on a 2-3-5 wheel; composite candidates
    // never divide because their prime factors were already removed
    static constexpr int incs[8] = {6, 4, 2, 4, 2, 4, 6, 2};
    std::uint64_t q = 65537;  // == 17 mod 30
    int wi = 4;
    while (q <= limit && !exhausted(q)) {
        if ((++scanned & 4095) == 0 && expired(dl)) {
            sync();
            return false;
        }
        divide_out(q);
        q += incs[wi];
        wi = (wi + 1) & 7;
    }
    sync();
    return true;
}

} // namespace detail

// Budgeted factorization: trial division by every prime <= trial_limit, then
// Brent-rho splitting with a fixed attempt schedule.  Deterministic for a
// given (x, budget) when no wall_time cap is set.  Budget exhaustion is not
// an error; it shows up as a nontrivial cofactor.
inline factor_result factor(const Int& x, const factor_budget& budget = {}) {
    if (x < 1) throw precondition_violated("factor: input must be >= 1");
    if (budget.trial_limit < 2) throw precondition_violated("factor: trial_limit must be >= 2");

    factor_result res;
    res.input = x;
    if (x == 1) return res;

    detail::deadline_t dl;
    if (budget.wall_time) dl = detail::clock::now() + *budget.wall_time;

    std::map<Int, unsigned long> found;
    Int work = x;
    const bool trial_done = detail::trial_divide(work, budget.trial_limit, found, dl);

    struct pending_item {
        Int value;
        unsigned long mult;
    };
    struct leftover {
        Int value;
        unsigned long mult;
        cofactor_class cls;
    };
    std::vector<pending_item> todo;
    std::vector<leftover> unresolved;
    if (work > 1) todo.push_back({work, 1});

    while (!todo.empty()) {
        pending_item item = std::move(todo.back());
        todo.pop_back();
        if (!trial_done || detail::expired(dl)) {
            unresolved.push_back({item.value, item.mult, cofactor_class::unknown});
            continue;
        }
        if (fits_u64(item.value)) {
            const std::uint64_t v = to_u64(item.value);
            if (detail::is_prime_u64(v)) {
                found[item.value] += item.mult;
                continue;
            }
        } else if (is_probable_prime(item.value)) {
            // >= 2^64 and BPSW-positive: primality unproven, keep as cofactor
            unresolved.push_back({item.value, item.mult, cofactor_class::probable_prime});
            continue;
        }
        // composite from here on
        if (mpz_perfect_power_p(item.value.get_mpz_t())) {
            const std::size_t maxk = mpz_sizeinbase(item.value.get_mpz_t(), 2);
            bool split = false;
            for (std::uint32_t k : detail::small_primes()) {
                if (k > maxk) break;
                Int root, rem;
                mpz_rootrem(root.get_mpz_t(), rem.get_mpz_t(), item.value.get_mpz_t(), k);
                if (sgn(rem) == 0) {
                    todo.push_back({root, item.mult * k});
                    split = true;
                    break;
                }
            }
            if (split) continue;
        }
        if (budget.rho_iterations == 0) {
            unresolved.push_back({item.value, item.mult, cofactor_class::composite});
            continue;
        }
        Int g = 0;
        std::uint64_t used = 0;
        for (unsigned long attempt = 1; used < budget.rho_iterations && sgn(g) == 0; ++attempt) {
            if (detail::expired(dl)) break;
            if (fits_u64(item.value)) {
                const std::uint64_t got = detail::brent_u64(to_u64(item.value), attempt, attempt + 1,
                                                            budget.rho_iterations, used);
                g = Int(static_cast<unsigned long>(got));
            } else {
                g = detail::brent_mpz(item.value, attempt, attempt + 1, budget.rho_iterations, used);
            }
        }
        if (sgn(g) == 0) {
            unresolved.push_back({item.value, item.mult, cofactor_class::composite});
        } else {
            todo.push_back({g, item.mult});
            todo.push_back({item.value / g, item.mult});
        }
    }

    for (auto& [p, e] : found) res.known_factors.push_back({p, e});
    if (unresolved.empty()) {
        res.cofactor = 1;
        res.cls = cofactor_class::unit;
    } else {
        res.cofactor = 1;
        for (const auto& u : unresolved) res.cofactor *= pow_int(u.value, u.mult);
        res.cls = (unresolved.size() == 1 && unresolved.front().mult == 1)
                      ? unresolved.front().cls
                      : cofactor_class::composite;
    }
    return res;
}

} // namespace zorbit
