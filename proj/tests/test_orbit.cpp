#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "zorbit/orbit.hpp"

using zorbit::classify;
using zorbit::finite_orbit_case;
using zorbit::increasing_hypothesis_holds;
using zorbit::Int;
using zorbit::iterate;
using zorbit::map_params;
using zorbit::verify_growth;

namespace {

std::vector<long> as_longs(const zorbit::orbit& orb) {
    std::vector<long> out;
    for (long n = 1; n <= orb.size(); ++n) out.push_back(orb.term(n).get_si());
    return out;
}

// Test-local simulation, independent of classify(): iterate the raw map and
// watch for a repeated value.  Values explode for wandering parameters, so
// the walk stops once a term exceeds the digit guard; a revisit can only
// ever involve small values, so the guard loses nothing.
struct simulation {
    bool revisited = false;
    std::vector<Int> values;
};

simulation simulate(long long c, int d, int steps, unsigned long digit_guard) {
    simulation sim;
    Int v = 0;
    for (int i = 0; i < steps; ++i) {
        Int next;
        mpz_pow_ui(next.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(d));
        next += static_cast<long>(c);
        if (zorbit::decimal_digits(next) > digit_guard) break;
        for (const Int& seen : sim.values) {
            if (seen == next) sim.revisited = true;
        }
        sim.values.push_back(next);
        v = next;
    }
    return sim;
}

} // namespace

TEST_CASE("fixed orbits") {
    CHECK(as_longs(iterate(map_params(1, 2), 0, 5)) == std::vector<long>{1, 2, 5, 26, 677});
    CHECK(as_longs(iterate(map_params(0, 3), 0, 3)) == std::vector<long>{0, 0, 0});
    CHECK(as_longs(iterate(map_params(-2, 2), 0, 4)) == std::vector<long>{-2, 2, 2, 2});
    CHECK(as_longs(iterate(map_params(-1, 3), 0, 4)) == std::vector<long>{-1, -2, -9, -730});
    CHECK(as_longs(iterate(map_params(3, 2), 0, 4)) == std::vector<long>{3, 12, 147, 21612});
    CHECK(as_longs(iterate(map_params(2, 2), 0, 4)) == std::vector<long>{2, 6, 38, 1446});
}

TEST_CASE("orbit accessors and parameter validation") {
    CHECK_THROWS_AS(map_params(3, 1), zorbit::precondition_violated);
    CHECK_THROWS_AS(map_params(3, 0), zorbit::precondition_violated);
    CHECK_THROWS_AS(iterate(map_params(1, 2), 0, 0), zorbit::precondition_violated);

    const auto orb = iterate(map_params(1, 2), 0, 3);
    CHECK(orb.term(1) == 1);
    CHECK_THROWS_AS(orb.term(0), zorbit::index_out_of_range);
    CHECK_THROWS_AS(orb.term(4), zorbit::index_out_of_range);
    CHECK(orb.abs_term(3) == 5);
    CHECK(orb.seed() == 0);
}

TEST_CASE("recurrence holds exactly on random parameters") {
    std::mt19937 rng(113355);
    std::uniform_int_distribution<long long> cdist(-100, 100);
    std::uniform_int_distribution<int> ddist(2, 5);
    std::uniform_int_distribution<long> sdist(-10, 10);
    for (int trial = 0; trial < 150; ++trial) {
        const long long c = cdist(rng);
        const int d = ddist(rng);
        const Int seed(sdist(rng));
        const auto orb = iterate(map_params(c, d), seed, 6, 100000);

        // independent arithmetic: b_1 == seed^d + c and b_{n+1} - b_n^d == c
        Int expect_first;
        mpz_pow_ui(expect_first.get_mpz_t(), seed.get_mpz_t(), static_cast<unsigned long>(d));
        expect_first += static_cast<long>(c);
        REQUIRE(orb.term(1) == expect_first);
        for (long n = 1; n < orb.size(); ++n) {
            Int power;
            mpz_pow_ui(power.get_mpz_t(), orb.term(n).get_mpz_t(), static_cast<unsigned long>(d));
            REQUIRE(orb.term(n + 1) - power == static_cast<long>(c));
        }
    }
}

TEST_CASE("zero seed first term equals c") {
    for (long long c : {-7LL, -1LL, 0LL, 1LL, 42LL}) {
        const auto orb = iterate(map_params(c, 3), 0, 1);
        CHECK(orb.term(1) == static_cast<long>(c));
    }
}

TEST_CASE("classification of fixed parameters") {
    CHECK(classify(map_params(-1, 2)).why == finite_orbit_case::two_cycle);
    CHECK(classify(map_params(-1, 4)).why == finite_orbit_case::two_cycle);
    CHECK(classify(map_params(-1, 3)).wandering());
    CHECK(classify(map_params(0, 2)).why == finite_orbit_case::zero_fixed);
    CHECK(classify(map_params(0, 5)).why == finite_orbit_case::zero_fixed);
    CHECK(classify(map_params(-2, 2)).why == finite_orbit_case::eventually_fixed);
    CHECK(classify(map_params(-2, 3)).wandering());
    CHECK(classify(map_params(3, 2)).wandering());
    CHECK(classify(map_params(7, 2)).wandering());
    CHECK(classify(map_params(2, 2)).wandering());
}

TEST_CASE("classification agrees with simulation over the parameter box") {
    for (long long c = -50; c <= 50; ++c) {
        for (int d = 2; d <= 6; ++d) {
            INFO("c = " << c << ", d = " << d);
            const auto cls = classify(map_params(c, d));
            const auto sim = simulate(c, d, 10, 20000);
            if (cls.wandering()) {
                REQUIRE_FALSE(sim.revisited);
                REQUIRE(sim.values.size() >= 4);
                for (std::size_t i = 1; i < sim.values.size(); ++i) {
                    REQUIRE(abs(sim.values[i]) > abs(sim.values[i - 1]));
                }
            } else {
                REQUIRE(sim.values.size() == 10);  // finite orbits stay tiny
                REQUIRE(sim.revisited);
            }
        }
    }
}

TEST_CASE("digit cap refuses infeasible requests") {
    CHECK_THROWS_AS(iterate(map_params(10, 5), 0, 30, 1000), zorbit::digit_cap_exceeded);
    // preperiodic orbits stay small and never hit the cap
    const auto orb = iterate(map_params(-1, 2), 0, 500);
    CHECK(orb.size() == 500);
    CHECK(orb.term(500) == 0);

    zorbit::orbit clamped(map_params(10, 5), Int(0));
    const long reached = clamped.extend_up_to(30, 1000);
    CHECK(reached > 0);
    CHECK(reached < 30);
    CHECK(zorbit::decimal_digits(clamped.term(reached)) <= 1001);
}

TEST_CASE("increasing hypothesis predicate") {
    CHECK(increasing_hypothesis_holds(5, map_params(3, 2)));
    CHECK_FALSE(increasing_hypothesis_holds(2, map_params(1, 2)));
    CHECK(increasing_hypothesis_holds(-3, map_params(-1, 3)));
    CHECK_FALSE(increasing_hypothesis_holds(3, map_params(4, 2)));
    CHECK_FALSE(increasing_hypothesis_holds(-2, map_params(-2, 2)));
}

TEST_CASE("orbits under the increasing hypothesis grow monotonically") {
    for (long a = -20; a <= 20; ++a) {
        if (std::abs(a) <= 2) continue;
        for (long long c = -std::abs(a); c <= std::abs(a); ++c) {
            for (int d = 2; d <= 4; ++d) {
                const map_params params(c, d);
                REQUIRE(increasing_hypothesis_holds(a, params));
                const auto orb = iterate(params, a, 6, 100000);
                Int prev = abs(Int(a));
                for (long n = 1; n <= orb.size(); ++n) {
                    const Int cur = orb.abs_term(n);
                    if (cur <= prev) {
                        INFO("a=" << a << " c=" << c << " d=" << d << " n=" << n);
                        REQUIRE(cur > prev);
                    }
                    prev = cur;
                }
            }
        }
    }
}

TEST_CASE("growth report on fixed orbits") {
    SECTION("c=1, d=2") {
        const auto orb = iterate(map_params(1, 2), 0, 5);
        const auto rep = verify_growth(orb);
        CHECK(rep.all_ok());
        CHECK(rep.terms_checked == 5);
        CHECK(rep.increasing == std::vector<bool>{true, true, true, true});
        CHECK(rep.gap_bound == std::vector<bool>{true, true, true});
        CHECK(rep.product_bound == std::vector<bool>{true, true, true});
        // spot check m = 4: 26 > 5*4 and 1*2*5 < 26
        CHECK(orb.abs_term(4) > orb.abs_term(3) * (orb.abs_term(3) - 1));
        CHECK(orb.abs_term(1) * orb.abs_term(2) * orb.abs_term(3) < orb.abs_term(4));
        CHECK(rep.product_bound_at_2);
    }
    SECTION("c=-1, d=3") {
        const auto rep = verify_growth(iterate(map_params(-1, 3), 0, 4));
        CHECK(rep.all_ok());
        CHECK(rep.failures.empty());
    }
    SECTION("preperiodic parameters are rejected") {
        CHECK_THROWS_AS(verify_growth(iterate(map_params(-2, 2), 0, 4)), zorbit::preperiodic_orbit);
        CHECK_THROWS_AS(verify_growth(iterate(map_params(0, 2), 0, 2)), zorbit::preperiodic_orbit);
    }
    SECTION("nonzero seeds are rejected") {
        CHECK_THROWS_AS(verify_growth(iterate(map_params(1, 2), 3, 4)), zorbit::preperiodic_orbit);
    }
}

TEST_CASE("growth bounds hold across a wandering sweep") {
    for (long long c = -12; c <= 12; ++c) {
        for (int d = 2; d <= 3; ++d) {
            const map_params params(c, d);
            if (!classify(params).wandering()) continue;
            INFO("c = " << c << ", d = " << d);
            const auto rep = verify_growth(iterate(params, 0, 8));
            REQUIRE(rep.all_ok());
            REQUIRE(rep.product_bound_at_2);
        }
    }
}
