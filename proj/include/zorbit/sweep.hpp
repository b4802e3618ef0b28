#pragma once

#include <atomic>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "zorbit/cache.hpp"
#include "zorbit/decomposition.hpp"
#include "zorbit/divisibility.hpp"
#include "zorbit/factor.hpp"
#include "zorbit/orbit.hpp"

namespace zorbit {

// Divisibility-structure checks run over primes up to this bound dividing
// the first rds_term_window orbit terms.
inline constexpr unsigned long rds_prime_bound = 10'000;
inline constexpr long rds_term_window = 8;

inline const char* to_string(finite_orbit_case c) {
    switch (c) {
        case finite_orbit_case::none: return "none";
        case finite_orbit_case::zero_fixed: return "zero-fixed";
        case finite_orbit_case::two_cycle: return "two-cycle";
        case finite_orbit_case::eventually_fixed: return "eventually-fixed";
    }
    return "?";
}

struct sweep_spec {
    long long c_min = 0;
    long long c_max = 0;
    int d_min = 2;
    int d_max = 2;
    long n_max = 8;
    factor_budget budget{};
    long digit_cap = default_digit_cap;
    int jobs = 1;

    void validate() const {
        if (c_min > c_max) throw precondition_violated("sweep: empty c range");
        if (d_min > d_max) throw precondition_violated("sweep: empty d range");
        if (d_min < 2) throw precondition_violated("sweep: degree must be >= 2");
        if (n_max < 1) throw precondition_violated("sweep: n_max must be >= 1");
        if (jobs < 1) throw precondition_violated("sweep: jobs must be >= 1");
    }
};

struct sweep_violation {
    long long c = 0;
    int d = 2;
    std::string kind;
    long n = 0;
    std::string detail;
};

struct pair_result {
    long long c = 0;
    int d = 2;
    bool preperiodic = false;
    finite_orbit_case why = finite_orbit_case::none;
    long n_reached = 0;
    std::vector<cache_record> records;
    std::vector<sweep_violation> violations;
};

struct sweep_report {
    sweep_spec spec;
    std::vector<pair_result> pairs;  // ordered by (c, d)
    std::vector<std::pair<long long, int>> skipped_preperiodic;
    std::vector<sweep_violation> violations;
    long pairs_checked = 0;

    bool all_preperiodic() const { return pairs_checked == 0 && !skipped_preperiodic.empty(); }
};

namespace detail {

// All theorem, growth, and divisibility-structure checks for one wandering
// parameter pair, up to n_max terms (clamped by the digit cap).
inline pair_result check_pair(const map_params& params, const sweep_spec& spec,
                              const std::map<cache_key, cache_record>* warm) {
    pair_result out;
    out.c = params.c;
    out.d = params.d;

    const orbit_class cls = classify(params);
    if (!cls.wandering()) {
        out.preperiodic = true;
        out.why = cls.why;
        return out;
    }

    decomposition_table table(params, spec.digit_cap);
    if (warm) {
        for (long n = 1; n <= spec.n_max; ++n) {
            auto it = warm->find({params.c, params.d, n});
            if (it == warm->end()) continue;
            decomposition dec;
            if (record_to_decomposition(it->second, dec)) table.adopt(dec);
        }
    }
    const long reached = table.extend_up_to(spec.n_max);
    out.n_reached = reached;
    if (reached == 0) return out;

    auto flag = [&out, &params](std::string kind, long n, std::string detail) {
        out.violations.push_back({params.c, params.d, std::move(kind), n, std::move(detail)});
    };

    const theorem_report th = verify_theorem(table, reached);
    for (const auto& v : th.violations) {
        flag("theorem", v.n,
             std::string("predicted ") + (v.predicted ? "primitive prime" : "none") + ", got P=" +
                 to_decimal(v.primitive_part) + " N=" + to_decimal(v.nonprimitive_part) + " |b|=" +
                 to_decimal(v.abs_term));
    }

    const orbit& orb = table.zero_orbit();
    const growth_report gr = verify_growth(orb);
    for (const auto& f : gr.failures) flag("growth_" + f.series, f.m, "bound fails at m=" + std::to_string(f.m));

    // divisibility structure over the first few terms
    const long window = std::min<long>(rds_term_window, reached);
    std::vector<unsigned long> vals(static_cast<std::size_t>(window) + 1, 0);
    for (std::uint32_t sp : small_primes()) {
        if (sp > rds_prime_bound) break;
        bool divides_any = false;
        for (long i = 1; i <= window; ++i) {
            vals[static_cast<std::size_t>(i)] =
                mpz_divisible_ui_p(orb.term(i).get_mpz_t(), sp) ? 1 : 0;
            divides_any = divides_any || vals[static_cast<std::size_t>(i)] != 0;
        }
        if (!divides_any) continue;
        const Int p(sp);
        for (long n = 1; n <= window; ++n) {
            if (!vals[static_cast<std::size_t>(n)]) continue;
            const long kmax = window / n;
            if (const auto r = check_rds_property1(orb, p, n, kmax); !r) {
                flag("rds_property1", n, "p=" + std::to_string(sp) + ": " + r.witness);
            }
            for (long k = 1; k * n + 1 <= window; ++k) {
                for (long r = 1; k * n + r <= window; ++r) {
                    if (const auto cr = check_congruence(orb, p, n, k, r); !cr) {
                        flag("rds_congruence", n,
                             "p=" + std::to_string(sp) + " k=" + std::to_string(k) + " r=" +
                                 std::to_string(r) + ": " + cr.witness);
                    }
                }
            }
            for (long m = 1; m <= n; ++m) {
                if (!vals[static_cast<std::size_t>(m)]) continue;
                if (const auto r2 = check_rds_property2(orb, p, m, n); !r2) {
                    flag("rds_property2", n, "p=" + std::to_string(sp) + " m=" + std::to_string(m) +
                                                 ": " + r2.witness);
                }
            }
        }
    }

    out.records.reserve(static_cast<std::size_t>(reached));
    for (long n = 1; n <= reached; ++n) {
        out.records.push_back(to_cache_record(params, orb.term(n), table.at(n)));
    }
    return out;
}

} // namespace detail

// Run every (c, d) in the spec's ranges.  Preperiodic pairs are skipped and
// counted, never treated as violations.  Results are ordered by (c, d)
// regardless of how many worker threads ran them.
inline sweep_report run_sweep(const sweep_spec& spec,
                              const std::map<cache_key, cache_record>* warm = nullptr) {
    spec.validate();
    sweep_report rep;
    rep.spec = spec;

    std::vector<map_params> points;
    for (long long c = spec.c_min; c <= spec.c_max; ++c) {
        for (int d = spec.d_min; d <= spec.d_max; ++d) points.emplace_back(c, d);
    }

    std::vector<pair_result> results(points.size());
    if (spec.jobs <= 1) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            results[i] = detail::check_pair(points[i], spec, warm);
        }
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1)) {
                results[i] = detail::check_pair(points[i], spec, warm);
            }
        };
        std::vector<std::thread> threads;
        const int nthreads = std::min<int>(spec.jobs, static_cast<int>(points.size()));
        threads.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    for (auto& r : results) {
        if (r.preperiodic) {
            rep.skipped_preperiodic.emplace_back(r.c, r.d);
        } else {
            ++rep.pairs_checked;
            rep.violations.insert(rep.violations.end(), r.violations.begin(), r.violations.end());
        }
        rep.pairs.push_back(std::move(r));
    }
    return rep;
}

// Decomposition rows for one parameter pair with the primitive part of each
// term factored under the budget.  Throws digit_cap_exceeded if n_max is
// not reachable under the table's cap.
inline std::vector<cache_record> decompose_records(decomposition_table& table, long n_max,
                                                   const factor_budget& budget) {
    std::vector<cache_record> out;
    out.reserve(static_cast<std::size_t>(n_max));
    for (long n = 1; n <= n_max; ++n) {
        const decomposition& dec = table.primitive_primes(n, budget);
        out.push_back(to_cache_record(table.params(), table.zero_orbit().term(n), dec));
    }
    return out;
}

inline nlohmann::ordered_json report_to_json(const sweep_report& rep) {
    nlohmann::ordered_json j;
    j["params"] = {
        {"c_min", rep.spec.c_min},
        {"c_max", rep.spec.c_max},
        {"d_min", rep.spec.d_min},
        {"d_max", rep.spec.d_max},
        {"n_max", rep.spec.n_max},
        {"digit_cap", rep.spec.digit_cap},
        {"budget",
         {{"trial_limit", rep.spec.budget.trial_limit},
          {"rho_iterations", rep.spec.budget.rho_iterations}}},
        {"jobs", rep.spec.jobs},
    };
    auto records = nlohmann::ordered_json::array();
    for (const auto& pr : rep.pairs) {
        for (const auto& r : pr.records) records.push_back(record_to_json(r));
    }
    j["records"] = std::move(records);
    auto violations = nlohmann::ordered_json::array();
    for (const auto& v : rep.violations) {
        violations.push_back({{"c", v.c}, {"d", v.d}, {"kind", v.kind}, {"n", v.n}, {"detail", v.detail}});
    }
    j["violations"] = std::move(violations);
    auto skipped = nlohmann::ordered_json::array();
    for (const auto& [c, d] : rep.skipped_preperiodic) skipped.push_back({c, d});
    j["skipped_preperiodic"] = std::move(skipped);
    return j;
}

inline std::string primes_field(const std::vector<std::pair<std::string, unsigned long>>& primes) {
    std::string s;
    for (const auto& [p, e] : primes) {
        if (!s.empty()) s += ';';
        s += p;
        if (e != 1) {
            s += '^';
            s += std::to_string(e);
        }
    }
    return s;
}

inline constexpr const char* csv_header = "c,d,n,b,P,N,primes,status";

inline std::string records_to_csv(const std::vector<cache_record>& records) {
    std::ostringstream os;
    os << csv_header << '\n';
    for (const auto& r : records) {
        os << r.c << ',' << r.d << ',' << r.n << ',' << r.b << ',' << r.P << ',' << r.N << ','
           << primes_field(r.primes) << ',' << to_string(r.status) << '\n';
    }
    return os.str();
}

inline std::string report_to_text(const sweep_report& rep) {
    std::ostringstream os;
    for (const auto& pr : rep.pairs) {
        if (pr.preperiodic) {
            os << "c=" << pr.c << " d=" << pr.d << " skipped (preperiodic: " << to_string(pr.why)
               << ")\n";
        } else if (pr.violations.empty()) {
            os << "c=" << pr.c << " d=" << pr.d << " n=" << pr.n_reached << " ok\n";
        } else {
            os << "c=" << pr.c << " d=" << pr.d << " n=" << pr.n_reached
               << " VIOLATIONS=" << pr.violations.size() << '\n';
            for (const auto& v : pr.violations) {
                os << "  " << v.kind << " at n=" << v.n << ": " << v.detail << '\n';
            }
        }
    }
    os << "pairs=" << rep.pairs.size() << " checked=" << rep.pairs_checked
       << " skipped=" << rep.skipped_preperiodic.size() << " violations=" << rep.violations.size()
       << '\n';
    return os.str();
}

} // namespace zorbit
