// Command-line surface: exact orbits, preperiodicity verdicts, primitive
// part decompositions, and theorem/invariant sweeps with a JSONL cache.
//
// Exit codes: 0 ok, 1 usage or infeasible request, 2 violation found,
// 3 preperiodic-only input.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "zorbit/zorbit.hpp"

namespace {

using nlohmann::ordered_json;

struct common_opts {
    long long c = 0;
    int d = 2;
    long n = 5;
    long long seed = 0;
    long n_max = 8;
    long digit_cap = zorbit::default_digit_cap;
    std::string format = "text";
    std::string cache_path;
    zorbit::factor_budget budget{};
    zorbit::sweep_spec sweep{};
};

int run_orbit(const common_opts& o) {
    const zorbit::map_params params(o.c, o.d);
    const zorbit::orbit orb =
        zorbit::iterate(params, zorbit::from_ll(o.seed), o.n, o.digit_cap);
    if (o.format == "json") {
        ordered_json j;
        j["params"] = {{"c", o.c}, {"d", o.d}, {"seed", zorbit::to_decimal(orb.seed())}, {"n", o.n}};
        auto terms = ordered_json::array();
        for (long i = 1; i <= orb.size(); ++i) terms.push_back(zorbit::to_decimal(orb.term(i)));
        j["terms"] = std::move(terms);
        std::cout << j.dump(2) << '\n';
    } else if (o.format == "csv") {
        std::cout << "c,d,n,b\n";
        for (long i = 1; i <= orb.size(); ++i) {
            std::cout << o.c << ',' << o.d << ',' << i << ',' << zorbit::to_decimal(orb.term(i))
                      << '\n';
        }
    } else {
        for (long i = 1; i <= orb.size(); ++i) {
            if (i > 1) std::cout << ", ";
            std::cout << zorbit::to_decimal(orb.term(i));
        }
        std::cout << '\n';
    }
    return 0;
}

int run_classify(const common_opts& o) {
    const zorbit::map_params params(o.c, o.d);
    const zorbit::orbit_class cls = zorbit::classify(params);
    const std::string verdict = cls.wandering() ? "wandering" : "preperiodic";
    if (o.format == "json") {
        ordered_json j;
        j["c"] = o.c;
        j["d"] = o.d;
        j["verdict"] = verdict;
        j["case"] = zorbit::to_string(cls.why);
        std::cout << j.dump(2) << '\n';
    } else if (o.format == "csv") {
        std::cout << "c,d,verdict,case\n"
                  << o.c << ',' << o.d << ',' << verdict << ',' << zorbit::to_string(cls.why)
                  << '\n';
    } else if (cls.wandering()) {
        std::cout << "wandering\n";
    } else {
        std::cout << "preperiodic (" << zorbit::to_string(cls.why) << ")\n";
    }
    return 0;
}

int run_decompose(const common_opts& o) {
    const zorbit::map_params params(o.c, o.d);
    zorbit::decomposition_table table(params, o.digit_cap);

    std::map<zorbit::cache_key, zorbit::cache_record> warm;
    if (!o.cache_path.empty()) {
        warm = zorbit::read_cache(o.cache_path);
        for (long n = 1; n <= o.n_max; ++n) {
            auto it = warm.find({o.c, o.d, n});
            if (it == warm.end()) continue;
            zorbit::decomposition dec;
            if (zorbit::record_to_decomposition(it->second, dec)) table.adopt(dec);
        }
    }

    const std::vector<zorbit::cache_record> records =
        zorbit::decompose_records(table, o.n_max, o.budget);

    if (o.format == "json") {
        ordered_json j;
        j["params"] = {{"c", o.c},
                       {"d", o.d},
                       {"n_max", o.n_max},
                       {"digit_cap", o.digit_cap},
                       {"budget",
                        {{"trial_limit", o.budget.trial_limit},
                         {"rho_iterations", o.budget.rho_iterations}}}};
        auto rows = ordered_json::array();
        for (const auto& r : records) rows.push_back(zorbit::record_to_json(r));
        j["records"] = std::move(rows);
        std::cout << j.dump(2) << '\n';
    } else if (o.format == "csv") {
        std::cout << zorbit::records_to_csv(records);
    } else {
        for (const auto& r : records) {
            std::cout << "n=" << r.n << "  b=" << r.b << "  P=" << r.P << "  N=" << r.N
                      << "  primes=" << zorbit::primes_field(r.primes)
                      << "  status=" << zorbit::to_string(r.status) << '\n';
        }
    }

    if (!o.cache_path.empty()) {
        std::vector<zorbit::cache_record> fresh;
        for (const auto& r : records) {
            auto it = warm.find(zorbit::key_of(r));
            if (it == warm.end() || !(it->second == r)) fresh.push_back(r);
        }
        zorbit::append_cache(o.cache_path, fresh);
    }
    return 0;
}

int run_verify(const common_opts& o) {
    std::map<zorbit::cache_key, zorbit::cache_record> warm;
    const bool use_cache = !o.cache_path.empty();
    if (use_cache) warm = zorbit::read_cache(o.cache_path);

    const zorbit::sweep_report rep = zorbit::run_sweep(o.sweep, use_cache ? &warm : nullptr);

    if (o.format == "json") {
        std::cout << zorbit::report_to_json(rep).dump(2) << '\n';
    } else if (o.format == "csv") {
        std::vector<zorbit::cache_record> records;
        for (const auto& pr : rep.pairs) {
            records.insert(records.end(), pr.records.begin(), pr.records.end());
        }
        std::cout << zorbit::records_to_csv(records);
    } else {
        std::cout << zorbit::report_to_text(rep);
    }

    if (use_cache) {
        // only genuinely new rows: never let a bare row shadow a factored one
        std::vector<zorbit::cache_record> fresh;
        for (const auto& pr : rep.pairs) {
            for (const auto& r : pr.records) {
                if (!warm.contains(zorbit::key_of(r))) fresh.push_back(r);
            }
        }
        zorbit::append_cache(o.cache_path, fresh);
    }

    if (!rep.violations.empty()) return 2;
    if (rep.all_preperiodic()) return 3;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact zero orbits of z^d + c: iteration, classification, "
                 "primitive-part decomposition, and verification sweeps"};
    app.require_subcommand(1);
    common_opts o;

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", o.format, "output format")
            ->check(CLI::IsMember({"text", "csv", "json"}));
    };

    auto* cmd_orbit = app.add_subcommand("orbit", "print the first n iterates of the map at a seed");
    cmd_orbit->add_option("--c", o.c, "constant term")->required();
    cmd_orbit->add_option("--d", o.d, "degree (>= 2)")->required();
    cmd_orbit->add_option("--n", o.n, "number of iterates")->required();
    cmd_orbit->add_option("--seed", o.seed, "starting point (default 0)");
    cmd_orbit->add_option("--digit-cap", o.digit_cap, "refuse terms projected beyond this many digits");
    add_format(cmd_orbit);

    auto* cmd_classify = app.add_subcommand("classify", "wandering/preperiodic verdict for the zero orbit");
    cmd_classify->add_option("--c", o.c, "constant term")->required();
    cmd_classify->add_option("--d", o.d, "degree (>= 2)")->required();
    add_format(cmd_classify);

    auto* cmd_decompose =
        app.add_subcommand("decompose", "split |b_n| into primitive and non-primitive parts");
    cmd_decompose->add_option("--c", o.c, "constant term")->required();
    cmd_decompose->add_option("--d", o.d, "degree (>= 2)")->required();
    cmd_decompose->add_option("--n-max", o.n_max, "decompose terms 1..n_max");
    cmd_decompose->add_option("--budget-trial", o.budget.trial_limit, "trial division limit");
    cmd_decompose->add_option("--budget-rho", o.budget.rho_iterations, "rho iterations per cofactor");
    cmd_decompose->add_option("--digit-cap", o.digit_cap, "orbit term digit cap");
    cmd_decompose->add_option("--cache", o.cache_path, "JSONL decomposition cache to read/append");
    add_format(cmd_decompose);

    auto* cmd_verify = app.add_subcommand(
        "verify", "sweep (c, d) ranges and check primitive primes, growth, and divisibility structure");
    cmd_verify->add_option("--c-min", o.sweep.c_min, "sweep start for c")->required();
    cmd_verify->add_option("--c-max", o.sweep.c_max, "sweep end for c")->required();
    cmd_verify->add_option("--d-min", o.sweep.d_min, "sweep start for d")->required();
    cmd_verify->add_option("--d-max", o.sweep.d_max, "sweep end for d")->required();
    cmd_verify->add_option("--n-max", o.sweep.n_max, "terms per orbit (clamped by the digit cap)");
    cmd_verify->add_option("--budget-trial", o.sweep.budget.trial_limit, "trial division limit");
    cmd_verify->add_option("--budget-rho", o.sweep.budget.rho_iterations, "rho iterations per cofactor");
    cmd_verify->add_option("--digit-cap", o.sweep.digit_cap, "orbit term digit cap");
    cmd_verify->add_option("--jobs", o.sweep.jobs, "parameter pairs checked concurrently");
    cmd_verify->add_option("--cache", o.cache_path, "JSONL decomposition cache to read/append");
    add_format(cmd_verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_orbit->parsed()) return run_orbit(o);
        if (cmd_classify->parsed()) return run_classify(o);
        if (cmd_decompose->parsed()) return run_decompose(o);
        if (cmd_verify->parsed()) return run_verify(o);
    } catch (const zorbit::preperiodic_orbit& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const zorbit::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
