#pragma once

#include <fstream>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "zorbit/bigint.hpp"
#include "zorbit/decomposition.hpp"
#include "zorbit/orbit.hpp"

namespace zorbit {

// One decomposition row, with every big integer carried as an exact decimal
// string: JSON consumers routinely truncate large numerics, strings survive.
struct cache_record {
    long long c = 0;
    int d = 2;
    long n = 0;
    std::string b;  // signed term
    std::string P;  // primitive part, positive
    std::string N;  // non-primitive part, positive
    std::vector<std::pair<std::string, unsigned long>> primes;
    factor_status status = factor_status::not_requested;

    friend bool operator==(const cache_record&, const cache_record&) = default;
};

using cache_key = std::tuple<long long, int, long>;

inline cache_key key_of(const cache_record& r) { return {r.c, r.d, r.n}; }

inline nlohmann::ordered_json record_to_json(const cache_record& r) {
    nlohmann::ordered_json j;
    j["c"] = r.c;
    j["d"] = r.d;
    j["n"] = r.n;
    j["b"] = r.b;
    j["P"] = r.P;
    j["N"] = r.N;
    auto primes = nlohmann::ordered_json::array();
    for (const auto& [p, e] : r.primes) primes.push_back({p, e});
    j["primes"] = std::move(primes);
    j["status"] = to_string(r.status);
    return j;
}

inline cache_record record_from_json(const nlohmann::ordered_json& j) {
    cache_record r;
    r.c = j.at("c").get<long long>();
    r.d = j.at("d").get<int>();
    r.n = j.at("n").get<long>();
    r.b = j.at("b").get<std::string>();
    r.P = j.at("P").get<std::string>();
    r.N = j.at("N").get<std::string>();
    for (const auto& pe : j.at("primes")) {
        r.primes.emplace_back(pe.at(0).get<std::string>(), pe.at(1).get<unsigned long>());
    }
    r.status = factor_status_from_string(j.at("status").get<std::string>());
    return r;
}

inline cache_record to_cache_record(const map_params& params, const Int& signed_term,
                                    const decomposition& dec) {
    cache_record r;
    r.c = params.c;
    r.d = params.d;
    r.n = dec.n;
    r.b = to_decimal(signed_term);
    r.P = to_decimal(dec.primitive_part);
    r.N = to_decimal(dec.nonprimitive_part);
    for (const auto& f : dec.primitive_primes) r.primes.emplace_back(to_decimal(f.prime), f.exponent);
    r.status = dec.status;
    return r;
}

// Rebuild a decomposition from a record.  Returns false on anything that
// does not parse back to integers satisfying P * N = |b| (and, when factor
// data is present, primes * cofactor = P); such records are dropped.
inline bool record_to_decomposition(const cache_record& r, decomposition& out) {
    try {
        const Int b(r.b, 10);
        out.n = r.n;
        out.abs_term = abs(b);
        out.primitive_part = Int(r.P, 10);
        out.nonprimitive_part = Int(r.N, 10);
        out.primitive_primes.clear();
        for (const auto& [p, e] : r.primes) out.primitive_primes.push_back({Int(p, 10), e});
        out.status = r.status;
    } catch (const std::invalid_argument&) {
        return false;
    }
    if (out.primitive_part < 1 || out.nonprimitive_part < 1) return false;
    if (out.primitive_part * out.nonprimitive_part != out.abs_term) return false;
    out.unresolved_cofactor = 1;
    out.cofactor_cls = cofactor_class::unit;
    if (out.status != factor_status::not_requested) {
        Int prod = 1;
        for (const auto& f : out.primitive_primes) prod *= pow_int(f.prime, f.exponent);
        if (!mpz_divisible_p(out.primitive_part.get_mpz_t(), prod.get_mpz_t())) return false;
        out.unresolved_cofactor = out.primitive_part / prod;
        if (out.status == factor_status::partial) {
            if (out.unresolved_cofactor == 1) return false;
            out.cofactor_cls = cofactor_class::unknown;  // record does not say how it was left
        } else if (out.unresolved_cofactor != 1) {
            return false;
        }
    }
    return true;
}

// Line-delimited JSON, one record per line, append-only.  On read, the last
// line for a (c, d, n) key wins; lines that fail to parse (e.g. a torn final
// line after a crash) are skipped.
inline std::map<cache_key, cache_record> read_cache(const std::string& path) {
    std::map<cache_key, cache_record> out;
    std::ifstream in(path);
    if (!in) return out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            const auto j = nlohmann::ordered_json::parse(line);
            cache_record r = record_from_json(j);
            out[key_of(r)] = std::move(r);
        } catch (const std::exception&) {
            continue;
        }
    }
    return out;
}

inline void append_cache(const std::string& path, const std::vector<cache_record>& records) {
    if (records.empty()) return;
    std::ofstream out(path, std::ios::app);
    for (const auto& r : records) {
        out << record_to_json(r).dump() << '\n';
    }
}

} // namespace zorbit
