#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct cli_result {
    int exit_code = -1;
    std::string out;
};

cli_result run_cli(const std::string& args) {
    cli_result res;
    const std::string cmd = std::string(ZORBIT_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got;
    while ((got = ::fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
    const int rc = ::pclose(pipe);
    res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return res;
}

struct temp_file {
    std::string path;
    temp_file() {
        path = (std::filesystem::temp_directory_path() /
                ("zorbit_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) +
                 ".jsonl"))
                   .string();
    }
    ~temp_file() { std::remove(path.c_str()); }
    static inline int counter = 0;
};

long line_count(const std::string& path) {
    std::ifstream in(path);
    long n = 0;
    std::string line;
    while (std::getline(in, line)) ++n;
    return n;
}

} // namespace

TEST_CASE("orbit subcommand") {
    CHECK(run_cli("orbit --c 1 --d 2 --n 5").out == "1, 2, 5, 26, 677\n");
    CHECK(run_cli("orbit --c -2 --d 2 --n 4").out == "-2, 2, 2, 2\n");
    CHECK(run_cli("orbit --c 0 --d 2 --n 2").out == "0, 0\n");
    CHECK(run_cli("orbit --c 1 --d 2 --n 3 --seed 3").out == "10, 101, 10202\n");

    const auto js = run_cli("orbit --c 1 --d 2 --n 5 --format json");
    CHECK(js.exit_code == 0);
    const auto j = nlohmann::json::parse(js.out);
    CHECK(j["params"]["c"] == 1);
    CHECK(j["terms"] == nlohmann::json({"1", "2", "5", "26", "677"}));

    const auto csv = run_cli("orbit --c 1 --d 2 --n 2 --format csv");
    CHECK(csv.out == "c,d,n,b\n1,2,1,1\n1,2,2,2\n");
}

TEST_CASE("orbit refuses infeasible digit growth") {
    const auto res = run_cli("orbit --c 10 --d 5 --n 30 --digit-cap 1000");
    CHECK(res.exit_code == 1);
}

TEST_CASE("classify subcommand") {
    CHECK(run_cli("classify --c -1 --d 4").out == "preperiodic (two-cycle)\n");
    CHECK(run_cli("classify --c -2 --d 3").out == "wandering\n");
    CHECK(run_cli("classify --c 7 --d 2").out == "wandering\n");
    CHECK(run_cli("classify --c 0 --d 3").out == "preperiodic (zero-fixed)\n");
    CHECK(run_cli("classify --c -2 --d 2").out == "preperiodic (eventually-fixed)\n");

    const auto js = run_cli("classify --c -1 --d 4 --format json");
    const auto j = nlohmann::json::parse(js.out);
    CHECK(j["verdict"] == "preperiodic");
    CHECK(j["case"] == "two-cycle");
}

TEST_CASE("decompose subcommand") {
    const auto res = run_cli("decompose --c 1 --d 2 --n-max 6");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("n=6  b=458330  P=45833  N=10  primes=2;5;45833") == std::string::npos);
    CHECK(res.out.find("n=6  b=458330  P=45833  N=10  primes=45833  status=complete") !=
          std::string::npos);

    const auto res3 = run_cli("decompose --c 3 --d 2 --n-max 4");
    CHECK(res3.out.find("n=4  b=21612  P=1801  N=12  primes=1801  status=complete") !=
          std::string::npos);

    const auto pre = run_cli("decompose --c -1 --d 2 --n-max 3");
    CHECK(pre.exit_code == 3);
}

TEST_CASE("decompose with a cache reruns byte-identically") {
    temp_file cache;
    const std::string args = "decompose --c 1 --d 2 --n-max 6 --cache " + cache.path;
    const auto first = run_cli(args);
    CHECK(first.exit_code == 0);
    CHECK(line_count(cache.path) == 6);

    const auto second = run_cli(args);
    CHECK(second.exit_code == 0);
    CHECK(second.out == first.out);
    // nothing new to learn, nothing appended
    CHECK(line_count(cache.path) == 6);
}

TEST_CASE("verify subcommand") {
    const auto ok = run_cli("verify --c-min -10 --c-max 10 --d-min 2 --d-max 3 --n-max 8");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("pairs=42 checked=38 skipped=4 violations=0") != std::string::npos);

    const auto pre = run_cli("verify --c-min 0 --c-max 0 --d-min 2 --d-max 4");
    CHECK(pre.exit_code == 3);

    const auto bad = run_cli("verify --c-min 5 --c-max 1 --d-min 2 --d-max 3");
    CHECK(bad.exit_code == 1);

    const auto bad_d = run_cli("verify --c-min 1 --c-max 2 --d-min 1 --d-max 3");
    CHECK(bad_d.exit_code == 1);
}

TEST_CASE("verify json report is deterministic and schema-shaped") {
    const std::string args =
        "verify --c-min -6 --c-max 6 --d-min 2 --d-max 3 --n-max 6 --format json";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);

    const auto j = nlohmann::json::parse(a.out);
    REQUIRE(j.contains("params"));
    REQUIRE(j.contains("records"));
    REQUIRE(j.contains("violations"));
    REQUIRE(j.contains("skipped_preperiodic"));
    CHECK(j["violations"].empty());
    CHECK(j["records"].size() > 0);
    // big integers ride as decimal strings
    CHECK(j["records"][0]["b"].is_string());
    CHECK(j["records"][0]["P"].is_string());
    CHECK(j["records"][0]["N"].is_string());
}

TEST_CASE("verify csv output") {
    const auto res = run_cli("verify --c-min 3 --c-max 3 --d-min 2 --d-max 2 --n-max 4 --format csv");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("c,d,n,b,P,N,primes,status\n") == 0);
    CHECK(res.out.find("3,2,4,21612,1801,12,,not_requested\n") != std::string::npos);
}

TEST_CASE("verify reuses and extends a cache without changing output") {
    temp_file cache;
    const std::string args =
        "verify --c-min -4 --c-max 4 --d-min 2 --d-max 2 --n-max 6 --format json --cache " +
        cache.path;
    const auto cold = run_cli(args);
    CHECK(cold.exit_code == 0);
    const long lines = line_count(cache.path);
    CHECK(lines > 0);

    const auto warm = run_cli(args);
    CHECK(warm.out == cold.out);
    CHECK(line_count(cache.path) == lines);  // no duplicate appends
}

TEST_CASE("usage errors") {
    CHECK(run_cli("orbit --c 1 --d 2").exit_code == 1);              // missing --n
    CHECK(run_cli("orbit --c 1 --d 2 --n 3 --format xml").exit_code == 1);
    CHECK(run_cli("nonsense --c 1").exit_code == 1);
    CHECK(run_cli("").exit_code == 1);
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("orbit --c 1 --d 1 --n 3").exit_code == 1);  // degree below 2
}
