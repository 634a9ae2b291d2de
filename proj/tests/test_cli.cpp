#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "poincare/pmf_io.hpp"

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + std::string(POINCARE_CLI_PATH) + " " + args + " 2>/dev/null";
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

} // namespace

TEST_CASE("analyze emits reports and exit code zero", "[cli]") {
    SECTION("json for a Poisson input") {
        const CliResult r = run_cli("analyze --dist poisson:2 --format json");
        REQUIRE(r.exit_code == 0);
        const nlohmann::json j = nlohmann::json::parse(r.out);
        REQUIRE(j["spec"] == "poisson:2");
        REQUIRE(std::abs(j["report"]["exact_value"].get<double>() - 2.0) <= 1e-6);
        REQUIRE(j["failed"] == 0);
    }
    SECTION("binomial crossing bound lands at n p") {
        const CliResult r = run_cli("analyze --dist binomial:10:0.3 --format json");
        REQUIRE(r.exit_code == 0);
        const nlohmann::json j = nlohmann::json::parse(r.out);
        REQUIRE(std::abs(j["report"]["crossing_n_bound"].get<double>() - 3.0) <= 1e-8);
    }
    SECTION("csv format") {
        const CliResult r = run_cli("analyze --dist bernoulli_sum:0.2,0.4 --format csv");
        REQUIRE(r.exit_code == 0);
        REQUIRE(r.out.rfind("spec,", 0) == 0);
        REQUIRE(std::count(r.out.begin(), r.out.end(), '\n') == 2);
    }
    SECTION("point-mass file reports degenerate") {
        const std::string path = "cli_point_mass.txt";
        std::ofstream(path) << "4 1.0\n";
        const CliResult r = run_cli("analyze --dist file:" + path + " --format json");
        REQUIRE(r.exit_code == 0);
        REQUIRE(nlohmann::json::parse(r.out)["report"]["exact_kind"] == "Degenerate");
        std::remove(path.c_str());
    }
    SECTION("text format mentions the bound chain") {
        const CliResult r = run_cli("analyze --dist poisson:1 --format text");
        REQUIRE(r.exit_code == 0);
        REQUIRE(r.out.find("bound chain") != std::string::npos);
    }
}

TEST_CASE("input errors exit with code one", "[cli]") {
    REQUIRE(run_cli("analyze --dist gamma:1 --format json").exit_code == 1);
    REQUIRE(run_cli("analyze --dist poisson:-3 --format json").exit_code == 1);
    REQUIRE(run_cli("analyze --dist file:absent_file.txt").exit_code == 1);
    REQUIRE(run_cli("reproduce nosuchcase").exit_code == 1);
}

TEST_CASE("reproduce cases pass", "[cli]") {
    for (const char* name : {"poisson", "binomial", "bernoulli-sum",
                             "convolution", "counterexample", "charlier"}) {
        const CliResult r = run_cli(std::string("reproduce ") + name);
        INFO(name << "\n" << r.out);
        REQUIRE(r.exit_code == 0);
        REQUIRE(r.out.find("FAIL") == std::string::npos);
    }
    SECTION("counterexample reports the infinite kind") {
        const CliResult r = run_cli("reproduce counterexample");
        REQUIRE(r.out.find("Infinite") != std::string::npos);
        REQUIRE(r.out.find("witness") != std::string::npos);
    }
}

TEST_CASE("nested specs work through the shell", "[cli]") {
    const CliResult r = run_cli("analyze --dist 'convolve:(poisson:1):(poisson:2)' --format json");
    REQUIRE(r.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(r.out);
    REQUIRE(std::abs(j["report"]["exact_value"].get<double>() - 3.0) <= 1e-6);
    REQUIRE(std::abs(j["report"]["convolution_note"].get<double>() - 3.0) <= 1e-6);
    SECTION("mixture of separated uniforms through the grammar") {
        std::ofstream("cli_u01.txt") << "0 0.5\n1 0.5\n";
        std::ofstream("cli_u34.txt") << "3 0.5\n4 0.5\n";
        const CliResult m = run_cli(
            "analyze --dist 'mixture:0.5:(file:cli_u01.txt):(file:cli_u34.txt)' --format json");
        REQUIRE(m.exit_code == 0);
        const nlohmann::json mj = nlohmann::json::parse(m.out);
        REQUIRE(mj["report"]["exact_kind"] == "Infinite");
        REQUIRE(mj["report"]["gap_location"] == 2);
        std::remove("cli_u01.txt");
        std::remove("cli_u34.txt");
    }
}

TEST_CASE("analyze output is deterministic", "[cli]") {
    for (const char* fmt : {"json", "csv", "text"}) {
        const std::string args = std::string("analyze --dist bernoulli_sum:0.3,0.6 --format ") + fmt;
        const CliResult a = run_cli(args);
        const CliResult b = run_cli(args);
        REQUIRE(a.exit_code == 0);
        REQUIRE(a.out == b.out);
    }
}

TEST_CASE("verify is deterministic and clean", "[cli]") {
    const CliResult a = run_cli("verify --seed 0 --trials 15");
    const CliResult b = run_cli("verify --seed 0 --trials 15");
    REQUIRE(a.exit_code == 0);
    REQUIRE(a.out == b.out);
    REQUIRE(a.out.find("FAIL") == std::string::npos);
    SECTION("different seed still passes") {
        const CliResult c = run_cli("verify --seed 42 --trials 10");
        REQUIRE(c.exit_code == 0);
    }
}

TEST_CASE("tail epsilon environment override", "[cli]") {
    // a loose tail keeps the truncated support very short
    const CliResult loose = run_cli("analyze --dist poisson:1 --format json",
                                    "POINCARE_TAIL_EPS=0.2");
    const CliResult tight = run_cli("analyze --dist poisson:1 --format json");
    REQUIRE(loose.exit_code == 0);
    const double v_loose = nlohmann::json::parse(loose.out)["report"]["exact_value"].get<double>();
    const double v_tight = nlohmann::json::parse(tight.out)["report"]["exact_value"].get<double>();
    REQUIRE(std::abs(v_tight - 1.0) <= 1e-6);
    REQUIRE(std::abs(v_loose - 1.0) > 1e-4);   // visible truncation effect
    REQUIRE(run_cli("analyze --dist poisson:1", "POINCARE_TAIL_EPS=2.0").exit_code == 1);
}
