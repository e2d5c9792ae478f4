#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(DEVINE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("devine-cli-test-" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) ++n;
    return n;
}

} // namespace

TEST_CASE("run writes every output") {
    const auto dir = scratch("run");
    REQUIRE(run_cli("run --algorithm devine --seed 42 --duration 100 --out-dir " + dir.string()) == 0);
    for (const char* f : {"series.csv", "arrivals.csv", "summary.json", "manifest.json", "trace.jsonl"}) {
        CHECK(fs::exists(dir / f));
    }
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    const double ratio = summary["acceptance_ratio"];
    CHECK(ratio >= 0.0);
    CHECK(ratio <= 1.0);
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["config"]["seed"] == 42);
    CHECK(manifest.contains("tool_version"));
}

TEST_CASE("run is reproducible from flags and from its manifest") {
    const auto a = scratch("det-a"), b = scratch("det-b"), c = scratch("det-c");
    const std::string flags = "run --seed 5 --servers 30 --duration 150 --out-dir ";
    REQUIRE(run_cli(flags + a.string()) == 0);
    REQUIRE(run_cli(flags + b.string()) == 0);
    CHECK(slurp(a / "series.csv") == slurp(b / "series.csv"));
    REQUIRE(run_cli("run --config " + (a / "manifest.json").string() + " --out-dir " + c.string()) == 0);
    CHECK(slurp(a / "series.csv") == slurp(c / "series.csv"));
}

TEST_CASE("bad input exits with 1") {
    const auto dir = scratch("bad");
    CHECK(run_cli("run --leaders 0 --out-dir " + dir.string()) == 1);
    CHECK(run_cli("compare --algorithms neurovine --out-dir " + dir.string()) == 1);
    CHECK(run_cli("run --config /nonexistent/config.json --out-dir " + dir.string()) == 1);
    CHECK(run_cli("frobnicate") == 1);
}

TEST_CASE("compare writes one row per pair") {
    const auto dir = scratch("compare");
    REQUIRE(run_cli("compare --servers 20 --duration 50 --seeds 1,2,3 --out-dir " + dir.string()) == 0);
    CHECK(line_count(dir / "comparison.csv") == 13);
    CHECK(fs::exists(dir / "aggregate.csv"));
    CHECK(fs::exists(dir / "long.csv"));
}

TEST_CASE("validate prints without running") {
    const auto dir = scratch("validate");
    CHECK(run_cli("validate --seed 3") == 0);
    CHECK(run_cli("validate --servers 0") == 1);
    CHECK_FALSE(fs::exists(dir));
}
