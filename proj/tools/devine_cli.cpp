// devine: run, compare and validate decentralized VNE simulations.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "devine/io.hpp"
#include "devine/simulation.hpp"

namespace fs = std::filesystem;
using namespace devine;

namespace {

constexpr const char* kToolVersion = "1.0.0";

struct Overrides {
    std::string config_path;
    std::optional<std::string> algorithm;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint32_t> servers;
    std::optional<double> link_prob;
    std::optional<double> duration;
    std::optional<double> arrival_rate;
    std::optional<double> alpha;
    std::optional<std::uint32_t> beta;
    std::optional<std::uint32_t> leaders;
    std::optional<double> x;
    std::optional<double> y;
    bool injective = false;
    std::string out_dir;
};

void add_common_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON config (or a previous manifest.json)");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--servers", o.servers, "physical server count");
    cmd->add_option("--link-prob", o.link_prob, "physical link probability");
    cmd->add_option("--duration", o.duration, "simulated time units");
    cmd->add_option("--arrival-rate", o.arrival_rate, "requests per time unit");
    cmd->add_option("--alpha", o.alpha, "inspection budget multiplier");
    cmd->add_option("--beta", o.beta, "maximum BFS depth");
    cmd->add_option("--leaders", o.leaders, "leader ring size L");
    cmd->add_option("--x", o.x, "revenue weight");
    cmd->add_option("--y", o.y, "cost weight");
    cmd->add_flag("--injective", o.injective, "forbid co-locating virtual nodes");
    cmd->add_option("--out-dir", o.out_dir, "output directory (default $DEVINE_OUT_DIR or ./devine-out)");
}

SimConfig resolve(const Overrides& o) {
    SimConfig cfg = o.config_path.empty() ? SimConfig{} : load_config(o.config_path);
    if (o.algorithm) cfg.algorithm = parse_algorithm(*o.algorithm);
    if (o.seed) cfg.seed = *o.seed;
    if (o.servers) cfg.generator.server_count = *o.servers;
    if (o.link_prob) cfg.generator.link_probability = *o.link_prob;
    if (o.duration) cfg.duration = *o.duration;
    if (o.arrival_rate) cfg.generator.arrival_rate = *o.arrival_rate;
    if (o.alpha) cfg.devine.embed.alpha = *o.alpha;
    if (o.beta) cfg.devine.embed.beta = *o.beta;
    if (o.leaders) cfg.devine.leaders = *o.leaders;
    if (o.x) cfg.devine.embed.x = *o.x;
    if (o.y) cfg.devine.embed.y = *o.y;
    if (o.injective) cfg.devine.embed.injective = true;
    cfg.validate();
    return cfg;
}

fs::path out_dir(const Overrides& o) {
    if (!o.out_dir.empty()) {
        return o.out_dir;
    }
    if (const char* env = std::getenv("DEVINE_OUT_DIR"); env && *env) {
        return env;
    }
    return "devine-out";
}

std::string wall_time() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Floats rounded to 6 significant digits, recursively.
Json rounded(Json j) {
    if (j.is_number_float()) {
        return std::stod(format_number(j.get<double>()));
    }
    if (j.is_structured()) {
        for (auto& v : j) {
            v = rounded(v);
        }
    }
    return j;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

template <typename Fn>
void write_with(const fs::path& path, Fn fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    fn(out);
}

Json manifest(const std::string& command, const SimConfig& cfg, const std::string& started) {
    Json m;
    m["tool_version"] = kToolVersion;
    m["command"] = command;
    m["master_seed"] = cfg.seed;
    m["started_at"] = started;
    m["finished_at"] = wall_time();
    m["config"] = to_json(cfg);
    return m;
}

int cmd_run(const Overrides& o) {
    const std::string started = wall_time();
    const SimConfig cfg = resolve(o);
    const fs::path dir = out_dir(o);
    fs::create_directories(dir);

    const SimResult result = run_simulation(cfg);
    write_with(dir / "series.csv", [&](std::ostream& os) { write_series_csv(os, result.series); });
    write_with(dir / "arrivals.csv",
               [&](std::ostream& os) { write_arrivals_csv(os, result.arrivals); });
    write_text(dir / "summary.json", rounded(to_json(result.summary)).dump(2) + "\n");
    if (cfg.algorithm == Algorithm::Devine) {
        write_with(dir / "trace.jsonl",
                   [&](std::ostream& os) { write_trace_jsonl(os, result.traces); });
    }
    write_text(dir / "manifest.json", manifest("run", cfg, started).dump(2) + "\n");

    const auto& s = result.summary;
    std::cout << s.algorithm << ": arrivals " << s.arrivals << ", accepted " << s.accepted
              << ", acceptance " << format_number(s.acceptance_ratio) << ", r/c "
              << format_number(s.rc_ratio) << "\n"
              << "outputs in " << dir.string() << "\n";
    return s.conservation_ok ? 0 : 2;
}

int cmd_compare(const Overrides& o, const std::vector<std::string>& names,
                const std::vector<std::uint64_t>& seeds_in) {
    const std::string started = wall_time();
    std::vector<Algorithm> algorithms;
    for (const auto& n : names) {
        algorithms.push_back(parse_algorithm(n));
    }
    const SimConfig cfg = resolve(o);
    std::vector<std::uint64_t> seeds = seeds_in;
    if (seeds.empty()) {
        seeds.push_back(cfg.seed);
    }
    const fs::path dir = out_dir(o);
    fs::create_directories(dir);

    const auto rows = compare_algorithms(cfg, algorithms, seeds);
    write_with(dir / "comparison.csv", [&](std::ostream& os) { write_comparison_csv(os, rows); });
    write_with(dir / "aggregate.csv", [&](std::ostream& os) { write_aggregate_csv(os, rows); });
    write_with(dir / "long.csv", [&](std::ostream& os) { write_long_csv(os, rows); });
    Json m = manifest("compare", cfg, started);
    m["algorithms"] = names;
    m["seeds"] = seeds;
    write_text(dir / "manifest.json", m.dump(2) + "\n");

    write_aggregate_csv(std::cout, rows);
    bool ok = true;
    for (const auto& r : rows) {
        ok = ok && r.result.summary.conservation_ok;
    }
    return ok ? 0 : 2;
}

int cmd_validate(const Overrides& o) {
    const SimConfig cfg = resolve(o);
    std::cout << rounded(to_json(cfg)).dump(2) << "\n";
    const auto& g = cfg.generator;
    auto describe = [&](const char* name, const NormalSpec& s) {
        std::cout << "  " << name << ": N(" << format_number(s.mean) << ", "
                  << format_number(s.spread) << ") -> mean " << format_number(s.mean)
                  << ", std " << format_number(g.std_dev(s)) << "\n";
    };
    std::cout << "distribution second parameter read as " << to_string(g.spread_kind) << ":\n";
    describe("node cpu", g.node_cpu);
    describe("node memory", g.node_memory);
    describe("node gpu", g.node_gpu);
    describe("link bandwidth", g.link_bandwidth);
    describe("vnr cpu", g.vnr_cpu);
    describe("vnr memory", g.vnr_memory);
    describe("vnr gpu", g.vnr_gpu);
    describe("vnr bandwidth", g.vnr_bandwidth);
    describe("lifetime", g.lifetime);
    std::cout << "draws below " << format_number(g.draw_floor) << " (lifetime "
              << format_number(g.lifetime_floor) << ") are redrawn\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decentralized virtual network embedding simulator"};
    app.require_subcommand(1);
    app.footer(std::string("series.csv columns: ") + kSeriesColumns +
               "\narrivals.csv columns: " + kArrivalColumns +
               "\ncomparison.csv columns: " + kComparisonColumns);

    Overrides run_o;
    auto* run = app.add_subcommand("run", "run one simulation");
    add_common_flags(run, run_o);
    run->add_option("--algorithm", run_o.algorithm, "devine | firstfit | bestfit | grc");

    Overrides cmp_o;
    std::vector<std::string> names{"devine", "firstfit", "bestfit", "grc"};
    std::vector<std::uint64_t> seeds;
    auto* compare = app.add_subcommand("compare", "compare algorithms on shared workloads");
    add_common_flags(compare, cmp_o);
    compare->add_option("--algorithms", names, "algorithms to compare")->delimiter(',');
    compare->add_option("--seeds", seeds, "workload seeds")->delimiter(',');

    Overrides val_o;
    auto* validate = app.add_subcommand("validate", "print the resolved config");
    add_common_flags(validate, val_o);
    validate->add_option("--algorithm", val_o.algorithm, "devine | firstfit | bestfit | grc");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) return cmd_run(run_o);
        if (*compare) return cmd_compare(cmp_o, names, seeds);
        if (*validate) return cmd_validate(val_o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
