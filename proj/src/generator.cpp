#include "devine/generator.hpp"

#include <cmath>
#include <vector>

namespace devine {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError(std::string(name) + " must be in [0, 1]");
    }
}

void check_normal(const NormalSpec& spec, const char* name) {
    if (!(spec.mean > 0.0) || !std::isfinite(spec.mean)) {
        throw ConfigError(std::string(name) + ".mean must be positive");
    }
    if (!(spec.spread >= 0.0) || !std::isfinite(spec.spread)) {
        throw ConfigError(std::string(name) + " spread must be nonnegative");
    }
}

// Edge list of a connected G(n, p), regenerated until connected.
std::vector<std::pair<NodeId, NodeId>> connected_gnp(std::uint32_t n, double p,
                                                     std::uint32_t max_attempts, Rng& rng,
                                                     const char* what) {
    std::bernoulli_distribution coin(p);
    for (std::uint32_t attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<std::pair<NodeId, NodeId>> edges;
        for (NodeId i = 0; i < n; ++i) {
            for (NodeId j = i + 1; j < n; ++j) {
                if (coin(rng)) {
                    edges.emplace_back(i, j);
                }
            }
        }
        if (is_connected(n, edges)) {
            return edges;
        }
    }
    throw GenerationError(std::string("no connected ") + what + " after " +
                          std::to_string(max_attempts) + " attempts");
}

} // namespace

Rng make_stream(std::uint64_t master_seed, std::string_view name) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    const std::uint64_t a = splitmix64(master_seed ^ h);
    const std::uint64_t b = splitmix64(a);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Rng(seq);
}

void GeneratorConfig::validate() const {
    if (server_count == 0) {
        throw ConfigError("server_count must be positive");
    }
    check_probability(link_probability, "link_probability");
    check_probability(vnr_link_probability, "vnr_link_probability");
    check_normal(node_cpu, "node_cpu");
    check_normal(node_memory, "node_memory");
    check_normal(node_gpu, "node_gpu");
    check_normal(link_bandwidth, "link_bandwidth");
    check_normal(vnr_cpu, "vnr_cpu");
    check_normal(vnr_memory, "vnr_memory");
    check_normal(vnr_gpu, "vnr_gpu");
    check_normal(vnr_bandwidth, "vnr_bandwidth");
    check_normal(lifetime, "lifetime");
    if (vnr_min_nodes == 0 || vnr_min_nodes > vnr_max_nodes) {
        throw ConfigError("vnr size range must satisfy 1 <= min <= max");
    }
    if (!(draw_floor > 0.0) || !(lifetime_floor > 0.0)) {
        throw ConfigError("draw floors must be positive");
    }
    if (max_attempts == 0) {
        throw ConfigError("max_attempts must be positive");
    }
    if (!(arrival_rate > 0.0) || !std::isfinite(arrival_rate)) {
        throw ConfigError("arrival_rate must be positive");
    }
}

double GeneratorConfig::std_dev(const NormalSpec& spec) const {
    return spread_kind == SpreadKind::Variance ? std::sqrt(spec.spread) : spec.spread;
}

double draw_truncated(const GeneratorConfig& cfg, const NormalSpec& spec, double floor, Rng& rng) {
    const double sd = cfg.std_dev(spec);
    if (sd == 0.0) {
        return spec.mean < floor ? floor : spec.mean;
    }
    std::normal_distribution<double> dist(spec.mean, sd);
    for (int i = 0; i < 100000; ++i) {
        const double v = dist(rng);
        if (v >= floor) {
            return v;
        }
    }
    throw GenerationError("truncated normal: floor is unreachable for this distribution");
}

PhysicalNetwork generate_physical_network(const GeneratorConfig& cfg, Rng& rng) {
    cfg.validate();
    const auto edges = connected_gnp(cfg.server_count, cfg.link_probability, cfg.max_attempts,
                                     rng, "physical network");
    PhysicalNetwork net;
    for (std::uint32_t i = 0; i < cfg.server_count; ++i) {
        const double cpu = draw_truncated(cfg, cfg.node_cpu, cfg.draw_floor, rng);
        const double mem = draw_truncated(cfg, cfg.node_memory, cfg.draw_floor, rng);
        const double gpu = draw_truncated(cfg, cfg.node_gpu, cfg.draw_floor, rng);
        net.add_node(ResourceVector::of(cpu, mem, gpu));
    }
    for (const auto& [a, b] : edges) {
        net.add_link(a, b, Quantity::from_double(
                               draw_truncated(cfg, cfg.link_bandwidth, cfg.draw_floor, rng)));
    }
    return net;
}

Vnr generate_vnr(const GeneratorConfig& cfg, RequestId request_id, double arrival_time, Rng& rng) {
    cfg.validate();
    std::uniform_int_distribution<std::uint32_t> size_dist(cfg.vnr_min_nodes, cfg.vnr_max_nodes);
    const std::uint32_t n = size_dist(rng);
    const auto edges =
        connected_gnp(n, cfg.vnr_link_probability, cfg.max_attempts, rng, "virtual network");

    Vnr vnr;
    vnr.request_id = request_id;
    vnr.arrival_time = arrival_time;
    for (std::uint32_t i = 0; i < n; ++i) {
        const double cpu = draw_truncated(cfg, cfg.vnr_cpu, cfg.draw_floor, rng);
        const double mem = draw_truncated(cfg, cfg.vnr_memory, cfg.draw_floor, rng);
        const double gpu = draw_truncated(cfg, cfg.vnr_gpu, cfg.draw_floor, rng);
        vnr.add_node(ResourceVector::of(cpu, mem, gpu));
    }
    for (const auto& [a, b] : edges) {
        vnr.add_link(a, b, Quantity::from_double(
                               draw_truncated(cfg, cfg.vnr_bandwidth, cfg.draw_floor, rng)));
    }
    vnr.lifetime = draw_truncated(cfg, cfg.lifetime, cfg.lifetime_floor, rng);
    return vnr;
}

std::string to_string(SpreadKind kind) {
    return kind == SpreadKind::Variance ? "variance" : "std_dev";
}

std::string to_string(ArrivalProcess process) {
    return process == ArrivalProcess::Poisson ? "poisson" : "deterministic";
}

} // namespace devine
