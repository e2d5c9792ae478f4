#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include "devine/network.hpp"

namespace devine {

using Rng = std::mt19937_64;

// Independent named stream derived from a master seed.
Rng make_stream(std::uint64_t master_seed, std::string_view name);

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// How the second parameter of N(mean, x) is read.
enum class SpreadKind { Variance, StdDev };

struct NormalSpec {
    double mean = 0.0;
    double spread = 0.0;
};

enum class ArrivalProcess { Poisson, Deterministic };

struct GeneratorConfig {
    std::uint32_t server_count = 100;
    double link_probability = 0.4;
    NormalSpec node_cpu{100.0, 400.0};
    NormalSpec node_memory{1200.0, 300.0};
    NormalSpec node_gpu{100.0, 400.0};
    NormalSpec link_bandwidth{100.0, 400.0};

    std::uint32_t vnr_min_nodes = 4;
    std::uint32_t vnr_max_nodes = 10;
    double vnr_link_probability = 0.7;
    NormalSpec vnr_cpu{10.0, 4.0};
    NormalSpec vnr_memory{30.0, 9.0};
    NormalSpec vnr_gpu{10.0, 4.0};
    NormalSpec vnr_bandwidth{10.0, 4.0};
    NormalSpec lifetime{100.0, 900.0};

    SpreadKind spread_kind = SpreadKind::Variance;
    // Draws below the floor are redrawn, never clamped.
    double draw_floor = 0.1;
    double lifetime_floor = 1.0;
    std::uint32_t max_attempts = 100;

    double arrival_rate = 2.0;
    ArrivalProcess arrival_process = ArrivalProcess::Poisson;

    // Throws ConfigError.
    void validate() const;
    double std_dev(const NormalSpec& spec) const;
};

// Draw from N(spec) redrawing anything below `floor`.
double draw_truncated(const GeneratorConfig& cfg, const NormalSpec& spec, double floor, Rng& rng);

// Connected G(n, p) substrate. Throws GenerationError when no connected
// graph turns up within cfg.max_attempts.
PhysicalNetwork generate_physical_network(const GeneratorConfig& cfg, Rng& rng);

Vnr generate_vnr(const GeneratorConfig& cfg, RequestId request_id, double arrival_time, Rng& rng);

std::string to_string(SpreadKind kind);
std::string to_string(ArrivalProcess process);

} // namespace devine
