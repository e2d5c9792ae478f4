#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "devine/baselines.hpp"
#include "devine/generator.hpp"
#include "devine/protocol.hpp"

namespace devine {

enum class Algorithm { Devine, FirstFit, BestFit, Grc };

std::string to_string(Algorithm algorithm);
// Throws ConfigError for unknown names; "neurovine" gets a dedicated message.
Algorithm parse_algorithm(const std::string& name);

struct SimConfig {
    GeneratorConfig generator;
    Algorithm algorithm = Algorithm::Devine;
    // Leader count plus local embedding settings. The metric weights, the
    // co-location flag and the path hop cap apply to every algorithm.
    DevineParams devine;
    GrcParams grc;
    double duration = 2000.0;
    double sample_interval = 10.0;
    std::uint64_t seed = 42;
    // Elections whose full message traces are kept.
    std::uint32_t trace_sample = 20;

    void validate() const;
};

// Physical network plus the arrival stream. Depends only on the generator
// settings, duration and seed, never on the algorithm.
struct Workload {
    PhysicalNetwork network;
    std::vector<Vnr> requests;
    std::vector<NodeId> primaries;
};

Workload generate_workload(const SimConfig& cfg);

struct EpochSample {
    double time = 0.0;
    std::uint64_t arrivals = 0;
    std::uint64_t accepted = 0;
    double acceptance_ratio = 0.0;
    double revenue = 0.0;
    double cost = 0.0;
    double rc_ratio = 0.0;
    double cpu_utilization = 0.0;
    double link_utilization = 0.0;
    std::uint64_t embedding_messages = 0;
    std::uint64_t embedded_messages = 0;
    double messages_per_request = 0.0;
};

struct ArrivalRecord {
    std::uint64_t index = 0;
    RequestId request_id = 0;
    double time = 0.0;
    std::uint32_t virtual_nodes = 0;
    std::uint32_t virtual_links = 0;
    bool accepted = false;
    double revenue = 0.0;
    double cost = 0.0;
    std::uint32_t messages = 0;
    std::uint64_t vnr_hash = 0;
    double acceptance_ratio = 0.0;
};

struct SimSummary {
    std::string algorithm;
    std::uint64_t seed = 0;
    std::uint64_t arrivals = 0;
    std::uint64_t accepted = 0;
    double acceptance_ratio = 0.0;
    double revenue = 0.0;
    double cost = 0.0;
    double rc_ratio = 0.0;
    double mean_revenue = 0.0;
    double mean_cost = 0.0;
    double mean_cpu_utilization = 0.0;
    double mean_link_utilization = 0.0;
    std::uint64_t embedding_messages = 0;
    std::uint64_t embedded_messages = 0;
    std::uint32_t max_messages_per_request = 0;
    std::uint64_t local_embed_calls = 0;
    std::uint64_t departures = 0;
    std::uint64_t live_at_end = 0;
    bool conservation_ok = false;
};

struct SimResult {
    std::vector<EpochSample> series;
    std::vector<ArrivalRecord> arrivals;
    std::vector<ElectionTrace> traces;
    SimSummary summary;
};

double mean_cpu_utilization(const PhysicalNetwork& net);
double mean_link_utilization(const PhysicalNetwork& net);

SimResult run_simulation(const SimConfig& cfg);
// Runs cfg.algorithm over a prebuilt workload; `workload` is not modified.
SimResult run_on_workload(const SimConfig& cfg, const Workload& workload);

struct ComparisonRow {
    Algorithm algorithm = Algorithm::Devine;
    std::uint64_t seed = 0;
    SimResult result;
};

// Every (algorithm, seed) pair, each seed's workload shared by all
// algorithms. Rows come back ordered by seed, then by `algorithms` order.
std::vector<ComparisonRow> compare_algorithms(const SimConfig& base,
                                              const std::vector<Algorithm>& algorithms,
                                              const std::vector<std::uint64_t>& seeds,
                                              bool parallel = true);

} // namespace devine
