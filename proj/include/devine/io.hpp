#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "devine/simulation.hpp"

namespace devine {

using Json = nlohmann::ordered_json;

// Numbers in text outputs carry 6 significant digits.
std::string format_number(double value);

Json to_json(const EmbeddingSolution& sol);
EmbeddingSolution solution_from_json(const Json& j);

Json to_json(const TraceEvent& event);
// One JSON object per line.
void write_trace_jsonl(std::ostream& os, const std::vector<ElectionTrace>& traces);

// Full config with every default materialized.
Json to_json(const SimConfig& cfg);
// Missing keys keep their defaults; unknown keys are rejected. Accepts either
// a bare config or a run manifest with a "config" member. Throws ConfigError.
SimConfig config_from_json(const Json& j);
SimConfig load_config(const std::string& path);

Json to_json(const SimSummary& summary);

// Column order is part of the output contract.
inline constexpr const char* kSeriesColumns =
    "time,arrivals,accepted,acceptance_ratio,revenue,cost,rc_ratio,cpu_utilization,"
    "link_utilization,embedding_messages,embedded_messages,messages_per_request";
inline constexpr const char* kArrivalColumns =
    "index,request_id,time,virtual_nodes,virtual_links,accepted,revenue,cost,messages,"
    "vnr_hash,acceptance_ratio";
inline constexpr const char* kComparisonColumns =
    "algorithm,seed,acceptance_ratio,revenue,cost,rc_ratio,mean_cpu_utilization,"
    "mean_link_utilization";

void write_series_csv(std::ostream& os, const std::vector<EpochSample>& series);
void write_arrivals_csv(std::ostream& os, const std::vector<ArrivalRecord>& arrivals);
void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);
// Per algorithm: median, mean, min and max of each summary metric.
void write_aggregate_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);
// Tidy (algorithm, seed, time, metric, value) rows for external plotting.
void write_long_csv(std::ostream& os, const std::vector<ComparisonRow>& rows);

} // namespace devine
