#include "devine/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

namespace devine {

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

Json to_json(const EmbeddingSolution& sol) {
    Json j;
    j["request_id"] = sol.request_id;
    j["node_mapping"] = sol.node_mapping;
    j["paths"] = sol.path_mapping;
    j["revenue"] = sol.revenue;
    j["cost"] = sol.cost;
    j["metric"] = sol.metric;
    return j;
}

EmbeddingSolution solution_from_json(const Json& j) {
    EmbeddingSolution sol;
    sol.request_id = j.at("request_id").get<RequestId>();
    sol.node_mapping = j.at("node_mapping").get<std::vector<NodeId>>();
    sol.path_mapping = j.at("paths").get<std::vector<std::vector<NodeId>>>();
    sol.revenue = j.at("revenue").get<double>();
    sol.cost = j.at("cost").get<double>();
    sol.metric = j.at("metric").get<double>();
    return sol;
}

Json to_json(const TraceEvent& e) {
    Json j;
    j["seq"] = e.seq;
    j["request_id"] = e.request_id;
    j["sender"] = e.sender;
    j["receiver"] = e.receiver;
    j["kind"] = to_string(e.kind);
    j[e.kind == MessageKind::Embedding ? "originator" : "winner"] = e.subject;
    if (e.metric == kInfeasibleMetric) {
        j["metric"] = nullptr;
    } else {
        j["metric"] = e.metric;
    }
    if (!e.note.empty()) {
        j["note"] = e.note;
    }
    return j;
}

void write_trace_jsonl(std::ostream& os, const std::vector<ElectionTrace>& traces) {
    for (const auto& t : traces) {
        for (const auto& e : t.events) {
            os << to_json(e).dump() << '\n';
        }
    }
}

namespace {

Json normal_json(const NormalSpec& s) { return Json{{"mean", s.mean}, {"spread", s.spread}}; }

// Reads members of one JSON object and rejects keys nobody asked for.
class ObjectReader {
public:
    ObjectReader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) {
            throw ConfigError(where_ + " must be an object");
        }
    }

    template <typename T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) {
            return;
        }
        try {
            out = j_.at(key).get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(where_ + "." + key + ": " + e.what());
        }
    }

    void read(const char* key, NormalSpec& out) {
        seen_.insert(key);
        if (!j_.contains(key)) {
            return;
        }
        ObjectReader r(j_.at(key), where_ + "." + key);
        r.read("mean", out.mean);
        r.read("spread", out.spread);
        r.finish();
    }

    const Json* child(const char* key) {
        seen_.insert(key);
        return j_.contains(key) ? &j_.at(key) : nullptr;
    }

    void finish() const {
        for (const auto& [k, v] : j_.items()) {
            if (!seen_.count(k)) {
                throw ConfigError("unknown config key " + where_ + "." + k);
            }
        }
    }

private:
    const Json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

} // namespace

Json to_json(const SimConfig& cfg) {
    const auto& g = cfg.generator;
    const auto& e = cfg.devine.embed;
    Json j;
    j["seed"] = cfg.seed;
    j["algorithm"] = to_string(cfg.algorithm);
    j["duration"] = cfg.duration;
    j["sample_interval"] = cfg.sample_interval;
    j["trace_sample"] = cfg.trace_sample;
    j["network"] = {
        {"server_count", g.server_count},
        {"link_probability", g.link_probability},
        {"node_cpu", normal_json(g.node_cpu)},
        {"node_memory", normal_json(g.node_memory)},
        {"node_gpu", normal_json(g.node_gpu)},
        {"link_bandwidth", normal_json(g.link_bandwidth)},
    };
    j["vnr"] = {
        {"min_nodes", g.vnr_min_nodes},
        {"max_nodes", g.vnr_max_nodes},
        {"link_probability", g.vnr_link_probability},
        {"cpu", normal_json(g.vnr_cpu)},
        {"memory", normal_json(g.vnr_memory)},
        {"gpu", normal_json(g.vnr_gpu)},
        {"bandwidth", normal_json(g.vnr_bandwidth)},
        {"lifetime", normal_json(g.lifetime)},
    };
    j["distributions"] = {
        {"second_parameter", to_string(g.spread_kind)},
        {"draw_floor", g.draw_floor},
        {"lifetime_floor", g.lifetime_floor},
        {"max_attempts", g.max_attempts},
    };
    j["arrivals"] = {
        {"rate", g.arrival_rate},
        {"process", to_string(g.arrival_process)},
    };
    j["devine"] = {
        {"leaders", cfg.devine.leaders},
        {"alpha", e.alpha},
        {"beta", e.beta},
        {"x", e.x},
        {"y", e.y},
        {"injective_node_mapping", e.injective},
    };
    if (e.path_hop_cap) {
        j["devine"]["path_hop_cap"] = *e.path_hop_cap;
    } else {
        j["devine"]["path_hop_cap"] = nullptr;
    }
    j["grc"] = {
        {"damping", cfg.grc.damping},
        {"tolerance", cfg.grc.tolerance},
        {"max_iterations", cfg.grc.max_iterations},
    };
    return j;
}

SimConfig config_from_json(const Json& root) {
    const Json& j = (root.is_object() && root.contains("config") && root.contains("tool_version"))
                        ? root.at("config")
                        : root;
    SimConfig cfg;
    auto& g = cfg.generator;
    auto& e = cfg.devine.embed;
    ObjectReader top(j, "config");
    top.read("seed", cfg.seed);
    std::string algorithm = to_string(cfg.algorithm);
    top.read("algorithm", algorithm);
    cfg.algorithm = parse_algorithm(algorithm);
    top.read("duration", cfg.duration);
    top.read("sample_interval", cfg.sample_interval);
    top.read("trace_sample", cfg.trace_sample);

    if (const Json* n = top.child("network")) {
        ObjectReader r(*n, "network");
        r.read("server_count", g.server_count);
        r.read("link_probability", g.link_probability);
        r.read("node_cpu", g.node_cpu);
        r.read("node_memory", g.node_memory);
        r.read("node_gpu", g.node_gpu);
        r.read("link_bandwidth", g.link_bandwidth);
        r.finish();
    }
    if (const Json* n = top.child("vnr")) {
        ObjectReader r(*n, "vnr");
        r.read("min_nodes", g.vnr_min_nodes);
        r.read("max_nodes", g.vnr_max_nodes);
        r.read("link_probability", g.vnr_link_probability);
        r.read("cpu", g.vnr_cpu);
        r.read("memory", g.vnr_memory);
        r.read("gpu", g.vnr_gpu);
        r.read("bandwidth", g.vnr_bandwidth);
        r.read("lifetime", g.lifetime);
        r.finish();
    }
    if (const Json* n = top.child("distributions")) {
        ObjectReader r(*n, "distributions");
        std::string spread = to_string(g.spread_kind);
        r.read("second_parameter", spread);
        if (spread == "variance") {
            g.spread_kind = SpreadKind::Variance;
        } else if (spread == "std_dev") {
            g.spread_kind = SpreadKind::StdDev;
        } else {
            throw ConfigError("distributions.second_parameter must be variance or std_dev");
        }
        r.read("draw_floor", g.draw_floor);
        r.read("lifetime_floor", g.lifetime_floor);
        r.read("max_attempts", g.max_attempts);
        r.finish();
    }
    if (const Json* n = top.child("arrivals")) {
        ObjectReader r(*n, "arrivals");
        r.read("rate", g.arrival_rate);
        std::string process = to_string(g.arrival_process);
        r.read("process", process);
        if (process == "poisson") {
            g.arrival_process = ArrivalProcess::Poisson;
        } else if (process == "deterministic") {
            g.arrival_process = ArrivalProcess::Deterministic;
        } else {
            throw ConfigError("arrivals.process must be poisson or deterministic");
        }
        r.finish();
    }
    if (const Json* n = top.child("devine")) {
        ObjectReader r(*n, "devine");
        r.read("leaders", cfg.devine.leaders);
        r.read("alpha", e.alpha);
        r.read("beta", e.beta);
        r.read("x", e.x);
        r.read("y", e.y);
        r.read("injective_node_mapping", e.injective);
        if (const Json* cap = r.child("path_hop_cap"); cap && !cap->is_null()) {
            try {
                e.path_hop_cap = cap->get<std::uint32_t>();
            } catch (const nlohmann::json::exception& ex) {
                throw ConfigError(std::string("devine.path_hop_cap: ") + ex.what());
            }
        }
        r.finish();
    }
    if (const Json* n = top.child("grc")) {
        ObjectReader r(*n, "grc");
        r.read("damping", cfg.grc.damping);
        r.read("tolerance", cfg.grc.tolerance);
        r.read("max_iterations", cfg.grc.max_iterations);
        r.finish();
    }
    top.finish();
    cfg.validate();
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

Json to_json(const SimSummary& s) {
    Json j;
    j["algorithm"] = s.algorithm;
    j["seed"] = s.seed;
    j["arrivals"] = s.arrivals;
    j["accepted"] = s.accepted;
    j["acceptance_ratio"] = s.acceptance_ratio;
    j["revenue"] = s.revenue;
    j["cost"] = s.cost;
    j["rc_ratio"] = s.rc_ratio;
    j["mean_revenue"] = s.mean_revenue;
    j["mean_cost"] = s.mean_cost;
    j["mean_cpu_utilization"] = s.mean_cpu_utilization;
    j["mean_link_utilization"] = s.mean_link_utilization;
    j["embedding_messages"] = s.embedding_messages;
    j["embedded_messages"] = s.embedded_messages;
    j["max_messages_per_request"] = s.max_messages_per_request;
    j["local_embed_calls"] = s.local_embed_calls;
    j["departures"] = s.departures;
    j["live_at_end"] = s.live_at_end;
    j["conservation_ok"] = s.conservation_ok;
    return j;
}

void write_series_csv(std::ostream& os, const std::vector<EpochSample>& series) {
    os << kSeriesColumns << '\n';
    for (const auto& e : series) {
        os << format_number(e.time) << ',' << e.arrivals << ',' << e.accepted << ','
           << format_number(e.acceptance_ratio) << ',' << format_number(e.revenue) << ','
           << format_number(e.cost) << ',' << format_number(e.rc_ratio) << ','
           << format_number(e.cpu_utilization) << ',' << format_number(e.link_utilization) << ','
           << e.embedding_messages << ',' << e.embedded_messages << ','
           << format_number(e.messages_per_request) << '\n';
    }
}

void write_arrivals_csv(std::ostream& os, const std::vector<ArrivalRecord>& arrivals) {
    os << kArrivalColumns << '\n';
    for (const auto& a : arrivals) {
        char hash[32];
        std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(a.vnr_hash));
        os << a.index << ',' << a.request_id << ',' << format_number(a.time) << ','
           << a.virtual_nodes << ',' << a.virtual_links << ',' << (a.accepted ? 1 : 0) << ','
           << format_number(a.revenue) << ',' << format_number(a.cost) << ',' << a.messages << ','
           << hash << ',' << format_number(a.acceptance_ratio) << '\n';
    }
}

void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
    os << kComparisonColumns << '\n';
    for (const auto& r : rows) {
        const auto& s = r.result.summary;
        os << to_string(r.algorithm) << ',' << r.seed << ',' << format_number(s.acceptance_ratio)
           << ',' << format_number(s.revenue) << ',' << format_number(s.cost) << ','
           << format_number(s.rc_ratio) << ',' << format_number(s.mean_cpu_utilization) << ','
           << format_number(s.mean_link_utilization) << '\n';
    }
}

namespace {

struct MetricStats {
    double median, mean, min, max;
};

MetricStats stats(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    double sum = 0.0;
    for (double x : v) {
        sum += x;
    }
    const double median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    return {median, sum / static_cast<double>(n), v.front(), v.back()};
}

} // namespace

void write_aggregate_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
    using Getter = double (*)(const SimSummary&);
    const std::vector<std::pair<const char*, Getter>> metrics = {
        {"acceptance_ratio", [](const SimSummary& s) { return s.acceptance_ratio; }},
        {"revenue", [](const SimSummary& s) { return s.revenue; }},
        {"cost", [](const SimSummary& s) { return s.cost; }},
        {"rc_ratio", [](const SimSummary& s) { return s.rc_ratio; }},
        {"mean_cpu_utilization", [](const SimSummary& s) { return s.mean_cpu_utilization; }},
        {"mean_link_utilization", [](const SimSummary& s) { return s.mean_link_utilization; }},
    };
    std::vector<Algorithm> order;
    for (const auto& r : rows) {
        if (std::find(order.begin(), order.end(), r.algorithm) == order.end()) {
            order.push_back(r.algorithm);
        }
    }
    os << "algorithm,metric,runs,median,mean,min,max\n";
    for (Algorithm a : order) {
        for (const auto& [name, get] : metrics) {
            std::vector<double> values;
            for (const auto& r : rows) {
                if (r.algorithm == a) {
                    values.push_back(get(r.result.summary));
                }
            }
            const auto st = stats(values);
            os << to_string(a) << ',' << name << ',' << values.size() << ','
               << format_number(st.median) << ',' << format_number(st.mean) << ','
               << format_number(st.min) << ',' << format_number(st.max) << '\n';
        }
    }
}

void write_long_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
    os << "algorithm,seed,time,metric,value\n";
    for (const auto& r : rows) {
        for (const auto& e : r.result.series) {
            const std::pair<const char*, double> values[] = {
                {"acceptance_ratio", e.acceptance_ratio},
                {"revenue", e.revenue},
                {"cost", e.cost},
                {"rc_ratio", e.rc_ratio},
                {"cpu_utilization", e.cpu_utilization},
                {"link_utilization", e.link_utilization},
            };
            for (const auto& [name, v] : values) {
                os << to_string(r.algorithm) << ',' << r.seed << ',' << format_number(e.time)
                   << ',' << name << ',' << format_number(v) << '\n';
            }
        }
    }
}

} // namespace devine
