#include "devine/simulation.hpp"

#include <cmath>
#include <future>
#include <queue>
#include <tuple>

namespace devine {

std::string to_string(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::Devine: return "devine";
    case Algorithm::FirstFit: return "firstfit";
    case Algorithm::BestFit: return "bestfit";
    case Algorithm::Grc: return "grc";
    }
    return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "devine") return Algorithm::Devine;
    if (name == "firstfit") return Algorithm::FirstFit;
    if (name == "bestfit") return Algorithm::BestFit;
    if (name == "grc") return Algorithm::Grc;
    if (name == "neurovine") {
        throw ConfigError("algorithm 'neurovine' is not implemented (see README, "
                          "\"Algorithms\" section)");
    }
    throw ConfigError("unknown algorithm '" + name +
                      "' (expected devine, firstfit, bestfit or grc)");
}

void SimConfig::validate() const {
    generator.validate();
    devine.validate();
    grc.validate();
    if (devine.leaders > generator.server_count) {
        throw ConfigError("leaders must not exceed server_count");
    }
    if (!(duration >= 0.0) || !std::isfinite(duration)) {
        throw ConfigError("duration must be nonnegative");
    }
    if (!(sample_interval > 0.0) || !std::isfinite(sample_interval)) {
        throw ConfigError("sample_interval must be positive");
    }
}

Workload generate_workload(const SimConfig& cfg) {
    cfg.validate();
    Workload w;
    Rng topology = make_stream(cfg.seed, "topology");
    Rng arrivals = make_stream(cfg.seed, "arrivals");
    Rng requests = make_stream(cfg.seed, "vnr");
    Rng primaries = make_stream(cfg.seed, "primaries");

    w.network = generate_physical_network(cfg.generator, topology);

    const double rate = cfg.generator.arrival_rate;
    std::exponential_distribution<double> gap(rate);
    std::uniform_int_distribution<NodeId> primary(
        0, static_cast<NodeId>(w.network.node_count() - 1));
    double t = 0.0;
    for (RequestId id = 0;; ++id) {
        if (cfg.generator.arrival_process == ArrivalProcess::Poisson) {
            t += gap(arrivals);
        } else {
            t = static_cast<double>(id + 1) / rate;
        }
        if (t >= cfg.duration) {
            break;
        }
        w.requests.push_back(generate_vnr(cfg.generator, id, t, requests));
        w.primaries.push_back(primary(primaries));
    }
    return w;
}

double mean_cpu_utilization(const PhysicalNetwork& net) {
    if (net.node_count() == 0) {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto& n : net.nodes()) {
        const double cap = n.capacity.cpu.to_double();
        if (cap > 0.0) {
            sum += (cap - n.residual.cpu.to_double()) / cap;
        }
    }
    return sum / static_cast<double>(net.node_count());
}

double mean_link_utilization(const PhysicalNetwork& net) {
    if (net.link_count() == 0) {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto& l : net.links()) {
        const double cap = l.bandwidth_capacity.to_double();
        if (cap > 0.0) {
            sum += (cap - l.bandwidth_residual.to_double()) / cap;
        }
    }
    return sum / static_cast<double>(net.link_count());
}

namespace {

struct Departure {
    double time;
    RequestId request_id;
    bool operator>(const Departure& o) const {
        return std::tie(time, request_id) > std::tie(o.time, o.request_id);
    }
};

class Engine {
public:
    Engine(const SimConfig& cfg, const Workload& workload)
        : cfg_(cfg),
          workload_(workload),
          net_(workload.network),
          leaders_rng_(make_stream(cfg.seed, "leaders")) {}

    SimResult run() {
        SimResult out;
        out.summary.algorithm = to_string(cfg_.algorithm);
        out.summary.seed = cfg_.seed;

        std::uint64_t epoch = 1;
        auto epoch_time = [&] { return static_cast<double>(epoch) * cfg_.sample_interval; };
        for (std::size_t i = 0; i < workload_.requests.size(); ++i) {
            const Vnr& vnr = workload_.requests[i];
            while (epoch_time() <= cfg_.duration && epoch_time() < vnr.arrival_time) {
                depart_until(epoch_time());
                out.series.push_back(sample(epoch_time()));
                ++epoch;
            }
            // Departures at the same instant go first.
            depart_until(vnr.arrival_time);
            out.arrivals.push_back(arrive(vnr, workload_.primaries[i], out));
        }
        while (epoch_time() <= cfg_.duration) {
            depart_until(epoch_time());
            out.series.push_back(sample(epoch_time()));
            ++epoch;
        }

        auto& s = out.summary;
        s.arrivals = arrivals_;
        s.accepted = accepted_;
        s.acceptance_ratio = ratio(accepted_, arrivals_);
        s.revenue = revenue_;
        s.cost = cost_;
        s.rc_ratio = cost_ > 0.0 ? revenue_ / cost_ : 0.0;
        s.mean_revenue = accepted_ ? revenue_ / static_cast<double>(accepted_) : 0.0;
        s.mean_cost = accepted_ ? cost_ / static_cast<double>(accepted_) : 0.0;
        if (!out.series.empty()) {
            double cpu = 0.0;
            double link = 0.0;
            for (const auto& e : out.series) {
                cpu += e.cpu_utilization;
                link += e.link_utilization;
            }
            s.mean_cpu_utilization = cpu / static_cast<double>(out.series.size());
            s.mean_link_utilization = link / static_cast<double>(out.series.size());
        }
        s.embedding_messages = embedding_msgs_;
        s.embedded_messages = embedded_msgs_;
        s.max_messages_per_request = max_msgs_;
        s.local_embed_calls = embed_calls_;
        s.departures = departures_;
        s.live_at_end = ledger_.size();

        for (RequestId id : ledger_.request_ids()) {
            release(net_, id, ledger_);
        }
        s.conservation_ok = net_.at_full_capacity();
        return out;
    }

private:
    static double ratio(std::uint64_t a, std::uint64_t b) {
        return b ? static_cast<double>(a) / static_cast<double>(b) : 0.0;
    }

    void depart_until(double t) {
        while (!pending_.empty() && pending_.top().time <= t) {
            release(net_, pending_.top().request_id, ledger_);
            pending_.pop();
            ++departures_;
        }
    }

    EpochSample sample(double t) const {
        EpochSample e;
        e.time = t;
        e.arrivals = arrivals_;
        e.accepted = accepted_;
        e.acceptance_ratio = ratio(accepted_, arrivals_);
        e.revenue = revenue_;
        e.cost = cost_;
        e.rc_ratio = cost_ > 0.0 ? revenue_ / cost_ : 0.0;
        e.cpu_utilization = mean_cpu_utilization(net_);
        e.link_utilization = mean_link_utilization(net_);
        e.embedding_messages = embedding_msgs_;
        e.embedded_messages = embedded_msgs_;
        e.messages_per_request =
            arrivals_ ? static_cast<double>(embedding_msgs_ + embedded_msgs_) /
                            static_cast<double>(arrivals_)
                      : 0.0;
        return e;
    }

    ArrivalRecord arrive(const Vnr& vnr, NodeId primary, SimResult& out) {
        ++arrivals_;
        ArrivalRecord rec;
        rec.index = arrivals_ - 1;
        rec.request_id = vnr.request_id;
        rec.time = vnr.arrival_time;
        rec.virtual_nodes = static_cast<std::uint32_t>(vnr.nodes.size());
        rec.virtual_links = static_cast<std::uint32_t>(vnr.links.size());
        rec.vnr_hash = content_hash(vnr);

        std::optional<EmbeddingSolution> accepted;
        const PlacementPolicy policy = cfg_.devine.embed.policy();
        if (cfg_.algorithm == Algorithm::Devine) {
            FifoTransport transport;
            auto result =
                run_election(net_, ledger_, vnr, primary, cfg_.devine, transport, leaders_rng_);
            embedding_msgs_ += result.trace.embedding_count;
            embedded_msgs_ += result.trace.embedded_count;
            rec.messages = result.trace.total();
            max_msgs_ = std::max(max_msgs_, rec.messages);
            embed_calls_ += result.embed_calls;
            if (out.traces.size() < cfg_.trace_sample) {
                out.traces.push_back(std::move(result.trace));
            }
            if (result.accepted) {
                accepted = std::move(result.solution);
            }
        } else {
            LocalEmbedOutcome outcome;
            switch (cfg_.algorithm) {
            case Algorithm::FirstFit: outcome = first_fit(net_, vnr, policy); break;
            case Algorithm::BestFit: outcome = best_fit(net_, vnr, policy); break;
            case Algorithm::Grc: outcome = grc_embed(net_, vnr, policy, cfg_.grc); break;
            case Algorithm::Devine: break;
            }
            ++embed_calls_;
            if (outcome.feasible) {
                allocate(net_, vnr, outcome.solution, ledger_, policy.injective);
                accepted = std::move(outcome.solution);
            }
        }

        if (accepted) {
            ++accepted_;
            revenue_ += accepted->revenue;
            cost_ += accepted->cost;
            rec.accepted = true;
            rec.revenue = accepted->revenue;
            rec.cost = accepted->cost;
            pending_.push({vnr.arrival_time + vnr.lifetime, vnr.request_id});
        }
        rec.acceptance_ratio = ratio(accepted_, arrivals_);
        return rec;
    }

    const SimConfig& cfg_;
    const Workload& workload_;
    PhysicalNetwork net_;
    AllocationLedger ledger_;
    Rng leaders_rng_;
    std::priority_queue<Departure, std::vector<Departure>, std::greater<>> pending_;

    std::uint64_t arrivals_ = 0;
    std::uint64_t accepted_ = 0;
    std::uint64_t departures_ = 0;
    double revenue_ = 0.0;
    double cost_ = 0.0;
    std::uint64_t embedding_msgs_ = 0;
    std::uint64_t embedded_msgs_ = 0;
    std::uint32_t max_msgs_ = 0;
    std::uint64_t embed_calls_ = 0;
};

} // namespace

SimResult run_on_workload(const SimConfig& cfg, const Workload& workload) {
    cfg.validate();
    return Engine(cfg, workload).run();
}

SimResult run_simulation(const SimConfig& cfg) {
    const Workload workload = generate_workload(cfg);
    return run_on_workload(cfg, workload);
}

std::vector<ComparisonRow> compare_algorithms(const SimConfig& base,
                                              const std::vector<Algorithm>& algorithms,
                                              const std::vector<std::uint64_t>& seeds,
                                              bool parallel) {
    std::vector<ComparisonRow> rows;
    for (std::uint64_t seed : seeds) {
        SimConfig seeded = base;
        seeded.seed = seed;
        const Workload workload = generate_workload(seeded);

        std::vector<std::future<SimResult>> jobs;
        for (Algorithm a : algorithms) {
            SimConfig cfg = seeded;
            cfg.algorithm = a;
            jobs.push_back(std::async(parallel ? std::launch::async : std::launch::deferred,
                                      [cfg, &workload] { return run_on_workload(cfg, workload); }));
        }
        for (std::size_t i = 0; i < algorithms.size(); ++i) {
            rows.push_back({algorithms[i], seed, jobs[i].get()});
        }
    }
    return rows;
}

} // namespace devine
