#include "devine/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "devine/generator.hpp"

namespace devine {

std::string to_string(BaselineKind kind) {
    switch (kind) {
    case BaselineKind::FirstFit: return "firstfit";
    case BaselineKind::BestFit: return "bestfit";
    case BaselineKind::Grc: return "grc";
    }
    return "unknown";
}

void GrcParams::validate() const {
    if (!(damping >= 0.0 && damping < 1.0)) {
        throw ConfigError("grc damping must be in [0, 1)");
    }
    if (!(tolerance > 0.0)) {
        throw ConfigError("grc tolerance must be positive");
    }
    if (max_iterations == 0) {
        throw ConfigError("grc max_iterations must be positive");
    }
}

namespace {

LocalEmbedOutcome finish(const PlacementBuilder& builder, const Vnr& vnr,
                         std::uint32_t inspected) {
    LocalEmbedOutcome out;
    out.inspected_count = inspected;
    if (builder.complete()) {
        out.feasible = true;
        out.solution = builder.solution();
    } else {
        out.solution.request_id = vnr.request_id;
    }
    return out;
}

// Places virtual nodes in `order`, each on the first accepting node of
// `candidates_for(v)`. Stops at the first node nobody accepts.
template <typename CandidateFn>
LocalEmbedOutcome greedy(const PhysicalNetwork& net, const Vnr& vnr, const PlacementPolicy& policy,
                         const std::vector<NodeId>& order, CandidateFn candidates_for) {
    PlacementBuilder builder(net, vnr, policy);
    std::uint32_t inspected = 0;
    for (NodeId v : order) {
        bool placed = false;
        for (NodeId p : candidates_for(builder, v)) {
            ++inspected;
            if (builder.try_place(v, p)) {
                placed = true;
                break;
            }
        }
        if (!placed) {
            break;
        }
    }
    return finish(builder, vnr, inspected);
}

} // namespace

LocalEmbedOutcome first_fit(const PhysicalNetwork& net, const Vnr& vnr,
                            const PlacementPolicy& policy) {
    std::vector<NodeId> by_id(net.node_count());
    std::iota(by_id.begin(), by_id.end(), 0);
    return greedy(net, vnr, policy, demand_order(vnr),
                  [&](const PlacementBuilder&, NodeId) -> const std::vector<NodeId>& {
                      return by_id;
                  });
}

LocalEmbedOutcome best_fit(const PhysicalNetwork& net, const Vnr& vnr,
                           const PlacementPolicy& policy) {
    return greedy(net, vnr, policy, demand_order(vnr),
                  [&](const PlacementBuilder& b, NodeId) {
                      std::vector<std::pair<Quantity, NodeId>> keyed;
                      keyed.reserve(net.node_count());
                      for (NodeId p = 0; p < net.node_count(); ++p) {
                          keyed.emplace_back(b.overlay().available(p).cpu, p);
                      }
                      std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& c) {
                          return a.first != c.first ? a.first > c.first : a.second < c.second;
                      });
                      std::vector<NodeId> order;
                      order.reserve(keyed.size());
                      for (const auto& [cpu, p] : keyed) {
                          order.push_back(p);
                      }
                      return order;
                  });
}

std::vector<double> grc_rank(std::size_t n, const std::vector<double>& node_weight,
                             const std::vector<std::tuple<NodeId, NodeId, double>>& links,
                             const GrcParams& params) {
    params.validate();
    if (node_weight.size() != n) {
        throw std::invalid_argument("grc_rank: weight vector size mismatch");
    }
    if (n == 0) {
        return {};
    }
    std::vector<double> c(node_weight);
    const double total = std::accumulate(c.begin(), c.end(), 0.0);
    if (total > 0.0) {
        for (auto& v : c) {
            v /= total;
        }
    } else {
        std::fill(c.begin(), c.end(), 1.0 / static_cast<double>(n));
    }

    std::vector<double> out_weight(n, 0.0);
    for (const auto& [a, b, w] : links) {
        out_weight[a] += w;
        out_weight[b] += w;
    }

    std::vector<double> r = c;
    std::vector<double> next(n);
    for (std::uint32_t iter = 0; iter < params.max_iterations; ++iter) {
        // (T r)_i = sum_j T_ij r_j, T_ij = w(i, j) / out_weight(j).
        std::vector<double> spread(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (out_weight[j] <= 0.0) {
                spread[j] += r[j];
            }
        }
        for (const auto& [a, b, w] : links) {
            if (w <= 0.0) {
                continue;
            }
            spread[a] += w / out_weight[b] * r[b];
            spread[b] += w / out_weight[a] * r[a];
        }
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = (1.0 - params.damping) * c[i] + params.damping * spread[i];
            change = std::max(change, std::abs(next[i] - r[i]));
        }
        r.swap(next);
        if (change < params.tolerance) {
            return r;
        }
    }
    throw ConvergenceError("grc_rank did not converge in " +
                           std::to_string(params.max_iterations) + " iterations");
}

std::vector<double> grc_rank(const PhysicalNetwork& net, const GrcParams& params) {
    std::vector<double> weight;
    weight.reserve(net.node_count());
    for (const auto& node : net.nodes()) {
        weight.push_back(node.residual.cpu.to_double());
    }
    std::vector<std::tuple<NodeId, NodeId, double>> links;
    links.reserve(net.link_count());
    for (const auto& l : net.links()) {
        links.emplace_back(l.a, l.b, l.bandwidth_residual.to_double());
    }
    return grc_rank(net.node_count(), weight, links, params);
}

std::vector<double> grc_rank(const Vnr& vnr, const GrcParams& params) {
    std::vector<double> weight;
    weight.reserve(vnr.nodes.size());
    for (const auto& node : vnr.nodes) {
        weight.push_back(node.demand.cpu.to_double());
    }
    std::vector<std::tuple<NodeId, NodeId, double>> links;
    links.reserve(vnr.links.size());
    for (const auto& l : vnr.links) {
        links.emplace_back(l.a, l.b, l.bandwidth_demand.to_double());
    }
    return grc_rank(vnr.nodes.size(), weight, links, params);
}

std::vector<NodeId> rank_order(const std::vector<double>& rank) {
    std::vector<NodeId> order(rank.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeId a, NodeId b) { return rank[a] > rank[b]; });
    return order;
}

LocalEmbedOutcome grc_embed(const PhysicalNetwork& net, const Vnr& vnr,
                            const PlacementPolicy& policy, const GrcParams& params) {
    const auto physical = rank_order(grc_rank(net, params));
    const auto virtual_order = rank_order(grc_rank(vnr, params));
    return greedy(net, vnr, policy, virtual_order,
                  [&](const PlacementBuilder&, NodeId) -> const std::vector<NodeId>& {
                      return physical;
                  });
}

} // namespace devine
