#include "devine/local_embed.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "devine/generator.hpp"

namespace devine {

void LocalEmbedParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ConfigError("alpha must be positive");
    }
    if (!std::isfinite(x) || !std::isfinite(y)) {
        throw ConfigError("metric weights must be finite");
    }
}

ResourceVector ScratchOverlay::available(NodeId n) const {
    const auto& residual = net_->node(n).residual;
    auto it = nodes_.find(n);
    return it == nodes_.end() ? residual : residual - it->second;
}

Quantity ScratchOverlay::available_bandwidth(LinkId l) const {
    const Quantity residual = net_->link(l).bandwidth_residual;
    auto it = links_.find(l);
    return it == links_.end() ? residual : residual - it->second;
}

void ScratchOverlay::reserve_node(NodeId n, const ResourceVector& demand) {
    nodes_[n] += demand;
}

void ScratchOverlay::unreserve_node(NodeId n, const ResourceVector& demand) {
    nodes_[n] -= demand;
}

void ScratchOverlay::reserve_path(const std::vector<NodeId>& path, Quantity bw) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        links_[*net_->link_between(path[i], path[i + 1])] += bw;
    }
}

void ScratchOverlay::unreserve_path(const std::vector<NodeId>& path, Quantity bw) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        links_[*net_->link_between(path[i], path[i + 1])] -= bw;
    }
}

std::optional<std::vector<NodeId>> map_link(const ScratchOverlay& overlay, NodeId from, NodeId to,
                                            Quantity bw, std::uint32_t hop_cap) {
    const auto& net = overlay.network();
    if (from >= net.node_count() || to >= net.node_count()) {
        throw GraphError("map_link endpoint out of range");
    }
    if (from == to) {
        return std::vector<NodeId>{from};
    }
    // BFS with ascending neighbor order discovers each node first through
    // its lexicographically smallest shortest path.
    constexpr NodeId kNone = static_cast<NodeId>(-1);
    std::vector<NodeId> parent(net.node_count(), kNone);
    std::vector<std::uint32_t> depth(net.node_count(), 0);
    std::deque<NodeId> queue{from};
    parent[from] = from;
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        if (depth[u] >= hop_cap) {
            continue;
        }
        for (const auto& adj : net.neighbors(u)) {
            if (parent[adj.neighbor] != kNone || overlay.available_bandwidth(adj.link) < bw) {
                continue;
            }
            parent[adj.neighbor] = u;
            depth[adj.neighbor] = depth[u] + 1;
            if (adj.neighbor == to) {
                std::vector<NodeId> path{to};
                for (NodeId n = to; n != from; n = parent[n]) {
                    path.push_back(parent[n]);
                }
                std::reverse(path.begin(), path.end());
                return path;
            }
            queue.push_back(adj.neighbor);
        }
    }
    return std::nullopt;
}

Quantity demand_key(const Vnr& vnr, NodeId v) {
    const auto& d = vnr.nodes.at(v).demand;
    Quantity key = d.cpu + d.memory + d.gpu;
    for (const auto& l : vnr.links) {
        if (l.a == v || l.b == v) {
            key += l.bandwidth_demand;
        }
    }
    return key;
}

std::vector<NodeId> demand_order(const Vnr& vnr) {
    std::vector<std::pair<Quantity, NodeId>> keyed;
    keyed.reserve(vnr.nodes.size());
    for (NodeId v = 0; v < vnr.nodes.size(); ++v) {
        keyed.emplace_back(demand_key(vnr, v), v);
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<NodeId> order;
    order.reserve(keyed.size());
    for (const auto& [key, v] : keyed) {
        order.push_back(v);
    }
    return order;
}

PlacementBuilder::PlacementBuilder(const PhysicalNetwork& net, const Vnr& vnr,
                                   const PlacementPolicy& policy)
    : vnr_(&vnr),
      policy_(policy),
      overlay_(net),
      mapping_(vnr.nodes.size()),
      paths_(vnr.links.size()),
      hosted_(net.node_count(), 0) {}

bool PlacementBuilder::fits_node(NodeId v, NodeId p) const {
    if (policy_.injective && hosted_[p] > 0) {
        return false;
    }
    return vnr_->nodes[v].demand.fits_within(overlay_.available(p));
}

bool PlacementBuilder::try_place(NodeId v, NodeId p) {
    if (mapping_[v] || !fits_node(v, p)) {
        return false;
    }
    const auto& demand = vnr_->nodes[v].demand;
    overlay_.reserve_node(p, demand);
    mapping_[v] = p;

    std::vector<std::size_t> routed;
    bool ok = true;
    for (std::size_t l : vnr_->incident_links(v)) {
        const auto& link = vnr_->links[l];
        const NodeId other = link.a == v ? link.b : link.a;
        if (!mapping_[other]) {
            continue;
        }
        auto path = map_link(overlay_, *mapping_[link.a], *mapping_[link.b],
                             link.bandwidth_demand, policy_.path_hop_cap);
        if (!path) {
            ok = false;
            break;
        }
        overlay_.reserve_path(*path, link.bandwidth_demand);
        paths_[l] = std::move(*path);
        routed.push_back(l);
    }
    if (!ok) {
        for (std::size_t l : routed) {
            overlay_.unreserve_path(paths_[l], vnr_->links[l].bandwidth_demand);
            paths_[l].clear();
        }
        overlay_.unreserve_node(p, demand);
        mapping_[v].reset();
        return false;
    }
    ++hosted_[p];
    ++placed_;
    return true;
}

EmbeddingSolution PlacementBuilder::solution() const {
    EmbeddingSolution sol;
    sol.request_id = vnr_->request_id;
    sol.node_mapping.reserve(mapping_.size());
    for (const auto& m : mapping_) {
        sol.node_mapping.push_back(m.value());
    }
    sol.path_mapping = paths_;
    score(*vnr_, sol, policy_.x, policy_.y);
    return sol;
}

std::uint32_t inspection_budget(double alpha, std::size_t vnr_size) {
    const double raw = std::ceil(alpha * static_cast<double>(vnr_size));
    return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(raw));
}

LocalEmbedOutcome embed(NodeId root, const PhysicalNetwork& net, const Vnr& vnr,
                        const LocalEmbedParams& params) {
    if (root >= net.node_count()) {
        throw GraphError("embed root out of range");
    }
    LocalEmbedOutcome out;
    PlacementBuilder builder(net, vnr, params.policy());
    std::vector<NodeId> pending = demand_order(vnr);
    const std::uint32_t budget = inspection_budget(params.alpha, vnr.nodes.size());

    std::vector<bool> visited(net.node_count(), false);
    std::deque<std::pair<NodeId, std::uint32_t>> queue{{root, 0}};
    visited[root] = true;
    while (!pending.empty() && !queue.empty() && out.inspected_count < budget) {
        const auto [p, depth] = queue.front();
        queue.pop_front();
        ++out.inspected_count;
        out.max_depth_reached = std::max(out.max_depth_reached, depth);

        std::vector<NodeId> still_pending;
        for (NodeId v : pending) {
            if (!builder.try_place(v, p)) {
                still_pending.push_back(v);
            }
        }
        pending = std::move(still_pending);

        if (depth < params.beta) {
            for (const auto& adj : net.neighbors(p)) {
                if (!visited[adj.neighbor]) {
                    visited[adj.neighbor] = true;
                    queue.emplace_back(adj.neighbor, depth + 1);
                }
            }
        }
    }
    if (builder.complete()) {
        out.feasible = true;
        out.solution = builder.solution();
    } else {
        out.solution.request_id = vnr.request_id;
    }
    return out;
}

} // namespace devine
