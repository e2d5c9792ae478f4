#include "devine/embedding.hpp"

#include <set>

namespace devine {

namespace {

Violation violation(Violation::Kind kind, std::optional<std::size_t> v,
                    std::optional<std::size_t> p, std::string detail) {
    return Violation{kind, v, p, std::move(detail)};
}

std::size_t hops(const std::vector<NodeId>& path) {
    return path.empty() ? 0 : path.size() - 1;
}

void check_shape(const Vnr& vnr, const EmbeddingSolution& sol) {
    if (sol.node_mapping.size() != vnr.nodes.size()) {
        throw InvalidSolution("node mapping does not cover the request");
    }
    if (sol.path_mapping.size() != vnr.links.size()) {
        throw InvalidSolution("path mapping does not cover the request");
    }
}

// Aggregate demand per physical node and per physical link. Assumes the
// solution has already been checked structurally.
AllocationLedger::Entry aggregate(const PhysicalNetwork& net, const Vnr& vnr,
                                  const EmbeddingSolution& sol) {
    AllocationLedger::Entry e;
    for (std::size_t v = 0; v < vnr.nodes.size(); ++v) {
        e.node_deltas[sol.node_mapping[v]] += vnr.nodes[v].demand;
    }
    for (std::size_t l = 0; l < vnr.links.size(); ++l) {
        const auto& path = sol.path_mapping[l];
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            const LinkId link = *net.link_between(path[i], path[i + 1]);
            e.link_deltas[link] += vnr.links[l].bandwidth_demand;
        }
    }
    return e;
}

} // namespace

double revenue_of(const Vnr& vnr) {
    Quantity total;
    for (const auto& n : vnr.nodes) {
        total += n.demand.cpu;
    }
    for (const auto& l : vnr.links) {
        total += l.bandwidth_demand;
    }
    return total.to_double();
}

double cost_of(const Vnr& vnr, const EmbeddingSolution& sol) {
    check_shape(vnr, sol);
    Quantity total;
    for (const auto& n : vnr.nodes) {
        total += n.demand.cpu;
    }
    for (std::size_t l = 0; l < vnr.links.size(); ++l) {
        const auto& path = sol.path_mapping[l];
        if (path.empty()) {
            throw InvalidSolution("empty path for virtual link " + std::to_string(l));
        }
        total += vnr.links[l].bandwidth_demand * static_cast<std::int64_t>(hops(path));
    }
    return total.to_double();
}

double metric_of(double revenue, double cost, double x, double y) {
    return x * revenue - y * cost;
}

void score(const Vnr& vnr, EmbeddingSolution& sol, double x, double y) {
    sol.revenue = revenue_of(vnr);
    sol.cost = cost_of(vnr, sol);
    sol.metric = metric_of(sol.revenue, sol.cost, x, y);
}

std::string to_string(Violation::Kind kind) {
    switch (kind) {
    case Violation::Kind::WrongRequest: return "wrong_request";
    case Violation::Kind::NodeMappingSize: return "node_mapping_size";
    case Violation::Kind::UnknownPhysicalNode: return "unknown_physical_node";
    case Violation::Kind::NotInjective: return "not_injective";
    case Violation::Kind::NodeCapacity: return "node_capacity";
    case Violation::Kind::PathMappingSize: return "path_mapping_size";
    case Violation::Kind::BadPathEndpoints: return "bad_path_endpoints";
    case Violation::Kind::NotAdjacent: return "not_adjacent";
    case Violation::Kind::PathNotSimple: return "path_not_simple";
    case Violation::Kind::LinkCapacity: return "link_capacity";
    }
    return "unknown";
}

std::optional<Violation> verify_solution(const PhysicalNetwork& net, const Vnr& vnr,
                                         const EmbeddingSolution& sol, bool injective) {
    using K = Violation::Kind;
    if (sol.request_id != vnr.request_id) {
        return violation(K::WrongRequest, std::nullopt, std::nullopt,
                         "solution is for request " + std::to_string(sol.request_id));
    }
    if (sol.node_mapping.size() != vnr.nodes.size()) {
        return violation(K::NodeMappingSize, std::nullopt, std::nullopt,
                         "node mapping has " + std::to_string(sol.node_mapping.size()) +
                             " entries for " + std::to_string(vnr.nodes.size()) + " nodes");
    }
    for (std::size_t v = 0; v < sol.node_mapping.size(); ++v) {
        if (sol.node_mapping[v] >= net.node_count()) {
            return violation(K::UnknownPhysicalNode, v, sol.node_mapping[v],
                             "virtual node mapped outside the substrate");
        }
    }
    if (injective) {
        std::set<NodeId> used;
        for (std::size_t v = 0; v < sol.node_mapping.size(); ++v) {
            if (!used.insert(sol.node_mapping[v]).second) {
                return violation(K::NotInjective, v, sol.node_mapping[v],
                                 "physical node hosts more than one virtual node");
            }
        }
    }
    if (sol.path_mapping.size() != vnr.links.size()) {
        return violation(K::PathMappingSize, std::nullopt, std::nullopt,
                         "path mapping has " + std::to_string(sol.path_mapping.size()) +
                             " entries for " + std::to_string(vnr.links.size()) + " links");
    }
    for (std::size_t l = 0; l < vnr.links.size(); ++l) {
        const auto& path = sol.path_mapping[l];
        const NodeId from = sol.node_mapping[vnr.links[l].a];
        const NodeId to = sol.node_mapping[vnr.links[l].b];
        const bool forward = !path.empty() && path.front() == from && path.back() == to;
        const bool backward = !path.empty() && path.front() == to && path.back() == from;
        if (!forward && !backward) {
            return violation(K::BadPathEndpoints, l, std::nullopt,
                             "path does not join the hosts of its endpoints");
        }
        std::set<NodeId> seen;
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (path[i] >= net.node_count()) {
                return violation(K::UnknownPhysicalNode, l, path[i], "path leaves the substrate");
            }
            if (!seen.insert(path[i]).second) {
                return violation(K::PathNotSimple, l, path[i], "path revisits a node");
            }
            if (i + 1 < path.size() && !net.link_between(path[i], path[i + 1])) {
                return violation(K::NotAdjacent, l, path[i],
                                 "consecutive path nodes " + std::to_string(path[i]) + " and " +
                                     std::to_string(path[i + 1]) + " are not linked");
            }
        }
    }

    const auto demand = aggregate(net, vnr, sol);
    for (const auto& [p, need] : demand.node_deltas) {
        if (!need.fits_within(net.node(p).residual)) {
            return violation(K::NodeCapacity, std::nullopt, p,
                             "demand " + need.to_string() + " exceeds residual " +
                                 net.node(p).residual.to_string());
        }
    }
    for (const auto& [link, need] : demand.link_deltas) {
        if (need > net.link(link).bandwidth_residual) {
            return violation(K::LinkCapacity, std::nullopt, link,
                             "bandwidth " + need.to_string() + " exceeds residual " +
                                 net.link(link).bandwidth_residual.to_string());
        }
    }
    return std::nullopt;
}

std::vector<RequestId> AllocationLedger::request_ids() const {
    std::vector<RequestId> ids;
    ids.reserve(entries_.size());
    for (const auto& [id, e] : entries_) {
        ids.push_back(id);
    }
    return ids;
}

void allocate(PhysicalNetwork& net, const Vnr& vnr, const EmbeddingSolution& sol,
              AllocationLedger& ledger, bool injective) {
    if (ledger.contains(vnr.request_id)) {
        throw AllocationError("request " + std::to_string(vnr.request_id) +
                              " is already allocated");
    }
    if (auto v = verify_solution(net, vnr, sol, injective)) {
        throw AllocationError("cannot allocate request " + std::to_string(vnr.request_id) +
                              ": " + to_string(v->kind) + ": " + v->detail);
    }
    auto entry = aggregate(net, vnr, sol);
    for (const auto& [p, delta] : entry.node_deltas) {
        net.node(p).residual -= delta;
    }
    for (const auto& [link, delta] : entry.link_deltas) {
        net.link(link).bandwidth_residual -= delta;
    }
    ledger.entries_.emplace(vnr.request_id, std::move(entry));
}

void release(PhysicalNetwork& net, RequestId id, AllocationLedger& ledger) {
    auto it = ledger.entries_.find(id);
    if (it == ledger.entries_.end()) {
        throw AllocationError("request " + std::to_string(id) + " holds no allocation");
    }
    for (const auto& [p, delta] : it->second.node_deltas) {
        net.node(p).residual += delta;
    }
    for (const auto& [link, delta] : it->second.link_deltas) {
        net.link(link).bandwidth_residual += delta;
    }
    ledger.entries_.erase(it);
}

} // namespace devine
