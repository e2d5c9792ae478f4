#include "devine/network.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <string>

namespace devine {

NodeId PhysicalNetwork::add_node(const ResourceVector& capacity) {
    if (!capacity.is_nonnegative()) {
        throw GraphError("node capacity must be nonnegative");
    }
    const auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back({id, capacity, capacity});
    adjacency_.emplace_back();
    return id;
}

LinkId PhysicalNetwork::add_link(NodeId a, NodeId b, Quantity bandwidth) {
    if (a >= nodes_.size() || b >= nodes_.size()) {
        throw GraphError("link endpoint out of range");
    }
    if (a == b) {
        throw GraphError("self-loop on node " + std::to_string(a));
    }
    if (bandwidth.is_negative()) {
        throw GraphError("link bandwidth must be nonnegative");
    }
    if (link_between(a, b)) {
        throw GraphError("duplicate link " + std::to_string(a) + "-" + std::to_string(b));
    }
    const auto id = static_cast<LinkId>(links_.size());
    links_.push_back({std::min(a, b), std::max(a, b), bandwidth, bandwidth});
    auto insert_sorted = [](std::vector<Adjacency>& list, Adjacency entry) {
        auto it = std::lower_bound(list.begin(), list.end(), entry.neighbor,
                                   [](const Adjacency& x, NodeId n) { return x.neighbor < n; });
        list.insert(it, entry);
    };
    insert_sorted(adjacency_[a], {b, id});
    insert_sorted(adjacency_[b], {a, id});
    return id;
}

std::optional<LinkId> PhysicalNetwork::link_between(NodeId a, NodeId b) const {
    if (a >= adjacency_.size()) {
        return std::nullopt;
    }
    const auto& list = adjacency_[a];
    auto it = std::lower_bound(list.begin(), list.end(), b,
                               [](const Adjacency& x, NodeId n) { return x.neighbor < n; });
    if (it != list.end() && it->neighbor == b) {
        return it->link;
    }
    return std::nullopt;
}

bool PhysicalNetwork::is_connected() const {
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(links_.size());
    for (const auto& l : links_) {
        edges.emplace_back(l.a, l.b);
    }
    return devine::is_connected(nodes_.size(), edges);
}

bool PhysicalNetwork::at_full_capacity() const {
    for (const auto& n : nodes_) {
        if (!(n.residual == n.capacity)) {
            return false;
        }
    }
    for (const auto& l : links_) {
        if (l.bandwidth_residual != l.bandwidth_capacity) {
            return false;
        }
    }
    return true;
}

NodeId Vnr::add_node(const ResourceVector& demand) {
    if (!demand.is_nonnegative()) {
        throw GraphError("virtual node demand must be nonnegative");
    }
    const auto id = static_cast<NodeId>(nodes.size());
    nodes.push_back({id, demand});
    return id;
}

std::size_t Vnr::add_link(NodeId a, NodeId b, Quantity bandwidth) {
    if (a >= nodes.size() || b >= nodes.size()) {
        throw GraphError("virtual link endpoint out of range");
    }
    if (a == b) {
        throw GraphError("virtual self-loop");
    }
    if (bandwidth.is_negative()) {
        throw GraphError("virtual link bandwidth must be nonnegative");
    }
    for (const auto& l : links) {
        if ((l.a == a && l.b == b) || (l.a == b && l.b == a)) {
            throw GraphError("duplicate virtual link");
        }
    }
    links.push_back({a, b, bandwidth});
    return links.size() - 1;
}

std::vector<std::size_t> Vnr::incident_links(NodeId v) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < links.size(); ++i) {
        if (links[i].a == v || links[i].b == v) {
            out.push_back(i);
        }
    }
    return out;
}

bool Vnr::is_connected() const {
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(links.size());
    for (const auto& l : links) {
        edges.emplace_back(l.a, l.b);
    }
    return devine::is_connected(nodes.size(), edges);
}

bool is_connected(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges) {
    if (n <= 1) {
        return true;
    }
    // union-find
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) {
        parent[i] = i;
    }
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::size_t components = n;
    for (const auto& [a, b] : edges) {
        auto ra = find(a);
        auto rb = find(b);
        if (ra != rb) {
            parent[ra] = rb;
            --components;
        }
    }
    return components == 1;
}

namespace {

struct Fnv1a {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    void mix(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    }
};

} // namespace

std::uint64_t content_hash(const Vnr& vnr) {
    Fnv1a f;
    f.mix(vnr.request_id);
    f.mix(std::bit_cast<std::uint64_t>(vnr.arrival_time));
    f.mix(std::bit_cast<std::uint64_t>(vnr.lifetime));
    f.mix(vnr.nodes.size());
    for (const auto& n : vnr.nodes) {
        f.mix(static_cast<std::uint64_t>(n.demand.cpu.milli()));
        f.mix(static_cast<std::uint64_t>(n.demand.memory.milli()));
        f.mix(static_cast<std::uint64_t>(n.demand.gpu.milli()));
    }
    f.mix(vnr.links.size());
    for (const auto& l : vnr.links) {
        f.mix(l.a);
        f.mix(l.b);
        f.mix(static_cast<std::uint64_t>(l.bandwidth_demand.milli()));
    }
    return f.h;
}

} // namespace devine
