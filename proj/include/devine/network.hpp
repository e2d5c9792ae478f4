#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "devine/quantity.hpp"

namespace devine {

using NodeId = std::uint32_t;
using LinkId = std::uint32_t;
using RequestId = std::uint64_t;

class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct PhysicalNode {
    NodeId id = 0;
    ResourceVector capacity;
    ResourceVector residual;
};

struct PhysicalLink {
    NodeId a = 0;
    NodeId b = 0;
    Quantity bandwidth_capacity;
    Quantity bandwidth_residual;

    NodeId other(NodeId n) const { return n == a ? b : a; }
};

struct Adjacency {
    NodeId neighbor;
    LinkId link;
};

// Undirected substrate graph. Neighbor lists are kept sorted by neighbor id
// so every traversal over the graph is deterministic.
class PhysicalNetwork {
public:
    PhysicalNetwork() = default;

    NodeId add_node(const ResourceVector& capacity);
    // Rejects self-loops, duplicate links and unknown endpoints.
    LinkId add_link(NodeId a, NodeId b, Quantity bandwidth);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t link_count() const { return links_.size(); }

    const PhysicalNode& node(NodeId id) const { return nodes_.at(id); }
    PhysicalNode& node(NodeId id) { return nodes_.at(id); }
    const PhysicalLink& link(LinkId id) const { return links_.at(id); }
    PhysicalLink& link(LinkId id) { return links_.at(id); }

    const std::vector<PhysicalNode>& nodes() const { return nodes_; }
    const std::vector<PhysicalLink>& links() const { return links_; }

    std::span<const Adjacency> neighbors(NodeId id) const { return adjacency_.at(id); }
    std::optional<LinkId> link_between(NodeId a, NodeId b) const;

    bool is_connected() const;
    // True when every residual equals its capacity.
    bool at_full_capacity() const;

private:
    std::vector<PhysicalNode> nodes_;
    std::vector<PhysicalLink> links_;
    std::vector<std::vector<Adjacency>> adjacency_;
};

struct VirtualNode {
    NodeId id = 0;
    ResourceVector demand;
};

struct VirtualLink {
    NodeId a = 0;
    NodeId b = 0;
    Quantity bandwidth_demand;
};

// A virtual network request.
struct Vnr {
    RequestId request_id = 0;
    std::vector<VirtualNode> nodes;
    std::vector<VirtualLink> links;
    double arrival_time = 0.0;
    double lifetime = 1.0;

    NodeId add_node(const ResourceVector& demand);
    std::size_t add_link(NodeId a, NodeId b, Quantity bandwidth);

    // Ids of virtual links touching `v`, ascending.
    std::vector<std::size_t> incident_links(NodeId v) const;
    bool is_connected() const;
};

// Connectivity over an edge list on `n` vertices.
bool is_connected(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges);

// Stable 64-bit content hash (FNV-1a) of a request's shape and demands.
std::uint64_t content_hash(const Vnr& vnr);

} // namespace devine
