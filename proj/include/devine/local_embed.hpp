#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "devine/embedding.hpp"

namespace devine {

// Settings shared by every embedder: metric weights, co-location policy and
// the hop cap applied when routing virtual links.
struct PlacementPolicy {
    double x = 1.0;
    double y = 1.0;
    bool injective = false;
    std::uint32_t path_hop_cap = 6;
};

struct LocalEmbedParams {
    double alpha = 30.0;
    std::uint32_t beta = 3;
    double x = 1.0;
    double y = 1.0;
    bool injective = false;
    // Defaults to 2 * beta.
    std::optional<std::uint32_t> path_hop_cap;

    std::uint32_t effective_path_cap() const { return path_hop_cap.value_or(2 * beta); }
    PlacementPolicy policy() const { return {x, y, injective, effective_path_cap()}; }
    // Throws ConfigError.
    void validate() const;
};

struct LocalEmbedOutcome {
    bool feasible = false;
    EmbeddingSolution solution;
    std::uint32_t inspected_count = 0;
    std::uint32_t max_depth_reached = 0;
};

// Tentative reservations layered over a read-only network.
class ScratchOverlay {
public:
    explicit ScratchOverlay(const PhysicalNetwork& net) : net_(&net) {}

    ResourceVector available(NodeId n) const;
    Quantity available_bandwidth(LinkId l) const;

    void reserve_node(NodeId n, const ResourceVector& demand);
    void unreserve_node(NodeId n, const ResourceVector& demand);
    void reserve_path(const std::vector<NodeId>& path, Quantity bw);
    void unreserve_path(const std::vector<NodeId>& path, Quantity bw);

    const PhysicalNetwork& network() const { return *net_; }

private:
    const PhysicalNetwork* net_;
    std::map<NodeId, ResourceVector> nodes_;
    std::map<LinkId, Quantity> links_;
};

// Fewest-hop path whose every link still has `bw` available, ties broken by
// the lexicographically smallest node sequence, at most `hop_cap` hops.
// from == to yields the single-node path.
std::optional<std::vector<NodeId>> map_link(const ScratchOverlay& overlay, NodeId from, NodeId to,
                                            Quantity bw, std::uint32_t hop_cap);

// Sort key used for the "largest demand first" queue.
Quantity demand_key(const Vnr& vnr, NodeId v);
// Virtual node ids, largest demand key first, ties by ascending id.
std::vector<NodeId> demand_order(const Vnr& vnr);

// Incremental placement of one request. Every embedder drives one of these:
// it decides which physical node to try, the builder checks node fit and
// routes links to already-placed neighbors.
class PlacementBuilder {
public:
    PlacementBuilder(const PhysicalNetwork& net, const Vnr& vnr, const PlacementPolicy& policy);

    // Places `v` on `p` iff it fits and all its links to placed neighbors
    // route. Leaves no trace on failure.
    bool try_place(NodeId v, NodeId p);
    bool fits_node(NodeId v, NodeId p) const;

    bool is_placed(NodeId v) const { return mapping_[v].has_value(); }
    bool complete() const { return placed_ == vnr_->nodes.size(); }
    const ScratchOverlay& overlay() const { return overlay_; }

    // Scored solution; only meaningful once complete().
    EmbeddingSolution solution() const;

private:
    const Vnr* vnr_;
    PlacementPolicy policy_;
    ScratchOverlay overlay_;
    std::vector<std::optional<NodeId>> mapping_;
    std::vector<std::vector<NodeId>> paths_;
    std::vector<std::uint32_t> hosted_;
    std::size_t placed_ = 0;
};

// Bounded BFS embedding rooted at `root`. Never mutates `net`.
LocalEmbedOutcome embed(NodeId root, const PhysicalNetwork& net, const Vnr& vnr,
                        const LocalEmbedParams& params);

// ceil(alpha * |V_v|), at least 1.
std::uint32_t inspection_budget(double alpha, std::size_t vnr_size);

} // namespace devine
