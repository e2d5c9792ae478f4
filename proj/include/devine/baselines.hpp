#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "devine/local_embed.hpp"

namespace devine {

enum class BaselineKind { FirstFit, BestFit, Grc };

std::string to_string(BaselineKind kind);

// Damped global-resource-capacity ranking.
struct GrcParams {
    double damping = 0.85;
    double tolerance = 1e-9;
    std::uint32_t max_iterations = 500;

    void validate() const;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Each virtual node, largest demand first, goes to the lowest-id physical
// node that takes it (node fit plus routable links to placed neighbors).
LocalEmbedOutcome first_fit(const PhysicalNetwork& net, const Vnr& vnr,
                            const PlacementPolicy& policy);

// Same order, but each virtual node goes to the candidate with the most
// residual CPU left after tentative placements; ties to the lower id.
LocalEmbedOutcome best_fit(const PhysicalNetwork& net, const Vnr& vnr,
                           const PlacementPolicy& policy);

// Fixed point of r = (1 - d) c + d T r where c is the normalized weight
// vector and column j of T spreads node j's rank over its neighbors in
// proportion to link weight. Nodes with no positive link weight keep their
// own mass. Throws ConvergenceError after max_iterations.
std::vector<double> grc_rank(std::size_t n, const std::vector<double>& node_weight,
                             const std::vector<std::tuple<NodeId, NodeId, double>>& links,
                             const GrcParams& params);

// Rank over residual CPU and residual link bandwidth.
std::vector<double> grc_rank(const PhysicalNetwork& net, const GrcParams& params);
// Rank over CPU demand and virtual link bandwidth.
std::vector<double> grc_rank(const Vnr& vnr, const GrcParams& params);

// Virtual nodes in descending rank each take the highest-ranked physical
// node that accepts them.
LocalEmbedOutcome grc_embed(const PhysicalNetwork& net, const Vnr& vnr,
                            const PlacementPolicy& policy, const GrcParams& params);

// Nodes sorted by descending rank, ties by ascending id.
std::vector<NodeId> rank_order(const std::vector<double>& rank);

} // namespace devine
