#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "devine/network.hpp"

namespace devine {

// node_mapping[v] is the physical host of virtual node v.
// path_mapping[l] is the physical node sequence carrying virtual link l,
// oriented from the host of links[l].a to the host of links[l].b. A
// co-located link maps to the single shared node.
struct EmbeddingSolution {
    RequestId request_id = 0;
    std::vector<NodeId> node_mapping;
    std::vector<std::vector<NodeId>> path_mapping;
    double revenue = 0.0;
    double cost = 0.0;
    double metric = 0.0;
};

class InvalidSolution : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class AllocationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sum of virtual CPU plus sum of virtual bandwidth. Memory and GPU are
// placement constraints only and earn nothing.
double revenue_of(const Vnr& vnr);

// Sum of virtual CPU plus, per virtual link, bandwidth times hop count of its
// mapped path. Throws InvalidSolution if the mapping does not cover the VNR.
double cost_of(const Vnr& vnr, const EmbeddingSolution& sol);

double metric_of(double revenue, double cost, double x, double y);

// Fills revenue, cost and metric from the mappings.
void score(const Vnr& vnr, EmbeddingSolution& sol, double x, double y);

struct Violation {
    enum class Kind {
        WrongRequest,
        NodeMappingSize,
        UnknownPhysicalNode,
        NotInjective,
        NodeCapacity,
        PathMappingSize,
        BadPathEndpoints,
        NotAdjacent,
        PathNotSimple,
        LinkCapacity,
    };
    Kind kind;
    // Offending virtual/physical ids, as applicable.
    std::optional<std::size_t> virtual_id;
    std::optional<std::size_t> physical_id;
    std::string detail;
};

std::string to_string(Violation::Kind kind);

// Returns the first violation found, or nullopt when the solution fits the
// current residuals.
std::optional<Violation> verify_solution(const PhysicalNetwork& net, const Vnr& vnr,
                                         const EmbeddingSolution& sol, bool injective = false);

// Exact per-request resource deltas held against the substrate.
class AllocationLedger {
public:
    struct Entry {
        std::map<NodeId, ResourceVector> node_deltas;
        std::map<LinkId, Quantity> link_deltas;
    };

    bool contains(RequestId id) const { return entries_.count(id) != 0; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const Entry& entry(RequestId id) const { return entries_.at(id); }
    std::vector<RequestId> request_ids() const;

private:
    friend void allocate(PhysicalNetwork&, const Vnr&, const EmbeddingSolution&,
                         AllocationLedger&, bool);
    friend void release(PhysicalNetwork&, RequestId, AllocationLedger&);

    std::map<RequestId, Entry> entries_;
};

// Verifies, then decrements residuals. On failure nothing is mutated and
// AllocationError is thrown.
void allocate(PhysicalNetwork& net, const Vnr& vnr, const EmbeddingSolution& sol,
              AllocationLedger& ledger, bool injective = false);

// Restores every delta recorded for `id`. Throws AllocationError for an
// unknown id.
void release(PhysicalNetwork& net, RequestId id, AllocationLedger& ledger);

} // namespace devine
