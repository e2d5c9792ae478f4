#pragma once

#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "devine/embedding.hpp"
#include "devine/generator.hpp"
#include "devine/local_embed.hpp"

namespace devine {

class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TransportError : public ProtocolError {
public:
    using ProtocolError::ProtocolError;
};

// Circular list of leaders; members[0] is the primary.
class LeaderRing {
public:
    explicit LeaderRing(std::vector<NodeId> members);

    NodeId primary() const { return members_.front(); }
    std::size_t size() const { return members_.size(); }
    const std::vector<NodeId>& members() const { return members_; }
    bool contains(NodeId n) const;
    NodeId successor(NodeId n) const;

private:
    std::vector<NodeId> members_;
};

// Primary plus l - 1 distinct other nodes drawn uniformly, in draw order.
LeaderRing select_leaders(const PhysicalNetwork& net, NodeId primary, std::uint32_t l, Rng& rng);

inline constexpr double kInfeasibleMetric = -std::numeric_limits<double>::infinity();

// Candidate ordering: higher metric wins, equal metrics go to the lower
// node id. An infeasible candidate never outranks anything, so when every
// leader is infeasible the primary's sentinel survives the round.
struct CandidateKey {
    double metric = kInfeasibleMetric;
    NodeId node = 0;

    bool feasible() const { return metric != kInfeasibleMetric; }
};
bool outranks(const CandidateKey& a, const CandidateKey& b);

struct EmbeddingMsg {
    RequestId request_id = 0;
    NodeId originator = 0;
    double metric = kInfeasibleMetric;
    std::shared_ptr<const LeaderRing> ring;
};

struct EmbeddedMsg {
    RequestId request_id = 0;
    NodeId winner = 0;
    bool feasible = false;
    double metric = kInfeasibleMetric;
    EmbeddingSolution solution;
    std::shared_ptr<const LeaderRing> ring;
};

using Message = std::variant<EmbeddingMsg, EmbeddedMsg>;

struct Envelope {
    NodeId from = 0;
    NodeId to = 0;
    Message message;
};

// Delivery must be FIFO per (sender, receiver) pair.
class Transport {
public:
    virtual ~Transport() = default;
    virtual void send(Envelope envelope) = 0;
    // nullopt when nothing is in flight.
    virtual std::optional<Envelope> receive() = 0;
};

class FifoTransport : public Transport {
public:
    void send(Envelope envelope) override { queue_.push_back(std::move(envelope)); }
    std::optional<Envelope> receive() override;
    std::size_t in_flight() const { return queue_.size(); }

private:
    std::deque<Envelope> queue_;
};

using LocalEmbedder = std::function<LocalEmbedOutcome(NodeId root)>;

// What every leader knows about one request: the ring and a way to run its
// local embedding against the shared snapshot.
struct ElectionContext {
    RequestId request_id = 0;
    std::shared_ptr<const LeaderRing> ring;
    LocalEmbedder embedder;
};

enum class Phase { Idle, Electing, Announcing, Done };
std::string to_string(Phase phase);

class LeaderState {
public:
    explicit LeaderState(NodeId self) : self_(self) {}

    NodeId self() const { return self_; }
    void join(std::shared_ptr<const ElectionContext> context);
    bool knows(RequestId id) const { return entries_.count(id) != 0; }

    Phase phase(RequestId id) const;
    void set_phase(RequestId id, Phase phase);
    const ElectionContext& context(RequestId id) const;

    // Runs the local embedding on first use, then serves the cached result.
    const LocalEmbedOutcome& local_outcome(RequestId id);
    CandidateKey own_key(RequestId id);
    std::uint32_t embed_calls(RequestId id) const;

    void record_decision(const EmbeddedMsg& msg);
    const std::optional<EmbeddedMsg>& decision(RequestId id) const;

private:
    struct Entry {
        std::shared_ptr<const ElectionContext> context;
        Phase phase = Phase::Idle;
        std::optional<LocalEmbedOutcome> outcome;
        std::uint32_t embed_calls = 0;
        std::optional<EmbeddedMsg> decision;
    };
    Entry& entry(RequestId id);
    const Entry& entry(RequestId id) const;

    NodeId self_;
    std::map<RequestId, Entry> entries_;
};

struct StepResult {
    std::vector<Envelope> outgoing;
    // Set when this leader received its own EMBEDDED message.
    std::optional<EmbeddedMsg> terminated;
    std::string note;
};

// Primary's opening move: local embed and the first EMBEDDING message.
StepResult initiate(LeaderState& state, RequestId id);
StepResult handle_embedding(LeaderState& state, const EmbeddingMsg& msg);
StepResult handle_embedded(LeaderState& state, const EmbeddedMsg& msg);

enum class MessageKind { Embedding, Embedded };

struct TraceEvent {
    std::uint64_t seq = 0;
    RequestId request_id = 0;
    NodeId sender = 0;
    NodeId receiver = 0;
    MessageKind kind = MessageKind::Embedding;
    // Originator for EMBEDDING, winner for EMBEDDED.
    NodeId subject = 0;
    double metric = kInfeasibleMetric;
    std::string note;
};

struct ElectionTrace {
    std::vector<TraceEvent> events;
    std::uint32_t embedding_count = 0;
    std::uint32_t embedded_count = 0;

    std::uint32_t total() const { return embedding_count + embedded_count; }
};

struct RingElectionResult {
    NodeId winner = 0;
    EmbeddedMsg decision;
    ElectionTrace trace;
    // Local embed invocations per ring member, in ring order.
    std::vector<std::uint32_t> embed_calls;
};

// Runs the ring protocol to termination over `transport`. Throws
// TransportError if the transport drains before the winner hears back.
RingElectionResult run_ring_election(std::shared_ptr<const ElectionContext> context,
                                     Transport& transport);

struct DevineParams {
    std::uint32_t leaders = 5;
    LocalEmbedParams embed;

    void validate() const;
};

struct ElectionResult {
    bool accepted = false;
    std::optional<EmbeddingSolution> solution;
    NodeId winner = 0;
    LeaderRing ring{{0}};
    ElectionTrace trace;
    std::uint32_t embed_calls = 0;
};

// Full DeViNE round for one request: pick leaders, elect against a snapshot
// of `net`, then re-verify and allocate the winner's solution on the live
// network. Rejected requests leave `net` and `ledger` untouched.
ElectionResult run_election(PhysicalNetwork& net, AllocationLedger& ledger, const Vnr& vnr,
                            NodeId primary, const DevineParams& params, Transport& transport,
                            Rng& rng);

std::string to_string(MessageKind kind);

} // namespace devine
