#include "devine/protocol.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace devine {

LeaderRing::LeaderRing(std::vector<NodeId> members) : members_(std::move(members)) {
    if (members_.empty()) {
        throw ProtocolError("leader ring must not be empty");
    }
    std::set<NodeId> distinct(members_.begin(), members_.end());
    if (distinct.size() != members_.size()) {
        throw ProtocolError("leader ring members must be distinct");
    }
}

bool LeaderRing::contains(NodeId n) const {
    return std::find(members_.begin(), members_.end(), n) != members_.end();
}

NodeId LeaderRing::successor(NodeId n) const {
    auto it = std::find(members_.begin(), members_.end(), n);
    if (it == members_.end()) {
        throw ProtocolError("node " + std::to_string(n) + " is not on the ring");
    }
    ++it;
    return it == members_.end() ? members_.front() : *it;
}

LeaderRing select_leaders(const PhysicalNetwork& net, NodeId primary, std::uint32_t l, Rng& rng) {
    if (primary >= net.node_count()) {
        throw ProtocolError("primary is not a physical node");
    }
    if (l < 1 || l > net.node_count()) {
        throw ProtocolError("leader count must be in [1, " + std::to_string(net.node_count()) +
                            "]");
    }
    std::vector<NodeId> others;
    others.reserve(net.node_count() - 1);
    for (NodeId n = 0; n < net.node_count(); ++n) {
        if (n != primary) {
            others.push_back(n);
        }
    }
    // Partial Fisher-Yates: the first l - 1 slots are a uniform sample in
    // draw order.
    std::vector<NodeId> members{primary};
    for (std::uint32_t i = 0; i + 1 < l; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, others.size() - 1);
        std::swap(others[i], others[pick(rng)]);
        members.push_back(others[i]);
    }
    return LeaderRing(std::move(members));
}

bool outranks(const CandidateKey& a, const CandidateKey& b) {
    if (!a.feasible()) {
        return false;
    }
    if (!b.feasible() || a.metric > b.metric) {
        return true;
    }
    return a.metric == b.metric && a.node < b.node;
}

std::optional<Envelope> FifoTransport::receive() {
    if (queue_.empty()) {
        return std::nullopt;
    }
    Envelope e = std::move(queue_.front());
    queue_.pop_front();
    return e;
}

std::string to_string(Phase phase) {
    switch (phase) {
    case Phase::Idle: return "idle";
    case Phase::Electing: return "electing";
    case Phase::Announcing: return "announcing";
    case Phase::Done: return "done";
    }
    return "unknown";
}

std::string to_string(MessageKind kind) {
    return kind == MessageKind::Embedding ? "EMBEDDING" : "EMBEDDED";
}

void LeaderState::join(std::shared_ptr<const ElectionContext> context) {
    if (!context || !context->ring || !context->ring->contains(self_)) {
        throw ProtocolError("leader " + std::to_string(self_) + " is not on the request's ring");
    }
    const RequestId id = context->request_id;
    entries_[id].context = std::move(context);
}

LeaderState::Entry& LeaderState::entry(RequestId id) {
    auto it = entries_.find(id);
    if (it == entries_.end()) {
        throw ProtocolError("leader " + std::to_string(self_) + " has no request " +
                            std::to_string(id));
    }
    return it->second;
}

const LeaderState::Entry& LeaderState::entry(RequestId id) const {
    return const_cast<LeaderState*>(this)->entry(id);
}

Phase LeaderState::phase(RequestId id) const { return entry(id).phase; }
void LeaderState::set_phase(RequestId id, Phase phase) { entry(id).phase = phase; }
const ElectionContext& LeaderState::context(RequestId id) const { return *entry(id).context; }

const LocalEmbedOutcome& LeaderState::local_outcome(RequestId id) {
    Entry& e = entry(id);
    if (!e.outcome) {
        e.outcome = e.context->embedder(self_);
        ++e.embed_calls;
    }
    return *e.outcome;
}

CandidateKey LeaderState::own_key(RequestId id) {
    const auto& out = local_outcome(id);
    return {out.feasible ? out.solution.metric : kInfeasibleMetric, self_};
}

std::uint32_t LeaderState::embed_calls(RequestId id) const { return entry(id).embed_calls; }

void LeaderState::record_decision(const EmbeddedMsg& msg) { entry(msg.request_id).decision = msg; }

const std::optional<EmbeddedMsg>& LeaderState::decision(RequestId id) const {
    return entry(id).decision;
}

namespace {

Envelope to_successor(const LeaderState& state, const std::shared_ptr<const LeaderRing>& ring,
                      Message msg) {
    return Envelope{state.self(), ring->successor(state.self()), std::move(msg)};
}

EmbeddedMsg announcement(LeaderState& state, RequestId id) {
    const auto& out = state.local_outcome(id);
    EmbeddedMsg m;
    m.request_id = id;
    m.winner = state.self();
    m.feasible = out.feasible;
    m.metric = out.feasible ? out.solution.metric : kInfeasibleMetric;
    m.solution = out.solution;
    m.ring = state.context(id).ring;
    return m;
}

} // namespace

StepResult initiate(LeaderState& state, RequestId id) {
    StepResult r;
    const auto& ring = state.context(id).ring;
    if (ring->primary() != state.self()) {
        throw ProtocolError("only the primary initiates an election");
    }
    const CandidateKey key = state.own_key(id);
    state.set_phase(id, Phase::Electing);
    r.outgoing.push_back(to_successor(state, ring, EmbeddingMsg{id, key.node, key.metric, ring}));
    return r;
}

StepResult handle_embedding(LeaderState& state, const EmbeddingMsg& msg) {
    StepResult r;
    if (!state.knows(msg.request_id)) {
        r.note = "dropped EMBEDDING for unknown request " + std::to_string(msg.request_id);
        return r;
    }
    const auto& ring = state.context(msg.request_id).ring;
    if (msg.originator == state.self()) {
        // Every leader has seen this candidate and none outranked it.
        state.set_phase(msg.request_id, Phase::Announcing);
        EmbeddedMsg m = announcement(state, msg.request_id);
        state.record_decision(m);
        r.outgoing.push_back(to_successor(state, ring, std::move(m)));
        return r;
    }
    const CandidateKey own = state.own_key(msg.request_id);
    if (state.phase(msg.request_id) == Phase::Idle) {
        state.set_phase(msg.request_id, Phase::Electing);
    }
    const CandidateKey carried{msg.metric, msg.originator};
    if (outranks(own, carried)) {
        r.outgoing.push_back(
            to_successor(state, ring, EmbeddingMsg{msg.request_id, own.node, own.metric, ring}));
        r.note = "takeover";
    } else {
        r.outgoing.push_back(to_successor(state, ring, msg));
    }
    return r;
}

StepResult handle_embedded(LeaderState& state, const EmbeddedMsg& msg) {
    StepResult r;
    if (!state.knows(msg.request_id)) {
        r.note = "dropped EMBEDDED for unknown request " + std::to_string(msg.request_id);
        return r;
    }
    state.set_phase(msg.request_id, Phase::Done);
    if (msg.winner == state.self()) {
        r.terminated = msg;
        return r;
    }
    state.record_decision(msg);
    r.outgoing.push_back(to_successor(state, state.context(msg.request_id).ring, msg));
    return r;
}

RingElectionResult run_ring_election(std::shared_ptr<const ElectionContext> context,
                                     Transport& transport) {
    const auto& ring = *context->ring;
    const RequestId id = context->request_id;
    std::map<NodeId, LeaderState> states;
    for (NodeId n : ring.members()) {
        states.emplace(n, LeaderState(n)).first->second.join(context);
    }

    RingElectionResult result;
    auto collect_calls = [&] {
        for (NodeId n : ring.members()) {
            result.embed_calls.push_back(states.at(n).embed_calls(id));
        }
    };

    LeaderState& primary = states.at(ring.primary());
    if (ring.size() == 1) {
        // Self-addressed messages never hit the transport.
        primary.own_key(id);
        result.winner = primary.self();
        result.decision = announcement(primary, id);
        primary.record_decision(result.decision);
        primary.set_phase(id, Phase::Done);
        collect_calls();
        return result;
    }

    std::uint64_t seq = 0;
    for (auto& e : initiate(primary, id).outgoing) {
        transport.send(std::move(e));
    }
    // Generous ceiling; the protocol itself needs at most 3L - 1.
    const std::uint64_t limit = 8 * static_cast<std::uint64_t>(ring.size()) + 8;
    while (true) {
        auto env = transport.receive();
        if (!env) {
            throw TransportError("transport drained before request " + std::to_string(id) +
                                 " terminated");
        }
        if (++seq > limit) {
            throw ProtocolError("election for request " + std::to_string(id) +
                                " exceeded its message ceiling");
        }
        auto it = states.find(env->to);
        if (it == states.end()) {
            throw TransportError("message addressed to non-leader " + std::to_string(env->to));
        }
        TraceEvent ev;
        ev.seq = seq;
        ev.request_id = id;
        ev.sender = env->from;
        ev.receiver = env->to;
        StepResult step;
        if (const auto* m = std::get_if<EmbeddingMsg>(&env->message)) {
            ev.kind = MessageKind::Embedding;
            ev.subject = m->originator;
            ev.metric = m->metric;
            ++result.trace.embedding_count;
            step = handle_embedding(it->second, *m);
        } else {
            const auto& d = std::get<EmbeddedMsg>(env->message);
            ev.kind = MessageKind::Embedded;
            ev.subject = d.winner;
            ev.metric = d.metric;
            ++result.trace.embedded_count;
            step = handle_embedded(it->second, d);
        }
        ev.note = step.note;
        result.trace.events.push_back(std::move(ev));
        for (auto& out : step.outgoing) {
            transport.send(std::move(out));
        }
        if (step.terminated) {
            result.winner = step.terminated->winner;
            result.decision = std::move(*step.terminated);
            break;
        }
    }
    collect_calls();
    return result;
}

void DevineParams::validate() const {
    if (leaders < 1) {
        throw ConfigError("leaders must be at least 1");
    }
    embed.validate();
}

ElectionResult run_election(PhysicalNetwork& net, AllocationLedger& ledger, const Vnr& vnr,
                            NodeId primary, const DevineParams& params, Transport& transport,
                            Rng& rng) {
    params.validate();
    auto ring = std::make_shared<const LeaderRing>(
        select_leaders(net, primary, params.leaders, rng));

    // Every leader embeds against the same view, taken now.
    auto snapshot = std::make_shared<const PhysicalNetwork>(net);
    auto context = std::make_shared<ElectionContext>();
    context->request_id = vnr.request_id;
    context->ring = ring;
    context->embedder = [snapshot, &vnr, embed_params = params.embed](NodeId root) {
        return embed(root, *snapshot, vnr, embed_params);
    };

    auto ring_result = run_ring_election(context, transport);

    ElectionResult result;
    result.winner = ring_result.winner;
    result.ring = *ring;
    result.trace = std::move(ring_result.trace);
    result.embed_calls = std::accumulate(ring_result.embed_calls.begin(),
                                         ring_result.embed_calls.end(), 0u);
    const auto& decision = ring_result.decision;
    if (decision.feasible &&
        !verify_solution(net, vnr, decision.solution, params.embed.injective)) {
        allocate(net, vnr, decision.solution, ledger, params.embed.injective);
        result.accepted = true;
        result.solution = decision.solution;
    }
    return result;
}

} // namespace devine
