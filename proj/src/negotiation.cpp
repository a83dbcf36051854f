#include "chankit/negotiation.hpp"

#include <algorithm>

namespace chankit::etiquette {

namespace {

NegotiationState failed(NegotiationState s, std::string reason) {
    s.phase = Phase::Failed;
    s.failure_reason = std::move(reason);
    s.selected.reset();
    return s;
}

CapabilityTree filter_by_layer(const CapabilityTree& tree, const std::string& layer_tag) {
    if (layer_tag.empty()) return tree;
    CapabilityTree out = tree;
    // Strip mode payloads that do not carry the tag; structure is preserved.
    struct Walker {
        const std::string& tag;
        void operator()(std::vector<CapNode>& nodes) const {
            for (auto& node : nodes) {
                if (const auto* mode = std::get_if<ModeDescriptor>(&node.payload)) {
                    const auto& tags = mode->layer_tags;
                    if (std::find(tags.begin(), tags.end(), tag) == tags.end()) {
                        node.payload = std::monostate{};
                    }
                }
                (*this)(node.children);
            }
        }
    };
    Walker{layer_tag}(out.nodes);
    return out;
}

std::vector<SelectionCandidate> ranked_view(const NegotiationState& s, bool local_transmits) {
    const CapabilityTree local = filter_by_layer(s.local_caps, s.layer_tag);
    const CapabilityTree remote = filter_by_layer(*s.remote_caps, s.layer_tag);
    return local_transmits ? rank_selections(local, remote) : rank_selections(remote, local);
}

bool in_candidates(const std::vector<SelectionCandidate>& candidates, const Selection& sel) {
    return std::any_of(candidates.begin(), candidates.end(), [&](const SelectionCandidate& c) {
        return c.tx_mode_id == sel.tx_mode_id && c.rx_mode_id == sel.rx_mode_id;
    });
}

Selection to_selection(const SelectionCandidate& c) { return {c.tx_mode_id, c.rx_mode_id}; }

NegotiationState unexpected(NegotiationState s, MessageKind kind) {
    const std::string reason = std::string("unexpected ") + kind_name(kind) + " in phase " +
                               phase_name(s.phase);
    return failed(std::move(s), reason);
}

// Initiator path after the CAPS exchange completes: rank, propose the top
// candidate, move to Selecting. The Negotiating phase is transient here,
// matching the eventless initiator transition.
StepResult propose_first(NegotiationState s, std::vector<EtiquetteMessage> out) {
    s.phase = Phase::Negotiating;
    s.candidates = ranked_view(s, /*local_transmits=*/true);
    s.next_candidate = 0;
    if (s.candidates.empty()) {
        return {failed(std::move(s), "no compatible mode"), std::move(out)};
    }
    const Selection sel = to_selection(s.candidates[s.next_candidate++]);
    out.push_back(make_propose(sel));
    s.phase = Phase::Selecting;
    return {std::move(s), std::move(out)};
}

StepResult on_message(NegotiationState s, const EtiquetteMessage& msg) {
    std::vector<EtiquetteMessage> out;
    switch (s.phase) {
        case Phase::Idle:
            if (msg.kind == MessageKind::Probe) {
                s.role = SessionRole::Responder;
                out.push_back(make_caps(s.local_caps));
                s.phase = Phase::Identifying;
                return {std::move(s), std::move(out)};
            }
            return {unexpected(std::move(s), msg.kind), {}};

        case Phase::Identifying:
            if (msg.kind == MessageKind::Probe) {
                // Glare: both sides started. Lower endpoint id keeps the
                // initiator role; the other answers as responder.
                if (s.role == SessionRole::Initiator) {
                    if (s.local_id == s.remote_id) {
                        return {failed(std::move(s), "duplicate endpoint ids"), {}};
                    }
                    if (s.local_id < s.remote_id) {
                        return {std::move(s), {}};  // stay initiator, await CAPS
                    }
                    s.role = SessionRole::Responder;
                    out.push_back(make_caps(s.local_caps));
                    return {std::move(s), std::move(out)};
                }
                return {unexpected(std::move(s), msg.kind), {}};
            }
            if (msg.kind == MessageKind::Caps) {
                const auto* tree_ptr = std::get_if<CapabilityTree>(&msg.payload);
                if (!tree_ptr) {
                    return {failed(std::move(s), "CAPS payload missing"), {}};
                }
                const auto& tree = *tree_ptr;
                if (auto violations = validate_capability_tree(tree); !violations.empty()) {
                    return {failed(std::move(s),
                                   "invalid remote capabilities: " + violations.front()),
                            {}};
                }
                s.remote_caps = tree;
                if (s.role == SessionRole::Initiator) {
                    out.push_back(make_caps(s.local_caps));
                    return propose_first(std::move(s), std::move(out));
                }
                // Responder: CAPS exchange complete, await the proposal.
                s.candidates = ranked_view(s, /*local_transmits=*/false);
                s.phase = Phase::Negotiating;
                return {std::move(s), {}};
            }
            return {unexpected(std::move(s), msg.kind), {}};

        case Phase::Negotiating:  // responder awaiting PROPOSE
            if (msg.kind == MessageKind::Propose) {
                const auto* sel_ptr = std::get_if<Selection>(&msg.payload);
                if (!sel_ptr) {
                    return {failed(std::move(s), "PROPOSE payload missing"), {}};
                }
                const auto& sel = *sel_ptr;
                if (!in_candidates(s.candidates, sel)) {
                    out.push_back(make_reject("incompatible proposal"));
                    return {std::move(s), std::move(out)};
                }
                if (s.rejects_used < s.reject_script.size()) {
                    out.push_back(make_reject(s.reject_script[s.rejects_used++]));
                    return {std::move(s), std::move(out)};
                }
                s.pending = sel;
                out.push_back(make_accept(sel));
                s.phase = Phase::Selecting;
                return {std::move(s), std::move(out)};
            }
            return {unexpected(std::move(s), msg.kind), {}};

        case Phase::Selecting:
            if (s.role == SessionRole::Initiator) {
                if (msg.kind == MessageKind::Accept) {
                    const auto* sel_ptr = std::get_if<Selection>(&msg.payload);
                    if (!sel_ptr) {
                        return {failed(std::move(s), "ACCEPT payload missing"), {}};
                    }
                    const auto& sel = *sel_ptr;
                    const Selection proposed = to_selection(s.candidates[s.next_candidate - 1]);
                    if (!(sel == proposed)) {
                        return {failed(std::move(s), "ACCEPT does not match the proposal"), {}};
                    }
                    out.push_back(make_confirm(sel));
                    s.selected = sel;
                    s.phase = Phase::Established;
                    return {std::move(s), std::move(out)};
                }
                if (msg.kind == MessageKind::Reject) {
                    if (s.next_candidate < s.candidates.size()) {
                        out.push_back(make_propose(to_selection(s.candidates[s.next_candidate++])));
                        return {std::move(s), std::move(out)};
                    }
                    return {failed(std::move(s), "candidates exhausted"), {}};
                }
                return {unexpected(std::move(s), msg.kind), {}};
            }
            // Responder awaiting CONFIRM of the accepted selection.
            if (msg.kind == MessageKind::Confirm) {
                const auto* sel_ptr = std::get_if<Selection>(&msg.payload);
                if (!sel_ptr) {
                    return {failed(std::move(s), "CONFIRM payload missing"), {}};
                }
                const auto& sel = *sel_ptr;
                if (!s.pending || !(sel == *s.pending)) {
                    return {failed(std::move(s), "CONFIRM does not match the accepted selection"),
                            {}};
                }
                s.selected = sel;
                s.phase = Phase::Established;
                return {std::move(s), {}};
            }
            return {unexpected(std::move(s), msg.kind), {}};

        case Phase::Established:
        case Phase::Failed:
            break;  // unreachable; terminal phases handled by step()
    }
    return {std::move(s), {}};
}

}  // namespace

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Idle: return "Idle";
        case Phase::Identifying: return "Identifying";
        case Phase::Negotiating: return "Negotiating";
        case Phase::Selecting: return "Selecting";
        case Phase::Established: return "Established";
        case Phase::Failed: return "Failed";
    }
    return "?";
}

bool is_terminal(Phase p) { return p == Phase::Established || p == Phase::Failed; }

NegotiationState make_session(std::string local_id, std::string remote_id, CapabilityTree caps,
                              std::vector<std::string> reject_script, std::string layer_tag) {
    if (auto violations = validate_capability_tree(caps); !violations.empty()) {
        throw validation_error("capability tree of '" + local_id +
                               "' is invalid: " + violations.front());
    }
    NegotiationState s;
    s.local_id = std::move(local_id);
    s.remote_id = std::move(remote_id);
    s.local_caps = std::move(caps);
    s.reject_script = std::move(reject_script);
    s.layer_tag = std::move(layer_tag);
    return s;
}

StepResult step(NegotiationState state, const Event& event) {
    if (is_terminal(state.phase)) {
        return {std::move(state), {}};  // terminal phases absorb everything
    }
    if (std::holds_alternative<TimeoutEvent>(event)) {
        return {failed(std::move(state), "timeout"), {}};
    }
    if (const auto* malformed = std::get_if<MalformedMessage>(&event)) {
        return {failed(std::move(state), "malformed message: " + malformed->reason), {}};
    }
    if (std::holds_alternative<StartCommand>(event)) {
        if (state.phase != Phase::Idle) {
            return {failed(std::move(state), "start-command outside Idle"), {}};
        }
        state.role = SessionRole::Initiator;
        state.phase = Phase::Identifying;
        return {std::move(state), {make_probe()}};
    }
    return on_message(std::move(state), std::get<EtiquetteMessage>(event));
}

}  // namespace chankit::etiquette
