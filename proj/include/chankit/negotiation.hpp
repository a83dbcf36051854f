#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chankit/wire.hpp"

namespace chankit::etiquette {

enum class Phase { Idle, Identifying, Negotiating, Selecting, Established, Failed };

const char* phase_name(Phase p);
bool is_terminal(Phase p);

struct StartCommand {};
struct TimeoutEvent {};
struct MalformedMessage {
    std::string reason;
};

using Event = std::variant<StartCommand, TimeoutEvent, MalformedMessage, EtiquetteMessage>;

enum class SessionRole { Undecided, Initiator, Responder };

/// Full state of one endpoint's negotiation session. Values are cheap to
/// copy; step() is a pure transition function over them.
struct NegotiationState {
    std::string local_id;
    std::string remote_id;
    Phase phase = Phase::Idle;
    CapabilityTree local_caps;
    std::optional<CapabilityTree> remote_caps;
    std::optional<Selection> selected;  // set iff phase == Established
    std::optional<std::string> failure_reason;

    SessionRole role = SessionRole::Undecided;
    // Ranked candidates: the initiator proposes down this list; the responder
    // uses it to check proposals against its own view.
    std::vector<SelectionCandidate> candidates;
    std::size_t next_candidate = 0;
    std::optional<Selection> pending;  // responder: accepted, awaiting CONFIRM

    // Reasons used to reject the first k otherwise-acceptable proposals
    // (scripted-rejection hook for tests and harness policies).
    std::vector<std::string> reject_script;
    std::size_t rejects_used = 0;

    // Restricts ranking to modes carrying this layer tag; empty = all modes.
    std::string layer_tag;
};

/// Builds an Idle session. Throws validation_error when the capability tree
/// is structurally invalid.
NegotiationState make_session(std::string local_id, std::string remote_id, CapabilityTree caps,
                              std::vector<std::string> reject_script = {},
                              std::string layer_tag = {});

struct StepResult {
    NegotiationState state;
    std::vector<EtiquetteMessage> outgoing;
};

/// Deterministic total transition function: defined for every (phase, event)
/// pair. All failures land in Phase::Failed with a reason; terminal phases
/// absorb every event.
StepResult step(NegotiationState state, const Event& event);

}  // namespace chankit::etiquette
