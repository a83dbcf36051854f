#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "chankit/errors.hpp"

namespace chankit::etiquette {

enum class Role : std::uint8_t { Tx = 0, Rx = 1 };

/// One negotiable transmitter or receiver set.
struct ModeDescriptor {
    std::string mode_id;
    Role role = Role::Tx;
    std::uint32_t states = 1;  // count of communications states n for this mode
    std::uint32_t revision = 0;
    std::vector<std::string> layer_tags;

    bool operator==(const ModeDescriptor&) const = default;
};

/// A (mode, revision) pair known to be defective.
struct BugEntry {
    std::string mode_id;
    std::uint32_t revision = 0;

    bool operator==(const BugEntry&) const = default;
};

/// Tag-addressed tree node. The sequence of tags from the root addresses each
/// node, so sibling tags must be unique.
struct CapNode {
    std::uint16_t tag = 0;
    std::variant<std::monostate, ModeDescriptor, BugEntry> payload;
    std::vector<CapNode> children;

    bool operator==(const CapNode&) const = default;
};

/// An endpoint's negotiable capability description. Version k+1 of the same
/// endpoint's tree must contain every tag path (and every payload) of
/// version k; check_upgrade enforces that at construction time.
struct CapabilityTree {
    std::uint32_t version = 0;
    std::vector<CapNode> nodes;
    std::vector<BugEntry> bug_list;

    bool operator==(const CapabilityTree&) const = default;
};

/// One compatible (local transmitter, remote receiver) pairing; s_bits is the
/// log2 of the state count the pair can offer.
struct SelectionCandidate {
    std::string tx_mode_id;
    std::string rx_mode_id;
    double s_bits = 0.0;

    bool operator==(const SelectionCandidate&) const = default;
};

/// One message per violated invariant; empty when the tree is valid.
std::vector<std::string> validate_capability_tree(const CapabilityTree& tree);

/// All mode descriptors in the tree, preorder.
std::vector<ModeDescriptor> collect_modes(const CapabilityTree& tree);

/// The bug_list field plus every bug entry carried as a node payload.
std::vector<BugEntry> effective_bug_list(const CapabilityTree& tree);

/// True iff every tag path of prev exists in next and every payload present
/// in prev is present in next (mode payloads may carry a higher revision).
bool is_superset(const CapabilityTree& next, const CapabilityTree& prev);

/// Enforces the superset rule plus a strictly increasing version number;
/// throws validation_error naming the first dropped tag path.
void check_upgrade(const CapabilityTree& prev, const CapabilityTree& next);

/// Compatible (local tx mode, remote rx mode) pairs with equal mode_id and no
/// bug-list hit on either side, ranked by s_bits descending, ties broken by
/// ascending mode_id. Empty is a legal result.
std::vector<SelectionCandidate> rank_selections(const CapabilityTree& local,
                                                const CapabilityTree& remote);

}  // namespace chankit::etiquette
