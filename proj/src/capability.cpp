#include "chankit/capability.hpp"

#include <algorithm>
#include <optional>
#include <unordered_set>

#include "chankit/info_core.hpp"

namespace chankit::etiquette {

namespace {

std::string path_string(const std::vector<std::uint16_t>& path) {
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(path[i]);
    }
    return s;
}

void validate_nodes(const std::vector<CapNode>& nodes, std::vector<std::uint16_t>& path,
                    std::unordered_set<std::string>& mode_ids, std::vector<std::string>& out) {
    std::unordered_set<std::uint16_t> sibling_tags;
    for (const auto& node : nodes) {
        path.push_back(node.tag);
        if (!sibling_tags.insert(node.tag).second) {
            out.push_back("duplicate sibling tag at path " + path_string(path) +
                          "; tag paths must address nodes uniquely");
        }
        if (const auto* mode = std::get_if<ModeDescriptor>(&node.payload)) {
            if (mode->states == 0) {
                out.push_back("mode '" + mode->mode_id + "' has states=0; must be >= 1");
            }
            if (!mode_ids.insert(mode->mode_id).second) {
                out.push_back("mode id '" + mode->mode_id + "' appears more than once");
            }
        }
        validate_nodes(node.children, path, mode_ids, out);
        path.pop_back();
    }
}

void collect_modes_rec(const std::vector<CapNode>& nodes, std::vector<ModeDescriptor>& out) {
    for (const auto& node : nodes) {
        if (const auto* mode = std::get_if<ModeDescriptor>(&node.payload)) {
            out.push_back(*mode);
        }
        collect_modes_rec(node.children, out);
    }
}

void collect_bugs_rec(const std::vector<CapNode>& nodes, std::vector<BugEntry>& out) {
    for (const auto& node : nodes) {
        if (const auto* bug = std::get_if<BugEntry>(&node.payload)) {
            out.push_back(*bug);
        }
        collect_bugs_rec(node.children, out);
    }
}

bool payload_covered(const CapNode& next, const CapNode& prev) {
    if (const auto* mode = std::get_if<ModeDescriptor>(&prev.payload)) {
        const auto* m2 = std::get_if<ModeDescriptor>(&next.payload);
        return m2 && m2->mode_id == mode->mode_id && m2->role == mode->role &&
               m2->states == mode->states && m2->layer_tags == mode->layer_tags &&
               m2->revision >= mode->revision;
    }
    if (const auto* bug = std::get_if<BugEntry>(&prev.payload)) {
        const auto* b2 = std::get_if<BugEntry>(&next.payload);
        return b2 && *b2 == *bug;
    }
    return true;  // prev had no payload; next may gain one
}

const CapNode* find_child(const std::vector<CapNode>& nodes, std::uint16_t tag) {
    for (const auto& node : nodes) {
        if (node.tag == tag) return &node;
    }
    return nullptr;
}

// Returns the first prev tag path missing from (or not covered by) next.
std::optional<std::string> first_gap(const std::vector<CapNode>& next,
                                     const std::vector<CapNode>& prev,
                                     std::vector<std::uint16_t>& path) {
    for (const auto& old_node : prev) {
        path.push_back(old_node.tag);
        const CapNode* match = find_child(next, old_node.tag);
        if (!match || !payload_covered(*match, old_node)) {
            auto p = path_string(path);
            path.pop_back();
            return p;
        }
        if (auto gap = first_gap(match->children, old_node.children, path)) {
            path.pop_back();
            return gap;
        }
        path.pop_back();
    }
    return std::nullopt;
}

bool bug_listed(const std::vector<BugEntry>& bugs, const std::string& mode_id,
                std::uint32_t revision) {
    return std::any_of(bugs.begin(), bugs.end(), [&](const BugEntry& b) {
        return b.mode_id == mode_id && b.revision == revision;
    });
}

}  // namespace

std::vector<std::string> validate_capability_tree(const CapabilityTree& tree) {
    std::vector<std::string> out;
    std::vector<std::uint16_t> path;
    std::unordered_set<std::string> mode_ids;
    validate_nodes(tree.nodes, path, mode_ids, out);
    return out;
}

std::vector<ModeDescriptor> collect_modes(const CapabilityTree& tree) {
    std::vector<ModeDescriptor> out;
    collect_modes_rec(tree.nodes, out);
    return out;
}

std::vector<BugEntry> effective_bug_list(const CapabilityTree& tree) {
    std::vector<BugEntry> out = tree.bug_list;
    collect_bugs_rec(tree.nodes, out);
    return out;
}

bool is_superset(const CapabilityTree& next, const CapabilityTree& prev) {
    std::vector<std::uint16_t> path;
    if (first_gap(next.nodes, prev.nodes, path)) return false;
    const auto next_bugs = effective_bug_list(next);
    for (const auto& bug : effective_bug_list(prev)) {
        if (!bug_listed(next_bugs, bug.mode_id, bug.revision)) return false;
    }
    return true;
}

void check_upgrade(const CapabilityTree& prev, const CapabilityTree& next) {
    if (next.version <= prev.version) {
        throw validation_error("capability tree version must increase (have " +
                               std::to_string(prev.version) + ", upgrade offers " +
                               std::to_string(next.version) + ")");
    }
    std::vector<std::uint16_t> path;
    if (auto gap = first_gap(next.nodes, prev.nodes, path)) {
        throw validation_error("upgrade to version " + std::to_string(next.version) +
                               " violates the superset rule: tag path " + *gap +
                               " of version " + std::to_string(prev.version) +
                               " is dropped or altered");
    }
    const auto next_bugs = effective_bug_list(next);
    for (const auto& bug : effective_bug_list(prev)) {
        if (!bug_listed(next_bugs, bug.mode_id, bug.revision)) {
            throw validation_error("upgrade to version " + std::to_string(next.version) +
                                   " drops bug entry (" + bug.mode_id + ", rev " +
                                   std::to_string(bug.revision) + ")");
        }
    }
}

std::vector<SelectionCandidate> rank_selections(const CapabilityTree& local,
                                                const CapabilityTree& remote) {
    const auto local_modes = collect_modes(local);
    const auto remote_modes = collect_modes(remote);
    auto local_bugs = effective_bug_list(local);
    {
        auto remote_bugs = effective_bug_list(remote);
        local_bugs.insert(local_bugs.end(), remote_bugs.begin(), remote_bugs.end());
    }
    const auto& bugs = local_bugs;

    std::vector<SelectionCandidate> out;
    for (const auto& tx : local_modes) {
        if (tx.role != Role::Tx) continue;
        for (const auto& rx : remote_modes) {
            if (rx.role != Role::Rx || rx.mode_id != tx.mode_id) continue;
            if (bug_listed(bugs, tx.mode_id, tx.revision) ||
                bug_listed(bugs, rx.mode_id, rx.revision)) {
                continue;
            }
            const std::uint32_t states = std::min(tx.states, rx.states);
            out.push_back({tx.mode_id, rx.mode_id, entropy_bound(states)});
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const SelectionCandidate& a, const SelectionCandidate& b) {
                         if (a.s_bits != b.s_bits) return a.s_bits > b.s_bits;
                         return a.tx_mode_id < b.tx_mode_id;
                     });
    return out;
}

}  // namespace chankit::etiquette
