#pragma once

// Deterministic generators shared by the unit and acceptance suites.

#include <algorithm>
#include <string>
#include <vector>

#include "chankit/capability.hpp"
#include "chankit/channel_model.hpp"
#include "chankit/info_core.hpp"
#include "chankit/sim.hpp"
#include "chankit/wire.hpp"

namespace testgen {

using chankit::Distribution;
using chankit::JointDistribution;
using chankit::sim::SplitMix64;
namespace etq = chankit::etiquette;

inline std::vector<double> random_probs(SplitMix64& rng, std::size_t len,
                                        double zero_share = 0.25) {
    std::vector<double> w(len, 0.0);
    double sum = 0.0;
    for (auto& x : w) {
        if (rng.next_unit() >= zero_share) x = rng.next_unit() + 1e-3;
        sum += x;
    }
    if (sum == 0.0) {
        w[rng.next() % len] = 1.0;
        sum = 1.0;
    }
    for (auto& x : w) x /= sum;
    return w;
}

inline Distribution random_distribution(SplitMix64& rng, std::size_t max_len = 16) {
    const std::size_t len = 1 + rng.next() % max_len;
    auto probs = random_probs(rng, len);
    // Occasionally give t headroom beyond the listed entries.
    const std::uint64_t extra = rng.next() % 3;
    return Distribution(std::move(probs), len + extra);
}

inline JointDistribution random_joint(SplitMix64& rng, std::size_t max_dim = 16) {
    const std::size_t rows = 1 + rng.next() % max_dim;
    const std::size_t cols = 1 + rng.next() % max_dim;
    auto flat = random_probs(rng, rows * cols);
    return JointDistribution(std::move(flat), rows, cols);
}

inline std::string random_label(SplitMix64& rng, std::size_t max_len = 8) {
    static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789/._-";
    const std::size_t len = 1 + rng.next() % max_len;
    std::string s;
    for (std::size_t i = 0; i < len; ++i) {
        s.push_back(alphabet[rng.next() % (sizeof(alphabet) - 1)]);
    }
    return s;
}

// ---- capability trees ----

struct TreeGen {
    SplitMix64& rng;
    int mode_counter = 0;

    etq::ModeDescriptor random_mode() {
        etq::ModeDescriptor mode;
        mode.mode_id = "m" + std::to_string(mode_counter++);
        mode.role = (rng.next() & 1) ? etq::Role::Rx : etq::Role::Tx;
        mode.states = 1 + static_cast<std::uint32_t>(rng.next() % 64);
        mode.revision = static_cast<std::uint32_t>(rng.next() % 5);
        const std::size_t tags = rng.next() % 3;
        for (std::size_t i = 0; i < tags; ++i) {
            mode.layer_tags.push_back("layer" + std::to_string(rng.next() % 4));
        }
        return mode;
    }

    etq::CapNode random_node(int depth) {
        etq::CapNode node;
        node.tag = static_cast<std::uint16_t>(1 + rng.next() % 500);
        switch (rng.next() % 3) {
            case 0: node.payload = random_mode(); break;
            case 1:
                node.payload = etq::BugEntry{"m" + std::to_string(rng.next() % 8),
                                             static_cast<std::uint32_t>(rng.next() % 5)};
                break;
            default: break;
        }
        if (depth < 3) {
            const std::size_t kids = rng.next() % 3;
            std::uint16_t tag = 1;
            for (std::size_t i = 0; i < kids; ++i) {
                auto child = random_node(depth + 1);
                child.tag = tag;
                tag = static_cast<std::uint16_t>(tag + 1 + rng.next() % 3);
                node.children.push_back(std::move(child));
            }
        }
        return node;
    }

    etq::CapabilityTree random_tree(std::size_t min_nodes = 1) {
        etq::CapabilityTree tree;
        tree.version = static_cast<std::uint32_t>(rng.next() % 4);
        const std::size_t roots = std::max<std::size_t>(min_nodes, 1 + rng.next() % 3);
        std::uint16_t tag = 1;
        for (std::size_t i = 0; i < roots; ++i) {
            auto node = random_node(0);
            node.tag = tag;
            tag = static_cast<std::uint16_t>(tag + 1 + rng.next() % 3);
            tree.nodes.push_back(std::move(node));
        }
        const std::size_t bugs = rng.next() % 2;
        for (std::size_t i = 0; i < bugs; ++i) {
            tree.bug_list.push_back({"m" + std::to_string(rng.next() % 8),
                                     static_cast<std::uint32_t>(rng.next() % 5)});
        }
        return tree;
    }
};

inline std::vector<etq::CapNode*> all_nodes(etq::CapabilityTree& tree) {
    std::vector<etq::CapNode*> out;
    struct Walk {
        std::vector<etq::CapNode*>& out;
        void operator()(std::vector<etq::CapNode>& nodes) {
            for (auto& node : nodes) {
                out.push_back(&node);
                (*this)(node.children);
            }
        }
    };
    Walk{out}(tree.nodes);
    return out;
}

inline std::uint16_t fresh_sibling_tag(const std::vector<etq::CapNode>& siblings) {
    std::uint16_t tag = 1;
    for (const auto& node : siblings) tag = std::max<std::uint16_t>(tag, node.tag);
    return static_cast<std::uint16_t>(tag + 1);
}

// A strict extension of the tree: adds nodes, bumps revisions, appends bug
// entries; never removes or alters existing structure.
inline etq::CapabilityTree random_extension(SplitMix64& rng, const etq::CapabilityTree& base,
                                            int& mode_counter) {
    etq::CapabilityTree out = base;
    out.version = base.version + 1;
    const std::size_t ops = 1 + rng.next() % 3;
    for (std::size_t i = 0; i < ops; ++i) {
        switch (rng.next() % 3) {
            case 0: {  // add a node with a fresh sibling tag
                etq::CapNode node;
                node.payload = etq::ModeDescriptor{"x" + std::to_string(mode_counter++),
                                                   (rng.next() & 1) ? etq::Role::Rx : etq::Role::Tx,
                                                   1 + static_cast<std::uint32_t>(rng.next() % 64),
                                                   0,
                                                   {}};
                auto nodes = all_nodes(out);
                if (!nodes.empty() && (rng.next() & 1)) {
                    auto* parent = nodes[rng.next() % nodes.size()];
                    node.tag = fresh_sibling_tag(parent->children);
                    parent->children.push_back(std::move(node));
                } else {
                    node.tag = fresh_sibling_tag(out.nodes);
                    out.nodes.push_back(std::move(node));
                }
                break;
            }
            case 1: {  // bump a revision
                auto nodes = all_nodes(out);
                for (std::size_t k = 0; k < nodes.size(); ++k) {
                    auto* node = nodes[(rng.next() + k) % nodes.size()];
                    if (auto* mode = std::get_if<etq::ModeDescriptor>(&node->payload)) {
                        mode->revision += 1;
                        break;
                    }
                }
                break;
            }
            default:  // record a new bug
                out.bug_list.push_back({"b" + std::to_string(rng.next() % 100),
                                        static_cast<std::uint32_t>(rng.next() % 5)});
                break;
        }
    }
    return out;
}

// Removes one randomly chosen node (with its subtree).
inline etq::CapabilityTree random_deletion(SplitMix64& rng, const etq::CapabilityTree& base) {
    etq::CapabilityTree out = base;
    std::vector<std::vector<etq::CapNode>*> holders;
    struct Walk {
        std::vector<std::vector<etq::CapNode>*>& holders;
        void operator()(std::vector<etq::CapNode>& nodes) {
            if (!nodes.empty()) holders.push_back(&nodes);
            for (auto& node : nodes) (*this)(node.children);
        }
    };
    Walk{holders}(out.nodes);
    auto* holder = holders[rng.next() % holders.size()];
    holder->erase(holder->begin() + static_cast<long>(rng.next() % holder->size()));
    return out;
}

// ---- wire messages ----

inline etq::EtiquetteMessage random_message(SplitMix64& rng, TreeGen& gen) {
    switch (rng.next() % 6) {
        case 0: return etq::make_probe();
        case 1: return etq::make_caps(gen.random_tree());
        case 2: return etq::make_propose({random_label(rng), random_label(rng)});
        case 3: return etq::make_accept({random_label(rng), random_label(rng)});
        case 4: return etq::make_confirm({random_label(rng), random_label(rng)});
        default: return etq::make_reject(random_label(rng, 16));
    }
}

// ---- channels ----

inline chankit::Alphabet sized_alphabet(const std::string& id, const std::string& prefix,
                                        std::size_t count) {
    chankit::Alphabet a;
    a.id = id;
    for (std::size_t i = 0; i < count; ++i) {
        a.elements.push_back(prefix + std::to_string(i));
    }
    return a;
}

// t-element tx, r-element rx, first n elements shared.
inline chankit::ConstraintSet make_channel(const std::string& id, std::size_t t, std::size_t r,
                                           std::size_t n) {
    chankit::ConstraintSet cs;
    cs.id = id;
    cs.tx = sized_alphabet(id + "-tx", "e", t);
    cs.rx.id = id + "-rx";
    for (std::size_t i = 0; i < n; ++i) cs.rx.elements.push_back("e" + std::to_string(i));
    for (std::size_t i = n; i < r; ++i) cs.rx.elements.push_back("f" + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i) {
        cs.pairs.emplace_back("e" + std::to_string(i), "e" + std::to_string(i));
    }
    return cs;
}

// ---- Fig. 6 style multi-mode fixtures ----

inline etq::CapabilityTree fig6_tree(etq::Role role) {
    etq::CapabilityTree tree;
    tree.version = 1;
    const struct {
        const char* id;
        std::uint32_t states;
    } modes[] = {{"A/B", 4}, {"C/D", 16}, {"E/F", 16}};
    std::uint16_t tag = 1;
    for (const auto& m : modes) {
        etq::CapNode node;
        node.tag = tag++;
        node.payload = etq::ModeDescriptor{m.id, role, m.states, 1, {}};
        tree.nodes.push_back(std::move(node));
    }
    return tree;
}

inline chankit::sim::Endpoint fig6_endpoint(const std::string& id, etq::Role role) {
    chankit::sim::Endpoint ep;
    ep.id = id;
    ep.caps = fig6_tree(role);
    ep.modes.emplace("A/B", make_channel("A/B", 4, 4, 4));
    ep.modes.emplace("C/D", make_channel("C/D", 16, 16, 16));
    ep.modes.emplace("E/F", make_channel("E/F", 16, 16, 16));
    if (role == etq::Role::Tx) {
        ep.source = Distribution::uniform(16);
    }
    return ep;
}

}  // namespace testgen
