#pragma once

#include <filesystem>
#include <string>

#include "chankit/sim.hpp"
#include "chankit/variation.hpp"

namespace chankit::io {

/// Reads a whole file; throws io_error when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes a whole file; throws io_error on failure.
void write_file(const std::filesystem::path& path, const std::string& content);

/// Distribution file: either a bare JSON array of probabilities or
/// {"probs": [...], "size": t}.
Distribution load_distribution(const std::string& text);

struct ChannelSpec {
    ConstraintSet cs;
    std::optional<Distribution> source;
    std::optional<JointDistribution> noise;
};

/// Channel spec: {tx, rx, pairs?, source?, noise?, ignored?, fault?, id?}.
/// Without explicit pairs the constraint set is the label-equality common
/// set. Analog/tolerance parameters are rejected with a clear message.
ChannelSpec load_channel_spec(const std::string& text);

/// System spec: {id, layers: [channel spec with required id, ...]}.
SystemOfConstraints load_system_spec(const std::string& text);

struct CapabilityFile {
    std::string id;
    etiquette::CapabilityTree tree;
};

/// Capability file: {id?, version?, nodes: [...], bug_list?: [...]}.
CapabilityFile load_capability_file(const std::string& text, const std::string& default_id);

struct Scenario {
    sim::Endpoint left;
    sim::Endpoint right;
    sim::SimConfig config;
};

/// Scenario file: {left: endpoint, right: endpoint, config: {...}}.
Scenario load_scenario(const std::string& text);

}  // namespace chankit::io
