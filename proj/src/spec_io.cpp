#include "chankit/spec_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace chankit::io {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw validation_error(std::string("invalid JSON: ") + e.what());
    }
}

const json& require(const json& j, const char* key, const char* context) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw validation_error(std::string(context) + " is missing required field '" + key + "'");
    }
    return *it;
}

template <typename T>
T get_as(const json& j, const char* what) {
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw validation_error(std::string("field '") + what + "' has the wrong type");
    }
}

Alphabet parse_alphabet(const json& j, const char* which) {
    if (!j.is_object()) {
        throw validation_error(std::string(which) + " alphabet must be an object");
    }
    Alphabet a;
    a.id = get_as<std::string>(require(j, "id", which), "id");
    a.elements = get_as<std::vector<std::string>>(require(j, "elements", which), "elements");
    return a;
}

Distribution parse_distribution(const json& j) {
    if (j.is_array()) {
        return Distribution(get_as<std::vector<double>>(j, "probs"));
    }
    if (j.is_object()) {
        auto probs = get_as<std::vector<double>>(require(j, "probs", "distribution"), "probs");
        if (auto it = j.find("size"); it != j.end()) {
            return Distribution(std::move(probs), get_as<std::uint64_t>(*it, "size"));
        }
        return Distribution(std::move(probs));
    }
    throw validation_error("distribution must be an array of probabilities or an object");
}

JointDistribution parse_joint(const json& j) {
    auto rows = get_as<std::vector<std::vector<double>>>(j, "noise");
    return JointDistribution(rows);
}

void reject_analog(const json& j, const std::string& context) {
    if (j.contains("tolerance") || (j.contains("analog") && j["analog"].is_boolean() &&
                                    j["analog"].get<bool>())) {
        throw validation_error(context +
                               ": analog/tolerance parameters are not supported; describe "
                               "incremental parameters by their element counts");
    }
}

ChannelSpec parse_channel_spec(const json& j, const std::string& context) {
    if (!j.is_object()) {
        throw validation_error(context + " must be an object");
    }
    reject_analog(j, context);
    ChannelSpec spec;
    const Alphabet tx = parse_alphabet(require(j, "tx", context.c_str()), "tx");
    const Alphabet rx = parse_alphabet(require(j, "rx", context.c_str()), "rx");
    if (auto it = j.find("pairs"); it != j.end()) {
        spec.cs.tx = tx;
        spec.cs.rx = rx;
        spec.cs.id = tx.id + "-" + rx.id;
        for (const auto& pair : *it) {
            if (!pair.is_array() || pair.size() != 2) {
                throw validation_error(context + ": each pair must be [txLabel, rxLabel]");
            }
            spec.cs.pairs.emplace_back(get_as<std::string>(pair[0], "pair"),
                                       get_as<std::string>(pair[1], "pair"));
        }
        if (auto violations = validate(spec.cs); !violations.empty()) {
            throw validation_error(context + ": " + violations.front());
        }
    } else {
        spec.cs = common_set(tx, rx);
    }
    if (auto it = j.find("id"); it != j.end()) {
        spec.cs.id = get_as<std::string>(*it, "id");
    }
    if (auto it = j.find("ignored"); it != j.end()) {
        spec.cs.ignored = get_as<bool>(*it, "ignored");
    }
    if (auto it = j.find("fault"); it != j.end()) {
        spec.cs.fault = get_as<bool>(*it, "fault");
    }
    if (auto it = j.find("source"); it != j.end()) {
        spec.source = parse_distribution(*it);
    }
    if (auto it = j.find("noise"); it != j.end()) {
        spec.noise = parse_joint(*it);
    }
    return spec;
}

etiquette::CapNode parse_cap_node(const json& j) {
    if (!j.is_object()) {
        throw validation_error("capability node must be an object");
    }
    etiquette::CapNode node;
    node.tag = get_as<std::uint16_t>(require(j, "tag", "capability node"), "tag");
    if (auto it = j.find("mode"); it != j.end()) {
        etiquette::ModeDescriptor mode;
        mode.mode_id = get_as<std::string>(require(*it, "mode_id", "mode"), "mode_id");
        const auto role = get_as<std::string>(require(*it, "role", "mode"), "role");
        if (role == "tx") {
            mode.role = etiquette::Role::Tx;
        } else if (role == "rx") {
            mode.role = etiquette::Role::Rx;
        } else {
            throw validation_error("mode '" + mode.mode_id + "': role must be \"tx\" or \"rx\"");
        }
        mode.states = get_as<std::uint32_t>(require(*it, "states", "mode"), "states");
        if (auto rit = it->find("revision"); rit != it->end()) {
            mode.revision = get_as<std::uint32_t>(*rit, "revision");
        }
        if (auto lit = it->find("layer_tags"); lit != it->end()) {
            mode.layer_tags = get_as<std::vector<std::string>>(*lit, "layer_tags");
        }
        node.payload = std::move(mode);
    }
    if (auto it = j.find("bug"); it != j.end()) {
        if (!std::holds_alternative<std::monostate>(node.payload)) {
            throw validation_error("capability node may carry a mode or a bug, not both");
        }
        etiquette::BugEntry bug;
        bug.mode_id = get_as<std::string>(require(*it, "mode_id", "bug"), "mode_id");
        bug.revision = get_as<std::uint32_t>(require(*it, "revision", "bug"), "revision");
        node.payload = std::move(bug);
    }
    if (auto it = j.find("children"); it != j.end()) {
        for (const auto& child : *it) {
            node.children.push_back(parse_cap_node(child));
        }
    }
    return node;
}

etiquette::CapabilityTree parse_capability_tree(const json& j) {
    if (!j.is_object()) {
        throw validation_error("capability tree must be an object");
    }
    etiquette::CapabilityTree tree;
    if (auto it = j.find("version"); it != j.end()) {
        tree.version = get_as<std::uint32_t>(*it, "version");
    }
    for (const auto& node : require(j, "nodes", "capability tree")) {
        tree.nodes.push_back(parse_cap_node(node));
    }
    if (auto it = j.find("bug_list"); it != j.end()) {
        for (const auto& entry : *it) {
            etiquette::BugEntry bug;
            bug.mode_id = get_as<std::string>(require(entry, "mode_id", "bug_list entry"),
                                              "mode_id");
            bug.revision = get_as<std::uint32_t>(require(entry, "revision", "bug_list entry"),
                                                 "revision");
            tree.bug_list.push_back(std::move(bug));
        }
    }
    if (auto violations = etiquette::validate_capability_tree(tree); !violations.empty()) {
        throw validation_error("capability tree: " + violations.front());
    }
    return tree;
}

sim::Endpoint parse_endpoint(const json& j, const char* which) {
    if (!j.is_object()) {
        throw validation_error(std::string(which) + " endpoint must be an object");
    }
    sim::Endpoint ep;
    ep.id = get_as<std::string>(require(j, "id", which), "id");
    ep.caps = parse_capability_tree(require(j, "caps", which));
    const json& modes = require(j, "modes", which);
    if (!modes.is_object()) {
        throw validation_error(std::string(which) + ".modes must map mode ids to channel specs");
    }
    for (const auto& [mode_id, spec_json] : modes.items()) {
        auto spec = parse_channel_spec(spec_json, std::string(which) + ".modes." + mode_id);
        ep.modes.emplace(mode_id, std::move(spec.cs));
    }
    if (auto it = j.find("source"); it != j.end()) {
        ep.source = parse_distribution(*it);
    }
    return ep;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw io_error("failed while reading '" + path.string() + "'");
    }
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw io_error("cannot open '" + path.string() + "' for writing");
    }
    out << content;
    if (!out) {
        throw io_error("failed while writing '" + path.string() + "'");
    }
}

Distribution load_distribution(const std::string& text) { return parse_distribution(parse(text)); }

ChannelSpec load_channel_spec(const std::string& text) {
    return parse_channel_spec(parse(text), "channel spec");
}

SystemOfConstraints load_system_spec(const std::string& text) {
    const json j = parse(text);
    if (!j.is_object()) {
        throw validation_error("system spec must be an object");
    }
    SystemOfConstraints sys;
    sys.id = get_as<std::string>(require(j, "id", "system spec"), "id");
    const json& layers = require(j, "layers", "system spec");
    if (!layers.is_array() || layers.empty()) {
        throw validation_error("system spec requires a nonempty 'layers' array");
    }
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const std::string context = "layer " + std::to_string(i);
        if (!layers[i].contains("id")) {
            throw validation_error(context + " is missing required field 'id'");
        }
        sys.layers.push_back(parse_channel_spec(layers[i], context).cs);
    }
    return sys;
}

CapabilityFile load_capability_file(const std::string& text, const std::string& default_id) {
    const json j = parse(text);
    CapabilityFile file;
    file.tree = parse_capability_tree(j);
    file.id = j.contains("id") ? get_as<std::string>(j["id"], "id") : default_id;
    return file;
}

Scenario load_scenario(const std::string& text) {
    const json j = parse(text);
    if (!j.is_object()) {
        throw validation_error("scenario must be an object");
    }
    Scenario sc;
    sc.left = parse_endpoint(require(j, "left", "scenario"), "left");
    sc.right = parse_endpoint(require(j, "right", "scenario"), "right");
    const json& cfg = require(j, "config", "scenario");
    sc.config.seed = get_as<std::uint64_t>(require(cfg, "seed", "config"), "seed");
    sc.config.symbol_count =
        get_as<std::uint64_t>(require(cfg, "symbol_count", "config"), "symbol_count");
    if (sc.config.symbol_count == 0) {
        throw validation_error("config.symbol_count must be >= 1");
    }
    if (auto it = cfg.find("timeout_ticks"); it != cfg.end()) {
        sc.config.timeout_ticks = get_as<std::uint64_t>(*it, "timeout_ticks");
    }
    if (auto it = cfg.find("noise"); it != cfg.end()) {
        for (const auto& [mode_id, table] : it->items()) {
            sc.config.noise.emplace(mode_id, parse_joint(table));
        }
    }
    return sc;
}

}  // namespace chankit::io
