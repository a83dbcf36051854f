#include "chankit/wire.hpp"

namespace chankit::etiquette {

namespace {

constexpr std::uint8_t kMagic[4] = {0x45, 0x54, 0x51, 0x31};  // "ETQ1"

constexpr std::uint16_t kTagNode = 0x0001;
constexpr std::uint16_t kTagTreeVersion = 0x0002;
constexpr std::uint16_t kTagModeId = 0x0010;
constexpr std::uint16_t kTagRole = 0x0011;
constexpr std::uint16_t kTagStates = 0x0012;
constexpr std::uint16_t kTagRevision = 0x0013;
constexpr std::uint16_t kTagLayerTag = 0x0014;
constexpr std::uint16_t kTagBugEntry = 0x0020;
constexpr std::uint16_t kTagSelection = 0x0030;
constexpr std::uint16_t kTagRejectReason = 0x0031;

using Bytes = std::vector<std::uint8_t>;

void put_u16(Bytes& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_u32(Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

void put_tlv(Bytes& out, std::uint16_t tag, const Bytes& value) {
    if (value.size() > 0xFFFF) {
        throw validation_error("TLV value for tag " + std::to_string(tag) +
                               " exceeds the 16-bit length field");
    }
    put_u16(out, tag);
    put_u16(out, static_cast<std::uint16_t>(value.size()));
    out.insert(out.end(), value.begin(), value.end());
}

Bytes u32_value(std::uint32_t v) {
    Bytes b;
    put_u32(b, v);
    return b;
}

Bytes string_value(const std::string& s) { return Bytes(s.begin(), s.end()); }

Bytes encode_bug(const BugEntry& bug) {
    Bytes value;
    put_tlv(value, kTagModeId, string_value(bug.mode_id));
    put_tlv(value, kTagRevision, u32_value(bug.revision));
    return value;
}

void encode_node(Bytes& out, const CapNode& node) {
    Bytes value;
    put_u16(value, node.tag);  // the node's own address tag leads its value
    if (const auto* mode = std::get_if<ModeDescriptor>(&node.payload)) {
        put_tlv(value, kTagModeId, string_value(mode->mode_id));
        put_tlv(value, kTagRole, Bytes{static_cast<std::uint8_t>(mode->role)});
        put_tlv(value, kTagStates, u32_value(mode->states));
        put_tlv(value, kTagRevision, u32_value(mode->revision));
        for (const auto& tag : mode->layer_tags) {
            put_tlv(value, kTagLayerTag, string_value(tag));
        }
    } else if (const auto* bug = std::get_if<BugEntry>(&node.payload)) {
        put_tlv(value, kTagBugEntry, encode_bug(*bug));
    }
    for (const auto& child : node.children) {
        encode_node(value, child);
    }
    put_tlv(out, kTagNode, value);
}

Bytes encode_caps_payload(const CapabilityTree& tree) {
    Bytes out;
    put_tlv(out, kTagTreeVersion, u32_value(tree.version));
    for (const auto& node : tree.nodes) {
        encode_node(out, node);
    }
    for (const auto& bug : tree.bug_list) {
        put_tlv(out, kTagBugEntry, encode_bug(bug));
    }
    return out;
}

Bytes encode_selection_payload(const Selection& sel) {
    Bytes inner;
    put_tlv(inner, kTagModeId, string_value(sel.tx_mode_id));
    put_tlv(inner, kTagModeId, string_value(sel.rx_mode_id));
    Bytes out;
    put_tlv(out, kTagSelection, inner);
    return out;
}

// Bounds-checked TLV cursor; offsets in errors are absolute byte positions
// within the framed message.
class TlvReader {
public:
    TlvReader(std::span<const std::uint8_t> data, std::size_t base) : data_(data), base_(base) {}

    bool done() const { return pos_ >= data_.size(); }

    struct Tlv {
        std::uint16_t tag;
        std::span<const std::uint8_t> value;
        std::size_t value_offset;  // absolute
    };

    Tlv next() {
        if (data_.size() - pos_ < 4) {
            throw parse_error(base_ + pos_, "truncated TLV header");
        }
        const std::uint16_t tag =
            static_cast<std::uint16_t>((data_[pos_] << 8) | data_[pos_ + 1]);
        const std::uint16_t len =
            static_cast<std::uint16_t>((data_[pos_ + 2] << 8) | data_[pos_ + 3]);
        if (data_.size() - pos_ - 4 < len) {
            throw parse_error(base_ + pos_, "TLV length exceeds its container");
        }
        Tlv tlv{tag, data_.subspan(pos_ + 4, len), base_ + pos_ + 4};
        pos_ += 4 + static_cast<std::size_t>(len);
        return tlv;
    }

private:
    std::span<const std::uint8_t> data_;
    std::size_t base_;
    std::size_t pos_ = 0;
};

std::uint32_t read_u32(std::span<const std::uint8_t> v, std::size_t offset, const char* what) {
    if (v.size() != 4) {
        throw parse_error(offset, std::string(what) + " must be 4 bytes, got " +
                                      std::to_string(v.size()));
    }
    return (static_cast<std::uint32_t>(v[0]) << 24) | (static_cast<std::uint32_t>(v[1]) << 16) |
           (static_cast<std::uint32_t>(v[2]) << 8) | static_cast<std::uint32_t>(v[3]);
}

std::string read_string(std::span<const std::uint8_t> v) {
    return std::string(v.begin(), v.end());
}

BugEntry parse_bug(std::span<const std::uint8_t> value, std::size_t offset) {
    TlvReader reader(value, offset);
    BugEntry bug;
    bool have_id = false;
    bool have_rev = false;
    while (!reader.done()) {
        auto tlv = reader.next();
        switch (tlv.tag) {
            case kTagModeId:
                if (have_id) throw parse_error(tlv.value_offset, "duplicate mode id in bug entry");
                bug.mode_id = read_string(tlv.value);
                have_id = true;
                break;
            case kTagRevision:
                if (have_rev) throw parse_error(tlv.value_offset, "duplicate revision in bug entry");
                bug.revision = read_u32(tlv.value, tlv.value_offset, "revision");
                have_rev = true;
                break;
            default:
                break;  // skipped (CAPS forward compatibility)
        }
    }
    if (!have_id || !have_rev) {
        throw parse_error(offset, "bug entry requires a mode id and a revision");
    }
    return bug;
}

CapNode parse_node(std::span<const std::uint8_t> value, std::size_t offset) {
    if (value.size() < 2) {
        throw parse_error(offset, "node value too short for its address tag");
    }
    CapNode node;
    node.tag = static_cast<std::uint16_t>((value[0] << 8) | value[1]);

    ModeDescriptor mode;
    bool have_mode = false;
    bool have_mode_id = false;
    bool have_bug = false;
    TlvReader reader(value.subspan(2), offset + 2);
    while (!reader.done()) {
        auto tlv = reader.next();
        switch (tlv.tag) {
            case kTagModeId:
                if (have_mode_id) {
                    throw parse_error(tlv.value_offset, "duplicate mode id in node");
                }
                mode.mode_id = read_string(tlv.value);
                have_mode = have_mode_id = true;
                break;
            case kTagRole: {
                if (tlv.value.size() != 1 || tlv.value[0] > 1) {
                    throw parse_error(tlv.value_offset, "role must be one byte, 0 (tx) or 1 (rx)");
                }
                mode.role = tlv.value[0] == 0 ? Role::Tx : Role::Rx;
                have_mode = true;
                break;
            }
            case kTagStates:
                mode.states = read_u32(tlv.value, tlv.value_offset, "states");
                have_mode = true;
                break;
            case kTagRevision:
                mode.revision = read_u32(tlv.value, tlv.value_offset, "revision");
                have_mode = true;
                break;
            case kTagLayerTag:
                mode.layer_tags.push_back(read_string(tlv.value));
                have_mode = true;
                break;
            case kTagBugEntry:
                if (have_bug) throw parse_error(tlv.value_offset, "node carries two bug entries");
                node.payload = parse_bug(tlv.value, tlv.value_offset);
                have_bug = true;
                break;
            case kTagNode:
                node.children.push_back(parse_node(tlv.value, tlv.value_offset));
                break;
            default:
                break;  // skipped (CAPS forward compatibility)
        }
    }
    if (have_mode && have_bug) {
        throw parse_error(offset, "node carries both a mode descriptor and a bug entry");
    }
    if (have_mode) node.payload = std::move(mode);
    return node;
}

CapabilityTree parse_caps_payload(std::span<const std::uint8_t> payload, std::size_t base) {
    CapabilityTree tree;
    bool have_version = false;
    TlvReader reader(payload, base);
    while (!reader.done()) {
        auto tlv = reader.next();
        switch (tlv.tag) {
            case kTagTreeVersion:
                if (have_version) throw parse_error(tlv.value_offset, "duplicate tree version");
                tree.version = read_u32(tlv.value, tlv.value_offset, "tree version");
                have_version = true;
                break;
            case kTagNode:
                tree.nodes.push_back(parse_node(tlv.value, tlv.value_offset));
                break;
            case kTagBugEntry:
                tree.bug_list.push_back(parse_bug(tlv.value, tlv.value_offset));
                break;
            default:
                break;  // skipped (forward compatibility, superset rule)
        }
    }
    return tree;
}

Selection parse_selection_payload(std::span<const std::uint8_t> payload, std::size_t base,
                                  const char* kind) {
    TlvReader reader(payload, base);
    if (reader.done()) {
        throw parse_error(base, std::string(kind) + " payload requires a selection TLV");
    }
    auto tlv = reader.next();
    if (tlv.tag != kTagSelection) {
        throw parse_error(tlv.value_offset - 4, std::string(kind) + " payload must be a selection TLV");
    }
    if (!reader.done()) {
        throw parse_error(base, std::string(kind) + " payload carries extra TLVs");
    }
    TlvReader inner(tlv.value, tlv.value_offset);
    std::vector<std::string> ids;
    while (!inner.done()) {
        auto field = inner.next();
        if (field.tag != kTagModeId) {
            throw parse_error(field.value_offset - 4, "selection may only contain mode ids");
        }
        ids.push_back(read_string(field.value));
    }
    if (ids.size() != 2) {
        throw parse_error(tlv.value_offset, "selection requires exactly two mode ids, got " +
                                                std::to_string(ids.size()));
    }
    return Selection{std::move(ids[0]), std::move(ids[1])};
}

std::string parse_reject_payload(std::span<const std::uint8_t> payload, std::size_t base) {
    TlvReader reader(payload, base);
    if (reader.done()) {
        throw parse_error(base, "REJECT payload requires a reason TLV");
    }
    auto tlv = reader.next();
    if (tlv.tag != kTagRejectReason) {
        throw parse_error(tlv.value_offset - 4, "REJECT payload must be a reason TLV");
    }
    if (!reader.done()) {
        throw parse_error(base, "REJECT payload carries extra TLVs");
    }
    return read_string(tlv.value);
}

}  // namespace

const char* kind_name(MessageKind k) {
    switch (k) {
        case MessageKind::Probe: return "PROBE";
        case MessageKind::Caps: return "CAPS";
        case MessageKind::Propose: return "PROPOSE";
        case MessageKind::Accept: return "ACCEPT";
        case MessageKind::Reject: return "REJECT";
        case MessageKind::Confirm: return "CONFIRM";
    }
    return "UNKNOWN";
}

EtiquetteMessage make_probe() { return {MessageKind::Probe, std::monostate{}}; }
EtiquetteMessage make_caps(CapabilityTree tree) { return {MessageKind::Caps, std::move(tree)}; }
EtiquetteMessage make_propose(Selection sel) { return {MessageKind::Propose, std::move(sel)}; }
EtiquetteMessage make_accept(Selection sel) { return {MessageKind::Accept, std::move(sel)}; }
EtiquetteMessage make_confirm(Selection sel) { return {MessageKind::Confirm, std::move(sel)}; }
EtiquetteMessage make_reject(std::string reason) {
    return {MessageKind::Reject, std::move(reason)};
}

std::vector<std::uint8_t> encode(const EtiquetteMessage& msg) {
    Bytes payload;
    switch (msg.kind) {
        case MessageKind::Probe:
            if (!std::holds_alternative<std::monostate>(msg.payload)) {
                throw validation_error("PROBE carries no payload");
            }
            break;
        case MessageKind::Caps: {
            const auto* tree = std::get_if<CapabilityTree>(&msg.payload);
            if (!tree) throw validation_error("CAPS must carry a capability tree");
            payload = encode_caps_payload(*tree);
            break;
        }
        case MessageKind::Propose:
        case MessageKind::Accept:
        case MessageKind::Confirm: {
            const auto* sel = std::get_if<Selection>(&msg.payload);
            if (!sel) {
                throw validation_error(std::string(kind_name(msg.kind)) +
                                       " must carry a selection");
            }
            payload = encode_selection_payload(*sel);
            break;
        }
        case MessageKind::Reject: {
            const auto* reason = std::get_if<std::string>(&msg.payload);
            if (!reason) throw validation_error("REJECT must carry a reason");
            put_tlv(payload, kTagRejectReason, string_value(*reason));
            break;
        }
        default:
            throw validation_error("unknown message kind");
    }
    if (payload.size() > 0xFFFF) {
        throw validation_error("payload exceeds the 16-bit length field");
    }
    Bytes out;
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    out.push_back(static_cast<std::uint8_t>(msg.kind));
    put_u16(out, static_cast<std::uint16_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

EtiquetteMessage decode(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 7) {
        throw parse_error(bytes.size(), "truncated header (need 7 bytes)");
    }
    for (std::size_t i = 0; i < 4; ++i) {
        if (bytes[i] != kMagic[i]) {
            throw parse_error(i, "bad magic; expected \"ETQ1\"");
        }
    }
    const std::uint8_t kind_byte = bytes[4];
    if (kind_byte < 0x01 || kind_byte > 0x06) {
        throw parse_error(4, "unknown message kind 0x" + to_hex({&kind_byte, 1}));
    }
    const auto kind = static_cast<MessageKind>(kind_byte);
    const std::size_t declared = (static_cast<std::size_t>(bytes[5]) << 8) | bytes[6];
    if (bytes.size() - 7 < declared) {
        throw parse_error(bytes.size(), "payload shorter than declared length");
    }
    if (bytes.size() - 7 > declared) {
        throw parse_error(7 + declared, "trailing bytes after declared payload length");
    }
    const auto payload = bytes.subspan(7, declared);

    EtiquetteMessage msg;
    msg.kind = kind;
    switch (kind) {
        case MessageKind::Probe:
            if (!payload.empty()) throw parse_error(7, "PROBE payload must be empty");
            break;
        case MessageKind::Caps:
            msg.payload = parse_caps_payload(payload, 7);
            break;
        case MessageKind::Propose:
        case MessageKind::Accept:
        case MessageKind::Confirm:
            msg.payload = parse_selection_payload(payload, 7, kind_name(kind));
            break;
        case MessageKind::Reject:
            msg.payload = parse_reject_payload(payload, 7);
            break;
    }
    return msg;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

}  // namespace chankit::etiquette
