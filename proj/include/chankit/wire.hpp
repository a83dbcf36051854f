#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "chankit/capability.hpp"

namespace chankit::etiquette {

enum class MessageKind : std::uint8_t {
    Probe = 0x01,
    Caps = 0x02,
    Propose = 0x03,
    Accept = 0x04,
    Reject = 0x05,
    Confirm = 0x06,
};

const char* kind_name(MessageKind k);

/// A negotiated mode pairing (transmitter mode, receiver mode).
struct Selection {
    std::string tx_mode_id;
    std::string rx_mode_id;

    bool operator==(const Selection&) const = default;
};

/// One etiquette protocol message. CAPS carries a CapabilityTree;
/// PROPOSE/ACCEPT/CONFIRM carry a Selection; REJECT carries a reason string;
/// PROBE has no payload.
struct EtiquetteMessage {
    MessageKind kind = MessageKind::Probe;
    std::variant<std::monostate, CapabilityTree, Selection, std::string> payload;

    bool operator==(const EtiquetteMessage&) const = default;
};

EtiquetteMessage make_probe();
EtiquetteMessage make_caps(CapabilityTree tree);
EtiquetteMessage make_propose(Selection sel);
EtiquetteMessage make_accept(Selection sel);
EtiquetteMessage make_confirm(Selection sel);
EtiquetteMessage make_reject(std::string reason);

/// Serializes to the framed TLV wire format (see docs/formats.md). Throws
/// validation_error when a payload or TLV value exceeds the 16-bit length
/// fields, or when the payload variant does not match the message kind.
std::vector<std::uint8_t> encode(const EtiquetteMessage& msg);

/// Parses a framed message. Rejects truncation, trailing bytes, unknown
/// message kinds and length-field mismatches with parse_error carrying the
/// byte offset. Unknown TLV tags inside CAPS are skipped.
EtiquetteMessage decode(std::span<const std::uint8_t> bytes);

std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace chankit::etiquette
