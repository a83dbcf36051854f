#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chankit/channel_model.hpp"
#include "chankit/negotiation.hpp"

namespace chankit::sim {

/// splitmix64: 64-bit state, one addition and three xor-shift-multiply steps
/// per draw. Constants and update rule documented in docs/formats.md so
/// reports reproduce across implementations.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 significant bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// A multi-mode endpoint: its negotiable capabilities plus the realized
/// channel behind each advertised mode.
struct Endpoint {
    std::string id;
    etiquette::CapabilityTree caps;
    std::map<std::string, ConstraintSet> modes;  // mode_id -> realized channel
    std::optional<Distribution> source;          // required on the transmit side
};

struct SimConfig {
    std::uint64_t seed = 0;
    std::uint64_t symbol_count = 1;
    std::map<std::string, JointDistribution> noise;  // per mode_id
    std::uint64_t timeout_ticks = 5'000'000;         // 1 tick = 1 simulated microsecond
};

/// One transcript row: a message in flight or a status change. Message
/// entries carry the encoded bytes; status entries (failures, timeouts)
/// leave wire empty and put the endpoint id in `direction`.
struct TranscriptEntry {
    std::uint64_t tick = 0;
    std::string direction;  // "L->R", "R->L", or an endpoint id
    std::string kind;       // message kind name or "FAILED(<reason>)"
    std::vector<std::uint8_t> wire;
};

struct NegotiationOutcome {
    etiquette::NegotiationState left;
    etiquette::NegotiationState right;
    std::vector<TranscriptEntry> transcript;
};

/// Runs the etiquette over an in-order lossless duplex link; messages cost
/// one tick to deliver. `left` receives the start command; with
/// start_both = true both do (glare). Fully deterministic.
NegotiationOutcome negotiate(etiquette::NegotiationState left, etiquette::NegotiationState right,
                             std::uint64_t timeout_ticks, bool start_both = false);

struct SimReport {
    std::vector<TranscriptEntry> transcript;
    std::optional<etiquette::Selection> selected;
    ChannelMetrics analytic;
    double empirical_mi_bits = 0.0;
    std::uint64_t symbols_sent = 0;
    std::uint64_t symbols_delivered = 0;
    // Per-symbol (tx index, rx index); rx = -1 marks mass delivered nowhere.
    std::vector<std::pair<std::int32_t, std::int32_t>> symbol_log;
    std::vector<std::string> tx_labels;
    std::vector<std::string> rx_labels;
    std::optional<std::string> failure_reason;
};

/// Phase 1 negotiates; on Established, phase 2 draws cfg.symbol_count
/// symbols from the left endpoint's source, maps them through the selected
/// constraint set (applying the mode's noise table when configured) and
/// compares empirical to analytic metrics. Deterministic given the seed.
SimReport run(const Endpoint& left, const Endpoint& right, const SimConfig& cfg);

/// Plug-in estimator: normalizes the count table and applies the mutual
/// information sum. Throws domain_error for an all-zero table.
double empirical_mi(const std::vector<std::vector<std::uint64_t>>& counts);

/// Stable JSON serialization of a report (fixed key order); byte-identical
/// for identical runs.
std::string to_json(const SimReport& report);

}  // namespace chankit::sim
