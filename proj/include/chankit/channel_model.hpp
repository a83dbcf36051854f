#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chankit/info_core.hpp"

namespace chankit {

/// A finite labeled symbol inventory for one side of a channel.
struct Alphabet {
    std::string id;
    std::vector<std::string> elements;

    std::uint64_t count() const noexcept { return elements.size(); }
    std::optional<std::size_t> index_of(const std::string& label) const;

    bool operator==(const Alphabet&) const = default;
};

/// One set of constraints: a one-one ordered-pair mapping between two
/// alphabets. The pair count n is the size of the common set.
struct ConstraintSet {
    std::string id;
    Alphabet tx;
    Alphabet rx;
    std::vector<std::pair<std::string, std::string>> pairs;  // (tx label, rx label)
    bool ignored = false;
    bool fault = false;

    std::uint64_t n() const noexcept { return pairs.size(); }

    bool operator==(const ConstraintSet&) const = default;
};

/// Computed metrics for one constraint set, all in bits.
struct ChannelMetrics {
    double h_a_bits = 0.0;
    double h_b_bits = 0.0;
    double mi_bits = 0.0;
    double mb_bits = 0.0;
    double s_bound_bits = 0.0;
    double variation_bits = 0.0;
};

/// Forms the constraint set from elements with identical labels in both
/// alphabets, in tx order. Throws no_channel_error when the intersection is
/// empty: without a common set no communications is possible.
ConstraintSet common_set(const Alphabet& tx, const Alphabet& rx);

/// Returns one message per violated ConstraintSet invariant (empty when the
/// set is valid). Violations are data, not errors.
std::vector<std::string> validate(const ConstraintSet& cs);

/// Computes the metric bundle for one constraint set and a source
/// distribution over the tx alphabet.
///
/// Without a noise table the channel is the identity on ordered pairs;
/// source mass on unpaired tx elements is delivered to a synthetic "lost"
/// receiver column (it is never renormalized away). mi_bits is the Eq-6 style
/// sum over the real receiver columns, so lost mass lowers MI rather than
/// counting as erasure information. mb_bits is a property of the channel
/// alone: it is evaluated on the uniform-marginal version of the joint.
ChannelMetrics channel_metrics(const ConstraintSet& cs, const Distribution& source,
                               const std::optional<JointDistribution>& noise = std::nullopt);

}  // namespace chankit
