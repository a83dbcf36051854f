#include "chankit/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace chankit {

namespace {

void collect_duplicates(const Alphabet& a, const char* side, std::vector<std::string>& out) {
    std::unordered_set<std::string> seen;
    for (const auto& label : a.elements) {
        if (!seen.insert(label).second) {
            out.push_back(std::string(side) + " alphabet '" + a.id + "' repeats element '" +
                          label + "'");
        }
    }
}

// Eq-6 style sum restricted to the first col_limit columns; marginals are
// taken from the full table so lost mass still weighs the transmitter side.
double mi_over_columns(const JointDistribution& j, std::size_t col_limit) {
    const auto pa = j.row_marginal().probs();
    const auto pb = j.col_marginal().probs();
    double mi = 0.0;
    for (std::size_t r = 0; r < j.rows(); ++r) {
        for (std::size_t c = 0; c < col_limit; ++c) {
            const double p = j.at(r, c);
            if (p > 0.0) mi += p * std::log2(p / (pa[r] * pb[c]));
        }
    }
    if (mi < 0.0 && mi > -kSumTolerance) mi = 0.0;
    return mi;
}

// Identity channel on ordered pairs; column r (one past the receiver
// alphabet) collects source mass on unpaired tx elements.
JointDistribution noiseless_joint(const ConstraintSet& cs, const Distribution& source) {
    const std::size_t t = cs.tx.count();
    const std::size_t r = cs.rx.count();
    std::vector<double> table(t * (r + 1), 0.0);
    std::unordered_map<std::size_t, std::size_t> pair_col;
    for (const auto& [txl, rxl] : cs.pairs) {
        pair_col[*cs.tx.index_of(txl)] = *cs.rx.index_of(rxl);
    }
    for (std::size_t i = 0; i < t; ++i) {
        const double p = source.probs()[i];
        if (p <= 0.0) continue;
        auto it = pair_col.find(i);
        const std::size_t col = (it != pair_col.end()) ? it->second : r;
        table[i * (r + 1) + col] = p;
    }
    return JointDistribution(std::move(table), t, r + 1);
}

// Joint entropy of the channel reweighted to uniform mass 1/n on the paired
// tx rows; this is the term Eq. 8 subtracts from 2 log2 n.
double uniform_marginal_joint_entropy(const ConstraintSet& cs,
                                      const std::optional<JointDistribution>& noise) {
    const std::uint64_t n = cs.n();
    if (!noise) {
        return entropy_bound(n);  // identity rows: H = log2 n exactly
    }
    const double w = 1.0 / static_cast<double>(n);
    double h = 0.0;
    for (const auto& [txl, rxl] : cs.pairs) {
        const std::size_t row = *cs.tx.index_of(txl);
        double rowsum = 0.0;
        for (std::size_t c = 0; c < noise->cols(); ++c) rowsum += noise->at(row, c);
        if (rowsum > 0.0) {
            for (std::size_t c = 0; c < noise->cols(); ++c) {
                const double q = (noise->at(row, c) / rowsum) * w;
                if (q > 0.0) h -= q * std::log2(q);
            }
        } else {
            // No information about this row: treat as deterministic delivery
            // to the paired partner.
            h -= w * std::log2(w);
        }
    }
    return h;
}

}  // namespace

std::optional<std::size_t> Alphabet::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (elements[i] == label) return i;
    }
    return std::nullopt;
}

ConstraintSet common_set(const Alphabet& tx, const Alphabet& rx) {
    std::vector<std::string> dups;
    collect_duplicates(tx, "tx", dups);
    collect_duplicates(rx, "rx", dups);
    if (!dups.empty()) {
        throw validation_error(dups.front());
    }
    std::unordered_set<std::string> rx_set(rx.elements.begin(), rx.elements.end());
    ConstraintSet cs;
    cs.id = tx.id + "-" + rx.id;
    cs.tx = tx;
    cs.rx = rx;
    for (const auto& label : tx.elements) {
        if (rx_set.count(label)) cs.pairs.emplace_back(label, label);
    }
    if (cs.pairs.empty()) {
        throw no_channel_error("no channel: alphabets '" + tx.id + "' and '" + rx.id +
                               "' share no common set");
    }
    return cs;
}

std::vector<std::string> validate(const ConstraintSet& cs) {
    std::vector<std::string> out;
    if (cs.tx.elements.empty()) out.push_back("tx alphabet '" + cs.tx.id + "' is empty");
    if (cs.rx.elements.empty()) out.push_back("rx alphabet '" + cs.rx.id + "' is empty");
    collect_duplicates(cs.tx, "tx", out);
    collect_duplicates(cs.rx, "rx", out);
    if (cs.pairs.empty()) {
        out.push_back("constraint set '" + cs.id + "' has no ordered pairs (n must be >= 1)");
    }
    std::unordered_set<std::string> tx_used;
    std::unordered_set<std::string> rx_used;
    for (const auto& [txl, rxl] : cs.pairs) {
        if (!cs.tx.index_of(txl)) {
            out.push_back("tx label '" + txl + "' not in tx alphabet '" + cs.tx.id + "'");
        }
        if (!cs.rx.index_of(rxl)) {
            out.push_back("rx label '" + rxl + "' not in rx alphabet '" + cs.rx.id + "'");
        }
        if (!tx_used.insert(txl).second) {
            out.push_back("tx label '" + txl + "' paired twice");
        }
        if (!rx_used.insert(rxl).second) {
            out.push_back("rx label '" + rxl + "' paired twice");
        }
    }
    return out;
}

ChannelMetrics channel_metrics(const ConstraintSet& cs, const Distribution& source,
                               const std::optional<JointDistribution>& noise) {
    if (auto violations = validate(cs); !violations.empty()) {
        throw validation_error("invalid constraint set: " + violations.front());
    }
    const std::size_t t = cs.tx.count();
    const std::size_t r = cs.rx.count();
    if (source.probs().size() != t) {
        throw validation_error("source has " + std::to_string(source.probs().size()) +
                               " entries; the tx alphabet '" + cs.tx.id + "' has t=" +
                               std::to_string(t));
    }
    if (noise && (noise->rows() != t || noise->cols() != r)) {
        throw validation_error("noise table is " + std::to_string(noise->rows()) + "x" +
                               std::to_string(noise->cols()) + "; expected t x r = " +
                               std::to_string(t) + "x" + std::to_string(r));
    }

    ChannelMetrics m;
    m.h_a_bits = entropy(source);
    m.s_bound_bits = entropy_bound(cs.n());
    m.variation_bits = std::abs(entropy_bound(r) - entropy_bound(t));

    const JointDistribution joint = noise ? *noise : noiseless_joint(cs, source);
    m.h_b_bits = entropy(joint.col_marginal());
    m.mi_bits = mi_over_columns(joint, r);
    m.mb_bits = mutual_bound(cs.n(), uniform_marginal_joint_entropy(cs, noise));
    return m;
}

}  // namespace chankit
