#include "chankit/sim.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace chankit::sim {

namespace etq = chankit::etiquette;

namespace {

struct InFlight {
    std::uint64_t deliver_at = 0;
    bool to_right = false;
    std::vector<std::uint8_t> bytes;
};

struct MachineCtx {
    etq::NegotiationState state;
    std::uint64_t phase_entered = 0;
};

void record_send(std::vector<TranscriptEntry>& transcript, std::uint64_t tick, bool from_left,
                 const etq::EtiquetteMessage& msg, std::vector<std::uint8_t> bytes) {
    transcript.push_back(
        {tick, from_left ? "L->R" : "R->L", etq::kind_name(msg.kind), std::move(bytes)});
}

void record_status(std::vector<TranscriptEntry>& transcript, std::uint64_t tick,
                   const etq::NegotiationState& s) {
    if (s.phase == etq::Phase::Failed) {
        transcript.push_back({tick, s.local_id,
                              "FAILED(" + s.failure_reason.value_or("unknown") + ")",
                              {}});
    }
}

// Index of the first CDF bucket with positive mass containing u.
std::size_t draw_index(const std::vector<double>& cdf, const std::vector<double>& probs,
                       double u) {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = (it == cdf.end()) ? cdf.size() - 1 : static_cast<std::size_t>(it - cdf.begin());
    // Rounding at the top of the CDF: fall back to the last nonzero entry.
    while (idx > 0 && probs[idx] <= 0.0) --idx;
    return idx;
}

std::vector<double> cumulative(const std::vector<double>& probs) {
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    return cdf;
}

void validate_endpoint(const Endpoint& ep) {
    if (auto violations = etq::validate_capability_tree(ep.caps); !violations.empty()) {
        throw validation_error("endpoint '" + ep.id + "': " + violations.front());
    }
    for (const auto& mode : etq::collect_modes(ep.caps)) {
        auto it = ep.modes.find(mode.mode_id);
        if (it == ep.modes.end()) {
            throw validation_error("endpoint '" + ep.id + "': mode '" + mode.mode_id +
                                   "' has no realized constraint set");
        }
        if (auto violations = validate(it->second); !violations.empty()) {
            throw validation_error("endpoint '" + ep.id + "', mode '" + mode.mode_id +
                                   "': " + violations.front());
        }
        if (it->second.n() != mode.states) {
            throw validation_error("endpoint '" + ep.id + "': mode '" + mode.mode_id +
                                   "' advertises " + std::to_string(mode.states) +
                                   " states but its constraint set has n=" +
                                   std::to_string(it->second.n()));
        }
    }
}

}  // namespace

NegotiationOutcome negotiate(etq::NegotiationState left, etq::NegotiationState right,
                             std::uint64_t timeout_ticks, bool start_both) {
    NegotiationOutcome outcome;
    MachineCtx machines[2] = {{std::move(left), 0}, {std::move(right), 0}};
    std::deque<InFlight> link;  // in-order, lossless, both directions
    std::uint64_t now = 0;

    auto feed = [&](bool to_right, const etq::Event& ev) {
        MachineCtx& m = machines[to_right ? 1 : 0];
        const etq::Phase before = m.state.phase;
        auto result = etq::step(std::move(m.state), ev);
        m.state = std::move(result.state);
        if (m.state.phase != before) {
            m.phase_entered = now;
            record_status(outcome.transcript, now, m.state);
        }
        for (auto& msg : result.outgoing) {
            auto bytes = etq::encode(msg);
            record_send(outcome.transcript, now, /*from_left=*/to_right, msg, bytes);
            link.push_back({now + 1, !to_right, std::move(bytes)});
        }
    };

    feed(false, etq::StartCommand{});
    if (start_both) feed(true, etq::StartCommand{});

    const auto terminal = [&](int i) { return etq::is_terminal(machines[i].state.phase); };
    while (!(terminal(0) && terminal(1))) {
        if (!link.empty()) {
            InFlight msg = std::move(link.front());
            link.pop_front();
            now = std::max(now, msg.deliver_at);
            if (terminal(msg.to_right ? 1 : 0)) continue;  // absorbed
            etq::Event ev;
            try {
                ev = etq::decode(msg.bytes);
            } catch (const parse_error& e) {
                ev = etq::MalformedMessage{e.reason()};
            }
            feed(msg.to_right, ev);
            continue;
        }
        // Nothing in flight: the earliest pending per-phase timeout fires.
        int which = -1;
        std::uint64_t deadline = 0;
        for (int i = 0; i < 2; ++i) {
            if (terminal(i)) continue;
            const std::uint64_t d = machines[i].phase_entered + timeout_ticks;
            if (which < 0 || d < deadline) {
                which = i;
                deadline = d;
            }
        }
        now = std::max(now, deadline);
        feed(which == 1, etq::TimeoutEvent{});
    }

    outcome.left = std::move(machines[0].state);
    outcome.right = std::move(machines[1].state);
    return outcome;
}

SimReport run(const Endpoint& left, const Endpoint& right, const SimConfig& cfg) {
    if (cfg.symbol_count == 0) {
        throw validation_error("symbol_count must be >= 1");
    }
    if (left.id == right.id) {
        throw validation_error("endpoints must have distinct ids (both are '" + left.id + "')");
    }
    validate_endpoint(left);
    validate_endpoint(right);

    SimReport report;
    auto outcome = negotiate(etq::make_session(left.id, right.id, left.caps),
                             etq::make_session(right.id, left.id, right.caps),
                             cfg.timeout_ticks);
    report.transcript = std::move(outcome.transcript);

    if (outcome.left.phase != etq::Phase::Established) {
        report.failure_reason = outcome.left.failure_reason.value_or("negotiation failed");
        return report;  // phase-2 fields stay zero
    }
    const etq::Selection sel = *outcome.left.selected;
    report.selected = sel;

    const ConstraintSet& cs = left.modes.at(sel.tx_mode_id);
    if (!left.source) {
        throw validation_error("endpoint '" + left.id + "' transmits but has no source");
    }
    const Distribution& source = *left.source;
    std::optional<JointDistribution> noise;
    if (auto it = cfg.noise.find(sel.tx_mode_id); it != cfg.noise.end()) noise = it->second;

    report.analytic = channel_metrics(cs, source, noise);
    report.tx_labels = cs.tx.elements;
    report.rx_labels = cs.rx.elements;

    const std::size_t t = cs.tx.count();
    const std::size_t r = cs.rx.count();
    std::vector<std::int32_t> pair_col(t, -1);
    for (const auto& [txl, rxl] : cs.pairs) {
        pair_col[*cs.tx.index_of(txl)] = static_cast<std::int32_t>(*cs.rx.index_of(rxl));
    }

    const auto source_cdf = cumulative(source.probs());
    std::vector<std::vector<double>> row_cond;
    std::vector<std::vector<double>> row_cdf;
    if (noise) {
        row_cond.resize(t);
        row_cdf.resize(t);
        for (std::size_t i = 0; i < t; ++i) {
            double rowsum = 0.0;
            for (std::size_t c = 0; c < r; ++c) rowsum += noise->at(i, c);
            if (rowsum > 0.0) {
                row_cond[i].resize(r);
                for (std::size_t c = 0; c < r; ++c) row_cond[i][c] = noise->at(i, c) / rowsum;
                row_cdf[i] = cumulative(row_cond[i]);
            }
        }
    }

    SplitMix64 rng(cfg.seed);
    std::vector<std::vector<std::uint64_t>> counts(t, std::vector<std::uint64_t>(r, 0));
    report.symbol_log.reserve(cfg.symbol_count);
    for (std::uint64_t k = 0; k < cfg.symbol_count; ++k) {
        const std::size_t a = draw_index(source_cdf, source.probs(), rng.next_unit());
        std::int32_t b = -1;
        if (noise && !row_cond[a].empty()) {
            b = static_cast<std::int32_t>(draw_index(row_cdf[a], row_cond[a], rng.next_unit()));
        } else {
            b = pair_col[a];  // identity on ordered pairs; unpaired mass is lost
        }
        ++report.symbols_sent;
        if (b >= 0) {
            ++report.symbols_delivered;
            ++counts[a][static_cast<std::size_t>(b)];
        }
        report.symbol_log.emplace_back(static_cast<std::int32_t>(a), b);
    }
    report.empirical_mi_bits = report.symbols_delivered > 0 ? empirical_mi(counts) : 0.0;
    return report;
}

double empirical_mi(const std::vector<std::vector<std::uint64_t>>& counts) {
    if (counts.empty() || counts.front().empty()) {
        throw validation_error("count table must have at least one row and column");
    }
    const std::size_t cols = counts.front().size();
    std::uint64_t total = 0;
    for (const auto& row : counts) {
        if (row.size() != cols) {
            throw validation_error("count table has ragged rows");
        }
        for (std::uint64_t c : row) total += c;
    }
    if (total == 0) {
        throw domain_error("count table is all zero; empirical MI needs at least one observation");
    }
    std::vector<double> table;
    table.reserve(counts.size() * cols);
    const double inv = 1.0 / static_cast<double>(total);
    for (const auto& row : counts) {
        for (std::uint64_t c : row) table.push_back(static_cast<double>(c) * inv);
    }
    return mutual_information(JointDistribution(std::move(table), counts.size(), cols));
}

std::string to_json(const SimReport& report) {
    nlohmann::ordered_json j;
    j["transcript"] = nlohmann::ordered_json::array();
    for (const auto& entry : report.transcript) {
        j["transcript"].push_back({{"tick", entry.tick},
                                   {"direction", entry.direction},
                                   {"kind", entry.kind},
                                   {"wire", etq::to_hex(entry.wire)}});
    }
    if (report.selected) {
        j["selected"] = {{"tx_mode", report.selected->tx_mode_id},
                         {"rx_mode", report.selected->rx_mode_id}};
    } else {
        j["selected"] = nullptr;
    }
    if (report.failure_reason) {
        j["failure_reason"] = *report.failure_reason;
    }
    j["analytic"] = {{"h_a_bits", report.analytic.h_a_bits},
                     {"h_b_bits", report.analytic.h_b_bits},
                     {"mi_bits", report.analytic.mi_bits},
                     {"mb_bits", report.analytic.mb_bits},
                     {"s_bound_bits", report.analytic.s_bound_bits},
                     {"variation_bits", report.analytic.variation_bits}};
    j["empirical_mi_bits"] = report.empirical_mi_bits;
    j["symbols_sent"] = report.symbols_sent;
    j["symbols_delivered"] = report.symbols_delivered;
    auto log = nlohmann::ordered_json::array();
    for (const auto& [a, b] : report.symbol_log) {
        log.push_back({a, b});
    }
    j["symbol_log"] = std::move(log);
    return j.dump();
}

}  // namespace chankit::sim
