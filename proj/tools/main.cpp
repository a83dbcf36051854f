#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "chankit/spec_io.hpp"

namespace {

using namespace chankit;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitChannel = 3;
constexpr int kExitNoCandidates = 4;
constexpr int kExitIo = 5;

struct Options {
    std::string format = "table";
    std::string out_path;
    std::string precision = "fixed6";
    bool dump_wire = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> timeout_ticks;
};

std::string fmt_bits(double v, const Options& opt) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    if (opt.precision == "full") {
        std::snprintf(buf, sizeof buf, "%.17g", v);
    } else {
        std::snprintf(buf, sizeof buf, "%.6f", v);
    }
    return buf;
}

void emit(const Options& opt, const std::string& text) {
    if (opt.out_path.empty()) {
        std::cout << text;
    } else {
        io::write_file(opt.out_path, text);
    }
}

int cmd_entropy(const std::string& path, const Options& opt) {
    const Distribution d = io::load_distribution(io::read_file(path));
    const RelativeInformation rel = relative_information(d);
    std::ostringstream os;
    if (opt.format == "csv") {
        os << "entropy_bits,bound_bits,slack_bits\n"
           << fmt_bits(rel.entropy_bits, opt) << ',' << fmt_bits(rel.bound_bits, opt) << ','
           << fmt_bits(rel.slack_bits, opt) << '\n';
    } else {
        os << "entropy=" << fmt_bits(rel.entropy_bits, opt)
           << " bound=" << fmt_bits(rel.bound_bits, opt)
           << " slack=" << fmt_bits(rel.slack_bits, opt) << '\n';
    }
    emit(opt, os.str());
    return kExitOk;
}

void print_metrics(std::ostream& os, const ChannelMetrics& m, const Options& opt) {
    if (opt.format == "csv") {
        os << "h_a_bits,h_b_bits,mi_bits,mb_bits,s_bound_bits,variation_bits\n"
           << fmt_bits(m.h_a_bits, opt) << ',' << fmt_bits(m.h_b_bits, opt) << ','
           << fmt_bits(m.mi_bits, opt) << ',' << fmt_bits(m.mb_bits, opt) << ','
           << fmt_bits(m.s_bound_bits, opt) << ',' << fmt_bits(m.variation_bits, opt) << '\n';
    } else {
        os << "h_a=" << fmt_bits(m.h_a_bits, opt) << " h_b=" << fmt_bits(m.h_b_bits, opt)
           << " mi=" << fmt_bits(m.mi_bits, opt) << " mb=" << fmt_bits(m.mb_bits, opt)
           << " s_bound=" << fmt_bits(m.s_bound_bits, opt)
           << " variation=" << fmt_bits(m.variation_bits, opt) << '\n';
    }
}

int cmd_channel(const std::string& path, const Options& opt) {
    const io::ChannelSpec spec = io::load_channel_spec(io::read_file(path));
    const Distribution source =
        spec.source ? *spec.source : Distribution::uniform(spec.cs.tx.count());
    const ChannelMetrics m = channel_metrics(spec.cs, source, spec.noise);
    std::ostringstream os;
    print_metrics(os, m, opt);
    emit(opt, os.str());
    return kExitOk;
}

int cmd_system(const std::string& path, const Options& opt) {
    const SystemOfConstraints sys = io::load_system_spec(io::read_file(path));
    const VariationReport report = system_variation(sys);
    std::ostringstream os;
    if (opt.format == "csv") {
        os << "layer_id,t,r,n,v_bits,s_bound_bits,included\n";
        for (const auto& row : report.per_layer) {
            os << row.layer_id << ',' << row.t << ',' << row.r << ',' << row.n << ','
               << fmt_bits(row.v_bits, opt) << ',' << fmt_bits(row.s_bound_bits, opt) << ','
               << (row.included ? "true" : "false") << '\n';
        }
    } else {
        for (const auto& row : report.per_layer) {
            os << "layer=" << row.layer_id << " t=" << row.t << " r=" << row.r << " n=" << row.n
               << " v=" << fmt_bits(row.v_bits, opt)
               << " s_bound=" << fmt_bits(row.s_bound_bits, opt)
               << (row.included ? " included" : " excluded") << '\n';
        }
        os << "total_v=" << fmt_bits(report.total_v_bits, opt)
           << " excluded=" << report.excluded_count << '\n';
    }
    emit(opt, os.str());
    return kExitOk;
}

int cmd_negotiate(const std::string& left_path, const std::string& right_path,
                  const Options& opt) {
    const auto left = io::load_capability_file(io::read_file(left_path), "left");
    const auto right = io::load_capability_file(io::read_file(right_path), "right");

    const auto ranking = etiquette::rank_selections(left.tree, right.tree);
    std::ostringstream os;
    if (ranking.empty()) {
        os << "no compatible mode\n";
        emit(opt, os.str());
        return kExitNoCandidates;
    }
    if (opt.format == "csv") {
        os << "rank,tx_mode,rx_mode,s_bits\n";
        for (std::size_t i = 0; i < ranking.size(); ++i) {
            os << (i + 1) << ',' << ranking[i].tx_mode_id << ',' << ranking[i].rx_mode_id << ','
               << fmt_bits(ranking[i].s_bits, opt) << '\n';
        }
        emit(opt, os.str());
        return kExitOk;
    }
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        os << "rank=" << (i + 1) << " tx=" << ranking[i].tx_mode_id
           << " rx=" << ranking[i].rx_mode_id << " s_bits=" << fmt_bits(ranking[i].s_bits, opt)
           << '\n';
    }
    const auto outcome =
        sim::negotiate(etiquette::make_session(left.id, right.id, left.tree),
                       etiquette::make_session(right.id, left.id, right.tree),
                       opt.timeout_ticks.value_or(5'000'000));
    for (const auto& entry : outcome.transcript) {
        os << "t=" << entry.tick << " dir=" << entry.direction << " kind=" << entry.kind;
        if (opt.dump_wire && !entry.wire.empty()) {
            os << " wire=" << etiquette::to_hex(entry.wire);
        }
        os << '\n';
    }
    if (outcome.left.phase == etiquette::Phase::Established) {
        os << "result=established tx=" << outcome.left.selected->tx_mode_id
           << " rx=" << outcome.left.selected->rx_mode_id << '\n';
    } else {
        os << "result=failed reason=" << outcome.left.failure_reason.value_or("unknown") << '\n';
    }
    emit(opt, os.str());
    return kExitOk;
}

int cmd_simulate(const std::string& path, const Options& opt) {
    io::Scenario sc = io::load_scenario(io::read_file(path));
    if (opt.seed) sc.config.seed = *opt.seed;
    if (opt.timeout_ticks) sc.config.timeout_ticks = *opt.timeout_ticks;
    const sim::SimReport report = sim::run(sc.left, sc.right, sc.config);

    std::ostringstream os;
    if (opt.format == "csv") {
        os << "symbol_index,tx_element,rx_element\n";
        for (std::size_t i = 0; i < report.symbol_log.size(); ++i) {
            const auto [a, b] = report.symbol_log[i];
            os << i << ',' << report.tx_labels[static_cast<std::size_t>(a)] << ','
               << (b >= 0 ? report.rx_labels[static_cast<std::size_t>(b)] : "") << '\n';
        }
        emit(opt, os.str());
        return kExitOk;
    }
    for (const auto& entry : report.transcript) {
        os << "t=" << entry.tick << " dir=" << entry.direction << " kind=" << entry.kind;
        if (opt.dump_wire && !entry.wire.empty()) {
            os << " wire=" << etiquette::to_hex(entry.wire);
        }
        os << '\n';
    }
    if (report.selected) {
        os << "selected tx=" << report.selected->tx_mode_id
           << " rx=" << report.selected->rx_mode_id << '\n';
        print_metrics(os, report.analytic, opt);
        os << "empirical_mi=" << fmt_bits(report.empirical_mi_bits, opt)
           << " symbols_sent=" << report.symbols_sent
           << " symbols_delivered=" << report.symbols_delivered << '\n';
    } else {
        os << "result=failed reason=" << report.failure_reason.value_or("unknown") << '\n';
    }
    emit(opt, os.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"information channel metrics and etiquette negotiation toolkit"};
    app.require_subcommand(1);

    Options opt;
    std::string dist_path, channel_path, system_path, scenario_path;
    std::string caps_left, caps_right;
    std::uint64_t seed_value = 0;
    std::uint64_t timeout_value = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"table", "csv"}));
        sub->add_option("--out", opt.out_path, "write output to a file instead of stdout");
        sub->add_option("--precision", opt.precision, "numeric precision")
            ->check(CLI::IsMember({"fixed6", "full"}));
    };

    auto* entropy_cmd = app.add_subcommand("entropy", "entropy of a distribution file");
    entropy_cmd->add_option("file", dist_path, "distribution JSON file")->required();
    add_common(entropy_cmd);

    auto* channel_cmd = app.add_subcommand("channel", "metrics of a channel spec");
    channel_cmd->add_option("file", channel_path, "channel spec JSON file")->required();
    add_common(channel_cmd);

    auto* system_cmd = app.add_subcommand("system", "variation report of a system spec");
    system_cmd->add_option("file", system_path, "system spec JSON file")->required();
    add_common(system_cmd);

    auto* negotiate_cmd = app.add_subcommand("negotiate", "negotiate between two capability files");
    negotiate_cmd->add_option("left", caps_left, "initiator capability file")->required();
    negotiate_cmd->add_option("right", caps_right, "responder capability file")->required();
    negotiate_cmd->add_flag("--dump-wire", opt.dump_wire, "print encoded message bytes");
    auto* neg_timeout =
        negotiate_cmd->add_option("--timeout-ticks", timeout_value, "per-phase timeout");
    add_common(negotiate_cmd);

    auto* simulate_cmd = app.add_subcommand("simulate", "run a scenario file");
    simulate_cmd->add_option("file", scenario_path, "scenario JSON file")->required();
    auto* sim_seed = simulate_cmd->add_option("--seed", seed_value, "override the scenario seed");
    auto* sim_timeout =
        simulate_cmd->add_option("--timeout-ticks", timeout_value, "per-phase timeout");
    simulate_cmd->add_flag("--dump-wire", opt.dump_wire, "print encoded message bytes");
    add_common(simulate_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitValidation;
    }

    if (sim_seed->count() > 0) opt.seed = seed_value;
    if (sim_timeout->count() > 0 || neg_timeout->count() > 0) opt.timeout_ticks = timeout_value;

    try {
        if (entropy_cmd->parsed()) return cmd_entropy(dist_path, opt);
        if (channel_cmd->parsed()) return cmd_channel(channel_path, opt);
        if (system_cmd->parsed()) return cmd_system(system_path, opt);
        if (negotiate_cmd->parsed()) return cmd_negotiate(caps_left, caps_right, opt);
        if (simulate_cmd->parsed()) return cmd_simulate(scenario_path, opt);
    } catch (const no_channel_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitChannel;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitOk;
}
