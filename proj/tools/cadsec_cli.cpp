// Copyright 2026 The cadsec Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cadsec: analyze channels, solve critical error rates, sweep protocol
// families and simulate CAD. Exit codes: 0 ok, 2 usage or validation
// error, 1 internal error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cadsec/cadsec.hpp"
#include "cadsec/io.hpp"

namespace {

using namespace cadsec;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

std::string fmt9(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

void emit(const Json &doc) { std::cout << doc.dump(2) << '\n'; }

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

struct AnalyzeOptions {
    std::string file;
    bool canonicalize = false;
    std::vector<int> n_list{1, 2, 4, 8, 16, 32, 64};
    int n_max = 1024;
    bool pretty = false;
};

Json rate_table(const std::vector<int> &n_list, const auto &rate_at) {
    Json rows = Json::array();
    for (int N : n_list) rows.push_back(to_json(rate_at(N)));
    return rows;
}

Json analyze_qubit(const BellDiagonalState &input, const AnalyzeOptions &opt) {
    Json doc{{"channel", to_json(input)}};
    BellDiagonalState state = input;
    if (opt.canonicalize) {
        const auto cf = canonicalize(input);
        state = cf.state;
        doc["canonical"] = Json{{"lambdas", to_json(cf.state)["lambdas"]}, {"permutation", to_json(cf.permutation)}};
    }
    const auto ens = qubit_ensemble(state);
    const auto verdict = qubit_security(ens);
    const auto n_star = minimal_block_size(ens, opt.n_max);
    doc["entangled"] = is_entangled(state);
    doc["qber"] = num(qber(state));
    doc["F"] = num(1.0 - qber(state));
    doc["D"] = Json::array({num(qber(state))});
    doc["ensemble"] = Json{{"eps", num(ens.eps)}, {"lambda_eq", num(ens.lambda_eq)}, {"lambda_dif", num(ens.lambda_dif)}};
    doc["security"] = to_json(verdict);
    doc["n_max"] = opt.n_max;
    doc["minimal_N"] = n_star ? Json(*n_star) : Json(nullptr);
    doc["rates"] = rate_table(opt.n_list, [&](int N) { return rate_post_cad_qubit(ens, N); });
    doc["attack"] = ens.eps < 1.0 ? attack_summary(attack_oneway_check(ens, 1, opt.n_max)) : Json(nullptr);
    return doc;
}

Json analyze_qudit(const GeneralizedPauliChannel &ch, const AnalyzeOptions &opt) {
    if (opt.canonicalize) throw Error(ErrorCode::UnsupportedCombination, "--canonicalize applies to qubit channels only");
    Json doc{{"channel", to_json(ch)}};
    const auto ens = qudit_ensemble(ch);
    const auto verdict = qudit_security(ens);
    const auto n_star = minimal_block_size_d(ens, opt.n_max);
    double p_max = 0.0;
    for (int m = 0; m < ch.dim(); ++m)
        for (int n = 0; n < ch.dim(); ++n) p_max = std::max(p_max, ch.p(m, n));
    doc["entangled_witness"] = p_max > 1.0 / ch.dim();
    doc["F"] = num(ens.fidelity());
    Json D = Json::array();
    for (double dj : ens.disturbances()) D.push_back(num(dj));
    doc["D"] = D;
    doc["security"] = to_json(verdict);
    doc["n_max"] = opt.n_max;
    doc["minimal_N"] = n_star ? Json(*n_star) : Json(nullptr);
    doc["rates"] = rate_table(opt.n_list, [&](int N) { return holevo_post_cad_d(ens, N); });
    doc["attack"] = nullptr;
    return doc;
}

void print_analysis(const Json &doc) {
    std::cout << "channel      " << doc["channel"].dump() << '\n';
    if (doc.contains("canonical")) std::cout << "canonical    " << doc["canonical"].dump() << '\n';
    if (doc.contains("entangled")) std::cout << "entangled    " << (doc["entangled"].get<bool>() ? "yes" : "no") << '\n';
    if (doc.contains("entangled_witness"))
        std::cout << "witness      " << (doc["entangled_witness"].get<bool>() ? "entangled" : "inconclusive") << '\n';
    std::cout << "F            " << doc["F"].dump() << "   D " << doc["D"].dump() << '\n';
    std::cout << "secure       " << (doc["security"]["secure"].get<bool>() ? "yes" : "no") << "   margin "
              << doc["security"]["margin"].dump() << '\n';
    std::cout << "minimal N    " << (doc["minimal_N"].is_null() ? "none <= " + std::to_string(doc["n_max"].get<int>())
                                                                 : doc["minimal_N"].dump())
              << '\n';
    std::cout << "    N        I(A:B)        chi(A:E)      rate\n";
    for (const auto &r : doc["rates"]) {
        char line[160];
        std::snprintf(line, sizeof line, "%5d  %12s  %12s  %12s\n", r["N"].get<int>(), r["i_ab"].dump().c_str(),
                      r["i_ae"].dump().c_str(), r["rate"].dump().c_str());
        std::cout << line;
    }
    if (!doc["attack"].is_null()) std::cout << "attack       " << doc["attack"]["verdict"].get<std::string>() << '\n';
}

int cmd_analyze(const AnalyzeOptions &opt) {
    if (opt.n_max < 1) throw Error(ErrorCode::OutOfRange, "--n-max must be >= 1");
    for (int N : opt.n_list)
        if (N < 1) throw Error(ErrorCode::OutOfRange, "--n-list entries must be >= 1");
    const Channel ch = load_channel(opt.file);
    const Json doc = std::holds_alternative<BellDiagonalState>(ch)
                         ? analyze_qubit(std::get<BellDiagonalState>(ch), opt)
                         : analyze_qudit(std::get<GeneralizedPauliChannel>(ch), opt);
    if (opt.pretty)
        print_analysis(doc);
    else
        emit(doc);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// critical
// ---------------------------------------------------------------------------

struct CriticalOptions {
    std::string protocol;
    int d = 2;
    std::string mode = "two-way";
    bool pretty = false;
};

int cmd_critical(const CriticalOptions &opt) {
    const auto report = critical_rate(parse_protocol(opt.protocol), parse_mode(opt.mode), opt.d);
    const Json doc = to_json(report);
    if (!opt.pretty) {
        emit(doc);
        return kExitOk;
    }
    std::cout << opt.protocol << " d=" << opt.d << " " << opt.mode << ": critical error rate " << fmt9(report.value)
              << '\n';
    if (report.closed_form)
        std::cout << "closed form " << fmt9(*report.closed_form) << ", difference " << fmt9(report.value - *report.closed_form)
                  << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepOptions {
    std::string protocol;
    int d = 2;
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
    std::string out;
    int n_max = 1024;
};

struct SweepRow {
    double e;
    double margin;
    std::optional<int> n_star;
    double rate = 0.0;
};

SweepRow sweep_row(Protocol protocol, int d, double e, int n_max) {
    const auto point = family_margin(protocol, AnalysisMode::TwoWay, d, e);
    SweepRow row{e, point.margin, std::nullopt};
    if (protocol == Protocol::BB84 || protocol == Protocol::SixState) {
        const auto state = protocol == Protocol::BB84 ? bb84_attack_state(e, point.parameter) : sixstate_attack_state(e);
        const auto ens = qubit_ensemble(state);
        row.n_star = minimal_block_size(ens, n_max);
        if (row.n_star) row.rate = rate_post_cad_qubit(ens, *row.n_star).rate;
    } else {
        const auto kind = protocol == Protocol::TwoBases ? QuditProtocol::TwoBases : QuditProtocol::DPlusOneBases;
        const auto ens = qudit_ensemble(protocol_channel_d(kind, d, 1.0 - e, point.parameter));
        row.n_star = minimal_block_size_d(ens, n_max);
        if (row.n_star) row.rate = holevo_post_cad_d(ens, *row.n_star).rate;
    }
    return row;
}

int cmd_sweep(const SweepOptions &opt) {
    const Protocol protocol = parse_protocol(opt.protocol);
    if ((protocol == Protocol::BB84 || protocol == Protocol::SixState) && opt.d != 2)
        throw Error(ErrorCode::UnsupportedCombination, opt.protocol + " requires d = 2");
    if (opt.d < 2) throw Error(ErrorCode::OutOfRange, "--d must be >= 2");
    if (!(opt.from < opt.to)) throw Error(ErrorCode::OutOfRange, "--from must be smaller than --to");
    if (opt.steps < 2) throw Error(ErrorCode::OutOfRange, "--steps must be >= 2");
    if (opt.n_max < 1) throw Error(ErrorCode::OutOfRange, "--n-max must be >= 1");

    std::ostringstream csv;
    csv << "error_rate,margin,secure,minimal_N,rate_at_minimal_N\n";
    for (int i = 0; i < opt.steps; ++i) {
        const double e = opt.from + (opt.to - opt.from) * i / (opt.steps - 1);
        const SweepRow row = sweep_row(protocol, opt.d, e, opt.n_max);
        csv << fmt9(round_significant(row.e)) << ',' << fmt9(row.margin) << ',' << (row.margin > 0.0 ? "true" : "false")
            << ',' << (row.n_star ? std::to_string(*row.n_star) : "") << ','
            << (row.n_star ? fmt9(row.rate) : "") << '\n';
    }
    if (opt.out.empty() || opt.out == "-") {
        std::cout << csv.str();
        return kExitOk;
    }
    std::ofstream file(opt.out);
    if (!file) throw Error(ErrorCode::IOError, "cannot write '" + opt.out + "'");
    file << csv.str();
    if (!file) throw Error(ErrorCode::IOError, "write to '" + opt.out + "' failed");
    return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOptions {
    std::string file;
    int N = 1;
    std::int64_t trials = 0;
    std::string variant = "CAD1";
    std::uint64_t seed = 1;
    unsigned threads = 0;
    bool pretty = false;
};

int cmd_simulate(const SimulateOptions &opt) {
    if (opt.trials < 1) throw Error(ErrorCode::OutOfRange, "--trials must be >= 1");
    const auto variant = parse_variant(opt.variant);
    const auto fd = fidelity_disturbances(as_qudit(load_channel(opt.file)));
    const auto report = simulate_cad(fd.F, fd.D, opt.N, static_cast<std::uint64_t>(opt.trials), variant, opt.seed, opt.threads);
    const auto stats = cad_statistics_d(fd.F, fd.D, opt.N);

    Json doc = to_json(report);
    Json predicted_classes = Json::array({num(stats.fidelity_after)});
    for (double dj : stats.disturbances_after) predicted_classes.push_back(num(dj));
    doc["analytic"] = Json{{"p_ok", num(stats.p_ok)}, {"class_probabilities", predicted_classes}};
    Json z_classes = Json::array();
    for (int j = 0; j < report.d; ++j) {
        const double pj = j == 0 ? stats.fidelity_after : stats.disturbances_after[static_cast<std::size_t>(j - 1)];
        z_classes.push_back(num(binomial_z(report.error_counts[static_cast<std::size_t>(j)], report.accepted, pj)));
    }
    doc["z_scores"] = Json{{"acceptance", num(binomial_z(report.accepted, report.trials, stats.p_ok))},
                           {"classes", z_classes}};
    if (!opt.pretty) {
        emit(doc);
        return kExitOk;
    }
    std::cout << to_string(variant) << " d=" << report.d << " N=" << report.N << " seed=" << report.seed << '\n';
    std::cout << "accepted " << report.accepted << " / " << report.trials << "   predicted p_ok " << fmt9(stats.p_ok)
              << "   z " << doc["z_scores"]["acceptance"].dump() << '\n';
    for (int j = 0; j < report.d; ++j) {
        std::cout << "class " << j << "  count " << report.error_counts[static_cast<std::size_t>(j)] << "  predicted "
                  << predicted_classes[static_cast<std::size_t>(j)].dump() << "  z " << z_classes[static_cast<std::size_t>(j)].dump()
                  << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Secret-key distillability of Pauli channels under advantage distillation"};
    app.require_subcommand(1);

    AnalyzeOptions analyze;
    auto *a = app.add_subcommand("analyze", "Analyze a channel file");
    a->add_option("channel_file", analyze.file, "Channel document (JSON)")->required();
    a->add_flag("--canonicalize", analyze.canonicalize, "Report and analyze the canonical form (qubit only)");
    a->add_option("--n-list", analyze.n_list, "Block sizes for the rate table")->delimiter(',');
    a->add_option("--n-max", analyze.n_max, "Largest block size searched");
    a->add_flag("--pretty", analyze.pretty, "Human-readable summary");

    CriticalOptions critical;
    auto *c = app.add_subcommand("critical", "Critical error rate of a protocol");
    c->add_option("--protocol", critical.protocol, "bb84 | sixstate | two-bases | d-plus-1-bases")->required();
    c->add_option("--d", critical.d, "Dimension (qudit protocols)");
    c->add_option("--mode", critical.mode, "two-way | one-way-N1");
    c->add_flag("--pretty", critical.pretty, "Human-readable summary");

    SweepOptions sweep;
    auto *s = app.add_subcommand("sweep", "Sweep a protocol family over error rates (CSV)");
    s->add_option("--protocol", sweep.protocol, "bb84 | sixstate | two-bases | d-plus-1-bases")->required();
    s->add_option("--d", sweep.d, "Dimension (qudit protocols)");
    s->add_option("--from", sweep.from, "First error rate")->required();
    s->add_option("--to", sweep.to, "Last error rate")->required();
    s->add_option("--steps", sweep.steps, "Number of grid points (>= 2)")->required();
    s->add_option("--out", sweep.out, "Output CSV path ('-' for stdout)");
    s->add_option("--n-max", sweep.n_max, "Largest block size searched");

    SimulateOptions sim;
    auto *m = app.add_subcommand("simulate", "Monte Carlo simulation of CAD");
    m->add_option("channel_file", sim.file, "Channel document (JSON)")->required();
    m->add_option("--N", sim.N, "Block size")->required();
    m->add_option("--trials", sim.trials, "Number of blocks")->required();
    m->add_option("--variant", sim.variant, "CAD1 | CAD2");
    m->add_option("--seed", sim.seed, "Master seed");
    m->add_option("--threads", sim.threads, "Worker threads (default: CADSEC_THREADS or hardware)");
    m->add_flag("--pretty", sim.pretty, "Human-readable summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (a->parsed()) return cmd_analyze(analyze);
        if (c->parsed()) return cmd_critical(critical);
        if (s->parsed()) return cmd_sweep(sweep);
        if (m->parsed()) return cmd_simulate(sim);
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}
