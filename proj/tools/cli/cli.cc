// Copyright 2026 The Biphoton Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "biphoton/measurement.h"
#include "biphoton/qstate.h"
#include "biphoton/serialization.h"

namespace biphoton::cli {

using nlohmann::ordered_json;

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 8> kCommands{{
    {Command::kScan, "scan"},
    {Command::kTrials, "trials"},
    {Command::kChsh, "chsh"},
    {Command::kNoSignal, "nosignal"},
    {Command::kZwm, "zwm"},
    {Command::kDecohere, "decohere"},
    {Command::kCat, "cat"},
    {Command::kAmbiguity, "ambiguity"},
}};

constexpr std::uint64_t kMaxTrials = 1'000'000'000;
constexpr std::uint64_t kMaxCatTrials = 10'000'000;
constexpr std::size_t kMaxPoints = 1'000'000;
constexpr std::size_t kMaxGrid = 4096;
constexpr std::size_t kMaxSettingsCount = 1000;
constexpr unsigned kMaxThreads = 256;
constexpr double kNormSlack = 1e-6;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    while (!s.empty() && s.back() == ' ') {
        s.pop_back();
    }
    return s;
}

std::string squote(std::string_view s) {
    return "'" + std::string(s) + "'";
}

// sqrt(x) or -sqrt(x); plain reals otherwise.
double parse_real_term(std::string_view text) {
    text = trim(text);
    double sign = 1;
    std::string_view body = text;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        sign = body.front() == '-' ? -1 : 1;
        body.remove_prefix(1);
    }
    if (body.starts_with("sqrt(") && body.ends_with(")")) {
        double x = parse_real(body.substr(5, body.size() - 6));
        if (x < 0) {
            throw CliError("sqrt of a negative number in " + squote(text));
        }
        return sign * std::sqrt(x);
    }
    return parse_real(text);
}

bool parse_bool(std::string_view text) {
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
        return false;
    }
    throw CliError("expected a boolean, got " + squote(text));
}

std::size_t parse_bounded(std::string_view text, std::uint64_t lo, std::uint64_t hi) {
    auto v = parse_unsigned(text);
    if (v < lo || v > hi) {
        throw CliError("value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) +
                       "]");
    }
    return static_cast<std::size_t>(v);
}

double finite_angle(std::string_view text) {
    double x = parse_angle(text);
    if (!std::isfinite(x)) {
        throw CliError("angle must be finite");
    }
    return x;
}

std::string format_complex(Complex z) {
    std::string im = format_double(std::abs(z.imag()));
    return format_double(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + im + "i";
}

struct Setting {
    std::string default_value;
    std::string help;
    std::function<void(RunConfig &, std::string_view)> apply;
    std::function<std::optional<std::string>(const RunConfig &)> show;
};

std::string show_uint(std::uint64_t v) {
    return std::to_string(v);
}

const std::vector<std::pair<std::string, Setting>> &settings_table() {
    static const std::vector<std::pair<std::string, Setting>> table = [] {
        const RunConfig d;
        std::vector<std::pair<std::string, Setting>> t;
        auto add = [&](std::string key, std::string help, std::function<void(RunConfig &, std::string_view)> apply,
                       std::function<std::optional<std::string>(const RunConfig &)> show) {
            auto def = show(d);
            t.push_back({std::move(key), Setting{def.value_or(""), std::move(help), std::move(apply), std::move(show)}});
        };
        add(
            "command", "experiment to run (" + [] {
                std::string names;
                for (auto [c, n] : kCommands) {
                    names += (names.empty() ? "" : ", ") + std::string(n);
                }
                return names;
            }() + ")",
            [](RunConfig &c, std::string_view v) { c.command = parse_command(trim(v)); },
            [](const RunConfig &c) -> std::optional<std::string> {
                if (!c.command) {
                    return std::nullopt;
                }
                return std::string(command_name(*c.command));
            });
        add(
            "seed", "64-bit root seed (BIPHOTON_SEED is used when neither flag nor scenario sets it)",
            [](RunConfig &c, std::string_view v) { c.seed = parse_unsigned(v); },
            [](const RunConfig &c) { return std::optional(show_uint(c.seed)); });
        add(
            "trials", "sampled trials per setting; 0 skips sampling where the command allows it",
            [](RunConfig &c, std::string_view v) { c.trials = parse_bounded(v, 0, kMaxTrials); },
            [](const RunConfig &c) { return std::optional(show_uint(c.trials)); });
        add(
            "points", "scan: evenly spaced phase differences over [0, 2pi)",
            [](RunConfig &c, std::string_view v) { c.points = parse_bounded(v, 2, kMaxPoints); },
            [](const RunConfig &c) { return std::optional(show_uint(c.points)); });
        add(
            "grid", "nosignal: side of the analytic settings lattice",
            [](RunConfig &c, std::string_view v) { c.grid = parse_bounded(v, 2, kMaxGrid); },
            [](const RunConfig &c) { return std::optional(show_uint(c.grid)); });
        add(
            "settings_count", "nosignal: random settings sampled when trials > 0",
            [](RunConfig &c, std::string_view v) { c.settings_count = parse_bounded(v, 1, kMaxSettingsCount); },
            [](const RunConfig &c) { return std::optional(show_uint(c.settings_count)); });
        add(
            "phi_s", "trials: phase on S (radians, pi/k shorthand allowed)",
            [](RunConfig &c, std::string_view v) { c.settings.phi_s = finite_angle(v); },
            [](const RunConfig &c) { return std::optional(format_double(c.settings.phi_s)); });
        add(
            "phi_a", "trials: phase on A (radians)",
            [](RunConfig &c, std::string_view v) { c.settings.phi_a = finite_angle(v); },
            [](const RunConfig &c) { return std::optional(format_double(c.settings.phi_a)); });
        add(
            "a", "chsh: first S setting", [](RunConfig &c, std::string_view v) { c.chsh.a = finite_angle(v); },
            [](const RunConfig &c) { return std::optional(format_double(c.chsh.a)); });
        add(
            "a_prime", "chsh: second S setting",
            [](RunConfig &c, std::string_view v) { c.chsh.a_prime = finite_angle(v); },
            [](const RunConfig &c) { return std::optional(format_double(c.chsh.a_prime)); });
        add(
            "b", "chsh: first A setting", [](RunConfig &c, std::string_view v) { c.chsh.b = finite_angle(v); },
            [](const RunConfig &c) { return std::optional(format_double(c.chsh.b)); });
        add(
            "b_prime", "chsh: second A setting",
            [](RunConfig &c, std::string_view v) { c.chsh.b_prime = finite_angle(v); },
            [](const RunConfig &c) { return std::optional(format_double(c.chsh.b_prime)); });
        add(
            "c1", "cat, ambiguity: amplitude of s1 (x, sqrt(x), a+bi)",
            [](RunConfig &c, std::string_view v) { c.c1 = parse_complex(v); },
            [](const RunConfig &c) { return std::optional(format_complex(c.c1)); });
        add(
            "c2", "cat, ambiguity: amplitude of s2",
            [](RunConfig &c, std::string_view v) { c.c2 = parse_complex(v); },
            [](const RunConfig &c) { return std::optional(format_complex(c.c2)); });
        add(
            "gamma", "zwm: partner overlap, |gamma| <= 1 (unset: sweep 0, 0.1, ..., 1)",
            [](RunConfig &c, std::string_view v) {
                Complex g = parse_complex(v);
                if (std::abs(g) > 1 + 1e-12) {
                    throw CliError("|gamma| must not exceed 1");
                }
                c.gamma = g;
            },
            [](const RunConfig &c) -> std::optional<std::string> {
                if (!c.gamma) {
                    return std::nullopt;
                }
                return format_complex(*c.gamma);
            });
        add(
            "theta", "decohere: per-collision pointer angle in [0, pi/2]",
            [](RunConfig &c, std::string_view v) {
                double th = finite_angle(v);
                DecoherenceConfig{th, 0}.validate();
                c.decoherence.theta = th;
            },
            [](const RunConfig &c) { return std::optional(format_double(c.decoherence.theta)); });
        add(
            "collisions", "decohere: number of environment collisions",
            [](RunConfig &c, std::string_view v) { c.decoherence.n_collisions = parse_bounded(v, 0, kMaxCollisions); },
            [](const RunConfig &c) { return std::optional(show_uint(c.decoherence.n_collisions)); });
        add(
            "threads", "worker threads, 0 = hardware concurrency; outputs do not depend on it",
            [](RunConfig &c, std::string_view v) { c.threads = static_cast<unsigned>(parse_bounded(v, 0, kMaxThreads)); },
            [](const RunConfig &c) { return std::optional(show_uint(c.threads)); });
        add(
            "out_csv", "CSV output path ('-' for stdout)",
            [](RunConfig &c, std::string_view v) { c.out_csv = std::string(trim(v)); },
            [](const RunConfig &c) { return std::optional(c.out_csv); });
        add(
            "out_json", "JSON summary path ('-' for stdout)",
            [](RunConfig &c, std::string_view v) { c.out_json = std::string(trim(v)); },
            [](const RunConfig &c) { return std::optional(c.out_json); });
        add(
            "quiet", "suppress the gate summary", [](RunConfig &c, std::string_view v) { c.quiet = parse_bool(v); },
            [](const RunConfig &c) { return std::optional(std::string(c.quiet ? "true" : "false")); });
        add(
            "timing", "add wall-clock timing to the JSON (breaks byte-identical output)",
            [](RunConfig &c, std::string_view v) { c.timing = parse_bool(v); },
            [](const RunConfig &c) { return std::optional(std::string(c.timing ? "true" : "false")); });
        return t;
    }();
    return table;
}

const Setting *find_setting(std::string_view key) {
    for (const auto &[k, s] : settings_table()) {
        if (k == key) {
            return &s;
        }
    }
    return nullptr;
}

std::string flag_name(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return "--" + key;
}

// ---- reporting helpers ----

struct Report {
    std::vector<Gate> gates;

    void add(std::string name, double value, double tolerance, bool passed) {
        gates.push_back({std::move(name), passed, value, tolerance});
    }
    // Passes when value <= tolerance.
    void at_most(std::string name, double value, double tolerance) {
        add(std::move(name), value, tolerance, value <= tolerance);
    }
};

std::string csv_value(double x) {
    return format_double(x);
}

std::string csv_value(std::optional<double> x) {
    return x ? format_double(*x) : "";
}

ordered_json complex_pair(Complex z) {
    return ordered_json::array({z.real(), z.imag()});
}

ordered_json ledger_json(const TrialLedger &l) {
    return ordered_json{{"n11", l.n11}, {"n12", l.n12}, {"n21", l.n21}, {"n22", l.n22}};
}

ordered_json calibration_json(const CalibrationRecord &cal) {
    return ordered_json{{"setup_phase", cal.setup_phase},
                        {"origin_shift", cal.origin_shift},
                        {"w", cal.w},
                        {"convention", cal.convention}};
}

// |freq - p| in units of the binomial sigma; a zero-variance cell must match exactly.
double z_score(double frequency, double p, std::uint64_t n) {
    double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
    double diff = std::abs(frequency - p);
    if (sigma == 0) {
        return diff == 0 ? 0 : std::numeric_limits<double>::infinity();
    }
    return diff / sigma;
}

std::pair<Complex, Complex> normalized_amplitudes(const RunConfig &cfg) {
    double n = std::norm(cfg.c1) + std::norm(cfg.c2);
    double scale = 1 / std::sqrt(n);
    return {cfg.c1 * scale, cfg.c2 * scale};
}

struct Body {
    ordered_json config = ordered_json::object();
    ordered_json results = ordered_json::object();
    std::string csv;
};

// ---- commands ----

Body run_scan(const RunConfig &cfg, Report &report) {
    Body b;
    b.config = {{"points", cfg.points}, {"trials_per_point", cfg.trials}};
    auto cal = calibrate();
    auto scan = phase_scan(cfg.points, cfg.trials, cfg.seed, cal, cfg.threads);
    std::ostringstream csv;
    csv << "delta,c_analytic,c_empirical,n11,n12,n21,n22\n";
    double worst_analytic = 0;
    double worst_empirical = 0;
    for (const auto &pt : scan) {
        worst_analytic = std::max(worst_analytic, std::abs(pt.c_analytic - std::cos(pt.delta)));
        csv << csv_value(pt.delta) << ',' << csv_value(pt.c_analytic) << ',' << csv_value(pt.c_empirical);
        if (pt.ledger) {
            worst_empirical = std::max(worst_empirical, std::abs(*pt.c_empirical - pt.c_analytic));
            csv << ',' << pt.ledger->n11 << ',' << pt.ledger->n12 << ',' << pt.ledger->n21 << ',' << pt.ledger->n22;
        } else {
            csv << ",,,,";
        }
        csv << '\n';
    }
    b.csv = csv.str();
    b.results["calibration"] = calibration_json(cal);
    b.results["max_analytic_deviation"] = worst_analytic;
    report.at_most("analytic_correlation_is_cosine", worst_analytic, 1e-9);
    if (cfg.trials > 0) {
        // 0.02 at 1e5 trials, scaled as 1/sqrt(n).
        double tol = 0.02 * std::sqrt(1e5 / static_cast<double>(cfg.trials));
        b.results["max_empirical_deviation"] = worst_empirical;
        report.at_most("empirical_correlation_within_bound", worst_empirical, tol);
    }
    return b;
}

Body run_trials_command(const RunConfig &cfg, Report &report) {
    if (cfg.trials == 0) {
        throw CliError("trials: --trials must be at least 1");
    }
    Body b;
    b.config = {{"phi_s", cfg.settings.phi_s}, {"phi_a", cfg.settings.phi_a}, {"trials", cfg.trials}};
    auto cal = calibrate();
    auto p = rto_joint_probs(cfg.settings, cal);
    auto l = run_trials(cfg.settings, cal, cfg.trials, cfg.seed, 0, cfg.threads);
    const std::array<std::pair<const char *, std::pair<std::uint64_t, double>>, 4> cells{{
        {"11", {l.n11, p.p11}},
        {"12", {l.n12, p.p12}},
        {"21", {l.n21, p.p21}},
        {"22", {l.n22, p.p22}},
    }};
    std::ostringstream csv;
    csv << "outcome,count,probability,frequency\n";
    double worst_z = 0;
    for (const auto &[name, cell] : cells) {
        auto [count, prob] = cell;
        double f = l.frequency(count);
        worst_z = std::max(worst_z, z_score(f, prob, cfg.trials));
        csv << name << ',' << count << ',' << csv_value(prob) << ',' << csv_value(f) << '\n';
    }
    b.csv = csv.str();
    b.results["ledger"] = ledger_json(l);
    b.results["probabilities"] = {{"p11", p.p11}, {"p12", p.p12}, {"p21", p.p21}, {"p22", p.p22}};
    b.results["correlation_analytic"] = correlation(cfg.settings, cal);
    b.results["correlation_empirical"] = l.correlation();
    report.at_most("probabilities_sum_to_one", std::abs(p.sum() - 1), 1e-12);
    report.at_most("counts_within_4_sigma", worst_z, kSigmaMultiple);
    return b;
}

Body run_chsh(const RunConfig &cfg, Report &report) {
    Body b;
    b.config = {{"a", cfg.chsh.a},
                {"a_prime", cfg.chsh.a_prime},
                {"b", cfg.chsh.b},
                {"b_prime", cfg.chsh.b_prime},
                {"trials_per_pair", cfg.trials}};
    auto cal = calibrate();
    auto r = cfg.trials > 0 ? chsh_empirical(cfg.chsh, cal, cfg.trials, cfg.seed, cfg.threads) : chsh(cfg.chsh, cal);
    constexpr std::array<const char *, 4> names{"ab", "ab'", "a'b", "a'b'"};
    std::ostringstream csv;
    csv << "pair,phi_s,phi_a,e_analytic,e_empirical,n11,n12,n21,n22\n";
    double worst_e = 0;
    double worst_z = 0;
    for (std::size_t k = 0; k < 4; k++) {
        worst_e = std::max(worst_e, std::abs(r.e[k]));
        csv << names[k] << ',' << csv_value(r.pairs[k].phi_s) << ',' << csv_value(r.pairs[k].phi_a) << ','
            << csv_value(r.e[k]);
        if (r.ledgers) {
            const auto &l = (*r.ledgers)[k];
            double e = (*r.e_empirical)[k];
            double sigma = std::sqrt((1 - r.e[k] * r.e[k]) / static_cast<double>(cfg.trials));
            double diff = std::abs(e - r.e[k]);
            worst_z = std::max(worst_z, sigma == 0 ? (diff == 0 ? 0 : std::numeric_limits<double>::infinity())
                                                   : diff / sigma);
            csv << ',' << csv_value(e) << ',' << l.n11 << ',' << l.n12 << ',' << l.n21 << ',' << l.n22;
        } else {
            csv << ",,,,,";
        }
        csv << '\n';
    }
    b.csv = csv.str();
    b.results["s"] = r.s;
    if (r.s_empirical) {
        b.results["s_empirical"] = *r.s_empirical;
    }
    b.results["classical_bound"] = 2.0;
    b.results["tsirelson_bound"] = 2 * std::numbers::sqrt2;
    b.results["violates_classical_bound"] = r.s > 2;
    report.at_most("correlations_bounded", worst_e, 1 + 1e-10);
    report.at_most("s_within_tsirelson", r.s, 2 * std::numbers::sqrt2 + 1e-9);
    if (r.ledgers) {
        report.at_most("empirical_correlations_within_4_sigma", worst_z, kSigmaMultiple);
    }
    return b;
}

Body run_nosignal(const RunConfig &cfg, Report &report) {
    Body b;
    b.config = {{"grid", cfg.grid}, {"trials", cfg.trials}, {"settings_count", cfg.settings_count}};
    auto cal = calibrate();
    auto r = no_signaling_sweep(cfg.grid, cfg.trials, cfg.seed, cal, cfg.settings_count, cfg.threads);
    std::ostringstream csv;
    csv << "kind,phi_s,phi_a,p_a1,p_s1,n_trials,freq_a1,freq_s1\n";
    for (const auto &g : r.analytic) {
        csv << "analytic," << csv_value(g.settings.phi_s) << ',' << csv_value(g.settings.phi_a) << ','
            << csv_value(g.marginals.p_a1) << ',' << csv_value(g.marginals.p_s1) << ",,,\n";
    }
    for (const auto &e : r.empirical) {
        auto m = marginals(e.settings, cal);
        csv << "empirical," << csv_value(e.settings.phi_s) << ',' << csv_value(e.settings.phi_a) << ','
            << csv_value(m.p_a1) << ',' << csv_value(m.p_s1) << ',' << e.ledger.trials() << ','
            << csv_value(e.ledger.freq_a1()) << ',' << csv_value(e.ledger.freq_s1()) << '\n';
    }
    b.csv = csv.str();
    b.results["max_marginal_deviation"] = r.max_analytic_deviation;
    report.at_most("analytic_marginals_flat", r.max_analytic_deviation, 1e-12);
    if (cfg.trials > 0) {
        double tol = kSigmaMultiple * std::sqrt(0.25 / static_cast<double>(cfg.trials));
        b.results["max_empirical_deviation"] = r.max_empirical_deviation;
        report.at_most("empirical_marginals_within_4_sigma", r.max_empirical_deviation, tol);
    }
    return b;
}

Body run_zwm(const RunConfig &cfg, Report &report) {
    Body b;
    std::vector<Complex> gammas;
    if (cfg.gamma) {
        gammas.push_back(*cfg.gamma);
        b.config["gamma"] = complex_pair(*cfg.gamma);
    } else {
        for (int k = 0; k <= 10; k++) {
            gammas.push_back(k / 10.0);
        }
        b.config["gamma"] = "sweep";
    }
    auto sweep = zwm_sweep(gammas);
    std::ostringstream csv;
    csv << "gamma_re,gamma_im,abs_gamma,visibility\n";
    double worst = 0;
    for (const auto &pt : sweep) {
        worst = std::max(worst, std::abs(pt.visibility - std::abs(pt.gamma)));
        csv << csv_value(pt.gamma.real()) << ',' << csv_value(pt.gamma.imag()) << ',' << csv_value(std::abs(pt.gamma))
            << ',' << csv_value(pt.visibility) << '\n';
    }
    b.csv = csv.str();
    b.results["max_visibility_deviation"] = worst;
    report.at_most("visibility_equals_overlap", worst, 1e-9);
    return b;
}

Body run_decohere(const RunConfig &cfg, Report &report) {
    Body b;
    b.config = {{"theta", cfg.decoherence.theta}, {"collisions", cfg.decoherence.n_collisions}};
    auto chain = decoherence_chain(cfg.decoherence);
    std::ostringstream csv;
    csv << "n,visibility,visibility_explicit\n";
    double worst_law = 0;
    double worst_explicit = 0;
    double worst_rise = 0;
    double expected = 1;
    for (std::size_t k = 0; k < chain.size(); k++) {
        const auto &pt = chain[k];
        worst_law = std::max(worst_law, std::abs(pt.visibility - expected));
        expected *= std::cos(cfg.decoherence.theta);
        if (pt.visibility_explicit) {
            worst_explicit = std::max(worst_explicit, std::abs(*pt.visibility_explicit - pt.visibility));
        }
        if (k > 0) {
            worst_rise = std::max(worst_rise, pt.visibility - chain[k - 1].visibility);
        }
        csv << pt.n << ',' << csv_value(pt.visibility) << ',' << csv_value(pt.visibility_explicit) << '\n';
    }
    b.csv = csv.str();
    b.results["final_visibility"] = chain.back().visibility;
    report.at_most("visibility_follows_cos_power", worst_law, 1e-9);
    report.at_most("explicit_construction_agrees", worst_explicit, 1e-9);
    report.at_most("visibility_non_increasing", worst_rise, 0);
    return b;
}

ordered_json matrix_pairs(const ComplexMatrix &m) {
    return to_json(m);
}

Body run_cat(const RunConfig &cfg, Report &report) {
    if (cfg.trials > kMaxCatTrials) {
        throw CliError("cat: --trials must not exceed " + std::to_string(kMaxCatTrials));
    }
    Body b;
    auto [c1, c2] = normalized_amplitudes(cfg);
    b.config = {{"c1", complex_pair(c1)}, {"c2", complex_pair(c2)}, {"trials", cfg.trials}};
    auto cat = run_cat_scenario(c1, c2, cfg.trials, Rng(cfg.seed), cfg.threads);
    std::ostringstream csv;
    write_records_csv(csv, cat.records);
    b.csv = csv.str();

    std::uint64_t mismatches = 0;
    std::uint64_t s1 = 0;
    for (const auto &r : cat.records) {
        mismatches += r.s_eigenvalue_index != r.a_eigenvalue_index;
        s1 += r.s_eigenvalue_index == 1;
    }
    const double p1 = std::norm(c1);
    const double p2 = std::norm(c2);
    double rho_err = std::max(max_abs_diff(cat.rho_s.matrix(), ComplexMatrix::diagonal({p1, p2})),
                              max_abs_diff(cat.rho_a.matrix(), ComplexMatrix::diagonal({0.0, p1, p2})));

    b.results["rho_s"] = matrix_pairs(cat.rho_s.matrix());
    b.results["rho_a"] = matrix_pairs(cat.rho_a.matrix());
    b.results["schmidt_coefficients"] = cat.schmidt.coefficients;
    b.results["schmidt_degenerate"] = cat.schmidt.degenerate;
    b.results["entropy_bits"] = {{"global", cat.entropy_global}, {"s", cat.entropy_s}, {"a", cat.entropy_a}};
    b.results["purity"] = {{"global", cat.purity_global}, {"s", cat.purity_s}, {"a", cat.purity_a}};
    b.results["records"] = cfg.trials;
    b.results["s1_count"] = s1;
    b.results["mismatched_records"] = mismatches;

    report.at_most("records_perfectly_correlated", static_cast<double>(mismatches), 0);
    report.at_most("reduced_operators_closed_form", rho_err, 1e-12);
    report.at_most("measurement_state_entropy_zero", std::abs(cat.entropy_global), 1e-10);
    if (cfg.trials > 0) {
        double f = static_cast<double>(s1) / static_cast<double>(cfg.trials);
        report.at_most("s1_frequency_within_4_sigma", z_score(f, p1, cfg.trials), kSigmaMultiple);
    }
    return b;
}

Body run_ambiguity(const RunConfig &cfg, Report &report) {
    Body b;
    auto [c1, c2] = normalized_amplitudes(cfg);
    b.config = {{"c1", complex_pair(c1)}, {"c2", complex_pair(c2)}};
    auto r = basis_ambiguity_check(c1, c2);
    std::ostringstream csv;
    csv << "basis,row,col,re,im\n";
    for (auto [name, m] : {std::pair{"s", &r.s_basis}, std::pair{"r", &r.r_basis}}) {
        for (std::size_t i = 0; i < 2; i++) {
            for (std::size_t j = 0; j < 2; j++) {
                csv << name << ',' << i + 1 << ',' << j + 1 << ',' << csv_value((*m)(i, j).real()) << ','
                    << csv_value((*m)(i, j).imag()) << '\n';
            }
        }
    }
    b.csv = csv.str();
    b.results["s_basis"] = matrix_pairs(r.s_basis);
    b.results["r_basis"] = matrix_pairs(r.r_basis);
    b.results["degenerate"] = r.degenerate;
    b.results["s_offdiag"] = r.s_offdiag;
    b.results["r_offdiag"] = r.r_offdiag;
    double expected_r = std::abs(std::norm(c1) - std::norm(c2)) / 2;
    report.at_most("s_basis_offdiag_zero", r.s_offdiag, 1e-12);
    report.at_most("r_basis_offdiag_closed_form", std::abs(r.r_offdiag - expected_r), 1e-12);
    return b;
}

void write_file(const std::string &path, const std::string &content) {
    if (path.empty()) {
        return;
    }
    if (path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw CliError("cannot open " + squote(path) + " for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw CliError("failed writing " + squote(path));
    }
}

}  // namespace

std::string_view command_name(Command c) {
    for (auto [cmd, name] : kCommands) {
        if (cmd == c) {
            return name;
        }
    }
    return "?";
}

Command parse_command(std::string_view name) {
    for (auto [cmd, n] : kCommands) {
        if (n == name) {
            return cmd;
        }
    }
    throw CliError("unknown command " + squote(name));
}

const std::vector<std::string_view> &command_names() {
    static const std::vector<std::string_view> names = [] {
        std::vector<std::string_view> out;
        for (auto [c, n] : kCommands) {
            out.push_back(n);
        }
        return out;
    }();
    return names;
}

double parse_real(std::string_view text) {
    text = trim(text);
    std::string_view body = text;
    if (body.starts_with('+')) {
        body.remove_prefix(1);
    }
    double x = 0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), x);
    if (body.empty() || ec != std::errc() || ptr != body.data() + body.size()) {
        throw CliError("malformed number " + squote(text));
    }
    if (!std::isfinite(x)) {
        throw CliError("number must be finite: " + squote(text));
    }
    return x;
}

double parse_angle(std::string_view text) {
    static const std::regex pi_form(R"(^([+-])?(\d+(?:\.\d*)?)?\*?pi(?:/(\d+(?:\.\d*)?))?$)");
    const std::string s(trim(text));
    std::smatch m;
    if (!std::regex_match(s, m, pi_form)) {
        return parse_real(s);
    }
    double k = m[2].matched ? parse_real(m[2].str()) : 1.0;
    double d = m[3].matched ? parse_real(m[3].str()) : 1.0;
    if (d == 0) {
        throw CliError("division by zero in " + squote(s));
    }
    double x = k * std::numbers::pi / d;
    return m[1].matched && m[1].str() == "-" ? -x : x;
}

Complex parse_complex(std::string_view text) {
    text = trim(text);
    if (text.empty()) {
        throw CliError("empty complex value");
    }
    if (text.back() != 'i') {
        return parse_real_term(text);
    }
    std::string_view body = text.substr(0, text.size() - 1);
    // Split at the last sign that is not an exponent sign.
    std::size_t split = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    auto imag_of = [&](std::string_view s) -> double {
        s = trim(s);
        if (s.empty() || s == "+") {
            return 1;
        }
        if (s == "-") {
            return -1;
        }
        return parse_real(s);
    };
    try {
        if (split == std::string_view::npos) {
            return {0, imag_of(body)};
        }
        return {parse_real(body.substr(0, split)), imag_of(body.substr(split))};
    } catch (const CliError &) {
        throw CliError("malformed complex number " + squote(text));
    }
}

std::uint64_t parse_unsigned(std::string_view text) {
    text = trim(text);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw CliError("malformed non-negative integer " + squote(text));
    }
    return v;
}

void apply_setting(RunConfig &cfg, std::string_view key, std::string_view value) {
    const Setting *s = find_setting(trim(key));
    if (!s) {
        throw CliError("unknown key " + squote(trim(key)));
    }
    try {
        s->apply(cfg, value);
    } catch (const CliError &e) {
        throw CliError(std::string(trim(key)) + ": " + e.what());
    } catch (const std::exception &e) {
        throw CliError(std::string(trim(key)) + ": " + e.what());
    }
}

const std::map<std::string, std::pair<std::string, std::string>> &setting_docs() {
    static const auto docs = [] {
        std::map<std::string, std::pair<std::string, std::string>> out;
        for (const auto &[k, s] : settings_table()) {
            out[k] = {s.default_value, s.help};
        }
        return out;
    }();
    return docs;
}

void apply_scenario_text(RunConfig &cfg, std::string_view text, std::string_view origin) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        line_no++;
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw CliError(where + "expected 'key = value', got " + squote(line));
        }
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw CliError(where + "missing key");
        }
        if (!find_setting(key)) {
            throw CliError(where + "unknown key " + squote(key));
        }
        try {
            apply_setting(cfg, key, value);
        } catch (const CliError &e) {
            throw CliError(where + e.what());
        }
    }
}

void load_scenario(RunConfig &cfg, const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CliError("cannot read scenario " + squote(path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw CliError("failed reading scenario " + squote(path.string()));
    }
    apply_scenario_text(cfg, buf.str(), path.string());
}

RunConfig load_scenario(const std::filesystem::path &path) {
    RunConfig cfg;
    load_scenario(cfg, path);
    return cfg;
}

std::string to_scenario_text(const RunConfig &cfg) {
    std::string out = "# biphoton scenario, format " + std::string(kFormatVersion) + "\n";
    for (const auto &[k, s] : settings_table()) {
        if (auto v = s.show(cfg)) {
            out += k + " = " + *v + "\n";
        }
    }
    return out;
}

void validate(const RunConfig &cfg) {
    if (!cfg.command) {
        throw CliError("missing subcommand (one of scan, trials, chsh, nosignal, zwm, decohere, cat, ambiguity)");
    }
    double n = std::norm(cfg.c1) + std::norm(cfg.c2);
    if (!(std::abs(n - 1) <= kNormSlack)) {
        throw CliError("amplitudes: |c1|^2 + |c2|^2 = " + format_double(n) + " deviates from 1 by more than 1e-6");
    }
    cfg.decoherence.validate();
    if (cfg.command == Command::kTrials && cfg.trials == 0) {
        throw CliError("trials: --trials must be at least 1");
    }
    if (cfg.command == Command::kCat && cfg.trials > kMaxCatTrials) {
        throw CliError("cat: --trials must not exceed " + std::to_string(kMaxCatTrials));
    }
}

std::optional<RunConfig> parse_args(const std::vector<std::string> &argv, const char *env_seed) {
    CLI::App app{"Two-photon interferometry and measurement-state simulator", "biphoton"};
    app.set_help_flag("-h,--help", "print this help and exit");
    app.allow_extras(false);

    std::string command;
    app.add_option("command", command, "experiment: scan | trials | chsh | nosignal | zwm | decohere | cat | ambiguity");
    std::string scenario;
    app.add_option("--scenario", scenario, "flat key = value file; flags override it");

    std::vector<std::pair<std::string, CLI::Option *>> options;
    std::map<std::string, std::string> values;
    CLI::Option *quiet = nullptr;
    CLI::Option *timing = nullptr;
    for (const auto &[key, s] : settings_table()) {
        if (key == "command") {
            continue;
        }
        if (key == "quiet") {
            quiet = app.add_flag("-q,--quiet", s.help);
            continue;
        }
        if (key == "timing") {
            timing = app.add_flag("--timing", s.help);
            continue;
        }
        auto *opt = app.add_option(flag_name(key), values[key], s.help);
        opt->default_str(s.default_value.empty() ? "(unset)" : s.default_value);
        opt->allow_extra_args(false);
        options.emplace_back(key, opt);
    }

    std::vector<const char *> raw;
    raw.push_back("biphoton");
    for (const auto &a : argv) {
        raw.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::CallForHelp &) {
        std::cout << app.help();
        return std::nullopt;
    } catch (const CLI::ParseError &e) {
        throw CliError(one_line(e.what()));
    }

    RunConfig cfg;
    if (env_seed && *env_seed) {
        try {
            cfg.seed = parse_unsigned(env_seed);
        } catch (const CliError &e) {
            throw CliError(std::string("BIPHOTON_SEED: ") + e.what());
        }
    }
    if (!scenario.empty()) {
        load_scenario(cfg, scenario);
    }
    if (!command.empty()) {
        apply_setting(cfg, "command", command);
    }
    for (const auto &[key, opt] : options) {
        if (opt->count() > 0) {
            try {
                apply_setting(cfg, key, values[key]);
            } catch (const CliError &e) {
                throw CliError(flag_name(key) + ": " + std::string(e.what()).substr(key.size() + 2));
            }
        }
    }
    if (quiet->count() > 0) {
        cfg.quiet = true;
    }
    if (timing->count() > 0) {
        cfg.timing = true;
    }
    validate(cfg);
    return cfg;
}

RunOutput run_command(const RunConfig &cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    Report report;
    Body body;
    switch (*cfg.command) {
        case Command::kScan:
            body = run_scan(cfg, report);
            break;
        case Command::kTrials:
            body = run_trials_command(cfg, report);
            break;
        case Command::kChsh:
            body = run_chsh(cfg, report);
            break;
        case Command::kNoSignal:
            body = run_nosignal(cfg, report);
            break;
        case Command::kZwm:
            body = run_zwm(cfg, report);
            break;
        case Command::kDecohere:
            body = run_decohere(cfg, report);
            break;
        case Command::kCat:
            body = run_cat(cfg, report);
            break;
        case Command::kAmbiguity:
            body = run_ambiguity(cfg, report);
            break;
    }
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    RunOutput out;
    out.csv = std::move(body.csv);
    out.gates = std::move(report.gates);
    for (const auto &g : out.gates) {
        out.all_passed = out.all_passed && g.passed;
    }
    ordered_json invariants = ordered_json::array();
    for (const auto &g : out.gates) {
        invariants.push_back(
            {{"name", g.name}, {"passed", g.passed}, {"value", g.value}, {"tolerance", g.tolerance}});
    }
    out.json = {{"format_version", kFormatVersion},
                {"command", command_name(*cfg.command)},
                {"seed", cfg.seed},
                {"rng", Rng::kAlgorithm},
                {"config", std::move(body.config)},
                {"results", std::move(body.results)},
                {"invariants", std::move(invariants)},
                {"all_passed", out.all_passed}};
    if (cfg.timing) {
        out.json["timing"] = {{"wall_seconds", elapsed}};
    }
    return out;
}

void emit(const RunOutput &out, const RunConfig &cfg) {
    write_file(cfg.out_csv, out.csv);
    write_file(cfg.out_json, dump_json(out.json));
}

int main_entry(const std::vector<std::string> &argv, const char *env_seed) {
    try {
        auto cfg = parse_args(argv, env_seed);
        if (!cfg) {
            return 0;
        }
        auto out = run_command(*cfg);
        emit(out, *cfg);
        if (!cfg->quiet) {
            for (const auto &g : out.gates) {
                std::cerr << (g.passed ? "PASS " : "FAIL ") << g.name << " value=" << format_double(g.value)
                          << " tolerance=" << format_double(g.tolerance) << '\n';
            }
        }
        return out.all_passed ? 0 : 1;
    } catch (const std::exception &e) {
        std::cerr << "biphoton: error: " << one_line(e.what()) << '\n';
        return 2;
    }
}

}  // namespace biphoton::cli
