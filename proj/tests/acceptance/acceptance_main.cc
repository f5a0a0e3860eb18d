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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "biphoton/experiments.h"
#include "biphoton/measurement.h"
#include "biphoton/optics.h"
#include "biphoton/qstate.h"
#include "biphoton/serialization.h"
#include "cli.h"
#include "oracles.h"

namespace {

using namespace biphoton;
namespace oracle = biphoton::testing;

constexpr double kPi = std::numbers::pi;

struct Check {
    bool ok = true;
    std::string detail;

    // Records "label=value (tol)" and folds the comparison into ok.
    void at_most(const std::string &label, double value, double tol) {
        ok = ok && value <= tol;
        append(label + "=" + short_num(value) + " <= " + short_num(tol));
    }
    void at_least(const std::string &label, double value, double bound) {
        ok = ok && value >= bound;
        append(label + "=" + short_num(value) + " >= " + short_num(bound));
    }
    void require(const std::string &label, bool cond) {
        ok = ok && cond;
        append(label + (cond ? " yes" : " NO"));
    }

   private:
    void append(const std::string &s) {
        detail += (detail.empty() ? "" : "; ") + s;
    }
    static std::string short_num(double x) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3g", x);
        return buf;
    }
};

std::mt19937_64 &rng() {
    static std::mt19937_64 r(0xacce97);
    return r;
}

double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

Check correlation_curve() {
    Check c;
    auto cal = calibrate();
    double worst = 0;
    for (int k = 0; k < 360; k++) {
        double delta = 2 * kPi * k / 360;
        worst = std::max(worst, std::abs(correlation({delta, 0}, cal) - std::cos(delta)));
    }
    c.at_most("max|C-cos|", worst, 1e-9);
    return c;
}

Check sampled_correlation_curve() {
    Check c;
    auto cal = calibrate();
    auto scan = phase_scan(36, 100000, 42, cal);
    double worst = 0;
    for (const auto &pt : scan) {
        worst = std::max(worst, std::abs(*pt.c_empirical - std::cos(pt.delta)));
    }
    c.at_most("max|C_emp-cos|", worst, 0.02);
    return c;
}

Check joint_closed_forms() {
    Check c;
    auto cal = calibrate();
    double worst = 0;
    for (int k = 0; k < 1000; k++) {
        PhaseSettings s{uniform(-2 * kPi, 2 * kPi), uniform(-2 * kPi, 2 * kPi)};
        auto p = rto_joint_probs(s, cal);
        auto ref = oracle::closed_form_joint(s.phi_s, s.phi_a);
        worst = std::max({worst, std::abs(p.p11 - ref.same_pair), std::abs(p.p22 - ref.same_pair),
                          std::abs(p.p12 - ref.diff_pair), std::abs(p.p21 - ref.diff_pair)});
    }
    c.at_most("max entry error", worst, 1e-10);
    return c;
}

Check benchmark_correlations() {
    Check c;
    auto cal = calibrate();
    c.at_most("|C(0)-1|", std::abs(correlation({0, 0}, cal) - 1), 1e-10);
    c.at_most("|C(pi/2)|", std::abs(correlation({kPi / 2, 0}, cal)), 1e-10);
    c.at_most("|C(pi)+1|", std::abs(correlation({kPi, 0}, cal) + 1), 1e-10);
    c.at_most("|C(pi/3)-0.5|", std::abs(correlation({kPi / 3, 0}, cal) - 0.5), 1e-10);
    c.at_most("|P_same(pi/3)-0.75|", std::abs(rto_joint_probs({kPi / 3, 0}, cal).same() - 0.75), 1e-10);
    return c;
}

Check no_signaling() {
    Check c;
    auto cal = calibrate();
    auto report = no_signaling_sweep(32, 100000, 42, cal, 10);
    c.at_most("analytic max dev", report.max_analytic_deviation, 1e-12);
    double worst_z = 0;
    for (const auto &e : report.empirical) {
        double sigma = std::sqrt(0.25 / static_cast<double>(e.ledger.trials()));
        worst_z = std::max({worst_z, e.deviation_a1 / sigma, e.deviation_s1 / sigma});
    }
    c.require("10 empirical settings", report.empirical.size() == 10);
    c.at_most("empirical max z", worst_z, 4);
    return c;
}

Check bell_violation() {
    Check c;
    auto cal = calibrate();
    auto r = chsh_empirical(ChshSettings::optimal(), cal, 100000, 42);
    c.at_most("|S-2sqrt2|", std::abs(r.s - 2 * std::numbers::sqrt2), 1e-9);
    c.at_least("S_emp", *r.s_empirical, 2.7);
    c.at_most("|S_equal-2|", std::abs(chsh({0.3, 0.3, 0.3, 0.3}, cal).s - 2), 1e-12);
    return c;
}

Check reduced_operators() {
    Check c;
    double worst = 0;
    double worst_offdiag = 0;
    double worst_entropy = 0;
    for (int k = 0; k < 100; k++) {
        auto [c1, c2] = oracle::random_amplitudes(rng());
        auto ms = premeasure(PureState(ComplexVector{c1, c2}, SubsystemLayout::single(2, "S")), ApparatusSpec{});
        auto rho = densify(ms);
        auto rs = partial_trace(rho, "S").matrix();
        auto ra = partial_trace(rho, "A").matrix();
        double p1 = std::norm(c1);
        double p2 = std::norm(c2);
        worst = std::max({worst, max_abs_diff(rs, ComplexMatrix::diagonal({p1, p2})),
                          max_abs_diff(ra, ComplexMatrix::diagonal({0.0, p1, p2}))});
        worst_offdiag = std::max({worst_offdiag, std::abs(rs(0, 1)), std::abs(ra(1, 2))});
        worst_entropy = std::max(worst_entropy, std::abs(von_neumann_entropy(rho)));
    }
    const double h = std::sqrt(0.5);
    auto equal = premeasure(PureState(ComplexVector{h, h}, SubsystemLayout::single(2, "S")), ApparatusSpec{});
    double s_equal = von_neumann_entropy(partial_trace(densify(equal), "S"));
    c.at_most("closed form err", worst, 1e-12);
    c.at_most("offdiag", worst_offdiag, 1e-12);
    c.at_most("MS entropy", worst_entropy, 1e-10);
    c.at_most("|S_equal-1|", std::abs(s_equal - 1), 1e-9);
    return c;
}

Check schmidt_suite() {
    Check c;
    double worst_rebuild = 0;
    double worst_coeff = 0;
    for (int k = 0; k < 100; k++) {
        std::size_t other = 2 + static_cast<std::size_t>(k % 3);
        SubsystemLayout layout({2, other}, {"S", "A"});
        PureState psi(oracle::random_unit_vector(2 * other, rng()), layout);
        auto form = schmidt(psi);
        worst_rebuild = std::max(worst_rebuild, max_abs_diff(form.reconstruct(), psi.amplitudes()));
        // 2x2 reduced operator: eigenvalues from trace and determinant.
        auto r = partial_trace(densify(psi), "S").matrix();
        double tr = (r(0, 0) + r(1, 1)).real();
        double det = (r(0, 0) * r(1, 1) - r(0, 1) * r(1, 0)).real();
        double disc = std::sqrt(std::max(0.0, tr * tr - 4 * det));
        double big = (tr + disc) / 2;
        double small = std::max(0.0, (tr - disc) / 2);
        worst_coeff = std::max({worst_coeff, std::abs(form.coefficients[0] - std::sqrt(big)),
                                std::abs(form.coefficients[1] - std::sqrt(small))});
    }
    const double h = std::sqrt(0.5);
    auto equal = premeasure(PureState(ComplexVector{h, h}, SubsystemLayout::single(2, "S")), ApparatusSpec{});
    c.at_most("rebuild err", worst_rebuild, 1e-10);
    c.at_most("coeff vs sqrt(eig)", worst_coeff, 1e-9);
    c.require("equal-amplitude degenerate", schmidt(equal).degenerate);
    return c;
}

double oracle_visibility(Complex gamma) {
    double p[4];
    for (int k = 0; k < 4; k++) {
        p[k] = oracle::zwm_p1_brute_force(gamma, k * kPi / 2);
    }
    double mean = (p[0] + p[1] + p[2] + p[3]) / 4;
    double amp = std::hypot(p[0] - p[2], p[1] - p[3]) / 2;
    return amp / mean;
}

Check zwm_toggle() {
    Check c;
    auto vis = [](Complex g) { return fringe_visibility([&](double phi) { return zwm_probs(g, phi).first; }); };
    c.at_most("V(0)", vis(0.0), 1e-12);
    c.at_least("V(1)", vis(1.0), 1 - 1e-12);
    double worst = 0;
    double worst_oracle = 0;
    for (int k = 0; k < 20; k++) {
        Complex g = std::polar(uniform(0, 1), uniform(0, 2 * kPi));
        worst = std::max(worst, std::abs(vis(g) - std::abs(g)));
        worst_oracle = std::max(worst_oracle, std::abs(oracle_visibility(g) - std::abs(g)));
        for (int j = 0; j < 5; j++) {
            double phi = uniform(0, 2 * kPi);
            worst_oracle = std::max(worst_oracle, std::abs(zwm_probs(g, phi).first - oracle::zwm_p1_brute_force(g, phi)));
        }
    }
    c.at_most("max|V-|g||", worst, 1e-9);
    c.at_most("oracle disagreement", worst_oracle, 1e-9);
    return c;
}

Check decoherence_law() {
    Check c;
    double worst_explicit = 0;
    double worst_closed = 0;
    double worst_rise = 0;
    for (int k = 0; k <= 10; k++) {
        double theta = (kPi / 2) * k / 10;
        auto chain = decoherence_chain({theta, 50});
        for (const auto &pt : chain) {
            double expected = std::pow(std::cos(theta), static_cast<double>(pt.n));
            worst_closed = std::max(worst_closed, std::abs(pt.visibility - expected));
            if (pt.n <= 3) {
                worst_explicit = std::max({worst_explicit, std::abs(*pt.visibility_explicit - expected),
                                           std::abs(oracle::decoherence_visibility_enumerated(theta, pt.n) - expected)});
            }
            if (pt.n > 0) {
                worst_rise = std::max(worst_rise, pt.visibility - chain[pt.n - 1].visibility);
            }
        }
    }
    c.at_most("explicit n<=3", worst_explicit, 1e-9);
    c.at_most("closed form n<=50", worst_closed, 1e-9);
    c.at_most("max rise", worst_rise, 0);
    return c;
}

Check basis_ambiguity() {
    Check c;
    const double h = std::sqrt(0.5);
    auto eq = basis_ambiguity_check(h, h);
    auto half = ComplexMatrix::identity(2) * Complex(0.5);
    c.at_most("s-basis vs I/2", max_abs_diff(eq.s_basis, half), 1e-12);
    c.at_most("r-basis vs I/2", max_abs_diff(eq.r_basis, half), 1e-12);
    auto skew = basis_ambiguity_check(std::sqrt(0.3), std::sqrt(0.7));
    c.at_most("|r_offdiag-0.2|", std::abs(skew.r_offdiag - 0.2), 1e-12);
    return c;
}

Check cat_purity() {
    Check c;
    std::uint64_t total = 0;
    std::uint64_t mismatches = 0;
    for (std::uint64_t k = 0; k < 10; k++) {
        auto [c1, c2] = oracle::random_amplitudes(rng());
        auto cat = run_cat_scenario(c1, c2, 100000, Rng(1000 + k));
        for (const auto &r : cat.records) {
            mismatches += r.s_eigenvalue_index != r.a_eigenvalue_index;
        }
        total += cat.records.size();
    }
    c.require("1e6 records", total == 1000000);
    c.at_most("mismatches", static_cast<double>(mismatches), 0);
    return c;
}

std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Every CLI command with default settings, written to dir.
void full_suite(const std::filesystem::path &dir, unsigned threads) {
    std::filesystem::create_directories(dir);
    for (auto name : cli::command_names()) {
        auto cfg = cli::parse_args({std::string(name), "--seed", "20260101", "--quiet"});
        cfg->threads = threads;
        cfg->out_csv = (dir / (std::string(name) + ".csv")).string();
        cfg->out_json = (dir / (std::string(name) + ".json")).string();
        cli::emit(cli::run_command(*cfg), *cfg);
    }
}

Check determinism() {
    Check c;
    auto root = std::filesystem::temp_directory_path() / "biphoton_acceptance";
    std::filesystem::remove_all(root);
    full_suite(root / "run1", 1);
    full_suite(root / "run2", 1);
    full_suite(root / "run4", 4);
    std::size_t files = 0;
    std::size_t differing = 0;
    for (const auto &entry : std::filesystem::directory_iterator(root / "run1")) {
        auto name = entry.path().filename();
        auto a = read_file(entry.path());
        files++;
        differing += a != read_file(root / "run2" / name) || a != read_file(root / "run4" / name);
    }
    std::filesystem::remove_all(root);
    c.require("16 outputs", files == 16);
    c.at_most("differing files", static_cast<double>(differing), 0);
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"analytic correlation curve", correlation_curve},
        {"sampled correlation curve", sampled_correlation_curve},
        {"joint probability closed forms", joint_closed_forms},
        {"benchmark correlations", benchmark_correlations},
        {"no-signaling marginals", no_signaling},
        {"CHSH violation", bell_violation},
        {"reduced operators", reduced_operators},
        {"Schmidt decomposition", schmidt_suite},
        {"which-path overlap toggle", zwm_toggle},
        {"decoherence law", decoherence_law},
        {"basis ambiguity", basis_ambiguity},
        {"cat-scenario correlation", cat_purity},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); k++) {
        Check c;
        try {
            c = criteria[k].second();
        } catch (const std::exception &e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        failed += !c.ok;
        std::printf("%s %2zu %-32s %s\n", c.ok ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), c.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
