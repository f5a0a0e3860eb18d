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

#include "biphoton/experiments.h"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "biphoton/measurement.h"
#include "biphoton/parallel.h"
#include "biphoton/qstate.h"

namespace biphoton {

bool within_sigma(double frequency, double probability, std::uint64_t n, double k) {
    if (n == 0) {
        return false;
    }
    double sigma = std::sqrt(probability * (1 - probability) / static_cast<double>(n));
    return std::abs(frequency - probability) <= k * sigma;
}

double TrialLedger::frequency(std::uint64_t count) const {
    auto n = trials();
    return n == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(n);
}

double TrialLedger::correlation() const {
    auto n = trials();
    if (n == 0) {
        return 0;
    }
    return (static_cast<double>(n11 + n22) - static_cast<double>(n12 + n21)) / static_cast<double>(n);
}

TrialLedger run_trials(PhaseSettings settings, const CalibrationRecord &cal, std::uint64_t trials,
                       std::uint64_t root_seed, std::uint64_t stream, unsigned threads) {
    if (trials == 0) {
        throw std::invalid_argument("run_trials: trials must be >= 1");
    }
    auto p = rto_joint_probs(settings, cal);
    const std::array<double, 4> probs{p.p11, p.p12, p.p21, p.p22};
    const Rng root(root_seed);

    std::array<std::uint64_t, 4> totals{};
    std::mutex totals_mutex;
    parallel_for(trials, threads, [&](std::size_t begin, std::size_t end) {
        std::array<std::uint64_t, 4> local{};
        for (std::size_t t = begin; t < end; t++) {
            Rng r = root.derive(stream, t);
            local[sample(probs, r)]++;
        }
        std::lock_guard lock(totals_mutex);
        for (std::size_t k = 0; k < 4; k++) {
            totals[k] += local[k];
        }
    });

    TrialLedger ledger;
    ledger.n11 = totals[0];
    ledger.n12 = totals[1];
    ledger.n21 = totals[2];
    ledger.n22 = totals[3];
    ledger.settings = settings;
    ledger.root_seed = root_seed;
    return ledger;
}

std::vector<ScanPoint> phase_scan(std::size_t points, std::uint64_t trials_per_point, std::uint64_t root_seed,
                                  const CalibrationRecord &cal, unsigned threads) {
    if (points < 2) {
        throw std::invalid_argument("phase_scan: points must be >= 2");
    }
    std::vector<ScanPoint> out;
    out.reserve(points);
    for (std::size_t k = 0; k < points; k++) {
        ScanPoint pt;
        pt.delta = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(points);
        PhaseSettings settings{pt.delta, 0};
        pt.c_analytic = correlation(settings, cal);
        if (trials_per_point > 0) {
            auto ledger = run_trials(settings, cal, trials_per_point, root_seed, k, threads);
            pt.c_empirical = ledger.correlation();
            pt.n_trials = trials_per_point;
            pt.ledger = ledger;
        }
        out.push_back(std::move(pt));
    }
    return out;
}

ChshSettings ChshSettings::optimal() {
    const double pi = std::numbers::pi;
    return {0, pi / 2, pi / 4, 3 * pi / 4};
}

double chsh_combination(const std::array<double, 4> &e) {
    return std::abs(e[0] - e[1] + e[2] + e[3]);
}

ChshResult chsh(ChshSettings settings, const CalibrationRecord &cal) {
    ChshResult out;
    out.pairs = {PhaseSettings{settings.a, settings.b}, PhaseSettings{settings.a, settings.b_prime},
                 PhaseSettings{settings.a_prime, settings.b}, PhaseSettings{settings.a_prime, settings.b_prime}};
    for (std::size_t k = 0; k < 4; k++) {
        out.e[k] = correlation(out.pairs[k], cal);
    }
    out.s = chsh_combination(out.e);
    return out;
}

ChshResult chsh_empirical(ChshSettings settings, const CalibrationRecord &cal, std::uint64_t trials,
                          std::uint64_t root_seed, unsigned threads) {
    ChshResult out = chsh(settings, cal);
    std::array<TrialLedger, 4> ledgers;
    std::array<double, 4> e{};
    for (std::size_t k = 0; k < 4; k++) {
        ledgers[k] = run_trials(out.pairs[k], cal, trials, root_seed, k, threads);
        e[k] = ledgers[k].correlation();
    }
    out.ledgers = ledgers;
    out.e_empirical = e;
    out.s_empirical = chsh_combination(e);
    return out;
}

NoSignalingReport no_signaling_sweep(std::size_t grid, std::uint64_t trials, std::uint64_t root_seed,
                                     const CalibrationRecord &cal, std::size_t empirical_settings,
                                     unsigned threads) {
    if (grid < 2) {
        throw std::invalid_argument("no_signaling_sweep: grid must be >= 2");
    }
    NoSignalingReport report;
    report.grid = grid;
    const double step = 2 * std::numbers::pi / static_cast<double>(grid);
    for (std::size_t i = 0; i < grid; i++) {
        for (std::size_t j = 0; j < grid; j++) {
            PhaseSettings s{step * static_cast<double>(i), step * static_cast<double>(j)};
            auto m = marginals(s, cal);
            for (double p : {m.p_a1, m.p_a2, m.p_s1, m.p_s2}) {
                report.max_analytic_deviation = std::max(report.max_analytic_deviation, std::abs(p - 0.5));
            }
            report.analytic.push_back({s, m});
        }
    }
    if (trials == 0) {
        return report;
    }
    // Settings come from a stream disjoint from the trial streams below.
    Rng picker = Rng(root_seed).derive(~0ULL, 0);
    for (std::size_t k = 0; k < empirical_settings; k++) {
        PhaseSettings s{2 * std::numbers::pi * picker.uniform(), 2 * std::numbers::pi * picker.uniform()};
        EmpiricalMarginal em;
        em.settings = s;
        em.ledger = run_trials(s, cal, trials, root_seed, k, threads);
        em.deviation_a1 = std::abs(em.ledger.freq_a1() - 0.5);
        em.deviation_s1 = std::abs(em.ledger.freq_s1() - 0.5);
        em.within_bound = within_sigma(em.ledger.freq_a1(), 0.5, trials) && within_sigma(em.ledger.freq_s1(), 0.5, trials);
        report.max_empirical_deviation = std::max({report.max_empirical_deviation, em.deviation_a1, em.deviation_s1});
        report.empirical_within_bound = report.empirical_within_bound && em.within_bound;
        report.empirical.push_back(std::move(em));
    }
    return report;
}

void DecoherenceConfig::validate() const {
    if (!(theta >= 0 && theta <= std::numbers::pi / 2)) {
        throw std::invalid_argument("decoherence theta must lie in [0, pi/2]");
    }
    if (n_collisions > kMaxCollisions) {
        throw std::invalid_argument("decoherence n_collisions exceeds the maximum of " +
                                    std::to_string(kMaxCollisions));
    }
}

DensityOperator decohered_system_state(double theta, std::size_t n) {
    if (n > kMaxExplicitCollisions) {
        throw std::length_error("explicit decoherence construction is limited to " +
                                std::to_string(kMaxExplicitCollisions) + " environment qubits");
    }
    std::vector<std::size_t> dims{2};
    std::vector<std::string> labels{"S"};
    for (std::size_t k = 1; k <= n; k++) {
        dims.push_back(2);
        labels.push_back("E" + std::to_string(k));
    }
    SubsystemLayout layout(dims, labels);

    // S starts in (|s1> + |s2>)/sqrt2, every environment qubit in |0>.
    std::vector<Complex> amps(layout.total_dim());
    const std::size_t env_dim = layout.total_dim() / 2;
    amps[0] = std::sqrt(0.5);
    amps[env_dim] = std::sqrt(0.5);
    PureState state(ComplexVector(std::move(amps)), layout);

    // Collision k: |s1><s1| (x) I + |s2><s2| (x) R_k, with R_k rotating E_k by theta.
    const ComplexMatrix s1_proj = ComplexMatrix::diagonal({1.0, 0.0});
    const ComplexMatrix s2_proj = ComplexMatrix::diagonal({0.0, 1.0});
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const ComplexMatrix rotation{{c, -s}, {s, c}};
    for (std::size_t k = 1; k <= n; k++) {
        const std::string env = "E" + std::to_string(k);
        ComplexMatrix u = embed(s1_proj, layout, "S") + embed(s2_proj, layout, "S") * embed(rotation, layout, env);
        state = PureState(u * state.amplitudes(), layout);
    }
    if (n == 0) {
        return densify(state);
    }
    return partial_trace(densify(state), "S");
}

std::vector<DecoherencePoint> decoherence_chain(DecoherenceConfig cfg) {
    cfg.validate();
    std::vector<DecoherencePoint> out;
    for (std::size_t n = 0; n <= cfg.n_collisions; n++) {
        DecoherencePoint pt;
        pt.n = n;
        pt.visibility = std::pow(std::cos(cfg.theta), static_cast<double>(n));
        if (n <= kMaxExplicitCollisions) {
            pt.visibility_explicit = 2 * std::abs(decohered_system_state(cfg.theta, n).matrix()(0, 1));
        }
        out.push_back(pt);
    }
    return out;
}

AmbiguityReport basis_ambiguity_check(Complex c1, Complex c2) {
    auto system = PureState(ComplexVector{c1, c2}, SubsystemLayout::single(2, "S"));
    auto rho_s = partial_trace(densify(premeasure(system, ApparatusSpec{})), "S");

    const double h = std::sqrt(0.5);
    const std::vector<ComplexVector> s_vectors{ComplexVector{1.0, 0.0}, ComplexVector{0.0, 1.0}};
    const std::vector<ComplexVector> r_vectors{ComplexVector{h, h}, ComplexVector{h, -h}};
    AmbiguityReport report{rebase(rho_s, s_vectors), rebase(rho_s, r_vectors)};
    report.s_offdiag = std::abs(report.s_basis(0, 1));
    report.r_offdiag = std::abs(report.r_basis(0, 1));
    const ComplexMatrix half_identity = ComplexMatrix::identity(2) * Complex(0.5);
    report.degenerate =
        max_abs_diff(report.s_basis, half_identity) < 1e-12 && max_abs_diff(report.r_basis, half_identity) < 1e-12;
    return report;
}

std::vector<ZwmPoint> zwm_sweep(std::span<const Complex> gammas) {
    std::vector<ZwmPoint> out;
    for (Complex g : gammas) {
        double vis = fringe_visibility([g](double phi) { return zwm_probs(g, phi).first; });
        out.push_back({g, vis});
    }
    return out;
}

}  // namespace biphoton
