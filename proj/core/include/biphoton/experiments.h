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

#ifndef BIPHOTON_EXPERIMENTS_H
#define BIPHOTON_EXPERIMENTS_H

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "biphoton/numerics.h"
#include "biphoton/optics.h"
#include "biphoton/rng.h"

namespace biphoton {

/// Counts-based tolerance used by every empirical check: |freq - p| <= k sigma
/// with sigma = sqrt(p (1 - p) / n).
inline constexpr double kSigmaMultiple = 4.0;
bool within_sigma(double frequency, double probability, std::uint64_t n, double k = kSigmaMultiple);

/// Coincidence counts for one setting, indexed (A detector, S detector).
struct TrialLedger {
    std::uint64_t n11 = 0;
    std::uint64_t n12 = 0;
    std::uint64_t n21 = 0;
    std::uint64_t n22 = 0;
    PhaseSettings settings;
    std::uint64_t root_seed = 0;

    std::uint64_t trials() const { return n11 + n12 + n21 + n22; }
    double frequency(std::uint64_t count) const;
    /// (n_same - n_diff) / n.
    double correlation() const;
    double freq_a1() const { return frequency(n11 + n12); }
    double freq_s1() const { return frequency(n11 + n21); }

    bool operator==(const TrialLedger &other) const = default;
};

/// Samples `trials` coincidences from rto_joint_probs. Trial t of stream
/// `stream` draws from Rng(root_seed).derive(stream, t); per-worker counts
/// are summed, so results are independent of `threads`.
TrialLedger run_trials(PhaseSettings settings, const CalibrationRecord &cal, std::uint64_t trials,
                       std::uint64_t root_seed, std::uint64_t stream = 0, unsigned threads = 1);

struct ScanPoint {
    double delta = 0;
    double c_analytic = 0;
    std::optional<double> c_empirical;
    std::uint64_t n_trials = 0;
    std::optional<TrialLedger> ledger;
};

/// `points` evenly spaced differences over [0, 2 pi) with phi_A = 0. Point k
/// samples from stream k when trials_per_point > 0.
std::vector<ScanPoint> phase_scan(std::size_t points, std::uint64_t trials_per_point, std::uint64_t root_seed,
                                  const CalibrationRecord &cal, unsigned threads = 1);

struct ChshSettings {
    double a = 0;
    double a_prime = 0;
    double b = 0;
    double b_prime = 0;

    /// (0, pi/2, pi/4, 3 pi/4), which reaches 2 sqrt 2 under the cosine law.
    static ChshSettings optimal();

    bool operator==(const ChshSettings &other) const = default;
};

struct ChshResult {
    /// (a, b), (a, b'), (a', b), (a', b') as (phi_S, phi_A).
    std::array<PhaseSettings, 4> pairs;
    std::array<double, 4> e{};
    /// |E1 - E2 + E3 + E4|
    double s = 0;
    std::optional<std::array<TrialLedger, 4>> ledgers;
    std::optional<std::array<double, 4>> e_empirical;
    std::optional<double> s_empirical;
};

double chsh_combination(const std::array<double, 4> &e);
ChshResult chsh(ChshSettings settings, const CalibrationRecord &cal);
/// Analytic values plus `trials` sampled coincidences per pair (streams 0..3).
ChshResult chsh_empirical(ChshSettings settings, const CalibrationRecord &cal, std::uint64_t trials,
                          std::uint64_t root_seed, unsigned threads = 1);

struct GridMarginal {
    PhaseSettings settings;
    Marginals marginals;
};

struct EmpiricalMarginal {
    PhaseSettings settings;
    TrialLedger ledger;
    double deviation_a1 = 0;
    double deviation_s1 = 0;
    bool within_bound = false;
};

struct NoSignalingReport {
    std::size_t grid = 0;
    std::vector<GridMarginal> analytic;
    double max_analytic_deviation = 0;
    std::vector<EmpiricalMarginal> empirical;
    double max_empirical_deviation = 0;
    bool empirical_within_bound = true;
};

/// Analytic marginals on a grid x grid lattice over [0, 2 pi)^2. When
/// trials > 0, also samples `empirical_settings` random settings (drawn
/// from the root seed) with `trials` coincidences each.
NoSignalingReport no_signaling_sweep(std::size_t grid, std::uint64_t trials, std::uint64_t root_seed,
                                     const CalibrationRecord &cal, std::size_t empirical_settings = 10,
                                     unsigned threads = 1);

inline constexpr std::size_t kMaxCollisions = 1000;
inline constexpr std::size_t kMaxExplicitCollisions = 3;

struct DecoherenceConfig {
    /// Per-collision environment pointer angle; overlap is cos(theta).
    double theta = 0;
    std::size_t n_collisions = 0;

    void validate() const;
    bool operator==(const DecoherenceConfig &other) const = default;
};

struct DecoherencePoint {
    std::size_t n = 0;
    /// (cos theta)^n
    double visibility = 0;
    /// 2 |rho_S(1, 2)| from the explicit S (x) E1 (x) ... (x) En state, n <= 3.
    std::optional<double> visibility_explicit;
};

std::vector<DecoherencePoint> decoherence_chain(DecoherenceConfig cfg);

/// Reduced S state after n explicit controlled-rotation collisions.
DensityOperator decohered_system_state(double theta, std::size_t n);

struct AmbiguityReport {
    ComplexMatrix s_basis;
    ComplexMatrix r_basis;
    /// Both representations equal I/2 within 1e-12.
    bool degenerate = false;
    double s_offdiag = 0;
    double r_offdiag = 0;
};

/// rho_S of the premeasured c1|s1> + c2|s2> in the s-basis and in the
/// r-basis r1 = (s1 + s2)/sqrt2, r2 = (s1 - s2)/sqrt2.
AmbiguityReport basis_ambiguity_check(Complex c1, Complex c2);

struct ZwmPoint {
    Complex gamma;
    double visibility = 0;
};

std::vector<ZwmPoint> zwm_sweep(std::span<const Complex> gammas);

}  // namespace biphoton

#endif
