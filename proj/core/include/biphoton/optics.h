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

#ifndef BIPHOTON_OPTICS_H
#define BIPHOTON_OPTICS_H

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "biphoton/numerics.h"
#include "biphoton/qstate.h"

namespace biphoton {

// Dual-rail optics: each photon's path is a qubit with basis
// {solid = detector 1, dashed = detector 2}. Joint two-photon spaces are
// ordered S (x) A.

enum class Path : std::size_t { kSolid = 0, kDashed = 1 };

struct PhaseSettings {
    double phi_s = 0;
    double phi_a = 0;

    double difference() const { return phi_s - phi_a; }
    bool operator==(const PhaseSettings &other) const = default;
};

struct CalibrationRecord {
    /// Phase w of the uncalibrated network at reference settings (0, 0).
    double setup_phase = 0;
    /// Added to phi_S before evaluating the network.
    double origin_shift = 0;
    /// Residual setup phase re-measured with the shift applied.
    double w = 0;
    std::string convention;
};

/// Coincidence probabilities indexed (A detector, S detector).
struct JointDistribution {
    double p11 = 0;
    double p12 = 0;
    double p21 = 0;
    double p22 = 0;

    double same() const { return p11 + p22; }
    double diff() const { return p12 + p21; }
    double sum() const { return p11 + p12 + p21 + p22; }
};

struct Marginals {
    double p_a1 = 0;
    double p_a2 = 0;
    double p_s1 = 0;
    double p_s2 = 0;
};

struct BeamSplitter {};
struct PhaseShifter {
    Path path = Path::kSolid;
    double phi = 0;
};
/// Global phase only; kept so networks read like the physical layout.
struct Mirror {};
/// Blocks a path. Detection is post-selected on the photon surviving.
struct Barrier {
    Path path = Path::kSolid;
};
using Component = std::variant<BeamSplitter, PhaseShifter, Mirror, Barrier>;

enum class Source { kSinglePhoton, kEntangledPair };

struct DetectionResult {
    /// Post-selected detector probabilities. Single photon: (D1, D2).
    /// Pair: joint S (x) A order (S1A1, S1A2, S2A1, S2A2).
    std::vector<double> probabilities;
    double loss_probability = 0;
};

/// Symmetric 50:50 splitter (1/sqrt2)[[1, i], [i, 1]].
ComplexMatrix bs_unitary();
ComplexMatrix phase_shifter(Path path, double phi);
/// Product of the components' 2x2 operators in beam order.
ComplexMatrix compile_arm(std::span<const Component> arm);

/// Ordered component lists plus a source. A single-photon source emits
/// (|solid> + |dashed>)/sqrt2; an entangled-pair source emits
/// (|solid, solid> + |dashed, dashed>)/sqrt2.
class OpticalNetwork {
   public:
    static OpticalNetwork single_photon(std::vector<Component> arm);
    static OpticalNetwork entangled_pair(std::vector<Component> s_arm, std::vector<Component> a_arm);

    Source source() const noexcept { return source_; }
    const std::vector<Component> &s_arm() const noexcept { return s_arm_; }
    const std::vector<Component> &a_arm() const noexcept { return a_arm_; }
    bool has_barrier() const;

    PureState initial_state() const;
    /// 2x2 (single photon) or 4x4 = S arm (x) A arm. Unitary iff barrier-free.
    ComplexMatrix compile() const;
    DetectionResult detect() const;

   private:
    OpticalNetwork(Source source, std::vector<Component> s_arm, std::vector<Component> a_arm);

    Source source_;
    std::vector<Component> s_arm_;
    std::vector<Component> a_arm_;
};

/// (p1, p2) for the source -> phase shifter on the solid path -> splitter chain.
std::pair<double, double> single_photon_probs(double phi);

/// The two-photon interferometer: phi_S on S's solid path, phi_A on A's
/// dashed path, a mirror and a splitter on each arm.
OpticalNetwork rto_network(PhaseSettings settings);

struct RtoSetup {
    PureState initial;
    ComplexMatrix unitary;
};
RtoSetup build_rto(PhaseSettings settings);

/// Born-rule coincidence probabilities of the uncalibrated network.
JointDistribution raw_joint_probs(PhaseSettings settings);

/// Measures the setup phase from the network at reference settings and
/// returns the phase-origin shift that cancels it. Deterministic.
CalibrationRecord calibrate();

JointDistribution rto_joint_probs(PhaseSettings settings, const CalibrationRecord &cal);
/// P(same) - P(diff).
double correlation(PhaseSettings settings, const CalibrationRecord &cal);
Marginals marginals(PhaseSettings settings, const CalibrationRecord &cal);

/// Detector probabilities of photon S behind its phase shifter and splitter
/// when the partner's path states overlap as gamma = <partner on dashed |
/// partner on solid>. |gamma| = 0 is a full which-path record (barrier
/// inserted); |gamma| = 1 leaves the partner uninformative.
std::pair<double, double> zwm_probs(Complex gamma, double phi);

/// Reduced state of S for partner overlap gamma.
DensityOperator zwm_reduced_state(Complex gamma);

/// (max - min) / (max + min) of a first-harmonic fringe p(phi) = a + b cos phi + c sin phi,
/// recovered exactly from four samples.
double fringe_visibility(const std::function<double(double)> &p_of_phi);

}  // namespace biphoton

#endif
