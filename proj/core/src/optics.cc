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

#include "biphoton/optics.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace biphoton {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

ComplexMatrix component_matrix(const Component &c) {
    return std::visit(
        overloaded{
            [](const BeamSplitter &) { return bs_unitary(); },
            [](const PhaseShifter &p) { return phase_shifter(p.path, p.phi); },
            [](const Mirror &) { return ComplexMatrix::identity(2); },
            [](const Barrier &b) {
                return b.path == Path::kSolid ? ComplexMatrix::diagonal({0.0, 1.0})
                                              : ComplexMatrix::diagonal({1.0, 0.0});
            },
        },
        c);
}

bool arm_has_barrier(std::span<const Component> arm) {
    return std::any_of(arm.begin(), arm.end(), [](const Component &c) { return std::holds_alternative<Barrier>(c); });
}

double raw_correlation(PhaseSettings s) {
    auto p = raw_joint_probs(s);
    return p.same() - p.diff();
}

// Setup phase w from C(phi_S, 0) = cos(phi_S + w + shift).
double measure_setup_phase(double shift) {
    double c0 = raw_correlation({shift, 0});
    double c90 = raw_correlation({shift + std::numbers::pi / 2, 0});
    return std::atan2(-c90, c0);
}

}  // namespace

ComplexMatrix bs_unitary() {
    const Complex t = kInvSqrt2;
    const Complex r{0, kInvSqrt2};
    return ComplexMatrix{{t, r}, {r, t}};
}

ComplexMatrix phase_shifter(Path path, double phi) {
    Complex shifted = std::polar(1.0, phi);
    return path == Path::kSolid ? ComplexMatrix::diagonal({shifted, 1.0}) : ComplexMatrix::diagonal({1.0, shifted});
}

ComplexMatrix compile_arm(std::span<const Component> arm) {
    ComplexMatrix out = ComplexMatrix::identity(2);
    for (const auto &c : arm) {
        out = component_matrix(c) * out;
    }
    return out;
}

OpticalNetwork::OpticalNetwork(Source source, std::vector<Component> s_arm, std::vector<Component> a_arm)
    : source_(source), s_arm_(std::move(s_arm)), a_arm_(std::move(a_arm)) {
}

OpticalNetwork OpticalNetwork::single_photon(std::vector<Component> arm) {
    return OpticalNetwork(Source::kSinglePhoton, std::move(arm), {});
}

OpticalNetwork OpticalNetwork::entangled_pair(std::vector<Component> s_arm, std::vector<Component> a_arm) {
    return OpticalNetwork(Source::kEntangledPair, std::move(s_arm), std::move(a_arm));
}

bool OpticalNetwork::has_barrier() const {
    return arm_has_barrier(s_arm_) || arm_has_barrier(a_arm_);
}

PureState OpticalNetwork::initial_state() const {
    if (source_ == Source::kSinglePhoton) {
        return PureState(ComplexVector{kInvSqrt2, kInvSqrt2}, SubsystemLayout::single(2, "S"));
    }
    return PureState(ComplexVector{kInvSqrt2, 0.0, 0.0, kInvSqrt2}, SubsystemLayout({2, 2}, {"S", "A"}));
}

ComplexMatrix OpticalNetwork::compile() const {
    if (source_ == Source::kSinglePhoton) {
        return compile_arm(s_arm_);
    }
    return tensor_product(compile_arm(s_arm_), compile_arm(a_arm_));
}

DetectionResult OpticalNetwork::detect() const {
    ComplexVector out = compile() * initial_state().amplitudes();
    double survived = out.norm() * out.norm();
    DetectionResult result;
    result.loss_probability = std::clamp(1 - survived, 0.0, 1.0);
    if (survived < 1e-15) {
        throw std::runtime_error("optical network blocks every photon");
    }
    for (const auto &z : out.entries()) {
        result.probabilities.push_back(std::norm(z) / survived);
    }
    return result;
}

std::pair<double, double> single_photon_probs(double phi) {
    auto d = OpticalNetwork::single_photon({PhaseShifter{Path::kSolid, phi}, Mirror{}, BeamSplitter{}}).detect();
    return {d.probabilities[0], d.probabilities[1]};
}

OpticalNetwork rto_network(PhaseSettings settings) {
    return OpticalNetwork::entangled_pair({PhaseShifter{Path::kSolid, settings.phi_s}, Mirror{}, BeamSplitter{}},
                                          {PhaseShifter{Path::kDashed, settings.phi_a}, Mirror{}, BeamSplitter{}});
}

RtoSetup build_rto(PhaseSettings settings) {
    auto net = rto_network(settings);
    return {net.initial_state(), net.compile()};
}

JointDistribution raw_joint_probs(PhaseSettings settings) {
    auto p = rto_network(settings).detect().probabilities;
    // Joint order is S (x) A: index = 2 * s + a.
    return {.p11 = p[0], .p12 = p[2], .p21 = p[1], .p22 = p[3]};
}

CalibrationRecord calibrate() {
    CalibrationRecord cal;
    cal.setup_phase = measure_setup_phase(0);
    cal.origin_shift = -cal.setup_phase;
    cal.w = measure_setup_phase(cal.origin_shift);
    cal.convention =
        "symmetric splitter (1/sqrt2)[[1,i],[i,1]]; phi_S on S solid path, phi_A on A dashed path; "
        "mirrors dropped as global phase; origin shift added to phi_S";
    return cal;
}

JointDistribution rto_joint_probs(PhaseSettings settings, const CalibrationRecord &cal) {
    return raw_joint_probs({settings.phi_s + cal.origin_shift, settings.phi_a});
}

double correlation(PhaseSettings settings, const CalibrationRecord &cal) {
    auto p = rto_joint_probs(settings, cal);
    return p.same() - p.diff();
}

Marginals marginals(PhaseSettings settings, const CalibrationRecord &cal) {
    auto p = rto_joint_probs(settings, cal);
    return {.p_a1 = p.p11 + p.p12, .p_a2 = p.p21 + p.p22, .p_s1 = p.p11 + p.p21, .p_s2 = p.p12 + p.p22};
}

DensityOperator zwm_reduced_state(Complex gamma) {
    if (std::abs(gamma) > 1 + 1e-12) {
        throw std::invalid_argument("zwm overlap must satisfy |gamma| <= 1");
    }
    // Tr_partner of (|solid>|e1> + |dashed>|e2>)/sqrt2 with <e2|e1> = gamma.
    ComplexMatrix rho{{0.5, 0.5 * gamma}, {0.5 * std::conj(gamma), 0.5}};
    return DensityOperator(rho, SubsystemLayout::single(2, "S"));
}

std::pair<double, double> zwm_probs(Complex gamma, double phi) {
    auto rho = zwm_reduced_state(gamma);
    std::vector<Component> arm{PhaseShifter{Path::kSolid, phi}, Mirror{}, BeamSplitter{}};
    auto out = rho.evolve(compile_arm(arm)).matrix();
    return {std::clamp(out(0, 0).real(), 0.0, 1.0), std::clamp(out(1, 1).real(), 0.0, 1.0)};
}

double fringe_visibility(const std::function<double(double)> &p_of_phi) {
    const double half_pi = std::numbers::pi / 2;
    double f0 = p_of_phi(0);
    double f1 = p_of_phi(half_pi);
    double f2 = p_of_phi(2 * half_pi);
    double f3 = p_of_phi(3 * half_pi);
    double mean = (f0 + f1 + f2 + f3) / 4;
    double amplitude = std::hypot((f0 - f2) / 2, (f1 - f3) / 2);
    if (mean <= 0) {
        return 0;
    }
    return amplitude / mean;
}

}  // namespace biphoton
