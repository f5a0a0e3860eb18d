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

#ifndef BIPHOTON_MEASUREMENT_H
#define BIPHOTON_MEASUREMENT_H

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "biphoton/numerics.h"
#include "biphoton/qstate.h"
#include "biphoton/rng.h"

namespace biphoton {

/// Detector with a ready slot |a0> and one pointer slot per system eigenstate.
struct ApparatusSpec {
    std::size_t dim = 3;
    std::size_t ready_index = 0;
    std::array<std::size_t, 2> pointer_indices = {1, 2};

    /// Throws std::invalid_argument unless the three slots are distinct and < dim.
    void validate() const;
    /// Layout {2, dim} labelled {"S", "A"}.
    SubsystemLayout joint_layout() const;
    PureState ready_state() const;
};

/// Eigenvalue record of one sampled trial. Indices are 1-based eigenvalue
/// labels (1 or 2). Only values are recorded: nothing here claims that
/// either subsystem was left in the matching eigenstate.
struct OutcomeRecord {
    int s_eigenvalue_index = 0;
    int a_eigenvalue_index = 0;
    std::uint64_t trial_id = 0;
    /// (stream major, stream minor) the trial's draws came from.
    std::pair<std::uint64_t, std::uint64_t> seed_path;

    bool operator==(const OutcomeRecord &other) const = default;
};

/// Permutation unitary on S (x) A taking |s_i, a0> to |s_i, a_i>. On each
/// system branch the remaining apparatus slots are mapped onto the remaining
/// targets in increasing order.
ComplexMatrix premeasurement_unitary(const ApparatusSpec &app);

/// U (psi_S (x) apparatus_state). Throws std::invalid_argument if the
/// apparatus is not in its ready state or psi_S is not two-dimensional.
PureState premeasure(const PureState &system, const ApparatusSpec &app, const PureState &apparatus_state);
PureState premeasure(const PureState &system, const ApparatusSpec &app);

/// Joint projectors for (s1 a1, s1 a2, s2 a1, s2 a2, no pointer reading).
/// The fifth collects the ready slot and any extra apparatus slots so the
/// set sums to the identity.
std::vector<ComplexMatrix> pointer_projectors(const ApparatusSpec &app);

/// <psi|P_k|psi> for each projector. The set must be Hermitian, idempotent,
/// and sum to the identity within 1e-10. Excursions outside [0, 1] up to
/// 1e-12 are clamped; larger ones throw.
std::vector<double> born_probabilities(const PureState &psi, std::span<const ComplexMatrix> projectors);

/// Draws an index distributed per `probabilities` using one uniform from
/// `rng`. Requires the probabilities to sum to 1 within 1e-9 and none to be
/// below -1e-12.
std::size_t sample(std::span<const double> probabilities, Rng &rng);

struct CatScenario {
    PureState measurement_state;
    DensityOperator rho_s;
    DensityOperator rho_a;
    SchmidtForm schmidt;
    double entropy_global = 0;
    double entropy_s = 0;
    double entropy_a = 0;
    double purity_global = 0;
    double purity_s = 0;
    double purity_a = 0;
    std::vector<OutcomeRecord> records;
};

/// Premeasures c1|s1> + c2|s2> with the default apparatus, analyses the
/// resulting measurement state and samples `trials` joint pointer readings.
/// Trial t draws from rng.derive(0, t), so results do not depend on
/// `threads`.
CatScenario run_cat_scenario(Complex c1, Complex c2, std::size_t trials, const Rng &rng, unsigned threads = 1);

/// CSV with header "trial_id,s_value,a_value".
void write_records_csv(std::ostream &out, std::span<const OutcomeRecord> records);

}  // namespace biphoton

#endif
