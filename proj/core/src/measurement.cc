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

#include "biphoton/measurement.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "biphoton/parallel.h"

namespace biphoton {

void ApparatusSpec::validate() const {
    const auto [p1, p2] = pointer_indices;
    if (ready_index >= dim || p1 >= dim || p2 >= dim) {
        throw std::invalid_argument("apparatus slot index out of range");
    }
    if (ready_index == p1 || ready_index == p2 || p1 == p2) {
        throw std::invalid_argument("apparatus ready and pointer slots must be distinct");
    }
    if (2 * dim > kMaxDim) {
        throw std::length_error("apparatus too large for the joint space");
    }
}

SubsystemLayout ApparatusSpec::joint_layout() const {
    return SubsystemLayout({2, dim}, {"S", "A"});
}

PureState ApparatusSpec::ready_state() const {
    validate();
    return PureState::basis(SubsystemLayout::single(dim, "A"), ready_index);
}

ComplexMatrix premeasurement_unitary(const ApparatusSpec &app) {
    app.validate();
    const std::size_t n = 2 * app.dim;
    ComplexMatrix::Builder u(n, n);
    for (std::size_t s = 0; s < 2; s++) {
        const std::size_t target = app.pointer_indices[s];
        std::vector<std::size_t> sources;
        std::vector<std::size_t> targets;
        for (std::size_t a = 0; a < app.dim; a++) {
            if (a != app.ready_index) {
                sources.push_back(a);
            }
            if (a != target) {
                targets.push_back(a);
            }
        }
        u(s * app.dim + target, s * app.dim + app.ready_index) = 1.0;
        for (std::size_t k = 0; k < sources.size(); k++) {
            u(s * app.dim + targets[k], s * app.dim + sources[k]) = 1.0;
        }
    }
    return std::move(u).build();
}

PureState premeasure(const PureState &system, const ApparatusSpec &app, const PureState &apparatus_state) {
    app.validate();
    if (system.dim() != 2) {
        throw std::invalid_argument("premeasure: system must be two-dimensional");
    }
    if (apparatus_state.dim() != app.dim || apparatus_state.fidelity(app.ready_state()) < 1 - 1e-12) {
        throw std::invalid_argument("premeasure: apparatus is not in its ready state");
    }
    ComplexVector joint = tensor_product(system.amplitudes(), apparatus_state.amplitudes());
    return PureState(premeasurement_unitary(app) * joint, app.joint_layout());
}

PureState premeasure(const PureState &system, const ApparatusSpec &app) {
    return premeasure(system, app, app.ready_state());
}

std::vector<ComplexMatrix> pointer_projectors(const ApparatusSpec &app) {
    app.validate();
    const std::size_t n = 2 * app.dim;
    std::vector<ComplexMatrix> out;
    std::vector<bool> covered(n, false);
    for (std::size_t s = 0; s < 2; s++) {
        for (std::size_t a : app.pointer_indices) {
            std::size_t idx = s * app.dim + a;
            covered[idx] = true;
            out.push_back(ComplexMatrix::outer(ComplexVector::basis(n, idx), ComplexVector::basis(n, idx)));
        }
    }
    ComplexMatrix::Builder rest(n, n);
    for (std::size_t k = 0; k < n; k++) {
        if (!covered[k]) {
            rest(k, k) = 1.0;
        }
    }
    out.push_back(std::move(rest).build());
    return out;
}

std::vector<double> born_probabilities(const PureState &psi, std::span<const ComplexMatrix> projectors) {
    const std::size_t n = psi.dim();
    if (projectors.empty()) {
        throw std::invalid_argument("born_probabilities: empty projector set");
    }
    ComplexMatrix total(n, n);
    for (const auto &p : projectors) {
        if (!p.is_square() || p.rows() != n) {
            throw std::invalid_argument("born_probabilities: projector dimension mismatch");
        }
        if (!is_hermitian(p, 1e-10) || max_abs_diff(p * p, p) > 1e-10) {
            throw std::invalid_argument("born_probabilities: operator is not an orthogonal projector");
        }
        total = total + p;
    }
    if (max_abs_diff(total, ComplexMatrix::identity(n)) > 1e-10) {
        throw std::invalid_argument("born_probabilities: projectors do not sum to the identity");
    }
    std::vector<double> probs;
    for (const auto &p : projectors) {
        double x = psi.amplitudes().dot(p * psi.amplitudes()).real();
        if (x < -1e-12 || x > 1 + 1e-12) {
            throw std::runtime_error("born_probabilities: probability outside [0, 1]");
        }
        probs.push_back(std::clamp(x, 0.0, 1.0));
    }
    return probs;
}

std::size_t sample(std::span<const double> probabilities, Rng &rng) {
    if (probabilities.empty()) {
        throw std::invalid_argument("sample: empty distribution");
    }
    double sum = 0;
    for (double p : probabilities) {
        if (!(p >= -1e-12)) {
            throw std::invalid_argument("sample: negative probability");
        }
        sum += p;
    }
    if (std::abs(sum - 1) > 1e-9) {
        throw std::invalid_argument("sample: probabilities do not sum to 1");
    }
    const double u = rng.uniform();
    double cumulative = 0;
    std::size_t last_nonzero = 0;
    for (std::size_t k = 0; k < probabilities.size(); k++) {
        double p = std::max(probabilities[k], 0.0);
        if (p > 0) {
            last_nonzero = k;
        }
        cumulative += p;
        if (u < cumulative) {
            return k;
        }
    }
    return last_nonzero;
}

CatScenario run_cat_scenario(Complex c1, Complex c2, std::size_t trials, const Rng &rng, unsigned threads) {
    if (std::abs(std::norm(c1) + std::norm(c2) - 1) > 1e-10) {
        throw std::invalid_argument("run_cat_scenario: |c1|^2 + |c2|^2 must equal 1");
    }
    ApparatusSpec app;
    auto system = PureState::normalized(ComplexVector{c1, c2}, SubsystemLayout::single(2, "S"));
    auto ms = premeasure(system, app);
    auto rho = densify(ms);
    auto rho_s = partial_trace(rho, "S");
    auto rho_a = partial_trace(rho, "A");
    auto projectors = pointer_projectors(app);
    auto probs = born_probabilities(ms, projectors);

    CatScenario out{.measurement_state = ms, .rho_s = rho_s, .rho_a = rho_a, .schmidt = schmidt(ms), .records = {}};
    out.entropy_global = von_neumann_entropy(rho);
    out.entropy_s = von_neumann_entropy(rho_s);
    out.entropy_a = von_neumann_entropy(rho_a);
    out.purity_global = purity(rho);
    out.purity_s = purity(rho_s);
    out.purity_a = purity(rho_a);

    out.records.resize(trials);
    parallel_for(trials, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; t++) {
            Rng stream = rng.derive(0, t);
            std::size_t k = sample(probs, stream);
            OutcomeRecord r;
            r.trial_id = t;
            r.seed_path = {0, t};
            if (k < 4) {
                r.s_eigenvalue_index = static_cast<int>(k / 2) + 1;
                r.a_eigenvalue_index = static_cast<int>(k % 2) + 1;
            }
            out.records[t] = r;
        }
    });
    return out;
}

void write_records_csv(std::ostream &out, std::span<const OutcomeRecord> records) {
    out << "trial_id,s_value,a_value\n";
    for (const auto &r : records) {
        out << r.trial_id << ',' << r.s_eigenvalue_index << ',' << r.a_eigenvalue_index << '\n';
    }
}

}  // namespace biphoton
