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

#ifndef BIPHOTON_QSTATE_H
#define BIPHOTON_QSTATE_H

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "biphoton/numerics.h"

namespace biphoton {

/// Ordered tensor factors of a composite state space, e.g. {2, 3} labelled
/// {"S", "A"}. The first factor is the most significant index.
class SubsystemLayout {
   public:
    SubsystemLayout(std::vector<std::size_t> dims, std::vector<std::string> labels);

    /// A single unnamed factor of the given dimension.
    static SubsystemLayout single(std::size_t dim, std::string label = "S");

    const std::vector<std::size_t> &dims() const noexcept { return dims_; }
    const std::vector<std::string> &labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return dims_.size(); }
    std::size_t total_dim() const noexcept { return total_; }

    /// Position of `label`; throws std::invalid_argument if absent.
    std::size_t index_of(const std::string &label) const;
    SubsystemLayout only(const std::string &label) const;

    bool operator==(const SubsystemLayout &other) const = default;

   private:
    std::vector<std::size_t> dims_;
    std::vector<std::string> labels_;
    std::size_t total_;
};

/// Unit-norm amplitude vector over the tensor basis of a layout.
class PureState {
   public:
    /// Requires ||amplitudes|| = 1 within 1e-12.
    PureState(ComplexVector amplitudes, SubsystemLayout layout);

    /// Divides by the norm. Rejects the zero vector.
    static PureState normalized(const ComplexVector &amplitudes, SubsystemLayout layout);
    static PureState basis(SubsystemLayout layout, std::size_t index);
    /// Joint state a (x) b with concatenated layouts.
    static PureState product(const PureState &a, const PureState &b);

    const ComplexVector &amplitudes() const noexcept { return amplitudes_; }
    const SubsystemLayout &layout() const noexcept { return layout_; }
    std::size_t dim() const noexcept { return amplitudes_.dim(); }

    /// |<this|other>|^2
    double fidelity(const PureState &other) const;

   private:
    ComplexVector amplitudes_;
    SubsystemLayout layout_;
};

/// Hermitian, unit-trace, positive semidefinite operator (tolerance 1e-10).
class DensityOperator {
   public:
    DensityOperator(ComplexMatrix matrix, SubsystemLayout layout);

    static DensityOperator maximally_mixed(SubsystemLayout layout);

    const ComplexMatrix &matrix() const noexcept { return matrix_; }
    const SubsystemLayout &layout() const noexcept { return layout_; }
    std::size_t dim() const noexcept { return matrix_.rows(); }

    /// Tr(rho O).
    Complex expectation(const ComplexMatrix &observable) const;
    /// U rho U^dagger (U must be unitary).
    DensityOperator evolve(const ComplexMatrix &unitary) const;

   private:
    ComplexMatrix matrix_;
    SubsystemLayout layout_;
};

struct SchmidtForm {
    /// Nonnegative, descending; length min(dim S, dim A).
    std::vector<double> coefficients;
    std::vector<ComplexVector> s_basis;
    std::vector<ComplexVector> a_basis;
    /// Two coefficients coincide within 1e-9, so the bases are not unique.
    bool degenerate = false;

    /// sum_k c_k |s_k>|a_k>
    ComplexVector reconstruct() const;
};

DensityOperator densify(const PureState &psi);

/// Traces out every factor except `keep`.
DensityOperator partial_trace(const DensityOperator &rho, const std::string &keep);

SchmidtForm schmidt(const PureState &psi);

/// -sum lambda log2 lambda over the eigenvalues, with 0 log 0 = 0. Bits.
double von_neumann_entropy(const DensityOperator &rho);

/// Tr(rho^2).
double purity(const DensityOperator &rho);

/// Matrix elements <r_i|rho|r_j> in an orthonormal basis spanning the space.
ComplexMatrix rebase(const DensityOperator &rho, std::span<const ComplexVector> basis);

/// Embeds an operator on one factor into the full space: I (x) ... (x) op (x) ... (x) I.
ComplexMatrix embed(const ComplexMatrix &op, const SubsystemLayout &layout, const std::string &label);

}  // namespace biphoton

#endif
