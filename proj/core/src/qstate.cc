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

#include "biphoton/qstate.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace biphoton {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kDensityTol = 1e-10;

std::vector<std::size_t> strides_of(const std::vector<std::size_t> &dims) {
    std::vector<std::size_t> strides(dims.size());
    std::size_t s = 1;
    for (std::size_t k = dims.size(); k-- > 0;) {
        strides[k] = s;
        s *= dims[k];
    }
    return strides;
}

}  // namespace

SubsystemLayout::SubsystemLayout(std::vector<std::size_t> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)), total_(1) {
    if (dims_.empty() || dims_.size() != labels_.size()) {
        throw std::invalid_argument("layout needs one label per subsystem and at least one subsystem");
    }
    for (std::size_t d : dims_) {
        if (d == 0) {
            throw std::invalid_argument("layout dimensions must be positive");
        }
        total_ *= d;
        if (total_ > kMaxDim) {
            throw std::length_error("layout total dimension exceeds " + std::to_string(kMaxDim));
        }
    }
    if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size()) {
        throw std::invalid_argument("layout labels must be unique");
    }
}

SubsystemLayout SubsystemLayout::single(std::size_t dim, std::string label) {
    return SubsystemLayout({dim}, {std::move(label)});
}

std::size_t SubsystemLayout::index_of(const std::string &label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw std::invalid_argument("unknown subsystem label '" + label + "'");
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

SubsystemLayout SubsystemLayout::only(const std::string &label) const {
    return SubsystemLayout({dims_[index_of(label)]}, {label});
}

PureState::PureState(ComplexVector amplitudes, SubsystemLayout layout)
    : amplitudes_(std::move(amplitudes)), layout_(std::move(layout)) {
    if (amplitudes_.dim() != layout_.total_dim()) {
        throw std::invalid_argument("amplitude count does not match layout dimension");
    }
    double n = amplitudes_.norm();
    if (std::abs(n - 1.0) > kNormTol) {
        throw std::invalid_argument("pure state is not normalized (norm " + std::to_string(n) + ")");
    }
}

PureState PureState::normalized(const ComplexVector &amplitudes, SubsystemLayout layout) {
    double n = amplitudes.norm();
    if (n < 1e-300) {
        throw std::invalid_argument("cannot normalize the zero vector");
    }
    return PureState(amplitudes * Complex(1.0 / n), std::move(layout));
}

PureState PureState::basis(SubsystemLayout layout, std::size_t index) {
    auto dim = layout.total_dim();
    return PureState(ComplexVector::basis(dim, index), std::move(layout));
}

PureState PureState::product(const PureState &a, const PureState &b) {
    auto dims = a.layout().dims();
    auto labels = a.layout().labels();
    dims.insert(dims.end(), b.layout().dims().begin(), b.layout().dims().end());
    labels.insert(labels.end(), b.layout().labels().begin(), b.layout().labels().end());
    return PureState::normalized(tensor_product(a.amplitudes(), b.amplitudes()),
                                 SubsystemLayout(std::move(dims), std::move(labels)));
}

double PureState::fidelity(const PureState &other) const {
    return std::norm(amplitudes_.dot(other.amplitudes_));
}

DensityOperator::DensityOperator(ComplexMatrix matrix, SubsystemLayout layout)
    : matrix_(std::move(matrix)), layout_(std::move(layout)) {
    if (!matrix_.is_square() || matrix_.rows() != layout_.total_dim()) {
        throw std::invalid_argument("density matrix shape does not match layout");
    }
    if (!is_hermitian(matrix_, kDensityTol)) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    if (std::abs(matrix_.trace() - Complex(1.0)) > kDensityTol) {
        throw std::invalid_argument("density matrix does not have unit trace");
    }
    auto eig = hermitian_eigensystem(matrix_);
    if (eig.values.back() < -kDensityTol) {
        throw std::invalid_argument("density matrix has a negative eigenvalue");
    }
}

DensityOperator DensityOperator::maximally_mixed(SubsystemLayout layout) {
    auto d = layout.total_dim();
    return DensityOperator(ComplexMatrix::identity(d) * Complex(1.0 / static_cast<double>(d)), std::move(layout));
}

Complex DensityOperator::expectation(const ComplexMatrix &observable) const {
    return (matrix_ * observable).trace();
}

DensityOperator DensityOperator::evolve(const ComplexMatrix &unitary) const {
    return DensityOperator(unitary * matrix_ * adjoint(unitary), layout_);
}

ComplexVector SchmidtForm::reconstruct() const {
    ComplexVector out(s_basis.at(0).dim() * a_basis.at(0).dim());
    for (std::size_t k = 0; k < coefficients.size(); k++) {
        out = out + tensor_product(s_basis[k], a_basis[k]) * Complex(coefficients[k]);
    }
    return out;
}

DensityOperator densify(const PureState &psi) {
    return DensityOperator(ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()), psi.layout());
}

DensityOperator partial_trace(const DensityOperator &rho, const std::string &keep) {
    const auto &layout = rho.layout();
    if (layout.size() < 2) {
        throw std::invalid_argument("partial_trace needs at least two subsystems");
    }
    const std::size_t kept = layout.index_of(keep);
    const auto &dims = layout.dims();
    const auto strides = strides_of(dims);
    const std::size_t kept_dim = dims[kept];
    const std::size_t env_dim = layout.total_dim() / kept_dim;

    // Enumerate the full index of every (kept digit = 0, environment digits) combination.
    std::vector<std::size_t> env_offsets;
    env_offsets.reserve(env_dim);
    for (std::size_t flat = 0; flat < layout.total_dim(); flat++) {
        if ((flat / strides[kept]) % kept_dim == 0) {
            env_offsets.push_back(flat);
        }
    }

    ComplexMatrix::Builder out(kept_dim, kept_dim);
    for (std::size_t a = 0; a < kept_dim; a++) {
        for (std::size_t b = 0; b < kept_dim; b++) {
            Complex s = 0;
            for (std::size_t off : env_offsets) {
                s += rho.matrix()(off + a * strides[kept], off + b * strides[kept]);
            }
            out(a, b) = s;
        }
    }
    return DensityOperator(std::move(out).build(), layout.only(keep));
}

SchmidtForm schmidt(const PureState &psi) {
    const auto &layout = psi.layout();
    if (layout.size() != 2) {
        throw std::invalid_argument("schmidt decomposition needs a bipartite layout");
    }
    const std::size_t ds = layout.dims()[0];
    const std::size_t da = layout.dims()[1];
    ComplexMatrix reshaped(ds, da, std::vector<Complex>(psi.amplitudes().entries().begin(),
                                                        psi.amplitudes().entries().end()));
    auto svd = svd_small(reshaped);

    // psi = sum_k sigma_k u_k (x) conj(v_k).
    SchmidtForm out;
    out.coefficients = svd.singulars;
    for (std::size_t k = 0; k < svd.singulars.size(); k++) {
        ComplexVector u = svd.left.column(k);
        std::vector<Complex> a(da);
        for (std::size_t j = 0; j < da; j++) {
            a[j] = std::conj(svd.right(j, k));
        }
        // First significant component of each s-vector is real positive; the
        // compensating phase moves onto the a-vector.
        Complex phase = 1.0;
        for (const auto &z : u.entries()) {
            if (std::abs(z) > 1e-12) {
                phase = std::conj(z) / std::abs(z);
                break;
            }
        }
        out.s_basis.push_back(u * phase);
        out.a_basis.push_back(ComplexVector(std::move(a)) * std::conj(phase));
    }
    for (std::size_t k = 0; k + 1 < out.coefficients.size(); k++) {
        if (std::abs(out.coefficients[k] - out.coefficients[k + 1]) < 1e-9) {
            out.degenerate = true;
        }
    }
    return out;
}

double von_neumann_entropy(const DensityOperator &rho) {
    double h = 0;
    for (double lambda : hermitian_eigensystem(rho.matrix()).values) {
        if (lambda > 1e-15) {
            h -= lambda * std::log2(lambda);
        }
    }
    return std::max(h, 0.0);
}

double purity(const DensityOperator &rho) {
    return (rho.matrix() * rho.matrix()).trace().real();
}

ComplexMatrix rebase(const DensityOperator &rho, std::span<const ComplexVector> basis) {
    const std::size_t n = rho.dim();
    if (basis.size() != n) {
        throw std::invalid_argument("rebase: basis must have exactly dim vectors");
    }
    for (std::size_t i = 0; i < n; i++) {
        if (basis[i].dim() != n) {
            throw std::invalid_argument("rebase: basis vector has wrong dimension");
        }
        for (std::size_t j = 0; j < n; j++) {
            Complex expected = i == j ? 1.0 : 0.0;
            if (std::abs(basis[i].dot(basis[j]) - expected) > 1e-10) {
                throw std::invalid_argument("rebase: basis is not orthonormal");
            }
        }
    }
    std::vector<ComplexVector> rho_basis;
    for (const auto &r : basis) {
        rho_basis.push_back(rho.matrix() * r);
    }
    ComplexMatrix::Builder out(n, n);
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = 0; j < n; j++) {
            out(i, j) = basis[i].dot(rho_basis[j]);
        }
    }
    return std::move(out).build();
}

ComplexMatrix embed(const ComplexMatrix &op, const SubsystemLayout &layout, const std::string &label) {
    const std::size_t target = layout.index_of(label);
    if (!op.is_square() || op.rows() != layout.dims()[target]) {
        throw std::invalid_argument("embed: operator dimension does not match subsystem '" + label + "'");
    }
    ComplexMatrix out = target == 0 ? op : ComplexMatrix::identity(layout.dims()[0]);
    for (std::size_t k = 1; k < layout.size(); k++) {
        out = tensor_product(out, k == target ? op : ComplexMatrix::identity(layout.dims()[k]));
    }
    return out;
}

}  // namespace biphoton
