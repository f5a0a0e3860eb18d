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

#include "biphoton/numerics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace biphoton {

namespace {

void require_finite(std::span<const Complex> entries) {
    for (const auto &z : entries) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw std::invalid_argument("non-finite entry in complex vector/matrix");
        }
    }
}

void require_dim(std::size_t n, const char *what) {
    if (n == 0) {
        throw std::invalid_argument(std::string(what) + " must be positive");
    }
}

// Multiplies by the conjugate phase of the first significant entry so that
// entry becomes real positive.
void fix_phase(std::vector<Complex> &column) {
    for (const auto &z : column) {
        if (std::abs(z) > 1e-12) {
            Complex phase = std::conj(z) / std::abs(z);
            for (auto &w : column) {
                w *= phase;
            }
            return;
        }
    }
}

}  // namespace

ComplexVector::ComplexVector(std::size_t dim) : entries_(dim) {
    require_dim(dim, "vector dimension");
}

ComplexVector::ComplexVector(std::vector<Complex> entries) : entries_(std::move(entries)) {
    require_dim(entries_.size(), "vector dimension");
    require_finite(entries_);
}

ComplexVector::ComplexVector(std::initializer_list<Complex> entries)
    : ComplexVector(std::vector<Complex>(entries)) {
}

ComplexVector ComplexVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw std::out_of_range("basis index out of range");
    }
    std::vector<Complex> e(dim);
    e[index] = 1.0;
    return ComplexVector(std::move(e));
}

double ComplexVector::norm() const {
    double s = 0;
    for (const auto &z : entries_) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

Complex ComplexVector::dot(const ComplexVector &other) const {
    if (other.dim() != dim()) {
        throw std::invalid_argument("dot: dimension mismatch");
    }
    Complex s = 0;
    for (std::size_t k = 0; k < dim(); k++) {
        s += std::conj(entries_[k]) * other.entries_[k];
    }
    return s;
}

ComplexVector ComplexVector::operator*(Complex scale) const {
    std::vector<Complex> out(entries_);
    for (auto &z : out) {
        z *= scale;
    }
    return ComplexVector(std::move(out));
}

ComplexVector ComplexVector::operator+(const ComplexVector &other) const {
    if (other.dim() != dim()) {
        throw std::invalid_argument("vector sum: dimension mismatch");
    }
    std::vector<Complex> out(entries_);
    for (std::size_t k = 0; k < dim(); k++) {
        out[k] += other.entries_[k];
    }
    return ComplexVector(std::move(out));
}

ComplexVector ComplexVector::operator-(const ComplexVector &other) const {
    return *this + other * Complex(-1.0);
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {
    require_dim(rows, "matrix rows");
    require_dim(cols, "matrix cols");
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    require_dim(rows, "matrix rows");
    require_dim(cols, "matrix cols");
    if (entries_.size() != rows * cols) {
        throw std::invalid_argument("matrix entry count does not match rows*cols");
    }
    require_finite(entries_);
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    require_dim(rows_, "matrix rows");
    require_dim(cols_, "matrix cols");
    entries_.reserve(rows_ * cols_);
    for (const auto &r : rows) {
        if (r.size() != cols_) {
            throw std::invalid_argument("ragged matrix literal");
        }
        entries_.insert(entries_.end(), r.begin(), r.end());
    }
    require_finite(entries_);
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    Builder b(dim, dim);
    for (std::size_t k = 0; k < dim; k++) {
        b(k, k) = 1.0;
    }
    return std::move(b).build();
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
    Builder b(diag.size(), diag.size());
    for (std::size_t k = 0; k < diag.size(); k++) {
        b(k, k) = diag[k];
    }
    return std::move(b).build();
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<Complex> diag) {
    return diagonal(std::span<const Complex>(diag.begin(), diag.size()));
}

ComplexMatrix ComplexMatrix::outer(const ComplexVector &u, const ComplexVector &v) {
    Builder b(u.dim(), v.dim());
    for (std::size_t r = 0; r < u.dim(); r++) {
        for (std::size_t c = 0; c < v.dim(); c++) {
            b(r, c) = u[r] * std::conj(v[c]);
        }
    }
    return std::move(b).build();
}

ComplexMatrix ComplexMatrix::from_columns(std::span<const ComplexVector> columns) {
    if (columns.empty()) {
        throw std::invalid_argument("from_columns: no columns");
    }
    Builder b(columns[0].dim(), columns.size());
    for (std::size_t c = 0; c < columns.size(); c++) {
        if (columns[c].dim() != columns[0].dim()) {
            throw std::invalid_argument("from_columns: ragged columns");
        }
        for (std::size_t r = 0; r < columns[c].dim(); r++) {
            b(r, c) = columns[c][r];
        }
    }
    return std::move(b).build();
}

ComplexVector ComplexMatrix::column(std::size_t c) const {
    std::vector<Complex> out(rows_);
    for (std::size_t r = 0; r < rows_; r++) {
        out[r] = (*this)(r, c);
    }
    return ComplexVector(std::move(out));
}

ComplexVector ComplexMatrix::row(std::size_t r) const {
    return ComplexVector(std::vector<Complex>(entries_.begin() + r * cols_, entries_.begin() + (r + 1) * cols_));
}

Complex ComplexMatrix::trace() const {
    if (!is_square()) {
        throw std::invalid_argument("trace of non-square matrix");
    }
    Complex t = 0;
    for (std::size_t k = 0; k < rows_; k++) {
        t += (*this)(k, k);
    }
    return t;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix &other) const {
    if (cols_ != other.rows_) {
        throw std::invalid_argument("matrix product: inner dimension mismatch");
    }
    Builder b(rows_, other.cols_);
    for (std::size_t r = 0; r < rows_; r++) {
        for (std::size_t k = 0; k < cols_; k++) {
            Complex a = (*this)(r, k);
            if (a == Complex(0)) {
                continue;
            }
            for (std::size_t c = 0; c < other.cols_; c++) {
                b(r, c) += a * other(k, c);
            }
        }
    }
    return std::move(b).build();
}

ComplexVector ComplexMatrix::operator*(const ComplexVector &v) const {
    if (cols_ != v.dim()) {
        throw std::invalid_argument("matrix-vector product: dimension mismatch");
    }
    std::vector<Complex> out(rows_);
    for (std::size_t r = 0; r < rows_; r++) {
        for (std::size_t c = 0; c < cols_; c++) {
            out[r] += (*this)(r, c) * v[c];
        }
    }
    return ComplexVector(std::move(out));
}

ComplexMatrix ComplexMatrix::operator*(Complex scale) const {
    std::vector<Complex> out(entries_);
    for (auto &z : out) {
        z *= scale;
    }
    return ComplexMatrix(rows_, cols_, std::move(out));
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix &other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("matrix sum: shape mismatch");
    }
    std::vector<Complex> out(entries_);
    for (std::size_t k = 0; k < out.size(); k++) {
        out[k] += other.entries_[k];
    }
    return ComplexMatrix(rows_, cols_, std::move(out));
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix &other) const {
    return *this + other * Complex(-1.0);
}

ComplexMatrix::Builder::Builder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {
}

ComplexMatrix ComplexMatrix::Builder::build() && {
    return ComplexMatrix(rows_, cols_, std::move(entries_));
}

ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    std::size_t rows = a.rows() * b.rows();
    std::size_t cols = a.cols() * b.cols();
    if (rows > kMaxDim || cols > kMaxDim) {
        throw std::length_error("tensor_product: result exceeds maximum dimension " + std::to_string(kMaxDim));
    }
    ComplexMatrix::Builder out(rows, cols);
    for (std::size_t ar = 0; ar < a.rows(); ar++) {
        for (std::size_t ac = 0; ac < a.cols(); ac++) {
            for (std::size_t br = 0; br < b.rows(); br++) {
                for (std::size_t bc = 0; bc < b.cols(); bc++) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = a(ar, ac) * b(br, bc);
                }
            }
        }
    }
    return std::move(out).build();
}

ComplexVector tensor_product(const ComplexVector &a, const ComplexVector &b) {
    std::size_t dim = a.dim() * b.dim();
    if (dim > kMaxDim) {
        throw std::length_error("tensor_product: result exceeds maximum dimension " + std::to_string(kMaxDim));
    }
    std::vector<Complex> out(dim);
    for (std::size_t i = 0; i < a.dim(); i++) {
        for (std::size_t j = 0; j < b.dim(); j++) {
            out[i * b.dim() + j] = a[i] * b[j];
        }
    }
    return ComplexVector(std::move(out));
}

ComplexMatrix adjoint(const ComplexMatrix &a) {
    ComplexMatrix::Builder out(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); r++) {
        for (std::size_t c = 0; c < a.cols(); c++) {
            out(c, r) = std::conj(a(r, c));
        }
    }
    return std::move(out).build();
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    }
    double m = 0;
    for (std::size_t k = 0; k < a.entries().size(); k++) {
        m = std::max(m, std::abs(a.entries()[k] - b.entries()[k]));
    }
    return m;
}

double max_abs_diff(const ComplexVector &a, const ComplexVector &b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    }
    double m = 0;
    for (std::size_t k = 0; k < a.dim(); k++) {
        m = std::max(m, std::abs(a[k] - b[k]));
    }
    return m;
}

bool is_hermitian(const ComplexMatrix &m, double tol) {
    return m.is_square() && max_abs_diff(m, adjoint(m)) <= tol;
}

double unitarity_defect(const ComplexMatrix &u) {
    if (!u.is_square()) {
        throw std::invalid_argument("unitarity_defect: non-square matrix");
    }
    return max_abs_diff(adjoint(u) * u, ComplexMatrix::identity(u.rows()));
}

EigenSystem hermitian_eigensystem(const ComplexMatrix &h) {
    if (!is_hermitian(h, 1e-10)) {
        throw std::invalid_argument("hermitian_eigensystem: matrix is not Hermitian within 1e-10");
    }
    const std::size_t n = h.rows();
    // Work on the exactly-Hermitian part so rotations see a consistent matrix.
    std::vector<Complex> a(n * n);
    std::vector<Complex> v(n * n);
    double frob = 0;
    for (std::size_t r = 0; r < n; r++) {
        for (std::size_t c = 0; c < n; c++) {
            a[r * n + c] = 0.5 * (h(r, c) + std::conj(h(c, r)));
            frob += std::norm(a[r * n + c]);
        }
        v[r * n + r] = 1.0;
    }
    auto at = [&](std::size_t r, std::size_t c) -> Complex & { return a[r * n + c]; };
    const double threshold = 1e-14 * std::max(1.0, std::sqrt(frob));

    for (int sweep = 0; sweep < 100; sweep++) {
        double off = 0;
        for (std::size_t r = 0; r < n; r++) {
            for (std::size_t c = 0; c < n; c++) {
                if (r != c) {
                    off += std::norm(at(r, c));
                }
            }
        }
        if (std::sqrt(off) < threshold) {
            break;
        }
        for (std::size_t p = 0; p + 1 < n; p++) {
            for (std::size_t q = p + 1; q < n; q++) {
                double mag = std::abs(at(p, q));
                if (mag < 1e-300) {
                    continue;
                }
                // Phase-rotate q so the (p, q) element is real, then apply a
                // real Jacobi rotation. Combined unitary acting on columns p, q:
                //   [u_pp u_pq]   [ c            s          ]
                //   [u_qp u_qq] = [-s e^{-i phi}  c e^{-i phi}]
                Complex phase = at(p, q) / mag;
                double app = at(p, p).real();
                double aqq = at(q, q).real();
                double tau = (aqq - app) / (2 * mag);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
                double c = 1 / std::sqrt(1 + t * t);
                double s = t * c;
                Complex upp = c;
                Complex upq = s;
                Complex uqp = -s * std::conj(phase);
                Complex uqq = c * std::conj(phase);
                for (std::size_t k = 0; k < n; k++) {
                    Complex kp = at(k, p);
                    Complex kq = at(k, q);
                    at(k, p) = kp * upp + kq * uqp;
                    at(k, q) = kp * upq + kq * uqq;
                    Complex vp = v[k * n + p];
                    Complex vq = v[k * n + q];
                    v[k * n + p] = vp * upp + vq * uqp;
                    v[k * n + q] = vp * upq + vq * uqq;
                }
                for (std::size_t k = 0; k < n; k++) {
                    Complex pk = at(p, k);
                    Complex qk = at(q, k);
                    at(p, k) = std::conj(upp) * pk + std::conj(uqp) * qk;
                    at(q, k) = std::conj(upq) * pk + std::conj(uqq) * qk;
                }
                at(p, q) = 0;
                at(q, p) = 0;
                at(p, p) = at(p, p).real();
                at(q, q) = at(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return at(x, x).real() > at(y, y).real();
    });
    EigenSystem out{{}, ComplexMatrix(n, n)};
    std::vector<ComplexVector> columns;
    for (std::size_t k : order) {
        out.values.push_back(at(k, k).real());
        std::vector<Complex> col(n);
        for (std::size_t r = 0; r < n; r++) {
            col[r] = v[r * n + k];
        }
        fix_phase(col);
        columns.emplace_back(std::move(col));
    }
    out.vectors = ComplexMatrix::from_columns(columns);
    return out;
}

namespace {

// Requires rows >= cols.
SingularValueDecomposition svd_tall(const ComplexMatrix &m) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    std::vector<std::vector<Complex>> a(cols, std::vector<Complex>(rows));
    std::vector<std::vector<Complex>> v(cols, std::vector<Complex>(cols));
    for (std::size_t c = 0; c < cols; c++) {
        for (std::size_t r = 0; r < rows; r++) {
            a[c][r] = m(r, c);
        }
        v[c][c] = 1.0;
    }

    for (int sweep = 0; sweep < 100; sweep++) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < cols; p++) {
            for (std::size_t q = p + 1; q < cols; q++) {
                double alpha = 0;
                double beta = 0;
                Complex gamma = 0;
                for (std::size_t r = 0; r < rows; r++) {
                    alpha += std::norm(a[p][r]);
                    beta += std::norm(a[q][r]);
                    gamma += std::conj(a[p][r]) * a[q][r];
                }
                double mag = std::abs(gamma);
                if (mag <= 1e-16 * std::sqrt(alpha * beta) || mag < 1e-300) {
                    continue;
                }
                rotated = true;
                Complex unphase = std::conj(gamma) / mag;
                double zeta = (beta - alpha) / (2 * mag);
                double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
                double c = 1 / std::sqrt(1 + t * t);
                double s = c * t;
                auto rotate = [&](std::vector<Complex> &x, std::vector<Complex> &y) {
                    for (std::size_t k = 0; k < x.size(); k++) {
                        Complex xp = x[k];
                        Complex yq = y[k] * unphase;
                        x[k] = c * xp - s * yq;
                        y[k] = s * xp + c * yq;
                    }
                };
                rotate(a[p], a[q]);
                rotate(v[p], v[q]);
            }
        }
        if (!rotated) {
            break;
        }
    }

    std::vector<double> norms(cols);
    for (std::size_t c = 0; c < cols; c++) {
        double s = 0;
        for (const auto &z : a[c]) {
            s += std::norm(z);
        }
        norms[c] = std::sqrt(s);
    }
    std::vector<std::size_t> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

    const double largest = norms[order[0]];
    SingularValueDecomposition out{ComplexMatrix(rows, cols), {}, ComplexMatrix(cols, cols)};
    std::vector<std::vector<Complex>> left;
    std::vector<ComplexVector> right;
    for (std::size_t k : order) {
        double sigma = norms[k];
        out.singulars.push_back(sigma);
        std::vector<Complex> u(rows);
        if (sigma > 1e-13 * std::max(largest, 1e-300) && sigma > 1e-300) {
            for (std::size_t r = 0; r < rows; r++) {
                u[r] = a[k][r] / sigma;
            }
        }
        left.push_back(std::move(u));
        right.emplace_back(v[k]);
    }

    // Complete the left columns belonging to (numerically) zero singular
    // values by Gram-Schmidt over the standard basis.
    for (std::size_t k = 0; k < cols; k++) {
        double len = 0;
        for (const auto &z : left[k]) {
            len += std::norm(z);
        }
        if (len > 0.5) {
            continue;
        }
        for (std::size_t e = 0; e < rows; e++) {
            std::vector<Complex> cand(rows);
            cand[e] = 1.0;
            for (std::size_t j = 0; j < cols; j++) {
                if (j == k) {
                    continue;
                }
                Complex proj = 0;
                for (std::size_t r = 0; r < rows; r++) {
                    proj += std::conj(left[j][r]) * cand[r];
                }
                for (std::size_t r = 0; r < rows; r++) {
                    cand[r] -= proj * left[j][r];
                }
            }
            double cn = 0;
            for (const auto &z : cand) {
                cn += std::norm(z);
            }
            cn = std::sqrt(cn);
            if (cn > 1e-6) {
                for (auto &z : cand) {
                    z /= cn;
                }
                left[k] = std::move(cand);
                break;
            }
        }
    }

    std::vector<ComplexVector> left_vectors;
    for (auto &u : left) {
        left_vectors.emplace_back(std::move(u));
    }
    out.left = ComplexMatrix::from_columns(left_vectors);
    out.right = ComplexMatrix::from_columns(right);
    return out;
}

}  // namespace

SingularValueDecomposition svd_small(const ComplexMatrix &m) {
    if (m.rows() > 4 || m.cols() > 4) {
        throw std::invalid_argument("svd_small: matrix larger than 4x4");
    }
    if (m.rows() >= m.cols()) {
        return svd_tall(m);
    }
    // m^dagger = V S U^dagger.
    auto t = svd_tall(adjoint(m));
    return {std::move(t.right), std::move(t.singulars), std::move(t.left)};
}

std::string to_string(const ComplexMatrix &m) {
    std::ostringstream out;
    out << "[";
    for (std::size_t r = 0; r < m.rows(); r++) {
        out << (r ? ", [" : "[");
        for (std::size_t c = 0; c < m.cols(); c++) {
            out << (c ? ", " : "") << m(r, c).real() << (m(r, c).imag() < 0 ? "-" : "+") << std::abs(m(r, c).imag())
                << "i";
        }
        out << "]";
    }
    out << "]";
    return out.str();
}

}  // namespace biphoton
