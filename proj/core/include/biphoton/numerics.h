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

#ifndef BIPHOTON_NUMERICS_H
#define BIPHOTON_NUMERICS_H

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace biphoton {

using Complex = std::complex<double>;

/// Largest state-space dimension any vector or matrix may have. Two path
/// qubits plus a qutrit apparatus (or a qubit plus three environment qubits)
/// fit inside it.
inline constexpr std::size_t kMaxDim = 16;

/// Dense complex vector. Entries are always finite.
class ComplexVector {
   public:
    explicit ComplexVector(std::size_t dim);
    explicit ComplexVector(std::vector<Complex> entries);
    ComplexVector(std::initializer_list<Complex> entries);

    /// Standard basis vector e_index of the given dimension.
    static ComplexVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const noexcept { return entries_.size(); }
    const Complex &operator[](std::size_t k) const { return entries_[k]; }
    std::span<const Complex> entries() const noexcept { return entries_; }

    double norm() const;
    /// Inner product <this|other>, conjugate-linear in this.
    Complex dot(const ComplexVector &other) const;

    ComplexVector operator*(Complex scale) const;
    ComplexVector operator+(const ComplexVector &other) const;
    ComplexVector operator-(const ComplexVector &other) const;
    bool operator==(const ComplexVector &other) const = default;

   private:
    std::vector<Complex> entries_;
};

/// Dense row-major complex matrix. Entries are always finite.
class ComplexMatrix {
   public:
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    /// Row-list literal, e.g. {{1, 0}, {0, 1}}.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix zero(std::size_t rows, std::size_t cols) { return ComplexMatrix(rows, cols); }
    static ComplexMatrix diagonal(std::span<const Complex> diag);
    static ComplexMatrix diagonal(std::initializer_list<Complex> diag);
    /// |u><v|
    static ComplexMatrix outer(const ComplexVector &u, const ComplexVector &v);
    /// Matrix whose k-th column is columns[k].
    static ComplexMatrix from_columns(std::span<const ComplexVector> columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    const Complex &operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    std::span<const Complex> entries() const noexcept { return entries_; }

    ComplexVector column(std::size_t c) const;
    ComplexVector row(std::size_t r) const;

    Complex trace() const;
    ComplexMatrix operator*(const ComplexMatrix &other) const;
    ComplexVector operator*(const ComplexVector &v) const;
    ComplexMatrix operator*(Complex scale) const;
    ComplexMatrix operator+(const ComplexMatrix &other) const;
    ComplexMatrix operator-(const ComplexMatrix &other) const;
    bool operator==(const ComplexMatrix &other) const = default;

    /// Element-wise builder for code that assembles matrices entry by entry.
    class Builder;

   private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Complex> entries_;
};

class ComplexMatrix::Builder {
   public:
    Builder(std::size_t rows, std::size_t cols);
    Complex &operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    ComplexMatrix build() &&;

   private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Complex> entries_;
};

/// Kronecker product. Throws std::length_error if either result dimension
/// exceeds kMaxDim.
ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexVector tensor_product(const ComplexVector &a, const ComplexVector &b);

/// Conjugate transpose.
ComplexMatrix adjoint(const ComplexMatrix &a);

/// max |a_ij - b_ij|; throws std::invalid_argument on a shape mismatch.
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);
double max_abs_diff(const ComplexVector &a, const ComplexVector &b);

bool is_hermitian(const ComplexMatrix &m, double tol);
/// ||U^dagger U - I||_max.
double unitarity_defect(const ComplexMatrix &u);

struct EigenSystem {
    /// Descending.
    std::vector<double> values;
    /// Column k is the unit eigenvector for values[k]; first nonzero
    /// component of each column is real positive.
    ComplexMatrix vectors;
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Rejects inputs that
/// are not Hermitian within 1e-10.
EigenSystem hermitian_eigensystem(const ComplexMatrix &h);

struct SingularValueDecomposition {
    /// rows x k, orthonormal columns, k = min(rows, cols).
    ComplexMatrix left;
    /// Descending, nonnegative, length k.
    std::vector<double> singulars;
    /// cols x k, orthonormal columns.
    ComplexMatrix right;
};

/// One-sided Jacobi SVD for matrices up to 4x4: m = left * diag(singulars) * right^dagger.
SingularValueDecomposition svd_small(const ComplexMatrix &m);

std::string to_string(const ComplexMatrix &m);

}  // namespace biphoton

#endif
