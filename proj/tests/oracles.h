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

#ifndef BIPHOTON_TESTS_ORACLES_H
#define BIPHOTON_TESTS_ORACLES_H

// Independent reference computations used only by tests. Nothing here calls
// into the code paths it is used to check.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "biphoton/numerics.h"

namespace biphoton::testing {

inline std::mt19937_64 &test_rng() {
    static std::mt19937_64 rng(20260101);
    return rng;
}

inline Complex random_complex(std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    return {g(rng), g(rng)};
}

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64 &rng) {
    std::vector<Complex> e(rows * cols);
    for (auto &z : e) {
        z = random_complex(rng);
    }
    return ComplexMatrix(rows, cols, std::move(e));
}

inline ComplexVector random_unit_vector(std::size_t dim, std::mt19937_64 &rng) {
    std::vector<Complex> e(dim);
    double n = 0;
    for (auto &z : e) {
        z = random_complex(rng);
        n += std::norm(z);
    }
    for (auto &z : e) {
        z /= std::sqrt(n);
    }
    return ComplexVector(std::move(e));
}

inline ComplexMatrix random_hermitian(std::size_t dim, std::mt19937_64 &rng) {
    auto m = random_matrix(dim, dim, rng);
    return (m + adjoint(m)) * Complex(0.5);
}

/// Random unitary from Gram-Schmidt on Gaussian columns.
inline ComplexMatrix random_unitary(std::size_t dim, std::mt19937_64 &rng) {
    std::vector<std::vector<Complex>> cols;
    while (cols.size() < dim) {
        std::vector<Complex> v(dim);
        for (auto &z : v) {
            z = random_complex(rng);
        }
        for (const auto &c : cols) {
            Complex p = 0;
            for (std::size_t k = 0; k < dim; k++) {
                p += std::conj(c[k]) * v[k];
            }
            for (std::size_t k = 0; k < dim; k++) {
                v[k] -= p * c[k];
            }
        }
        double n = 0;
        for (auto &z : v) {
            n += std::norm(z);
        }
        n = std::sqrt(n);
        if (n < 1e-6) {
            continue;
        }
        for (auto &z : v) {
            z /= n;
        }
        cols.push_back(std::move(v));
    }
    ComplexMatrix::Builder b(dim, dim);
    for (std::size_t c = 0; c < dim; c++) {
        for (std::size_t r = 0; r < dim; r++) {
            b(r, c) = cols[c][r];
        }
    }
    return std::move(b).build();
}

/// Random (c1, c2) with |c1|^2 + |c2|^2 = 1 and random relative phase.
inline std::pair<Complex, Complex> random_amplitudes(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double p = u(rng);
    double phase1 = 2 * std::numbers::pi * u(rng);
    double phase2 = 2 * std::numbers::pi * u(rng);
    return {std::polar(std::sqrt(p), phase1), std::polar(std::sqrt(1 - p), phase2)};
}

/// Two-photon coincidence probabilities in closed form, (A, S) indexed:
/// same-detector pairs (1/4)(1 + cos(delta + w)), different-detector pairs
/// (1/4)(1 - cos(delta + w)).
struct ClosedFormJoint {
    double same_pair;
    double diff_pair;
};
inline ClosedFormJoint closed_form_joint(double phi_s, double phi_a, double w = 0) {
    double c = std::cos(phi_s - phi_a + w);
    return {0.25 * (1 + c), 0.25 * (1 - c)};
}

/// Detector-1 probability of photon S when its partner's path states overlap
/// as gamma: builds (|solid>|e1> + |dashed>|e2>)/sqrt2 in a 2x2 space with
/// <e2|e1> = gamma, traces the partner out by explicit summation, and pushes
/// the reduced state through phase(phi on solid) then the symmetric splitter.
inline double zwm_p1_brute_force(Complex gamma, double phi) {
    // e2 = (1, 0); e1 = (gamma, sqrt(1 - |gamma|^2)) so <e2|e1> = gamma.
    const Complex e1[2] = {gamma, std::sqrt(std::max(0.0, 1 - std::norm(gamma)))};
    const Complex e2[2] = {1.0, 0.0};
    const double h = std::sqrt(0.5);
    // psi[path][partner]
    Complex psi[2][2];
    for (int k = 0; k < 2; k++) {
        psi[0][k] = h * e1[k];
        psi[1][k] = h * e2[k];
    }
    Complex rho[2][2] = {};
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            for (int k = 0; k < 2; k++) {
                rho[i][j] += psi[i][k] * std::conj(psi[j][k]);
            }
        }
    }
    const Complex u[2][2] = {{std::polar(h, phi), Complex(0, h)}, {Complex(0, h) * std::polar(1.0, phi), h}};
    Complex p1 = 0;
    for (int j = 0; j < 2; j++) {
        for (int k = 0; k < 2; k++) {
            p1 += u[0][j] * rho[j][k] * std::conj(u[0][k]);
        }
    }
    return p1.real();
}

/// Off-diagonal magnitude 2|rho_S(1,2)| after n collisions, by enumerating
/// every environment bit string: on the s2 branch each environment qubit is
/// cos(theta)|0> + sin(theta)|1>; on the s1 branch it stays |0>.
inline double decoherence_visibility_enumerated(double theta, std::size_t n) {
    Complex overlap = 0;
    const std::size_t env = std::size_t{1} << n;
    for (std::size_t bits = 0; bits < env; bits++) {
        Complex branch1 = bits == 0 ? 1.0 : 0.0;
        Complex branch2 = 1.0;
        for (std::size_t k = 0; k < n; k++) {
            branch2 *= ((bits >> k) & 1) ? std::sin(theta) : std::cos(theta);
        }
        overlap += std::conj(branch2) * branch1;
    }
    return std::abs(overlap);
}

inline double four_sigma(double p, double n) {
    return 4 * std::sqrt(p * (1 - p) / n);
}

}  // namespace biphoton::testing

#endif
