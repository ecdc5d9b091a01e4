// Copyright 2026 The wse-di Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small dense complex linear algebra for operators on dimensions up to ~32.
//
// Three value types carry increasingly strong invariants:
//   ComplexMatrix      square, finite entries
//   HermitianOperator  M == M^dagger (checked at construction, then symmetrized)
//   DensityMatrix      Hermitian, unit trace, positive semidefinite
// All are immutable after construction from the caller's point of view and
// every free function is pure.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace wse {

using Complex = std::complex<double>;

/// Tolerance for Hermiticity / positivity / trace checks at construction.
inline constexpr double kConstructionTol = 1e-12;

class ComplexMatrix {
  public:
    /// Zero matrix of the given dimension. Throws on dim == 0.
    explicit ComplexMatrix(std::size_t dim);
    /// Row-major entries; size must equal dim*dim and all entries finite.
    ComplexMatrix(std::size_t dim, std::vector<Complex> row_major);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const double> diag);
    /// |v><v| (not normalized).
    static ComplexMatrix outer(std::span<const Complex> ket);

    std::size_t dim() const noexcept { return dim_; }
    Complex operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }
    Complex &operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    std::span<const Complex> entries() const noexcept { return data_; }

    ComplexMatrix adjoint() const;
    Complex trace() const;
    double max_abs() const;
    bool is_hermitian(double tol) const;

    ComplexMatrix &operator+=(const ComplexMatrix &other);
    ComplexMatrix &operator-=(const ComplexMatrix &other);
    ComplexMatrix &operator*=(Complex scale);

    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix &rhs) { return lhs += rhs; }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix &rhs) { return lhs -= rhs; }
    friend ComplexMatrix operator*(ComplexMatrix lhs, Complex scale) { return lhs *= scale; }
    friend ComplexMatrix operator*(Complex scale, ComplexMatrix rhs) { return rhs *= scale; }
    friend ComplexMatrix operator*(const ComplexMatrix &lhs, const ComplexMatrix &rhs);

  private:
    std::size_t dim_;
    std::vector<Complex> data_;
};

/// max_{ij} |a_ij - b_ij|; throws on dimension mismatch.
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);

class HermitianOperator {
  public:
    /// Throws ValidationError unless m is Hermitian within kConstructionTol
    /// (scaled by max(1, max|m_ij|)). The stored matrix is (m + m^dagger)/2.
    explicit HermitianOperator(const ComplexMatrix &m);

    static HermitianOperator identity(std::size_t dim);
    static HermitianOperator diagonal(std::span<const double> diag);
    static HermitianOperator zero(std::size_t dim);

    const ComplexMatrix &matrix() const noexcept { return m_; }
    std::size_t dim() const noexcept { return m_.dim(); }
    Complex operator()(std::size_t row, std::size_t col) const { return m_(row, col); }

    friend HermitianOperator operator+(const HermitianOperator &a, const HermitianOperator &b);
    friend HermitianOperator operator-(const HermitianOperator &a, const HermitianOperator &b);
    friend HermitianOperator operator*(double s, const HermitianOperator &a);

  private:
    ComplexMatrix m_;
};

class DensityMatrix {
  public:
    /// Throws ValidationError unless trace is 1 and all eigenvalues are
    /// >= -kConstructionTol.
    explicit DensityMatrix(const HermitianOperator &op);

    /// Normalized projector onto ket. Throws on the zero vector.
    static DensityMatrix pure(std::span<const Complex> ket);
    static DensityMatrix maximally_mixed(std::size_t dim);
    /// sum_i w_i rho_i with w a probability vector.
    static DensityMatrix mixture(std::span<const double> weights, std::span<const DensityMatrix> states);

    const HermitianOperator &op() const noexcept { return op_; }
    const ComplexMatrix &matrix() const noexcept { return op_.matrix(); }
    std::size_t dim() const noexcept { return op_.dim(); }

  private:
    HermitianOperator op_;
};

struct EigenDecomposition {
    /// Descending.
    std::vector<double> values;
    /// Orthonormal eigenvectors as columns, in the order of `values`. Each
    /// column is phase-fixed so its first non-negligible entry is real > 0.
    ComplexMatrix vectors;
};

/// Cyclic complex Jacobi eigensolver. Eigenvalue ties are ordered by the
/// index of the first non-negligible eigenvector component.
EigenDecomposition hermitian_eig(const HermitianOperator &m);

/// |M| = V diag(|lambda|) V^dagger.
HermitianOperator operator_abs(const HermitianOperator &m);

/// Largest |eigenvalue|.
double spectral_norm(const HermitianOperator &m);

HermitianOperator anticommutator(const HermitianOperator &a, const HermitianOperator &b);
ComplexMatrix anticommutator(const ComplexMatrix &a, const ComplexMatrix &b);
/// [A,B] = AB - BA; anti-Hermitian when A and B are Hermitian.
ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix commutator(const HermitianOperator &a, const HermitianOperator &b);

/// Kronecker product, first factor slowest.
ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b);
HermitianOperator tensor(const HermitianOperator &a, const HermitianOperator &b);
DensityMatrix tensor(const DensityMatrix &a, const DensityMatrix &b);

enum class Subsystem { A, B };

/// Partial trace of an operator on C^{dim_a} (x) C^{dim_b}, keeping `keep`.
ComplexMatrix partial_trace(const ComplexMatrix &m, std::size_t dim_a, std::size_t dim_b, Subsystem keep);
DensityMatrix partial_trace(const DensityMatrix &rho, std::size_t dim_a, std::size_t dim_b, Subsystem keep);

/// Re tr(O rho).
double expectation(const HermitianOperator &o, const DensityMatrix &rho);
/// Re tr(O M) for an arbitrary (possibly unnormalized) matrix M.
double expectation(const HermitianOperator &o, const ComplexMatrix &m);

HermitianOperator pauli_x();
HermitianOperator pauli_y();
HermitianOperator pauli_z();

/// (|00> + |11>)/sqrt(2).
DensityMatrix phi_plus();

} // namespace wse
