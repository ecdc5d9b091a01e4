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

#include "wse/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "wse/error.hpp"

namespace wse {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char *what) {
    require(a == b, std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                        std::to_string(b) + ")");
}

} // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    require(dim > 0, "ComplexMatrix: dimension must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> row_major)
    : dim_(dim), data_(std::move(row_major)) {
    require(dim > 0, "ComplexMatrix: dimension must be positive");
    require(data_.size() == dim * dim, "ComplexMatrix: expected " + std::to_string(dim * dim) + " entries, got " +
                                           std::to_string(data_.size()));
    for (const auto &z : data_) {
        require(std::isfinite(z.real()) && std::isfinite(z.imag()), "ComplexMatrix: non-finite entry");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag) {
    ComplexMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) {
        m(i, i) = diag[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> ket) {
    ComplexMatrix m(ket.size());
    for (std::size_t i = 0; i < ket.size(); ++i) {
        for (std::size_t j = 0; j < ket.size(); ++j) {
            m(i, j) = ket[i] * std::conj(ket[j]);
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            out(j, i) = std::conj((*this)(i, j));
        }
    }
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto &z : data_) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i; j < dim_; ++j) {
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) {
                return false;
            }
        }
    }
    return true;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other) {
    require_same_dim(dim_, other.dim_, "ComplexMatrix::operator+");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += other.data_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &other) {
    require_same_dim(dim_, other.dim_, "ComplexMatrix::operator-");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= other.data_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(Complex scale) {
    for (auto &z : data_) {
        z *= scale;
    }
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix &lhs, const ComplexMatrix &rhs) {
    require_same_dim(lhs.dim(), rhs.dim(), "ComplexMatrix::operator*");
    const std::size_t n = lhs.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex a = lhs(i, k);
            if (a == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += a * rhs(k, j);
            }
        }
    }
    return out;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_dim(a.dim(), b.dim(), "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
        m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
    }
    return m;
}

// ---------------------------------------------------------------------------
// HermitianOperator

namespace {

ComplexMatrix symmetrized(const ComplexMatrix &m) {
    const double tol = kConstructionTol * std::max(1.0, m.max_abs());
    require(m.is_hermitian(tol), "HermitianOperator: matrix is not Hermitian");
    ComplexMatrix out = m;
    for (std::size_t i = 0; i < m.dim(); ++i) {
        out(i, i) = m(i, i).real();
        for (std::size_t j = i + 1; j < m.dim(); ++j) {
            const Complex avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            out(i, j) = avg;
            out(j, i) = std::conj(avg);
        }
    }
    return out;
}

} // namespace

HermitianOperator::HermitianOperator(const ComplexMatrix &m) : m_(symmetrized(m)) {}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
    return HermitianOperator(ComplexMatrix::identity(dim));
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> diag) {
    return HermitianOperator(ComplexMatrix::diagonal(diag));
}

HermitianOperator HermitianOperator::zero(std::size_t dim) { return HermitianOperator(ComplexMatrix(dim)); }

HermitianOperator operator+(const HermitianOperator &a, const HermitianOperator &b) {
    return HermitianOperator(a.matrix() + b.matrix());
}

HermitianOperator operator-(const HermitianOperator &a, const HermitianOperator &b) {
    return HermitianOperator(a.matrix() - b.matrix());
}

HermitianOperator operator*(double s, const HermitianOperator &a) { return HermitianOperator(a.matrix() * s); }

// ---------------------------------------------------------------------------
// DensityMatrix

namespace {

const HermitianOperator &checked_state(const HermitianOperator &op) {
    const Complex tr = op.matrix().trace();
    require(std::abs(tr - 1.0) <= kConstructionTol, "DensityMatrix: trace must be 1");
    const auto eig = hermitian_eig(op);
    require(eig.values.back() >= -kConstructionTol, "DensityMatrix: operator is not positive semidefinite");
    return op;
}

} // namespace

DensityMatrix::DensityMatrix(const HermitianOperator &op) : op_(checked_state(op)) {}

DensityMatrix DensityMatrix::pure(std::span<const Complex> ket) {
    double norm2 = 0.0;
    for (const auto &z : ket) {
        norm2 += std::norm(z);
    }
    require(norm2 > 0.0, "DensityMatrix::pure: zero vector");
    ComplexMatrix m = ComplexMatrix::outer(ket);
    m *= 1.0 / norm2;
    return DensityMatrix(HermitianOperator(m));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    ComplexMatrix m = ComplexMatrix::identity(dim);
    m *= 1.0 / static_cast<double>(dim);
    return DensityMatrix(HermitianOperator(m));
}

DensityMatrix DensityMatrix::mixture(std::span<const double> weights, std::span<const DensityMatrix> states) {
    require(!states.empty() && weights.size() == states.size(), "DensityMatrix::mixture: weight/state count mismatch");
    ComplexMatrix m(states.front().dim());
    for (std::size_t i = 0; i < states.size(); ++i) {
        require(weights[i] >= 0.0, "DensityMatrix::mixture: negative weight");
        m += states[i].matrix() * weights[i];
    }
    return DensityMatrix(HermitianOperator(m));
}

// ---------------------------------------------------------------------------
// Eigendecomposition

namespace {

double off_diagonal_norm2(const ComplexMatrix &a) {
    double s = 0.0;
    for (std::size_t p = 0; p < a.dim(); ++p) {
        for (std::size_t q = p + 1; q < a.dim(); ++q) {
            s += std::norm(a(p, q));
        }
    }
    return s;
}

// Right-multiplies columns p,q of m by the rotation J with
// J_pp = J_qq = c, J_pq = s e^{i phi}, J_qp = -s e^{-i phi}.
void rotate_columns(ComplexMatrix &m, std::size_t p, std::size_t q, double c, double s, Complex phase) {
    for (std::size_t k = 0; k < m.dim(); ++k) {
        const Complex mkp = m(k, p);
        const Complex mkq = m(k, q);
        m(k, p) = c * mkp - s * std::conj(phase) * mkq;
        m(k, q) = s * phase * mkp + c * mkq;
    }
}

// Left-multiplies rows p,q of m by J^dagger.
void rotate_rows(ComplexMatrix &m, std::size_t p, std::size_t q, double c, double s, Complex phase) {
    for (std::size_t k = 0; k < m.dim(); ++k) {
        const Complex mpk = m(p, k);
        const Complex mqk = m(q, k);
        m(p, k) = c * mpk - s * phase * mqk;
        m(q, k) = s * std::conj(phase) * mpk + c * mqk;
    }
}

constexpr double kNegligible = 1e-10;

std::size_t first_significant(const ComplexMatrix &v, std::size_t col) {
    for (std::size_t r = 0; r < v.dim(); ++r) {
        if (std::abs(v(r, col)) > kNegligible) {
            return r;
        }
    }
    return v.dim();
}

} // namespace

EigenDecomposition hermitian_eig(const HermitianOperator &op) {
    const std::size_t n = op.dim();
    ComplexMatrix a = op.matrix();
    ComplexMatrix v = ComplexMatrix::identity(n);

    double frob2 = 0.0;
    for (const auto &z : a.entries()) {
        frob2 += std::norm(z);
    }
    const double stop = 1e-32 * frob2;

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        const double off = off_diagonal_norm2(a);
        if (off == 0.0 || off <= stop) {
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double g = std::abs(apq);
                if (g == 0.0) {
                    continue;
                }
                const Complex phase = apq / g;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * g);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                rotate_columns(a, p, q, c, s, phase);
                rotate_rows(a, p, q, c, s, phase);
                rotate_columns(v, p, q, c, s, phase);
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    // Degenerate runs are ordered by where their eigenvectors start.
    const double tie_tol = 1e-10 * std::max(1.0, std::sqrt(frob2));
    for (std::size_t start = 0; start < n;) {
        std::size_t end = start + 1;
        while (end < n && a(order[start], order[start]).real() - a(order[end], order[end]).real() <= tie_tol) {
            ++end;
        }
        std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t i, std::size_t j) {
                             return first_significant(v, i) < first_significant(v, j);
                         });
        start = end;
    }

    EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.values[k] = a(src, src).real();
        const std::size_t lead = first_significant(v, src);
        Complex fix = 1.0;
        if (lead < n) {
            fix = std::conj(v(lead, src)) / std::abs(v(lead, src));
        }
        for (std::size_t r = 0; r < n; ++r) {
            out.vectors(r, k) = v(r, src) * fix;
        }
        if (lead < n) {
            out.vectors(lead, k) = std::abs(v(lead, src));
        }
    }
    return out;
}

namespace {

HermitianOperator spectral_map(const EigenDecomposition &eig, double (*fn)(double)) {
    const std::size_t n = eig.values.size();
    ComplexMatrix out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = fn(eig.values[k]);
        if (lam == 0.0) {
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const Complex vik = eig.vectors(i, k) * lam;
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += vik * std::conj(eig.vectors(j, k));
            }
        }
    }
    return HermitianOperator(out);
}

} // namespace

HermitianOperator operator_abs(const HermitianOperator &m) {
    return spectral_map(hermitian_eig(m), [](double x) { return std::abs(x); });
}

double spectral_norm(const HermitianOperator &m) {
    const auto eig = hermitian_eig(m);
    return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

ComplexMatrix anticommutator(const ComplexMatrix &a, const ComplexMatrix &b) { return a * b + b * a; }

HermitianOperator anticommutator(const HermitianOperator &a, const HermitianOperator &b) {
    return HermitianOperator(anticommutator(a.matrix(), b.matrix()));
}

ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b) { return a * b - b * a; }

ComplexMatrix commutator(const HermitianOperator &a, const HermitianOperator &b) {
    return commutator(a.matrix(), b.matrix());
}

ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b) {
    const std::size_t na = a.dim();
    const std::size_t nb = b.dim();
    ComplexMatrix out(na * nb);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) {
                continue;
            }
            for (std::size_t k = 0; k < nb; ++k) {
                for (std::size_t l = 0; l < nb; ++l) {
                    out(i * nb + k, j * nb + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

HermitianOperator tensor(const HermitianOperator &a, const HermitianOperator &b) {
    return HermitianOperator(tensor(a.matrix(), b.matrix()));
}

DensityMatrix tensor(const DensityMatrix &a, const DensityMatrix &b) {
    return DensityMatrix(HermitianOperator(tensor(a.matrix(), b.matrix())));
}

ComplexMatrix partial_trace(const ComplexMatrix &m, std::size_t dim_a, std::size_t dim_b, Subsystem keep) {
    require(dim_a > 0 && dim_b > 0 && dim_a * dim_b == m.dim(),
            "partial_trace: dimension " + std::to_string(m.dim()) + " does not factor as " + std::to_string(dim_a) +
                " x " + std::to_string(dim_b));
    if (keep == Subsystem::A) {
        ComplexMatrix out(dim_a);
        for (std::size_t i = 0; i < dim_a; ++i) {
            for (std::size_t j = 0; j < dim_a; ++j) {
                Complex s = 0.0;
                for (std::size_t k = 0; k < dim_b; ++k) {
                    s += m(i * dim_b + k, j * dim_b + k);
                }
                out(i, j) = s;
            }
        }
        return out;
    }
    ComplexMatrix out(dim_b);
    for (std::size_t k = 0; k < dim_b; ++k) {
        for (std::size_t l = 0; l < dim_b; ++l) {
            Complex s = 0.0;
            for (std::size_t i = 0; i < dim_a; ++i) {
                s += m(i * dim_b + k, i * dim_b + l);
            }
            out(k, l) = s;
        }
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix &rho, std::size_t dim_a, std::size_t dim_b, Subsystem keep) {
    return DensityMatrix(HermitianOperator(partial_trace(rho.matrix(), dim_a, dim_b, keep)));
}

double expectation(const HermitianOperator &o, const ComplexMatrix &m) {
    require_same_dim(o.dim(), m.dim(), "expectation");
    double s = 0.0;
    const std::size_t n = o.dim();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            s += (o(i, j) * m(j, i)).real();
        }
    }
    return s;
}

double expectation(const HermitianOperator &o, const DensityMatrix &rho) { return expectation(o, rho.matrix()); }

HermitianOperator pauli_x() { return HermitianOperator(ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0})); }

HermitianOperator pauli_y() {
    return HermitianOperator(ComplexMatrix(2, {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0}));
}

HermitianOperator pauli_z() { return HermitianOperator(ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0})); }

DensityMatrix phi_plus() {
    const double r = 1.0 / std::sqrt(2.0);
    const std::vector<Complex> ket{r, 0.0, 0.0, r};
    return DensityMatrix::pure(ket);
}

} // namespace wse
