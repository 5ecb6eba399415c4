// Copyright 2026 The procval Authors
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

#include "procval/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace procval {

namespace {

std::vector<std::size_t> strides_of(const SubsystemShape &shape) {
    std::vector<std::size_t> strides(shape.size(), 1);
    for (std::size_t k = shape.size(); k-- > 1;) {
        strides[k - 1] = strides[k] * shape.dims[k];
    }
    return strides;
}

// Full-index offsets of every composite index over the factors in `which`,
// enumerated big-endian in the order given.
std::vector<std::size_t> offsets_over(const SubsystemShape &shape,
                                      const std::vector<std::size_t> &strides,
                                      const std::vector<std::size_t> &which) {
    std::vector<std::size_t> offsets{0};
    for (std::size_t f : which) {
        std::vector<std::size_t> next;
        next.reserve(offsets.size() * shape.dims[f]);
        for (std::size_t base : offsets) {
            for (std::size_t digit = 0; digit < shape.dims[f]; ++digit) {
                next.push_back(base + digit * strides[f]);
            }
        }
        offsets = std::move(next);
    }
    return offsets;
}

void require_shape(const CMatrix &m, const SubsystemShape &shape) {
    for (std::size_t d : shape.dims) {
        if (d == 0) throw std::invalid_argument("subsystem dimension must be positive");
    }
    if (shape.total() != m.dim()) {
        throw std::invalid_argument("shape product " + std::to_string(shape.total()) +
                                    " does not match matrix dim " + std::to_string(m.dim()));
    }
}

Eigen::MatrixXcd to_eigen(const CMatrix &m) {
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(m.dim()), static_cast<Eigen::Index>(m.dim()));
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
        }
    }
    return out;
}

}  // namespace

CMatrix::CMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

CMatrix::CMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
    if (entries_.size() != dim_ * dim_) {
        throw std::invalid_argument("CMatrix: expected " + std::to_string(dim_ * dim_) +
                                    " entries, got " + std::to_string(entries_.size()));
    }
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) : dim_(rows.size()) {
    entries_.reserve(dim_ * dim_);
    for (const auto &row : rows) {
        if (row.size() != dim_) throw std::invalid_argument("CMatrix: ragged initializer");
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

CMatrix CMatrix::identity(std::size_t dim) {
    CMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const double> diag) {
    CMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

Complex CMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const Complex &z : entries_) s += std::norm(z);
    return std::sqrt(s);
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
    }
    return out;
}

CMatrix CMatrix::transpose() const {
    CMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) out(j, i) = (*this)(i, j);
    }
    return out;
}

CMatrix CMatrix::hermitian_part() const {
    CMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            out(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
        }
    }
    return out;
}

CMatrix &CMatrix::operator+=(const CMatrix &other) {
    if (other.dim_ != dim_) throw std::invalid_argument("CMatrix +: dimension mismatch");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
    return *this;
}

CMatrix &CMatrix::operator-=(const CMatrix &other) {
    if (other.dim_ != dim_) throw std::invalid_argument("CMatrix -: dimension mismatch");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
    return *this;
}

CMatrix &CMatrix::operator*=(Complex scale) {
    for (Complex &z : entries_) z *= scale;
    return *this;
}

CMatrix operator*(const CMatrix &a, const CMatrix &b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("CMatrix *: dimension mismatch");
    const std::size_t n = a.dim();
    CMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

std::size_t SubsystemShape::total() const {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

double max_abs_diff(const CMatrix &a, const CMatrix &b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.entries().size(); ++k) {
        worst = std::max(worst, std::abs(a.entries()[k] - b.entries()[k]));
    }
    return worst;
}

double hermiticity_tolerance(const CMatrix &m) { return 1e-12 * (1.0 + m.frobenius_norm()); }

bool is_hermitian(const CMatrix &m) {
    const double tol = hermiticity_tolerance(m);
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = i; j < m.dim(); ++j) {
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
        }
    }
    return true;
}

void require_hermitian(const CMatrix &m, const char *what) {
    if (!is_hermitian(m)) throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian");
}

CMatrix tensor(const CMatrix &a, const CMatrix &b) {
    const std::size_t na = a.dim();
    const std::size_t nb = b.dim();
    CMatrix out(na * nb);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) continue;
            for (std::size_t k = 0; k < nb; ++k) {
                for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
            }
        }
    }
    return out;
}

CMatrix tensor(std::span<const CMatrix> factors) {
    CMatrix out = CMatrix::identity(1);
    for (const CMatrix &f : factors) out = tensor(out, f);
    return out;
}

CMatrix partial_trace(const CMatrix &m, const SubsystemShape &shape,
                      std::span<const std::size_t> discard) {
    require_shape(m, shape);
    std::vector<bool> dropped(shape.size(), false);
    for (std::size_t f : discard) {
        if (f >= shape.size()) {
            throw std::out_of_range("partial_trace: subsystem index " + std::to_string(f) +
                                    " out of range");
        }
        if (dropped[f]) throw std::invalid_argument("partial_trace: duplicate subsystem index");
        dropped[f] = true;
    }
    std::vector<std::size_t> kept_factors;
    std::vector<std::size_t> dropped_factors;
    for (std::size_t f = 0; f < shape.size(); ++f) {
        (dropped[f] ? dropped_factors : kept_factors).push_back(f);
    }
    const auto strides = strides_of(shape);
    const auto kept = offsets_over(shape, strides, kept_factors);
    const auto traced = offsets_over(shape, strides, dropped_factors);

    CMatrix out(kept.size());
    for (std::size_t r = 0; r < kept.size(); ++r) {
        for (std::size_t c = 0; c < kept.size(); ++c) {
            Complex acc = 0.0;
            for (std::size_t t : traced) acc += m(kept[r] + t, kept[c] + t);
            out(r, c) = acc;
        }
    }
    return out;
}

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm) {
    std::vector<std::size_t> inv(perm.size(), perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) {
        if (perm[k] >= perm.size() || inv[perm[k]] != perm.size()) {
            throw std::invalid_argument("not a permutation of subsystem indices");
        }
        inv[perm[k]] = k;
    }
    return inv;
}

SubsystemShape permuted_shape(const SubsystemShape &shape, std::span<const std::size_t> perm) {
    if (perm.size() != shape.size()) {
        throw std::invalid_argument("permutation length does not match number of subsystems");
    }
    inverse_permutation(perm);
    SubsystemShape out;
    out.dims.reserve(perm.size());
    for (std::size_t p : perm) out.dims.push_back(shape.dims[p]);
    return out;
}

CMatrix permute_subsystems(const CMatrix &m, const SubsystemShape &shape,
                           std::span<const std::size_t> perm) {
    require_shape(m, shape);
    permuted_shape(shape, perm);
    const auto strides = strides_of(shape);
    // Enumerating the original factors in the new order yields, for every new
    // composite index, the matching old composite index.
    const std::vector<std::size_t> order(perm.begin(), perm.end());
    const auto old_of_new = offsets_over(shape, strides, order);

    const std::size_t n = m.dim();
    CMatrix out(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) out(r, c) = m(old_of_new[r], old_of_new[c]);
    }
    return out;
}

std::vector<double> eigenvalues(const CMatrix &m) {
    require_hermitian(m, "eigenvalues");
    if (m.dim() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m.hermitian_part()),
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue solver failed");
    const auto &values = solver.eigenvalues();
    return {values.data(), values.data() + values.size()};
}

double min_eigenvalue(const CMatrix &m) {
    const auto values = eigenvalues(m);
    if (values.empty()) throw std::invalid_argument("min_eigenvalue: empty matrix");
    return values.front();
}

}  // namespace procval
