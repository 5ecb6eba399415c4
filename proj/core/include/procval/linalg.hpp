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

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace procval {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major.
///
/// Composite indices are big-endian: for a matrix living on H_0 ⊗ H_1 ⊗ ...,
/// the leftmost factor is the most significant digit of the row/column index.
/// Every module and the on-disk format share this convention.
class CMatrix {
  public:
    CMatrix() = default;
    explicit CMatrix(std::size_t dim);
    CMatrix(std::size_t dim, std::vector<Complex> entries);
    CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static CMatrix identity(std::size_t dim);
    static CMatrix diagonal(std::span<const double> diag);

    std::size_t dim() const { return dim_; }
    std::span<const Complex> entries() const { return entries_; }
    std::span<Complex> entries() { return entries_; }

    Complex &operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
    const Complex &operator()(std::size_t row, std::size_t col) const {
        return entries_[row * dim_ + col];
    }

    Complex trace() const;
    double frobenius_norm() const;
    CMatrix adjoint() const;
    CMatrix transpose() const;
    /// (M + M†) / 2
    CMatrix hermitian_part() const;

    CMatrix &operator+=(const CMatrix &other);
    CMatrix &operator-=(const CMatrix &other);
    CMatrix &operator*=(Complex scale);

    friend CMatrix operator+(CMatrix a, const CMatrix &b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix &b) { return a -= b; }
    friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
    friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
    friend CMatrix operator*(const CMatrix &a, const CMatrix &b);

    bool operator==(const CMatrix &other) const = default;

  private:
    std::size_t dim_ = 0;
    std::vector<Complex> entries_;
};

/// Ordered tensor-factor dimensions; the product must equal the matrix dim.
struct SubsystemShape {
    std::vector<std::size_t> dims;

    std::size_t total() const;
    std::size_t size() const { return dims.size(); }
};

/// Largest |m_ij| over all entries of a - b.
double max_abs_diff(const CMatrix &a, const CMatrix &b);

/// Hermiticity tolerance used throughout: 1e-12 * (1 + ||m||_F).
double hermiticity_tolerance(const CMatrix &m);
bool is_hermitian(const CMatrix &m);
/// Throws std::invalid_argument when m is not Hermitian within tolerance.
void require_hermitian(const CMatrix &m, const char *what);

/// Kronecker product, a ⊗ b.
CMatrix tensor(const CMatrix &a, const CMatrix &b);
CMatrix tensor(std::span<const CMatrix> factors);

/// Traces out the factors listed in `discard` (any order, no duplicates).
CMatrix partial_trace(const CMatrix &m, const SubsystemShape &shape,
                      std::span<const std::size_t> discard);

/// Reorders tensor factors: factor k of the result is factor perm[k] of m.
/// The result lives on the shape {dims[perm[0]], dims[perm[1]], ...}.
CMatrix permute_subsystems(const CMatrix &m, const SubsystemShape &shape,
                           std::span<const std::size_t> perm);

SubsystemShape permuted_shape(const SubsystemShape &shape, std::span<const std::size_t> perm);
std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm);

/// Smallest eigenvalue of the Hermitian part of m. Rejects non-Hermitian input.
double min_eigenvalue(const CMatrix &m);
/// All eigenvalues of the Hermitian part, ascending.
std::vector<double> eigenvalues(const CMatrix &m);

}  // namespace procval
