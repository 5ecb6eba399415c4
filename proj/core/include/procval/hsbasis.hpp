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

#include <cstddef>
#include <optional>
#include <vector>

#include "procval/linalg.hpp"

namespace procval {

/// Generalized Gell-Mann basis of L(C^d), normalized so that
/// trace(ops[i] * ops[j]) = d * delta_ij. ops[0] is the identity; for d = 2 the
/// basis is exactly {I, sigma_x, sigma_y, sigma_z}.
///
/// Ordering: identity, symmetric (X-like) by (row, col), antisymmetric (Y-like)
/// by (row, col), diagonal (Z-like) by size.
struct HSBasis {
    std::size_t dim = 0;
    std::vector<CMatrix> ops;
};

HSBasis make_basis(std::size_t d);

/// Shared read-only basis for dimension d; built once per dimension.
const HSBasis &basis_for(std::size_t d);

/// One term coeff * sigma_{indices[0]} ⊗ sigma_{indices[1]} ⊗ ... of an
/// operator expansion. Index 0 is the identity on that subsystem.
struct HSTerm {
    std::vector<std::size_t> indices;
    double coeff = 0.0;

    bool is_identity() const;
    bool operator==(const HSTerm &) const = default;
};

/// Dense real coefficient tensor w_I = trace(m * sigma_I) / D, enumerated
/// big-endian over multi-indices I (subsystem 0 most significant). Rejects
/// non-Hermitian input.
std::vector<double> hs_coefficients(const CMatrix &m, const SubsystemShape &shape);

/// Relative pruning threshold: 1e-9 * max(1, max_I |w_I|).
double default_term_tolerance(std::span<const double> coefficients);

/// Terms with |w_I| > tol, in multi-index order. When tol is not given the
/// default relative threshold is used.
std::vector<HSTerm> decompose(const CMatrix &m, const SubsystemShape &shape,
                              std::optional<double> tol = std::nullopt);

/// Sum of coeff * sigma_I over the given terms.
CMatrix reconstruct(std::span<const HSTerm> terms, const SubsystemShape &shape);

/// Multi-index <-> flat position in the coefficient tensor.
std::size_t flat_term_index(std::span<const std::size_t> indices, const SubsystemShape &shape);
std::vector<std::size_t> term_indices_of(std::size_t flat, const SubsystemShape &shape);

}  // namespace procval
