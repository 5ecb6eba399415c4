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

#include "procval/hsbasis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace procval {

namespace {

// Applies `op` (rows = new mode size, cols = old mode size) along mode k of a
// flat big-endian tensor with the given mode sizes.
std::vector<Complex> mode_apply(const std::vector<Complex> &in, std::vector<std::size_t> &sizes,
                                std::size_t k, const std::vector<Complex> &op,
                                std::size_t new_size) {
    std::size_t outer = 1;
    for (std::size_t j = 0; j < k; ++j) outer *= sizes[j];
    std::size_t inner = 1;
    for (std::size_t j = k + 1; j < sizes.size(); ++j) inner *= sizes[j];
    const std::size_t old_size = sizes[k];

    std::vector<Complex> out(outer * new_size * inner);
    for (std::size_t o = 0; o < outer; ++o) {
        const Complex *src = in.data() + o * old_size * inner;
        Complex *dst = out.data() + o * new_size * inner;
        for (std::size_t i = 0; i < new_size; ++i) {
            for (std::size_t p = 0; p < old_size; ++p) {
                const Complex a = op[i * old_size + p];
                if (a == Complex{}) continue;
                const Complex *s = src + p * inner;
                Complex *d = dst + i * inner;
                for (std::size_t t = 0; t < inner; ++t) d[t] += a * s[t];
            }
        }
    }
    sizes[k] = new_size;
    return out;
}

// Position of m(r, c) in the pair-interleaved tensor (r0 c0, r1 c1, ...).
struct Interleave {
    std::vector<std::size_t> row_offset;
    std::vector<std::size_t> col_offset;
};

Interleave make_interleave(const SubsystemShape &shape) {
    const std::size_t n = shape.size();
    std::vector<std::size_t> pair_stride(n, 1);
    for (std::size_t k = n; k-- > 1;) {
        pair_stride[k - 1] = pair_stride[k] * shape.dims[k] * shape.dims[k];
    }
    Interleave out{{0}, {0}};
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t d = shape.dims[k];
        std::vector<std::size_t> rows, cols;
        rows.reserve(out.row_offset.size() * d);
        cols.reserve(out.col_offset.size() * d);
        for (std::size_t base : out.row_offset) {
            for (std::size_t digit = 0; digit < d; ++digit) rows.push_back(base + digit * d * pair_stride[k]);
        }
        for (std::size_t base : out.col_offset) {
            for (std::size_t digit = 0; digit < d; ++digit) cols.push_back(base + digit * pair_stride[k]);
        }
        out.row_offset = std::move(rows);
        out.col_offset = std::move(cols);
    }
    return out;
}

void require_consistent(const CMatrix &m, const SubsystemShape &shape) {
    for (std::size_t d : shape.dims) {
        if (d == 0) throw std::invalid_argument("subsystem dimension must be positive");
    }
    if (shape.total() != m.dim()) {
        throw std::invalid_argument("shape product " + std::to_string(shape.total()) +
                                    " does not match matrix dim " + std::to_string(m.dim()));
    }
}

}  // namespace

HSBasis make_basis(std::size_t d) {
    if (d == 0) throw std::invalid_argument("make_basis: dimension must be at least 1");
    HSBasis basis{d, {}};
    basis.ops.reserve(d * d);
    basis.ops.push_back(CMatrix::identity(d));
    // Off-diagonal generators have trace(g^2) = 2; diagonal ones are built with
    // the same norm, so a common rescale gives trace(g^2) = d.
    const double scale = std::sqrt(static_cast<double>(d) / 2.0);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = r + 1; c < d; ++c) {
            CMatrix g(d);
            g(r, c) = scale;
            g(c, r) = scale;
            basis.ops.push_back(std::move(g));
        }
    }
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = r + 1; c < d; ++c) {
            CMatrix g(d);
            g(r, c) = Complex(0.0, -scale);
            g(c, r) = Complex(0.0, scale);
            basis.ops.push_back(std::move(g));
        }
    }
    for (std::size_t l = 1; l < d; ++l) {
        const double norm = scale * std::sqrt(2.0 / static_cast<double>(l * (l + 1)));
        CMatrix g(d);
        for (std::size_t j = 0; j < l; ++j) g(j, j) = norm;
        g(l, l) = -static_cast<double>(l) * norm;
        basis.ops.push_back(std::move(g));
    }
    return basis;
}

const HSBasis &basis_for(std::size_t d) {
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<const HSBasis>> cache;
    std::lock_guard lock(mutex);
    auto &slot = cache[d];
    if (!slot) slot = std::make_unique<const HSBasis>(make_basis(d));
    return *slot;
}

bool HSTerm::is_identity() const {
    return std::all_of(indices.begin(), indices.end(), [](std::size_t i) { return i == 0; });
}

std::size_t flat_term_index(std::span<const std::size_t> indices, const SubsystemShape &shape) {
    if (indices.size() != shape.size()) {
        throw std::invalid_argument("term has " + std::to_string(indices.size()) +
                                    " indices, shape has " + std::to_string(shape.size()) +
                                    " subsystems");
    }
    std::size_t flat = 0;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const std::size_t range = shape.dims[k] * shape.dims[k];
        if (indices[k] >= range) {
            throw std::out_of_range("basis index " + std::to_string(indices[k]) +
                                    " out of range for subsystem " + std::to_string(k));
        }
        flat = flat * range + indices[k];
    }
    return flat;
}

std::vector<std::size_t> term_indices_of(std::size_t flat, const SubsystemShape &shape) {
    std::vector<std::size_t> indices(shape.size());
    for (std::size_t k = shape.size(); k-- > 0;) {
        const std::size_t range = shape.dims[k] * shape.dims[k];
        indices[k] = flat % range;
        flat /= range;
    }
    return indices;
}

std::vector<double> hs_coefficients(const CMatrix &m, const SubsystemShape &shape) {
    require_consistent(m, shape);
    require_hermitian(m, "decompose");

    const std::size_t dim = m.dim();
    const auto layout = make_interleave(shape);
    std::vector<Complex> t(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) t[layout.row_offset[r] + layout.col_offset[c]] = m(r, c);
    }

    std::vector<std::size_t> sizes;
    for (std::size_t d : shape.dims) sizes.push_back(d * d);
    for (std::size_t k = 0; k < shape.size(); ++k) {
        const std::size_t d = shape.dims[k];
        const HSBasis &basis = basis_for(d);
        // trace(m sigma) pairs m[r, c] with sigma[c, r].
        std::vector<Complex> op(d * d * d * d);
        for (std::size_t i = 0; i < d * d; ++i) {
            for (std::size_t r = 0; r < d; ++r) {
                for (std::size_t c = 0; c < d; ++c) op[i * d * d + r * d + c] = basis.ops[i](c, r);
            }
        }
        t = mode_apply(t, sizes, k, op, d * d);
    }

    std::vector<double> coeffs(t.size());
    const double inv_dim = 1.0 / static_cast<double>(dim);
    for (std::size_t i = 0; i < t.size(); ++i) coeffs[i] = t[i].real() * inv_dim;
    return coeffs;
}

double default_term_tolerance(std::span<const double> coefficients) {
    double largest = 1.0;
    for (double w : coefficients) largest = std::max(largest, std::abs(w));
    return 1e-9 * largest;
}

std::vector<HSTerm> decompose(const CMatrix &m, const SubsystemShape &shape,
                              std::optional<double> tol) {
    const auto coeffs = hs_coefficients(m, shape);
    const double threshold = tol.value_or(default_term_tolerance(coeffs));
    std::vector<HSTerm> terms;
    for (std::size_t flat = 0; flat < coeffs.size(); ++flat) {
        if (std::abs(coeffs[flat]) > threshold) {
            terms.push_back(HSTerm{term_indices_of(flat, shape), coeffs[flat]});
        }
    }
    return terms;
}

CMatrix reconstruct(std::span<const HSTerm> terms, const SubsystemShape &shape) {
    for (std::size_t d : shape.dims) {
        if (d == 0) throw std::invalid_argument("subsystem dimension must be positive");
    }
    const std::size_t dim = shape.total();
    std::vector<Complex> t(dim * dim);
    for (const HSTerm &term : terms) t[flat_term_index(term.indices, shape)] += term.coeff;

    std::vector<std::size_t> sizes;
    for (std::size_t d : shape.dims) sizes.push_back(d * d);
    for (std::size_t k = 0; k < shape.size(); ++k) {
        const std::size_t d = shape.dims[k];
        const HSBasis &basis = basis_for(d);
        std::vector<Complex> op(d * d * d * d);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                for (std::size_t i = 0; i < d * d; ++i) op[(r * d + c) * d * d + i] = basis.ops[i](r, c);
            }
        }
        t = mode_apply(t, sizes, k, op, d * d);
    }

    const auto layout = make_interleave(shape);
    CMatrix out(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) out(r, c) = t[layout.row_offset[r] + layout.col_offset[c]];
    }
    return out;
}

}  // namespace procval
