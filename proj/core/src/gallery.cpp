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

#include "procval/gallery.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "procval/product.hpp"

namespace procval {

namespace {

// Order of factors inside a branch is (x1, y2, x2, y1); move to (x1, x2, y1, y2).
constexpr std::array<std::size_t, 4> kYtoXToGlobal{0, 2, 3, 1};

ProcessMatrix channel_branch(std::size_t d, Direction direction) {
    const CMatrix omega = maximally_mixed(d);
    const CMatrix corr = classical_corr(d);
    if (direction == Direction::XtoY) {
        const std::array<CMatrix, 3> factors{omega, corr, omega};
        return ProcessMatrix(qubit_pair_layout(d), tensor(factors));
    }
    const std::array<CMatrix, 3> factors{corr, omega, omega};
    const SubsystemShape shape{{d, d, d, d}};
    return ProcessMatrix(qubit_pair_layout(d), permute_subsystems(tensor(factors), shape, kYtoXToGlobal));
}

GalleryEntry make_entry(std::string name, ProcessMatrix w, bool valid, std::set<std::string> signalling,
                        std::string notes) {
    return GalleryEntry{std::move(name), std::move(w), GalleryExpectation{valid, std::move(signalling), std::move(notes)}};
}

std::vector<GalleryEntry> build_gallery() {
    std::vector<GalleryEntry> out;
    const std::set<std::string> both{"X->Y", "Y->X"};

    out.push_back(make_entry("eq3-d2", eq3_process(2), true, both,
                             "equal mixture of classical identity channels X->Y and Y->X, qubits"));
    out.push_back(make_entry("eq3-d3", eq3_process(3), true, both, "eq3 form on qutrits"));
    {
        ProcessMatrix w = eq3_process(4);
        w = refine_party(w, 0, {2, 2}, {2, 2});
        w = refine_party(w, 1, {2, 2}, {2, 2});
        out.push_back(make_entry("eq3-d4", std::move(w), true, both,
                                 "eq3 form on 4-dim systems factored as 2x2; each half reduces to eq3-d2"));
    }
    out.push_back(make_entry("oneway-xy-d2", oneway_channel_process(2, Direction::XtoY), true, {"X->Y"},
                             "classical identity channel X->Y"));
    out.push_back(make_entry("oneway-yx-d2", oneway_channel_process(2, Direction::YtoX), true, {"Y->X"},
                             "classical identity channel Y->X"));
    out.push_back(make_entry("oneway-xy-d3", oneway_channel_process(3, Direction::XtoY), true, {"X->Y"},
                             "classical identity channel X->Y on qutrits"));
    out.push_back(make_entry("state-mixed-a-d2",
                             state_process(maximally_mixed(2), PartyLayout({Party::simple("A", 2, 2)})), true, {},
                             "one party receiving the maximally mixed qubit"));
    {
        CMatrix bell(4);
        for (std::size_t r : {0u, 3u}) {
            for (std::size_t c : {0u, 3u}) bell(r, c) = 0.5;
        }
        out.push_back(make_entry("state-bell-d2", state_process(bell, qubit_pair_layout()), true, {},
                                 "maximally entangled state shared on the inputs, no signalling"));
    }
    {
        const CMatrix zero{{1.0, 0.0}, {0.0, 0.0}};
        const CMatrix plus{{0.5, 0.5}, {0.5, 0.5}};
        out.push_back(make_entry("state-product-d2", state_process(tensor(zero, plus), qubit_pair_layout()), true, {},
                                 "product state |0><0| ⊗ |+><+| on the inputs"));
    }
    {
        const ProcessMatrix w = eq3_process(2);
        const PartyPairing pairing{{{"X", "X", "A"}, {"Y", "Y", "B"}}};
        out.push_back(make_entry("eq3-squared-d2", tensor_product(w, w, pairing), false, {"A->B", "B->A"},
                                 "eq3-d2 ⊗ eq3-d2 on A = X'X'', B = Y'Y''; contains a causal loop"));
    }
    {
        const ProcessMatrix w = oneway_channel_process(2, Direction::XtoY);
        out.push_back(make_entry("oneway-squared-d2", tensor_product(w, w), true, {"X->Y"},
                                 "two parallel X->Y identity channels"));
    }
    return out;
}

}  // namespace

CMatrix maximally_mixed(std::size_t d) {
    if (d == 0) throw std::invalid_argument("maximally_mixed: dimension must be positive");
    CMatrix m = CMatrix::identity(d);
    m *= 1.0 / static_cast<double>(d);
    return m;
}

CMatrix classical_corr(std::size_t d) {
    if (d < 2) throw std::invalid_argument("classical_corr: dimension must be at least 2");
    CMatrix m(d * d);
    for (std::size_t i = 0; i < d; ++i) m(i * d + i, i * d + i) = 1.0 / static_cast<double>(d);
    return m;
}

PartyLayout qubit_pair_layout(std::size_t d) {
    return PartyLayout({Party::simple("X", d, d), Party::simple("Y", d, d)});
}

ProcessMatrix eq3_process(std::size_t d) {
    if (d < 2) throw std::invalid_argument("eq3_process: dimension must be at least 2");
    CMatrix op = channel_branch(d, Direction::XtoY).op() + channel_branch(d, Direction::YtoX).op();
    op *= static_cast<double>(d * d) / 2.0;
    return ProcessMatrix(qubit_pair_layout(d), std::move(op));
}

ProcessMatrix oneway_channel_process(std::size_t d, Direction direction) {
    if (d < 2) throw std::invalid_argument("oneway_channel_process: dimension must be at least 2");
    CMatrix op = channel_branch(d, direction).op();
    op *= static_cast<double>(d * d);
    return ProcessMatrix(qubit_pair_layout(d), std::move(op));
}

ProcessMatrix state_process(const CMatrix &rho, const PartyLayout &layout) {
    std::size_t d_inputs = 1;
    SubsystemShape source;
    std::vector<std::size_t> in_pos, out_pos;
    for (const Party &p : layout.parties()) {
        d_inputs *= p.d_in();
        for (std::size_t f : p.in_factors) {
            in_pos.push_back(source.dims.size());
            source.dims.push_back(f);
        }
    }
    for (const Party &p : layout.parties()) {
        for (std::size_t f : p.out_factors) {
            out_pos.push_back(source.dims.size());
            source.dims.push_back(f);
        }
    }
    if (rho.dim() != d_inputs) throw std::invalid_argument("state_process: state dimension does not match inputs");
    if (!is_hermitian(rho)) throw std::invalid_argument("state_process: state is not Hermitian");
    if (std::abs(rho.trace() - Complex(1.0)) > 1e-10) throw std::invalid_argument("state_process: state trace is not 1");
    if (rho.dim() > 0 && min_eigenvalue(rho) < -1e-10) throw std::invalid_argument("state_process: state is not PSD");

    std::vector<std::size_t> perm;
    std::size_t in_k = 0, out_k = 0;
    for (const Party &p : layout.parties()) {
        for (std::size_t f = 0; f < p.in_factors.size(); ++f) perm.push_back(in_pos[in_k++]);
        for (std::size_t f = 0; f < p.out_factors.size(); ++f) perm.push_back(out_pos[out_k++]);
    }
    const CMatrix joint = tensor(rho, CMatrix::identity(layout.output_dim()));
    return ProcessMatrix(layout, permute_subsystems(joint, source, perm));
}

const std::vector<GalleryEntry> &gallery() {
    static const std::vector<GalleryEntry> entries = build_gallery();
    return entries;
}

const GalleryEntry &gallery_entry(std::string_view name) {
    for (const GalleryEntry &e : gallery()) {
        if (e.name == name) return e;
    }
    throw std::invalid_argument("unknown gallery entry '" + std::string(name) + "'");
}

}  // namespace procval
