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

#include <gtest/gtest.h>

#include <set>

#include "procval/oracle.hpp"
#include "procval/product.hpp"
#include "support/reference.hpp"

using namespace procval;
namespace ref = procval::reference;

TEST(Gallery, names_are_unique_and_lookup_works) {
    std::set<std::string> names;
    for (const GalleryEntry &e : gallery()) EXPECT_TRUE(names.insert(e.name).second) << e.name;
    EXPECT_GE(names.size(), 10u);
    EXPECT_EQ(&gallery_entry("eq3-d2"), &gallery().front());
    EXPECT_THROW(gallery_entry("no-such-entry"), std::invalid_argument);
}

TEST(Gallery, verdicts_match_expectations) {
    for (const GalleryEntry &e : gallery()) {
        const ValidityReport r = is_valid_process(e.process);
        EXPECT_EQ(r.verdict, e.expected.valid) << e.name;
        EXPECT_NEAR(r.trace, static_cast<double>(e.process.layout().output_dim()), 1e-10) << e.name;
        EXPECT_GE(r.min_eigenvalue, -1e-10) << e.name;
    }
}

TEST(Gallery, signalling_matches_expectations) {
    for (const GalleryEntry &e : gallery()) {
        const DecomposedProcess d = decompose_process(e.process);
        std::set<std::string> found;
        for (std::size_t a = 0; a < d.layout.size(); ++a)
            for (std::size_t b = 0; b < d.layout.size(); ++b)
                if (a != b && has_signalling(d, a, b)) found.insert(d.layout.party(a).name + "->" + d.layout.party(b).name);
        EXPECT_EQ(found, e.expected.signalling) << e.name;
    }
}

TEST(Gallery, oracle_agrees_with_expectations) {
    for (const GalleryEntry &e : gallery()) {
        const OracleVerdict v = normalization_oracle(e.process, 40, 3);
        if (e.expected.valid) {
            EXPECT_LT(v.max_deviation, 1e-9) << e.name;
        } else {
            EXPECT_GT(v.max_deviation, 1e-6) << e.name;
        }
    }
}

TEST(Gallery, single_party_marginals_are_states_times_identity) {
    for (const GalleryEntry &e : gallery()) {
        if (!e.expected.valid || e.process.layout().size() < 2) continue;
        for (std::size_t keep_party = 0; keep_party < e.process.layout().size(); ++keep_party) {
            std::vector<PartyKeep> keep;
            for (std::size_t p = 0; p < e.process.layout().size(); ++p) {
                const Party &party = e.process.layout().party(p);
                const bool k = p == keep_party;
                keep.push_back({std::vector<bool>(party.in_factors.size(), k), std::vector<bool>(party.out_factors.size(), k)});
            }
            const ProcessMatrix r = reduced_process(e.process, keep);
            ASSERT_EQ(r.layout().size(), 1u);
            EXPECT_TRUE(is_valid_process(r).verdict) << e.name;
            for (const HSTerm &t : decompose_process(r).terms) {
                const Party &party = r.layout().party(0);
                for (std::size_t f = 0; f < party.out_factors.size(); ++f)
                    EXPECT_EQ(t.indices[party.in_factors.size() + f], 0u) << e.name;
            }
        }
    }
}

TEST(Builders, classical_corr_and_mixed) {
    const std::vector<double> diag{0.5, 0, 0, 0.5};
    EXPECT_EQ(classical_corr(2), CMatrix::diagonal(diag));
    EXPECT_LT(max_abs_diff(maximally_mixed(3), CMatrix::identity(3) * (1.0 / 3.0)), 1e-16);
    EXPECT_THROW(classical_corr(1), std::invalid_argument);
    EXPECT_THROW(maximally_mixed(0), std::invalid_argument);
    EXPECT_THROW(eq3_process(1), std::invalid_argument);
}

TEST(Builders, eq3_is_sum_of_its_three_terms) {
    const std::vector<HSTerm> terms{{{0, 0, 0, 0}, 0.25}, {{0, 3, 3, 0}, 0.125}, {{3, 0, 0, 3}, 0.125}};
    EXPECT_LT(max_abs_diff(eq3_process(2).op(), reconstruct(terms, SubsystemShape{{2, 2, 2, 2}})), 1e-16);
}

TEST(Builders, oneway_channel_reproduces_inputs) {
    // X prepares |k><k| regardless of input; Y's input then reads k.
    const ProcessMatrix w = oneway_channel_process(3, Direction::XtoY);
    for (std::size_t k = 0; k < 3; ++k) {
        const std::vector<std::size_t> discard{0, 1, 3};
        const CMatrix x_prep = tensor(CMatrix::identity(3), [&] {
            CMatrix m(3);
            m(k, k) = 1.0;
            return m;
        }());
        // Y's input state: tr_{x1 x2 y2}[W (C_X^T ⊗ I ⊗ I)] / d_out(Y).
        const CMatrix lifted = ref::kron(x_prep.transpose(), CMatrix::identity(9));
        const CMatrix y_in = partial_trace(w.op() * lifted, w.layout().shape(), discard) * (1.0 / 3.0);
        CMatrix expected(3);
        expected(k, k) = 1.0;
        EXPECT_LT(max_abs_diff(y_in, expected), 1e-14) << k;
    }
}

TEST(Builders, state_process_checks_input) {
    const PartyLayout layout = qubit_pair_layout();
    EXPECT_NO_THROW(state_process(maximally_mixed(4), layout));
    EXPECT_THROW(state_process(maximally_mixed(2), layout), std::invalid_argument);
    EXPECT_THROW(state_process(CMatrix::identity(4), layout), std::invalid_argument);
    const std::vector<double> neg{1.5, -0.5, 0, 0};
    EXPECT_THROW(state_process(CMatrix::diagonal(neg), layout), std::invalid_argument);
    CMatrix skew = maximally_mixed(4);
    skew(0, 1) = 0.1;
    EXPECT_THROW(state_process(skew, layout), std::invalid_argument);
}

TEST(Builders, squared_entries_are_products) {
    const PartyPairing pairing{{{"X", "X", "A"}, {"Y", "Y", "B"}}};
    const ProcessMatrix sq = tensor_product(eq3_process(2), eq3_process(2), pairing);
    EXPECT_EQ(sq.layout(), gallery_entry("eq3-squared-d2").process.layout());
    EXPECT_LT(max_abs_diff(sq.op(), gallery_entry("eq3-squared-d2").process.op()), 1e-16);
}
