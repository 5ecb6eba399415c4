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

#include "procval/oracle.hpp"

#include <gtest/gtest.h>

#include <random>

#include "procval/gallery.hpp"
#include "procval/product.hpp"
#include "support/random_processes.hpp"
#include "support/reference.hpp"

using namespace procval;
namespace ref = procval::reference;

namespace {

// p = sum_rc W_rc C_rc with C the Kronecker product of the Choi operators.
double brute_probability(const ProcessMatrix &w, const std::vector<ChoiChannel> &channels) {
    CMatrix c = CMatrix::identity(1);
    for (const ChoiChannel &ch : channels) c = ref::kron(c, ch.choi);
    Complex p = 0.0;
    for (std::size_t r = 0; r < c.dim(); ++r)
        for (std::size_t col = 0; col < c.dim(); ++col) p += w.op()(r, col) * c(r, col);
    return p.real();
}

std::vector<ChoiChannel> random_tuple(const PartyLayout &layout, std::uint64_t seed) {
    std::vector<ChoiChannel> out;
    for (std::size_t p = 0; p < layout.size(); ++p) {
        out.push_back(random_cptp(layout.party(p).d_in(), layout.party(p).d_out(), std::nullopt, mix_seed(seed, p)));
    }
    return out;
}

// I/4 plus a forbidden term whose indices are drawn at random, kept positive.
ProcessMatrix random_violator(std::mt19937_64 &rng) {
    const SubsystemShape shape{{2, 2, 2, 2}};
    std::uniform_int_distribution<std::size_t> pick(1, 255);
    std::vector<std::size_t> idx;
    for (;;) {
        idx = term_indices_of(pick(rng), shape);
        const auto cls = fixtures::class_of(idx);
        if (std::find(fixtures::allowed_classes().begin(), fixtures::allowed_classes().end(), cls) ==
            fixtures::allowed_classes().end())
            break;
    }
    std::uniform_real_distribution<double> coeff(0.05, 0.2);
    const std::vector<HSTerm> terms{{{0, 0, 0, 0}, 0.25}, {idx, coeff(rng)}};
    return ProcessMatrix(qubit_pair_layout(), reconstruct(terms, shape));
}

}  // namespace

TEST(Channels, identity_choi_is_unnormalized_bell_projector) {
    const ChoiChannel id = identity_channel(2);
    CMatrix expected(4);
    for (std::size_t r : {0u, 3u})
        for (std::size_t c : {0u, 3u}) expected(r, c) = 1.0;
    EXPECT_EQ(id.choi, expected);
    EXPECT_TRUE(is_cptp(id));
}

TEST(Channels, depolarizing_and_prepare) {
    const ChoiChannel dep = depolarizing_channel(2, 3);
    EXPECT_LT(max_abs_diff(dep.choi, CMatrix::identity(6) * (1.0 / 3.0)), 1e-15);
    EXPECT_TRUE(is_cptp(dep));
    const ChoiChannel prep = trace_and_prepare(2, 3, 2);
    const std::vector<double> diag{0, 0, 1, 0, 0, 1};
    EXPECT_EQ(prep.choi, CMatrix::diagonal(diag));
    EXPECT_TRUE(is_cptp(prep));
    EXPECT_THROW(trace_and_prepare(2, 3, 3), std::out_of_range);
}

TEST(Channels, non_channels_are_rejected) {
    ChoiChannel doubled = identity_channel(2);
    doubled.choi *= 2.0;
    EXPECT_FALSE(is_cptp(doubled));
    // Transpose map: Choi is the swap, which has eigenvalue -1.
    ChoiChannel transpose{2, 2, CMatrix(4), "transpose"};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) transpose.choi(i * 2 + j, j * 2 + i) = 1.0;
    EXPECT_FALSE(is_cptp(transpose));
}

TEST(Channels, routing_swap_matches_swap_isometry) {
    const ChoiChannel routed = routing_channel({2, 2}, {2, 2}, {1, 0});
    std::vector<Complex> swap(16);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) swap[(b * 2 + a) * 4 + (a * 2 + b)] = 1.0;
    EXPECT_EQ(routed.choi, isometry_channel(swap, 4, 4).choi);
    EXPECT_EQ(routed.label, "route(1,0)");
    EXPECT_EQ(routing_channel({2, 2}, {2, 2}, {0, 1}).choi, identity_channel(4).choi);
    EXPECT_THROW(routing_channel({2, 3}, {2, 3}, {1, 0}), std::invalid_argument);
}

TEST(RandomChannels, are_cptp_across_dimensions) {
    std::size_t count = 0;
    for (std::size_t d_in : {1u, 2u, 3u}) {
        for (std::size_t d_out : {1u, 2u, 4u}) {
            for (std::uint64_t s = 0; s < 11; ++s) {
                EXPECT_TRUE(is_cptp(random_cptp(d_in, d_out, std::nullopt, mix_seed(77, s)))) << d_in << d_out;
                ++count;
            }
        }
    }
    EXPECT_GE(count, 99u);
}

TEST(RandomChannels, minimal_environment_gives_unitary) {
    const ChoiChannel u = random_cptp(3, 3, 1, 5);
    EXPECT_TRUE(is_cptp(u));
    const auto ev = ref::hermitian_eigenvalues(u.choi);
    EXPECT_NEAR(ev.back(), 3.0, 1e-10);
    for (std::size_t i = 0; i + 1 < ev.size(); ++i) EXPECT_NEAR(ev[i], 0.0, 1e-10);
    EXPECT_THROW(random_cptp(4, 2, 1, 5), std::invalid_argument);
}

TEST(RandomChannels, deterministic_per_seed) {
    EXPECT_EQ(random_cptp(2, 2, std::nullopt, 9).choi, random_cptp(2, 2, std::nullopt, 9).choi);
    EXPECT_GT(max_abs_diff(random_cptp(2, 2, std::nullopt, 9).choi, random_cptp(2, 2, std::nullopt, 10).choi), 1e-3);
    EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
    EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
}

TEST(Probability, matches_elementwise_definition) {
    std::mt19937_64 rng(51);
    auto pool = fixtures::qubit_pair_pool(rng, 5);
    pool.push_back(gallery_entry("eq3-d3").process);
    pool.push_back(random_violator(rng));
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const auto channels = random_tuple(pool[i].layout(), 1000 + i);
        EXPECT_NEAR(probability(pool[i], channels), brute_probability(pool[i], channels), 1e-12);
    }
}

TEST(Probability, valid_processes_normalize) {
    const std::vector<ChoiChannel> ids{identity_channel(2), identity_channel(2)};
    EXPECT_NEAR(probability(eq3_process(2), ids), 1.0, 1e-14);
    const std::vector<ChoiChannel> deps{depolarizing_channel(2, 2), trace_and_prepare(2, 2, 1)};
    EXPECT_NEAR(probability(gallery_entry("oneway-xy-d2").process, deps), 1.0, 1e-14);
    EXPECT_THROW(probability(eq3_process(2), std::vector<ChoiChannel>{identity_channel(2)}), std::invalid_argument);
}

TEST(Probability, eq3_loop_witness) {
    const ProcessMatrix &w = gallery_entry("eq3-squared-d2").process;
    const ChoiChannel keep = routing_channel({2, 2}, {2, 2}, {0, 1});
    const ChoiChannel swap = routing_channel({2, 2}, {2, 2}, {1, 0});
    // Swapping at only one party does not close a loop.
    EXPECT_NEAR(probability(w, std::vector<ChoiChannel>{keep, swap}), 1.0, 1e-14);
    EXPECT_NEAR(probability(w, std::vector<ChoiChannel>{swap, keep}), 1.0, 1e-14);
    EXPECT_NEAR(probability(w, std::vector<ChoiChannel>{keep, keep}), 1.0, 1e-14);
    EXPECT_NEAR(probability(w, std::vector<ChoiChannel>{swap, swap}), 1.5, 1e-14);
    EXPECT_NEAR(brute_probability(w, {swap, swap}), 1.5, 1e-14);
}

TEST(Battery, covers_routing_and_constant_channels) {
    const auto battery = deterministic_battery(gallery_entry("eq3-squared-d2").process.layout());
    // identity, one swap, depolarize, two preparations per party: 5 x 5.
    EXPECT_EQ(battery.size(), 25u);
    const auto small = deterministic_battery(qubit_pair_layout());
    EXPECT_EQ(small.size(), 16u);
    for (const auto &tuple : battery)
        for (const ChoiChannel &c : tuple) EXPECT_TRUE(is_cptp(c)) << c.label;
}

TEST(Oracle, finds_loop_in_eq3_squared) {
    const OracleVerdict v = normalization_oracle(gallery_entry("eq3-squared-d2").process);
    EXPECT_NEAR(v.max_deviation, 0.5, 1e-12);
    ASSERT_EQ(v.witness.size(), 2u);
    EXPECT_EQ(v.witness[0].label, "A=route(1,0)");
    EXPECT_EQ(v.witness[1].label, "B=route(1,0)");
    EXPECT_EQ(v.samples, kDefaultOracleSamples);
    EXPECT_EQ(v.seed, kDefaultOracleSeed);
}

TEST(Oracle, deterministic_for_fixed_seed) {
    std::mt19937_64 rng(52);
    const ProcessMatrix w = random_violator(rng);
    const OracleVerdict a = normalization_oracle(w, 50, 123), b = normalization_oracle(w, 50, 123);
    EXPECT_EQ(a.max_deviation, b.max_deviation);
    EXPECT_EQ(a.witness_source, b.witness_source);
    const OracleVerdict c = normalization_oracle(w, 0, 123);
    EXPECT_EQ(c.samples, 0u);
    EXPECT_EQ(c.witness_source.rfind("battery", 0), 0u);
}

TEST(Oracle, transpose_of_valid_process_is_normalized) {
    // Operators with Y-type terms are not symmetric; the transpose convention
    // matters for the probability value but not for normalization of a valid W.
    std::mt19937_64 rng(53);
    for (int k = 0; k < 10; ++k) {
        const ProcessMatrix w = fixtures::random_valid_qubit_pair(rng);
        const ProcessMatrix wt(w.layout(), w.op().transpose());
        EXPECT_LT(normalization_oracle(wt, 30, 7).max_deviation, 1e-9);
    }
}

TEST(Oracle, agrees_with_term_rule) {
    std::mt19937_64 rng(54);
    std::size_t valid_ok = 0, caught = 0;
    for (int k = 0; k < 50; ++k) {
        const ProcessMatrix w = fixtures::random_valid_qubit_pair(rng);
        ASSERT_TRUE(is_valid_process(w).verdict);
        valid_ok += normalization_oracle(w, 50, k).max_deviation < 1e-9 ? 1 : 0;
        const ProcessMatrix bad = random_violator(rng);
        ASSERT_FALSE(is_valid_process(bad).verdict);
        caught += normalization_oracle(bad, 50, k).max_deviation > 1e-6 ? 1 : 0;
    }
    EXPECT_EQ(valid_ok, 50u);
    EXPECT_GE(caught, 48u);
}
