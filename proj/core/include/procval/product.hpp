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
#include <span>
#include <string>
#include <vector>

#include "procval/process.hpp"

namespace procval {

/// Merges party `w_party` of the first process with party `z_party` of the
/// second into a combined party named `combined`.
struct PartyPair {
    std::string w_party;
    std::string z_party;
    std::string combined;
};

struct PartyPairing {
    std::vector<PartyPair> pairs;
};

/// Pairs parties by position. The combined name is the shared name when both
/// names agree, otherwise the concatenation.
PartyPairing default_pairing(const PartyLayout &w, const PartyLayout &z);

/// Layout of W ⊗ Z: combined party A = A'A'' with input factors a1' a1'' and
/// output factors a2' a2'', parties in pairing order.
PartyLayout combined_layout(const PartyLayout &w, const PartyLayout &z, const PartyPairing &pairing);

/// Dense product process. Does not check the term rule.
ProcessMatrix tensor_product(const ProcessMatrix &w, const ProcessMatrix &z, const PartyPairing &pairing);
ProcessMatrix tensor_product(const ProcessMatrix &w, const ProcessMatrix &z);

/// Product at the level of Hilbert-Schmidt terms; every pair of terms maps to
/// one distinct term of the product with coefficient w_I * z_J.
DecomposedProcess tensor_product(const DecomposedProcess &w, const DecomposedProcess &z,
                                 const PartyPairing &pairing);

/// Type of the combined-party tag when a W term with tag `w` meets a Z term with tag `z`.
TermType combine_tags(TermType w, TermType z);

struct BlockingPair {
    HSTerm w_term;
    HSTerm z_term;
    TermSignature w_signature;  // over W's parties, in pairing order
    TermSignature z_signature;  // over Z's parties, in pairing order
    TermSignature combined;     // over combined parties
};

struct ProductReport {
    /// No blocking pair exists.
    bool verdict = true;
    /// Input validity flags; a blocking-pair verdict is only meaningful when both hold.
    bool w_valid = true;
    bool z_valid = true;
    PartyLayout combined_layout;
    /// Sorted lexicographically by (W indices, Z indices).
    std::vector<BlockingPair> blocking_pairs;
};

/// Enumerates pairs (nontrivial term of W, nontrivial term of Z) whose product
/// term is not of pure input type on any combined party.
ProductReport find_blocking_pairs(const DecomposedProcess &w, const DecomposedProcess &z,
                                  const PartyPairing &pairing);
ProductReport find_blocking_pairs(const ProcessMatrix &w, const ProcessMatrix &z,
                                  const PartyPairing &pairing, const Tolerances &tol = {});

/// Two-party criterion: true ("product invalid") iff both W and Z have
/// signalling terms and together they signal in both directions.
bool corollary_check(const DecomposedProcess &w, const DecomposedProcess &z, const PartyPairing &pairing);
bool corollary_check(const ProcessMatrix &w, const ProcessMatrix &z, const PartyPairing &pairing);

struct SequenceReport {
    /// The full product is a valid process (no step found a blocking pair and
    /// every factor satisfies the term rule).
    bool verdict = true;
    /// Index i of the first failing step joining factor i+1 to the accumulated product.
    std::optional<std::size_t> first_failure;
    std::vector<ProductReport> steps;
    DecomposedProcess product;
};

/// Left fold of the product over `ps`, checking blocking pairs at every step.
/// pairings[i] joins the product of ps[0..i] with ps[i+1]; empty means default pairing.
SequenceReport check_sequence(std::span<const DecomposedProcess> ps, std::span<const PartyPairing> pairings = {});
SequenceReport check_sequence(std::span<const ProcessMatrix> ps, std::span<const PartyPairing> pairings = {});

struct OrderSweep {
    std::vector<std::vector<std::size_t>> orders;
    std::vector<SequenceReport> reports;

    bool consistent() const;
};

/// Runs check_sequence with default pairings over every fold order (all
/// permutations up to `max_exhaustive` factors, a fixed-seed sample of 24
/// orders beyond that).
OrderSweep check_all_orders(std::span<const ProcessMatrix> ps, std::size_t max_exhaustive = 4);

}  // namespace procval
