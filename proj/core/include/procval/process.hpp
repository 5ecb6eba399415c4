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
#include <string>
#include <string_view>
#include <vector>

#include "procval/hsbasis.hpp"
#include "procval/linalg.hpp"

namespace procval {

/// A party with an input system and an output system. Either system may be
/// factored into several tensor factors (e.g. A = A'A'' after a product);
/// factor k of the input pairs with factor k of the output as one sub-party.
struct Party {
    std::string name;
    std::vector<std::size_t> in_factors;
    std::vector<std::size_t> out_factors;

    static Party simple(std::string name, std::size_t d_in, std::size_t d_out);

    std::size_t d_in() const;
    std::size_t d_out() const;
    bool operator==(const Party &) const = default;
};

/// Ordered parties. Global subsystem order is party by party, inputs then
/// outputs, each in factor order: a1, a2, b1, b2, ...
class PartyLayout {
  public:
    PartyLayout() = default;
    explicit PartyLayout(std::vector<Party> parties);

    const std::vector<Party> &parties() const { return parties_; }
    const Party &party(std::size_t p) const { return parties_.at(p); }
    std::size_t size() const { return parties_.size(); }

    std::size_t total_dim() const;
    /// d_O: product of all output dimensions.
    std::size_t output_dim() const;
    /// Refined shape over every input/output factor.
    SubsystemShape shape() const;

    /// First subsystem position of the party's inputs / outputs in shape().
    std::size_t input_offset(std::size_t p) const;
    std::size_t output_offset(std::size_t p) const;

    std::size_t index_of(std::string_view name) const;

    bool operator==(const PartyLayout &) const = default;

  private:
    std::vector<Party> parties_;
};

/// Hermitian operator on the parties' joint space. Immutable once built.
class ProcessMatrix {
  public:
    ProcessMatrix(PartyLayout layout, CMatrix op);

    const PartyLayout &layout() const { return layout_; }
    const CMatrix &op() const { return op_; }

  private:
    PartyLayout layout_;
    CMatrix op_;
};

enum class TermType { Trivial, In, Out, InOut };

/// Per-party type tags of one Hilbert-Schmidt term.
struct TermSignature {
    std::vector<TermType> tags;

    bool nontrivial() const;
    /// True when some party is tagged exactly In.
    bool pure_in_somewhere() const;
    bool operator==(const TermSignature &) const = default;
};

struct ClassifiedTerm {
    HSTerm term;
    TermSignature signature;
};

TermSignature classify_term(const HSTerm &term, const PartyLayout &layout);

/// Type name of a signature, e.g. "a2b1" or "a1a2b1b2"; "trivial" for the identity.
/// Party names are lowercased and suffixed with 1 (input) and 2 (output).
std::string type_name(const TermSignature &signature, const PartyLayout &layout);
/// Single-character-per-party code used in reports: 0, 1, 2, 12.
std::string_view tag_code(TermType tag);

/// A process together with its Hilbert-Schmidt terms over the layout's shape.
struct DecomposedProcess {
    PartyLayout layout;
    std::vector<HSTerm> terms;
};

DecomposedProcess decompose_process(const ProcessMatrix &w, std::optional<double> tol = std::nullopt);

/// Nontrivial terms that are not pure-In on any party.
std::vector<ClassifiedTerm> forbidden_terms(const DecomposedProcess &w);

struct Tolerances {
    std::optional<double> psd;    // default 1e-9 * ||W||_F
    std::optional<double> trace;  // default 1e-9 * d_O
    std::optional<double> term;   // default relative pruning threshold
};

struct ValidityReport {
    bool verdict = false;
    double min_eigenvalue = 0.0;
    double psd_defect = 0.0;    // max(0, -min_eigenvalue)
    double trace = 0.0;
    double trace_defect = 0.0;  // |trace - d_O|
    double psd_tolerance = 0.0;
    double trace_tolerance = 0.0;
    std::size_t term_count = 0;
    std::vector<ClassifiedTerm> forbidden_terms;
};

/// Positivity, trace normalization and the term-type rule: every nontrivial
/// Hilbert-Schmidt term must be of pure input type on at least one party.
ValidityReport is_valid_process(const ProcessMatrix &w, const Tolerances &tol = {});

/// True when some nontrivial term is Out or InOut on `from` and In on `to`.
/// Other parties' tags are not constrained.
bool has_signalling(const DecomposedProcess &w, std::size_t from, std::size_t to);
bool has_signalling(const ProcessMatrix &w, std::string_view from, std::string_view to);

/// Which factors of one party survive a reduction.
struct PartyKeep {
    std::vector<bool> keep_in;   // one flag per input factor
    std::vector<bool> keep_out;  // one flag per output factor
};

/// Keep everything of every party.
std::vector<PartyKeep> keep_all(const PartyLayout &layout);

/// Traces out the discarded sub-parties and divides by their total output
/// dimension so the reduced operator has trace d_O of the reduced layout.
/// Factor k of a party's input must be kept exactly when factor k of its
/// output is kept; parties with nothing kept are dropped.
ProcessMatrix reduced_process(const ProcessMatrix &w, const std::vector<PartyKeep> &keep);

/// Same operator with party p's input/output re-factored (products must match).
ProcessMatrix refine_party(const ProcessMatrix &w, std::size_t p, std::vector<std::size_t> in_factors,
                           std::vector<std::size_t> out_factors);

}  // namespace procval
