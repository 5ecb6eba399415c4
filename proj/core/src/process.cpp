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

#include "procval/process.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace procval {

namespace {

std::size_t product(const std::vector<std::size_t> &dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

bool any_nonzero(const std::vector<std::size_t> &indices, std::size_t first, std::size_t count) {
    for (std::size_t k = first; k < first + count; ++k) {
        if (indices[k] != 0) return true;
    }
    return false;
}

}  // namespace

Party Party::simple(std::string name, std::size_t d_in, std::size_t d_out) {
    return Party{std::move(name), {d_in}, {d_out}};
}

std::size_t Party::d_in() const { return product(in_factors); }
std::size_t Party::d_out() const { return product(out_factors); }

PartyLayout::PartyLayout(std::vector<Party> parties) : parties_(std::move(parties)) {
    std::set<std::string> names;
    for (const Party &p : parties_) {
        if (p.name.empty()) throw std::invalid_argument("party name must not be empty");
        if (!names.insert(p.name).second) {
            throw std::invalid_argument("duplicate party name '" + p.name + "'");
        }
        if (p.in_factors.empty() || p.out_factors.empty()) {
            throw std::invalid_argument("party '" + p.name + "' needs at least one input and output factor");
        }
        for (std::size_t d : p.in_factors) {
            if (d == 0) throw std::invalid_argument("party '" + p.name + "' has a zero input dimension");
        }
        for (std::size_t d : p.out_factors) {
            if (d == 0) throw std::invalid_argument("party '" + p.name + "' has a zero output dimension");
        }
    }
}

std::size_t PartyLayout::total_dim() const {
    std::size_t d = 1;
    for (const Party &p : parties_) d *= p.d_in() * p.d_out();
    return d;
}

std::size_t PartyLayout::output_dim() const {
    std::size_t d = 1;
    for (const Party &p : parties_) d *= p.d_out();
    return d;
}

SubsystemShape PartyLayout::shape() const {
    SubsystemShape s;
    for (const Party &p : parties_) {
        s.dims.insert(s.dims.end(), p.in_factors.begin(), p.in_factors.end());
        s.dims.insert(s.dims.end(), p.out_factors.begin(), p.out_factors.end());
    }
    return s;
}

std::size_t PartyLayout::input_offset(std::size_t p) const {
    std::size_t offset = 0;
    for (std::size_t q = 0; q < p; ++q) {
        offset += parties_[q].in_factors.size() + parties_[q].out_factors.size();
    }
    return offset;
}

std::size_t PartyLayout::output_offset(std::size_t p) const {
    return input_offset(p) + parties_.at(p).in_factors.size();
}

std::size_t PartyLayout::index_of(std::string_view name) const {
    for (std::size_t p = 0; p < parties_.size(); ++p) {
        if (parties_[p].name == name) return p;
    }
    throw std::invalid_argument("unknown party '" + std::string(name) + "'");
}

ProcessMatrix::ProcessMatrix(PartyLayout layout, CMatrix op)
    : layout_(std::move(layout)), op_(std::move(op)) {
    if (op_.dim() != layout_.total_dim()) {
        throw std::invalid_argument("operator dim " + std::to_string(op_.dim()) +
                                    " does not match layout dimension " +
                                    std::to_string(layout_.total_dim()));
    }
}

bool TermSignature::nontrivial() const {
    return std::any_of(tags.begin(), tags.end(), [](TermType t) { return t != TermType::Trivial; });
}

bool TermSignature::pure_in_somewhere() const {
    return std::any_of(tags.begin(), tags.end(), [](TermType t) { return t == TermType::In; });
}

TermSignature classify_term(const HSTerm &term, const PartyLayout &layout) {
    const std::size_t expected = layout.shape().size();
    if (term.indices.size() != expected) {
        throw std::invalid_argument("term has " + std::to_string(term.indices.size()) +
                                    " indices, layout has " + std::to_string(expected) + " subsystems");
    }
    TermSignature sig;
    sig.tags.reserve(layout.size());
    for (std::size_t p = 0; p < layout.size(); ++p) {
        const Party &party = layout.party(p);
        const bool in = any_nonzero(term.indices, layout.input_offset(p), party.in_factors.size());
        const bool out = any_nonzero(term.indices, layout.output_offset(p), party.out_factors.size());
        sig.tags.push_back(in ? (out ? TermType::InOut : TermType::In)
                              : (out ? TermType::Out : TermType::Trivial));
    }
    return sig;
}

std::string type_name(const TermSignature &signature, const PartyLayout &layout) {
    if (signature.tags.size() != layout.size()) {
        throw std::invalid_argument("signature does not match layout");
    }
    std::string out;
    for (std::size_t p = 0; p < layout.size(); ++p) {
        std::string label = layout.party(p).name;
        std::transform(label.begin(), label.end(), label.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        const TermType t = signature.tags[p];
        if (t == TermType::In || t == TermType::InOut) out += label + "1";
        if (t == TermType::Out || t == TermType::InOut) out += label + "2";
    }
    return out.empty() ? "trivial" : out;
}

std::string_view tag_code(TermType tag) {
    switch (tag) {
        case TermType::Trivial: return "0";
        case TermType::In: return "1";
        case TermType::Out: return "2";
        case TermType::InOut: return "12";
    }
    return "?";
}

DecomposedProcess decompose_process(const ProcessMatrix &w, std::optional<double> tol) {
    return DecomposedProcess{w.layout(), decompose(w.op(), w.layout().shape(), tol)};
}

std::vector<ClassifiedTerm> forbidden_terms(const DecomposedProcess &w) {
    std::vector<ClassifiedTerm> out;
    for (const HSTerm &term : w.terms) {
        TermSignature sig = classify_term(term, w.layout);
        if (sig.nontrivial() && !sig.pure_in_somewhere()) out.push_back({term, std::move(sig)});
    }
    return out;
}

ValidityReport is_valid_process(const ProcessMatrix &w, const Tolerances &tol) {
    require_hermitian(w.op(), "is_valid_process");
    const double d_out = static_cast<double>(w.layout().output_dim());

    ValidityReport report;
    report.psd_tolerance = tol.psd.value_or(1e-9 * w.op().frobenius_norm());
    report.trace_tolerance = tol.trace.value_or(1e-9 * d_out);
    report.min_eigenvalue = min_eigenvalue(w.op());
    report.psd_defect = std::max(0.0, -report.min_eigenvalue);
    report.trace = w.op().trace().real();
    report.trace_defect = std::abs(report.trace - d_out);

    const DecomposedProcess decomposed = decompose_process(w, tol.term);
    report.term_count = decomposed.terms.size();
    report.forbidden_terms = forbidden_terms(decomposed);

    report.verdict = report.psd_defect <= report.psd_tolerance &&
                     report.trace_defect <= report.trace_tolerance && report.forbidden_terms.empty();
    return report;
}

bool has_signalling(const DecomposedProcess &w, std::size_t from, std::size_t to) {
    if (from >= w.layout.size() || to >= w.layout.size()) {
        throw std::out_of_range("has_signalling: party index out of range");
    }
    for (const HSTerm &term : w.terms) {
        const TermSignature sig = classify_term(term, w.layout);
        const TermType f = sig.tags[from];
        if ((f == TermType::Out || f == TermType::InOut) && sig.tags[to] == TermType::In) return true;
    }
    return false;
}

bool has_signalling(const ProcessMatrix &w, std::string_view from, std::string_view to) {
    const std::size_t f = w.layout().index_of(from);
    const std::size_t t = w.layout().index_of(to);
    return has_signalling(decompose_process(w), f, t);
}

std::vector<PartyKeep> keep_all(const PartyLayout &layout) {
    std::vector<PartyKeep> keep;
    for (const Party &p : layout.parties()) {
        keep.push_back({std::vector<bool>(p.in_factors.size(), true),
                        std::vector<bool>(p.out_factors.size(), true)});
    }
    return keep;
}

ProcessMatrix reduced_process(const ProcessMatrix &w, const std::vector<PartyKeep> &keep) {
    const PartyLayout &layout = w.layout();
    if (keep.size() != layout.size()) {
        throw std::invalid_argument("keep-set must list every party");
    }
    std::vector<std::size_t> discard;
    std::size_t discarded_out_dim = 1;
    std::vector<Party> kept_parties;
    for (std::size_t p = 0; p < layout.size(); ++p) {
        const Party &party = layout.party(p);
        const PartyKeep &k = keep[p];
        if (k.keep_in.size() != party.in_factors.size() || k.keep_out.size() != party.out_factors.size()) {
            throw std::invalid_argument("keep-set for party '" + party.name +
                                        "' does not match its factor structure");
        }
        const bool all_in = std::all_of(k.keep_in.begin(), k.keep_in.end(), std::identity{});
        const bool all_out = std::all_of(k.keep_out.begin(), k.keep_out.end(), std::identity{});
        const bool no_in = std::none_of(k.keep_in.begin(), k.keep_in.end(), std::identity{});
        const bool no_out = std::none_of(k.keep_out.begin(), k.keep_out.end(), std::identity{});
        const bool whole = (all_in && all_out) || (no_in && no_out);
        if (!whole && k.keep_in != k.keep_out) {
            throw std::invalid_argument("keep-set splits an input from its output on party '" +
                                        party.name + "'");
        }

        Party reduced{party.name, {}, {}};
        for (std::size_t f = 0; f < party.in_factors.size(); ++f) {
            if (k.keep_in[f]) {
                reduced.in_factors.push_back(party.in_factors[f]);
            } else {
                discard.push_back(layout.input_offset(p) + f);
            }
        }
        for (std::size_t f = 0; f < party.out_factors.size(); ++f) {
            if (k.keep_out[f]) {
                reduced.out_factors.push_back(party.out_factors[f]);
            } else {
                discard.push_back(layout.output_offset(p) + f);
                discarded_out_dim *= party.out_factors[f];
            }
        }
        if (!reduced.in_factors.empty()) kept_parties.push_back(std::move(reduced));
    }
    CMatrix op = partial_trace(w.op(), layout.shape(), discard);
    op *= 1.0 / static_cast<double>(discarded_out_dim);
    return ProcessMatrix(PartyLayout(std::move(kept_parties)), std::move(op));
}

ProcessMatrix refine_party(const ProcessMatrix &w, std::size_t p, std::vector<std::size_t> in_factors,
                           std::vector<std::size_t> out_factors) {
    std::vector<Party> parties = w.layout().parties();
    Party &party = parties.at(p);
    if (product(in_factors) != party.d_in() || product(out_factors) != party.d_out()) {
        throw std::invalid_argument("refined factors of party '" + party.name +
                                    "' do not multiply to its dimensions");
    }
    party.in_factors = std::move(in_factors);
    party.out_factors = std::move(out_factors);
    return ProcessMatrix(PartyLayout(std::move(parties)), w.op());
}

}  // namespace procval
