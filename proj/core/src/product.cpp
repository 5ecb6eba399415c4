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

#include "procval/product.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

namespace procval {

namespace {

struct ResolvedPairing {
    std::vector<std::size_t> w_index;
    std::vector<std::size_t> z_index;
};

ResolvedPairing resolve(const PartyLayout &w, const PartyLayout &z, const PartyPairing &pairing) {
    if (pairing.pairs.size() != w.size() || pairing.pairs.size() != z.size()) {
        throw std::invalid_argument("pairing has " + std::to_string(pairing.pairs.size()) +
                                    " entries for processes with " + std::to_string(w.size()) + " and " +
                                    std::to_string(z.size()) + " parties");
    }
    ResolvedPairing out;
    std::set<std::size_t> seen_w, seen_z;
    std::set<std::string> names;
    for (const PartyPair &pair : pairing.pairs) {
        const std::size_t wi = w.index_of(pair.w_party);
        const std::size_t zi = z.index_of(pair.z_party);
        if (!seen_w.insert(wi).second || !seen_z.insert(zi).second) {
            throw std::invalid_argument("pairing is not a bijection between parties");
        }
        if (!names.insert(pair.combined).second) {
            throw std::invalid_argument("duplicate combined party name '" + pair.combined + "'");
        }
        out.w_index.push_back(wi);
        out.z_index.push_back(zi);
    }
    return out;
}

// perm[k] = position in (W subsystems ++ Z subsystems) of combined subsystem k.
std::vector<std::size_t> combined_permutation(const PartyLayout &w, const PartyLayout &z,
                                              const ResolvedPairing &r) {
    const std::size_t z_base = w.shape().size();
    std::vector<std::size_t> perm;
    auto append = [&perm](std::size_t first, std::size_t count) {
        for (std::size_t k = 0; k < count; ++k) perm.push_back(first + k);
    };
    for (std::size_t p = 0; p < r.w_index.size(); ++p) {
        const Party &wp = w.party(r.w_index[p]);
        const Party &zp = z.party(r.z_index[p]);
        append(w.input_offset(r.w_index[p]), wp.in_factors.size());
        append(z_base + z.input_offset(r.z_index[p]), zp.in_factors.size());
        append(w.output_offset(r.w_index[p]), wp.out_factors.size());
        append(z_base + z.output_offset(r.z_index[p]), zp.out_factors.size());
    }
    return perm;
}

// Per-party (has input, has output) flags of a term, in pairing order.
struct PartyFlags {
    std::vector<bool> in;
    std::vector<bool> out;
    bool nontrivial = false;
};

PartyFlags flags_of(const HSTerm &term, const PartyLayout &layout, const std::vector<std::size_t> &order) {
    const TermSignature sig = classify_term(term, layout);
    PartyFlags f;
    for (std::size_t p : order) {
        const TermType t = sig.tags[p];
        f.in.push_back(t == TermType::In || t == TermType::InOut);
        f.out.push_back(t == TermType::Out || t == TermType::InOut);
    }
    f.nontrivial = sig.nontrivial();
    return f;
}

TermType tag_from(bool in, bool out) {
    return in ? (out ? TermType::InOut : TermType::In) : (out ? TermType::Out : TermType::Trivial);
}

TermSignature reorder(const TermSignature &sig, const std::vector<std::size_t> &order) {
    TermSignature out;
    for (std::size_t p : order) out.tags.push_back(sig.tags[p]);
    return out;
}

bool term_rule_holds(const DecomposedProcess &w) { return forbidden_terms(w).empty(); }

}  // namespace

PartyPairing default_pairing(const PartyLayout &w, const PartyLayout &z) {
    if (w.size() != z.size()) {
        throw std::invalid_argument("default pairing needs equal party counts (" + std::to_string(w.size()) +
                                    " vs " + std::to_string(z.size()) + ")");
    }
    PartyPairing pairing;
    for (std::size_t p = 0; p < w.size(); ++p) {
        const std::string &a = w.party(p).name;
        const std::string &b = z.party(p).name;
        pairing.pairs.push_back({a, b, a == b ? a : a + b});
    }
    return pairing;
}

PartyLayout combined_layout(const PartyLayout &w, const PartyLayout &z, const PartyPairing &pairing) {
    const ResolvedPairing r = resolve(w, z, pairing);
    std::vector<Party> parties;
    for (std::size_t p = 0; p < pairing.pairs.size(); ++p) {
        const Party &wp = w.party(r.w_index[p]);
        const Party &zp = z.party(r.z_index[p]);
        Party merged{pairing.pairs[p].combined, wp.in_factors, wp.out_factors};
        merged.in_factors.insert(merged.in_factors.end(), zp.in_factors.begin(), zp.in_factors.end());
        merged.out_factors.insert(merged.out_factors.end(), zp.out_factors.begin(), zp.out_factors.end());
        parties.push_back(std::move(merged));
    }
    return PartyLayout(std::move(parties));
}

ProcessMatrix tensor_product(const ProcessMatrix &w, const ProcessMatrix &z, const PartyPairing &pairing) {
    const ResolvedPairing r = resolve(w.layout(), z.layout(), pairing);
    SubsystemShape joint = w.layout().shape();
    const SubsystemShape zs = z.layout().shape();
    joint.dims.insert(joint.dims.end(), zs.dims.begin(), zs.dims.end());
    const auto perm = combined_permutation(w.layout(), z.layout(), r);
    return ProcessMatrix(combined_layout(w.layout(), z.layout(), pairing),
                         permute_subsystems(tensor(w.op(), z.op()), joint, perm));
}

ProcessMatrix tensor_product(const ProcessMatrix &w, const ProcessMatrix &z) {
    return tensor_product(w, z, default_pairing(w.layout(), z.layout()));
}

DecomposedProcess tensor_product(const DecomposedProcess &w, const DecomposedProcess &z,
                                 const PartyPairing &pairing) {
    const ResolvedPairing r = resolve(w.layout, z.layout, pairing);
    const auto perm = combined_permutation(w.layout, z.layout, r);
    DecomposedProcess out{combined_layout(w.layout, z.layout, pairing), {}};
    out.terms.reserve(w.terms.size() * z.terms.size());
    std::vector<std::size_t> joint;
    for (const HSTerm &tw : w.terms) {
        for (const HSTerm &tz : z.terms) {
            joint = tw.indices;
            joint.insert(joint.end(), tz.indices.begin(), tz.indices.end());
            HSTerm t{std::vector<std::size_t>(perm.size()), tw.coeff * tz.coeff};
            for (std::size_t k = 0; k < perm.size(); ++k) t.indices[k] = joint[perm[k]];
            out.terms.push_back(std::move(t));
        }
    }
    std::sort(out.terms.begin(), out.terms.end(),
              [](const HSTerm &a, const HSTerm &b) { return a.indices < b.indices; });
    return out;
}

TermType combine_tags(TermType w, TermType z) {
    const bool in = w == TermType::In || w == TermType::InOut || z == TermType::In || z == TermType::InOut;
    const bool out = w == TermType::Out || w == TermType::InOut || z == TermType::Out || z == TermType::InOut;
    return tag_from(in, out);
}

ProductReport find_blocking_pairs(const DecomposedProcess &w, const DecomposedProcess &z,
                                  const PartyPairing &pairing) {
    const ResolvedPairing r = resolve(w.layout, z.layout, pairing);
    ProductReport report;
    report.combined_layout = combined_layout(w.layout, z.layout, pairing);
    report.w_valid = term_rule_holds(w);
    report.z_valid = term_rule_holds(z);

    std::vector<std::size_t> w_nontrivial, z_nontrivial;
    std::vector<PartyFlags> w_flags, z_flags;
    for (std::size_t i = 0; i < w.terms.size(); ++i) {
        PartyFlags f = flags_of(w.terms[i], w.layout, r.w_index);
        if (f.nontrivial) {
            w_nontrivial.push_back(i);
            w_flags.push_back(std::move(f));
        }
    }
    for (std::size_t j = 0; j < z.terms.size(); ++j) {
        PartyFlags f = flags_of(z.terms[j], z.layout, r.z_index);
        if (f.nontrivial) {
            z_nontrivial.push_back(j);
            z_flags.push_back(std::move(f));
        }
    }

    const std::size_t parties = pairing.pairs.size();
    for (std::size_t a = 0; a < w_nontrivial.size(); ++a) {
        for (std::size_t b = 0; b < z_nontrivial.size(); ++b) {
            bool pure_in = false;
            for (std::size_t p = 0; p < parties && !pure_in; ++p) {
                pure_in = (w_flags[a].in[p] || z_flags[b].in[p]) && !w_flags[a].out[p] && !z_flags[b].out[p];
            }
            if (pure_in) continue;

            const HSTerm &tw = w.terms[w_nontrivial[a]];
            const HSTerm &tz = z.terms[z_nontrivial[b]];
            BlockingPair pair{tw, tz, reorder(classify_term(tw, w.layout), r.w_index),
                              reorder(classify_term(tz, z.layout), r.z_index), {}};
            for (std::size_t p = 0; p < parties; ++p) {
                pair.combined.tags.push_back(combine_tags(pair.w_signature.tags[p], pair.z_signature.tags[p]));
            }
            report.blocking_pairs.push_back(std::move(pair));
        }
    }
    std::sort(report.blocking_pairs.begin(), report.blocking_pairs.end(),
              [](const BlockingPair &x, const BlockingPair &y) {
                  return std::tie(x.w_term.indices, x.z_term.indices) < std::tie(y.w_term.indices, y.z_term.indices);
              });
    report.verdict = report.blocking_pairs.empty();
    return report;
}

ProductReport find_blocking_pairs(const ProcessMatrix &w, const ProcessMatrix &z, const PartyPairing &pairing,
                                  const Tolerances &tol) {
    ProductReport report =
        find_blocking_pairs(decompose_process(w, tol.term), decompose_process(z, tol.term), pairing);
    report.w_valid = is_valid_process(w, tol).verdict;
    report.z_valid = is_valid_process(z, tol).verdict;
    return report;
}

bool corollary_check(const DecomposedProcess &w, const DecomposedProcess &z, const PartyPairing &pairing) {
    if (w.layout.size() != 2 || z.layout.size() != 2) {
        throw std::invalid_argument("corollary_check requires two-party processes");
    }
    const ResolvedPairing r = resolve(w.layout, z.layout, pairing);
    const bool w_ab = has_signalling(w, r.w_index[0], r.w_index[1]);
    const bool w_ba = has_signalling(w, r.w_index[1], r.w_index[0]);
    const bool z_ab = has_signalling(z, r.z_index[0], r.z_index[1]);
    const bool z_ba = has_signalling(z, r.z_index[1], r.z_index[0]);
    const bool both_signal = (w_ab || w_ba) && (z_ab || z_ba);
    const bool both_directions = (w_ab || z_ab) && (w_ba || z_ba);
    return both_signal && both_directions;
}

bool corollary_check(const ProcessMatrix &w, const ProcessMatrix &z, const PartyPairing &pairing) {
    return corollary_check(decompose_process(w), decompose_process(z), pairing);
}

SequenceReport check_sequence(std::span<const DecomposedProcess> ps, std::span<const PartyPairing> pairings) {
    if (ps.size() < 2) throw std::invalid_argument("check_sequence needs at least two processes");
    if (!pairings.empty() && pairings.size() != ps.size() - 1) {
        throw std::invalid_argument("check_sequence needs one pairing per product step");
    }
    SequenceReport report;
    report.product = ps[0];
    for (std::size_t i = 1; i < ps.size(); ++i) {
        const PartyPairing pairing =
            pairings.empty() ? default_pairing(report.product.layout, ps[i].layout) : pairings[i - 1];
        ProductReport step = find_blocking_pairs(report.product, ps[i], pairing);
        const bool ok = step.verdict && step.w_valid && step.z_valid;
        if (!ok && !report.first_failure) report.first_failure = i - 1;
        report.product = tensor_product(report.product, ps[i], pairing);
        report.steps.push_back(std::move(step));
    }
    report.verdict = !report.first_failure.has_value();
    return report;
}

SequenceReport check_sequence(std::span<const ProcessMatrix> ps, std::span<const PartyPairing> pairings) {
    std::vector<DecomposedProcess> decomposed;
    decomposed.reserve(ps.size());
    for (const ProcessMatrix &w : ps) decomposed.push_back(decompose_process(w));
    return check_sequence(std::span<const DecomposedProcess>(decomposed), pairings);
}

bool OrderSweep::consistent() const {
    return std::all_of(reports.begin(), reports.end(),
                       [this](const SequenceReport &r) { return r.verdict == reports.front().verdict; });
}

OrderSweep check_all_orders(std::span<const ProcessMatrix> ps, std::size_t max_exhaustive) {
    std::vector<DecomposedProcess> decomposed;
    for (const ProcessMatrix &w : ps) decomposed.push_back(decompose_process(w));

    std::vector<std::size_t> order(ps.size());
    std::iota(order.begin(), order.end(), 0);
    OrderSweep sweep;
    if (ps.size() <= max_exhaustive) {
        do {
            sweep.orders.push_back(order);
        } while (std::next_permutation(order.begin(), order.end()));
    } else {
        std::mt19937_64 rng(0x5eed0f0bdeadbeefULL);
        for (int k = 0; k < 24; ++k) {
            std::shuffle(order.begin(), order.end(), rng);
            sweep.orders.push_back(order);
        }
    }
    for (const auto &o : sweep.orders) {
        std::vector<DecomposedProcess> seq;
        for (std::size_t i : o) seq.push_back(decomposed[i]);
        sweep.reports.push_back(check_sequence(std::span<const DecomposedProcess>(seq)));
    }
    return sweep;
}

}  // namespace procval
