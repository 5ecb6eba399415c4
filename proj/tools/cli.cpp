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

#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "procval/gallery.hpp"
#include "procval/hsbasis.hpp"
#include "procval/io_format.hpp"
#include "procval/oracle.hpp"
#include "procval/process.hpp"
#include "procval/product.hpp"

namespace procval::cli {

namespace {

using json = nlohmann::json;

constexpr double kOracleThreshold = 1e-9;

struct Options {
    std::string file;
    std::string file_z;
    std::optional<double> tol;
    bool as_json = false;
    std::string pairing;
    std::size_t max_direct_dim = 1024;
    std::string output;
    std::size_t samples = kDefaultOracleSamples;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> keep;
    std::vector<std::string> split;
    std::string gallery_name;
};

std::vector<std::string> split_on(const std::string &text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string index_tuple(const HSTerm &t) {
    std::string s = "(";
    for (std::size_t k = 0; k < t.indices.size(); ++k) s += (k ? "," : "") + std::to_string(t.indices[k]);
    return s + ")";
}

std::string number(double x) {
    std::ostringstream s;
    s << std::setprecision(10) << x;
    return s.str();
}

std::string layout_summary(const PartyLayout &layout) {
    std::string s;
    for (const Party &p : layout.parties()) {
        s += (s.empty() ? "" : " ") + p.name + "(" + std::to_string(p.d_in()) + "->" + std::to_string(p.d_out()) + ")";
    }
    return s.empty() ? "(none)" : s;
}

json tags_json(const TermSignature &sig) {
    json tags = json::array();
    for (TermType t : sig.tags) tags.push_back(std::string(tag_code(t)));
    return tags;
}

json term_json(const HSTerm &term, const PartyLayout &layout) {
    const TermSignature sig = classify_term(term, layout);
    return json{{"indices", term.indices},
                {"coeff", term.coeff},
                {"type", type_name(sig, layout)},
                {"tags", tags_json(sig)}};
}

json layout_json(const PartyLayout &layout) {
    json parties = json::array();
    for (const Party &p : layout.parties()) {
        parties.push_back({{"name", p.name}, {"d_in", p.d_in()}, {"d_out", p.d_out()}});
    }
    return parties;
}

void emit_document(const ProcmatDocument &doc, const std::string &output, std::ostream &out) {
    if (output.empty() || output == "-") {
        out << serialize_procmat(doc);
    } else {
        write_procmat_file(output, doc);
    }
}

PartyPairing parse_pairing(const std::string &spec, const PartyLayout &w, const PartyLayout &z) {
    if (spec.empty()) return default_pairing(w, z);
    PartyPairing pairing;
    for (const std::string &item : split_on(spec, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("pairing item '" + item + "' needs W:Z[=NAME]");
        const auto eq = item.find('=', colon);
        PartyPair pair;
        pair.w_party = item.substr(0, colon);
        pair.z_party = item.substr(colon + 1, eq == std::string::npos ? std::string::npos : eq - colon - 1);
        pair.combined = eq == std::string::npos ? (pair.w_party == pair.z_party ? pair.w_party : pair.w_party + pair.z_party)
                                                : item.substr(eq + 1);
        pairing.pairs.push_back(std::move(pair));
    }
    return pairing;
}

std::vector<std::size_t> parse_dims(const std::string &text) {
    std::vector<std::size_t> dims;
    for (const std::string &d : split_on(text, 'x')) {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(d, &pos);
        if (pos != d.size() || v == 0) throw std::invalid_argument("bad dimension '" + d + "'");
        dims.push_back(static_cast<std::size_t>(v));
    }
    if (dims.empty()) throw std::invalid_argument("empty dimension list");
    return dims;
}

// --split NAME=IN/OUT, e.g. X=2x2/2x2
ProcessMatrix apply_split(const ProcessMatrix &w, const std::string &spec) {
    const auto eq = spec.find('=');
    const auto slash = spec.find('/', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || slash == std::string::npos) {
        throw std::invalid_argument("split '" + spec + "' must look like NAME=2x2/2x2");
    }
    const std::size_t p = w.layout().index_of(spec.substr(0, eq));
    return refine_party(w, p, parse_dims(spec.substr(eq + 1, slash - eq - 1)), parse_dims(spec.substr(slash + 1)));
}

std::size_t parse_factor_index(const std::string &text, std::size_t count, const std::string &label) {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(text, &pos);
    if (pos != text.size() || v >= count) throw std::invalid_argument("keep label '" + label + "' is out of range");
    return static_cast<std::size_t>(v);
}

// Labels: NAME (whole party), NAME.K (sub-party K), NAME.inK, NAME.outK.
std::vector<PartyKeep> parse_keep(const std::vector<std::string> &labels, const PartyLayout &layout) {
    std::vector<PartyKeep> keep;
    for (const Party &p : layout.parties()) {
        keep.push_back({std::vector<bool>(p.in_factors.size(), false), std::vector<bool>(p.out_factors.size(), false)});
    }
    for (const std::string &raw : labels) {
        for (const std::string &label : split_on(raw, ',')) {
            const auto dot = label.find('.');
            const std::size_t p = layout.index_of(label.substr(0, dot));
            const Party &party = layout.party(p);
            PartyKeep &k = keep[p];
            if (dot == std::string::npos) {
                std::fill(k.keep_in.begin(), k.keep_in.end(), true);
                std::fill(k.keep_out.begin(), k.keep_out.end(), true);
                continue;
            }
            const std::string sel = label.substr(dot + 1);
            if (sel.rfind("in", 0) == 0) {
                k.keep_in[parse_factor_index(sel.substr(2), party.in_factors.size(), label)] = true;
            } else if (sel.rfind("out", 0) == 0) {
                k.keep_out[parse_factor_index(sel.substr(3), party.out_factors.size(), label)] = true;
            } else {
                const std::size_t f = parse_factor_index(sel, std::min(party.in_factors.size(), party.out_factors.size()), label);
                k.keep_in[f] = true;
                k.keep_out[f] = true;
            }
        }
    }
    return keep;
}

std::uint64_t resolve_seed(const Options &o) {
    if (o.seed) return *o.seed;
    if (const char *env = std::getenv("PROCVAL_SEED"); env != nullptr && *env != '\0') {
        std::size_t pos = 0;
        const std::string text(env);
        const unsigned long long v = std::stoull(text, &pos, 0);
        if (pos != text.size()) throw std::invalid_argument("PROCVAL_SEED is not an integer");
        return v;
    }
    return kDefaultOracleSeed;
}

int cmd_validate(const Options &o, std::ostream &out) {
    const ProcmatDocument doc = read_procmat_file(o.file);
    const ProcessMatrix &w = doc.process;
    const ValidityReport r = is_valid_process(w, Tolerances{std::nullopt, std::nullopt, o.tol});
    const int code = r.verdict ? kPass : kFail;
    const bool psd_ok = r.psd_defect <= r.psd_tolerance;
    const bool trace_ok = r.trace_defect <= r.trace_tolerance;

    if (o.as_json) {
        json forbidden = json::array();
        for (const ClassifiedTerm &t : r.forbidden_terms) forbidden.push_back(term_json(t.term, w.layout()));
        json report{{"command", "validate"},
                    {"file", o.file},
                    {"parties", layout_json(w.layout())},
                    {"verdict", r.verdict},
                    {"psd", {{"ok", psd_ok}, {"min_eigenvalue", r.min_eigenvalue}, {"defect", r.psd_defect}, {"tolerance", r.psd_tolerance}}},
                    {"trace", {{"ok", trace_ok}, {"value", r.trace}, {"expected", w.layout().output_dim()}, {"defect", r.trace_defect}, {"tolerance", r.trace_tolerance}}},
                    {"terms", {{"ok", r.forbidden_terms.empty()}, {"count", r.term_count}, {"forbidden", forbidden}}},
                    {"exit_code", code}};
        out << report.dump(2) << "\n";
        return code;
    }
    out << "validate " << o.file << "\n";
    out << "  parties: " << layout_summary(w.layout()) << ", d_O = " << w.layout().output_dim() << "\n";
    out << "  positivity: min eigenvalue " << number(r.min_eigenvalue) << " (tolerance " << number(r.psd_tolerance) << ") "
        << (psd_ok ? "ok" : "FAIL") << "\n";
    out << "  trace: " << number(r.trace) << " (expected " << w.layout().output_dim() << ") " << (trace_ok ? "ok" : "FAIL") << "\n";
    out << "  term rule: " << r.term_count << " terms, " << r.forbidden_terms.size() << " forbidden "
        << (r.forbidden_terms.empty() ? "ok" : "FAIL") << "\n";
    for (const ClassifiedTerm &t : r.forbidden_terms) {
        out << "    forbidden " << index_tuple(t.term) << " coeff " << number(t.term.coeff) << " type "
            << type_name(t.signature, w.layout()) << "\n";
    }
    out << "verdict: " << (r.verdict ? "VALID" : "INVALID") << "\n";
    return code;
}

int cmd_decompose(const Options &o, std::ostream &out) {
    const ProcmatDocument doc = read_procmat_file(o.file);
    const ProcessMatrix &w = doc.process;
    const DecomposedProcess d = decompose_process(w, o.tol);
    if (o.as_json) {
        json terms = json::array();
        for (const HSTerm &t : d.terms) terms.push_back(term_json(t, w.layout()));
        out << json{{"command", "decompose"}, {"file", o.file}, {"parties", layout_json(w.layout())}, {"terms", terms}, {"exit_code", 0}}.dump(2)
            << "\n";
        return kPass;
    }
    out << "decompose " << o.file << "\n";
    out << "  parties: " << layout_summary(w.layout()) << ", " << d.terms.size() << " terms\n";
    for (const HSTerm &t : d.terms) {
        out << "  " << index_tuple(t) << " " << number(t.coeff) << " " << type_name(classify_term(t, w.layout()), w.layout())
            << "\n";
    }
    return kPass;
}

int cmd_product(const Options &o, std::ostream &out) {
    const ProcessMatrix w = read_procmat_file(o.file).process;
    const ProcessMatrix z = read_procmat_file(o.file_z).process;
    const PartyPairing pairing = parse_pairing(o.pairing, w.layout(), z.layout());
    const ProductReport r = find_blocking_pairs(w, z, pairing, Tolerances{std::nullopt, std::nullopt, o.tol});
    const PartyLayout &combined = r.combined_layout;

    std::optional<bool> corollary;
    if (w.layout().size() == 2 && z.layout().size() == 2) corollary = corollary_check(w, z, pairing);

    std::optional<ProcessMatrix> built;
    std::optional<ValidityReport> direct;
    if (combined.total_dim() <= o.max_direct_dim || !o.output.empty()) built = tensor_product(w, z, pairing);
    if (built && combined.total_dim() <= o.max_direct_dim) direct = is_valid_process(*built, Tolerances{std::nullopt, std::nullopt, o.tol});
    if (built && !o.output.empty()) {
        write_procmat_file(o.output, ProcmatDocument{*built, ProcmatMetadata{std::nullopt, std::nullopt, "product of " + o.file + " and " + o.file_z}});
    }

    const bool pass = r.verdict && r.w_valid && r.z_valid;
    const int code = pass ? kPass : kFail;
    if (o.as_json) {
        json pairs = json::array();
        for (const BlockingPair &b : r.blocking_pairs) {
            json cases = json::array();
            for (std::size_t p = 0; p < combined.size(); ++p) {
                cases.push_back({{"party", combined.party(p).name},
                                 {"w", std::string(tag_code(b.w_signature.tags[p]))},
                                 {"z", std::string(tag_code(b.z_signature.tags[p]))}});
            }
            pairs.push_back({{"w_term", term_json(b.w_term, w.layout())},
                             {"z_term", term_json(b.z_term, z.layout())},
                             {"cases", cases},
                             {"combined_type", type_name(b.combined, combined)}});
        }
        json report{{"command", "product"},
                    {"files", {o.file, o.file_z}},
                    {"combined_parties", layout_json(combined)},
                    {"verdict", r.verdict},
                    {"w_valid", r.w_valid},
                    {"z_valid", r.z_valid},
                    {"blocking_pairs", pairs},
                    {"corollary_invalid", corollary ? json(*corollary) : json(nullptr)},
                    {"direct_verdict", direct ? json(direct->verdict) : json(nullptr)},
                    {"exit_code", code}};
        out << report.dump(2) << "\n";
        return code;
    }
    out << "product " << o.file << " x " << o.file_z << "\n";
    out << "  combined parties: " << layout_summary(combined) << "\n";
    if (!r.w_valid) out << "  warning: first factor is not a valid process\n";
    if (!r.z_valid) out << "  warning: second factor is not a valid process\n";
    out << "  blocking pairs: " << r.blocking_pairs.size() << "\n";
    for (const BlockingPair &b : r.blocking_pairs) {
        out << "    W " << index_tuple(b.w_term) << " [" << type_name(b.w_signature, combined) << "] x Z " << index_tuple(b.z_term)
            << " [" << type_name(b.z_signature, combined) << "] -> cases";
        for (std::size_t p = 0; p < combined.size(); ++p) {
            out << " " << combined.party(p).name << ":(" << tag_code(b.w_signature.tags[p]) << ","
                << tag_code(b.z_signature.tags[p]) << ")";
        }
        out << " combined " << type_name(b.combined, combined) << "\n";
    }
    if (corollary) out << "  two-party criterion: product " << (*corollary ? "invalid" : "valid") << "\n";
    if (direct) {
        out << "  direct check: " << (direct->verdict ? "VALID" : "INVALID")
            << (direct->verdict == r.verdict ? " (agrees)" : " (DISAGREES)") << "\n";
    } else {
        out << "  direct check: skipped (dim " << combined.total_dim() << " > " << o.max_direct_dim << ")\n";
    }
    out << "verdict: product is " << (r.verdict ? "a valid process" : "NOT a valid process") << "\n";
    return code;
}

json channel_json(const ChoiChannel &c) {
    json entries = json::array();
    for (const Complex &z : c.choi.entries()) entries.push_back({z.real(), z.imag()});
    return json{{"label", c.label}, {"d_in", c.d_in}, {"d_out", c.d_out}, {"choi", entries}};
}

int cmd_oracle(const Options &o, std::ostream &out) {
    const ProcessMatrix w = read_procmat_file(o.file).process;
    require_hermitian(w.op(), "oracle");
    const std::uint64_t seed = resolve_seed(o);
    const OracleVerdict v = normalization_oracle(w, o.samples, seed);
    const bool pass = v.max_deviation < kOracleThreshold;
    const int code = pass ? kPass : kFail;
    if (o.as_json) {
        json witness = json::array();
        for (const ChoiChannel &c : v.witness) witness.push_back(channel_json(c));
        out << json{{"command", "oracle"},
                    {"file", o.file},
                    {"seed", v.seed},
                    {"samples", v.samples},
                    {"battery_size", v.battery_size},
                    {"max_deviation", v.max_deviation},
                    {"threshold", kOracleThreshold},
                    {"normalized", pass},
                    {"witness_source", v.witness_source},
                    {"witness", witness},
                    {"exit_code", code}}
                   .dump(2)
            << "\n";
        return code;
    }
    out << "oracle " << o.file << "\n";
    out << "  seed " << v.seed << ", " << v.samples << " random samples, " << v.battery_size << " deterministic tuples\n";
    out << "  max |p - 1| = " << number(v.max_deviation) << " at " << v.witness_source << "\n";
    if (!pass) {
        out << "  witness channels:";
        for (const ChoiChannel &c : v.witness) out << " " << c.label;
        out << "\n";
        for (const ChoiChannel &c : v.witness) {
            out << "    " << c.label << " Choi (" << c.choi.dim() << "x" << c.choi.dim() << "):\n";
            for (std::size_t r = 0; r < c.choi.dim(); ++r) {
                out << "     ";
                for (std::size_t k = 0; k < c.choi.dim(); ++k) {
                    const Complex z = c.choi(r, k);
                    out << " " << number(z.real()) << (z.imag() < 0 ? "-" : "+") << number(std::abs(z.imag())) << "i";
                }
                out << "\n";
            }
        }
    }
    out << "verdict: " << (pass ? "normalized" : "NOT normalized") << "\n";
    return code;
}

int cmd_reduce(const Options &o, std::ostream &out) {
    ProcessMatrix w = read_procmat_file(o.file).process;
    for (const std::string &spec : o.split) w = apply_split(w, spec);
    const ProcessMatrix reduced = reduced_process(w, parse_keep(o.keep, w.layout()));
    emit_document(ProcmatDocument{reduced, {}}, o.output, out);
    return kPass;
}

int cmd_gallery_list(const Options &o, std::ostream &out) {
    if (o.as_json) {
        json entries = json::array();
        for (const GalleryEntry &e : gallery()) {
            entries.push_back({{"name", e.name},
                               {"valid", e.expected.valid},
                               {"signalling", e.expected.signalling},
                               {"parties", layout_json(e.process.layout())},
                               {"notes", e.expected.notes}});
        }
        out << json{{"command", "gallery list"}, {"entries", entries}, {"exit_code", 0}}.dump(2) << "\n";
        return kPass;
    }
    for (const GalleryEntry &e : gallery()) out << e.name << "\n";
    return kPass;
}

int cmd_gallery_export(const Options &o, std::ostream &out) {
    const GalleryEntry &e = gallery_entry(o.gallery_name);
    emit_document(ProcmatDocument{e.process, ProcmatMetadata{e.expected.notes, std::nullopt, "gallery:" + e.name}}, o.output,
                  out);
    return kPass;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"procval: process-matrix validity, term classification and product checks"};
    app.name("procval");
    app.require_subcommand(1);
    Options o;

    auto *validate = app.add_subcommand("validate", "Check positivity, trace and the term-type rule");
    validate->add_option("file", o.file, "process file (.procmat.json)")->required();
    validate->add_option("--tol", o.tol, "term pruning tolerance");
    validate->add_flag("--json", o.as_json, "machine-readable report");

    auto *decompose = app.add_subcommand("decompose", "List Hilbert-Schmidt terms with their types");
    decompose->add_option("file", o.file, "process file")->required();
    decompose->add_option("--tol", o.tol, "term pruning tolerance");
    decompose->add_flag("--json", o.as_json, "machine-readable report");

    auto *product = app.add_subcommand("product", "Decide whether W ⊗ Z is a valid process");
    product->add_option("w", o.file, "first process file")->required();
    product->add_option("z", o.file_z, "second process file")->required();
    product->add_option("--pairing", o.pairing, "party pairing W:Z[=NAME],... (default: by position)");
    product->add_option("--tol", o.tol, "term pruning tolerance");
    product->add_option("--max-direct-dim", o.max_direct_dim, "largest product dim for the dense cross-check");
    product->add_option("--output,-o", o.output, "write the product process to this file");
    product->add_flag("--json", o.as_json, "machine-readable report");

    auto *oracle = app.add_subcommand("oracle", "Sample local channels and check outcome normalization");
    oracle->add_option("file", o.file, "process file")->required();
    oracle->add_option("--samples", o.samples, "number of random channel tuples");
    oracle->add_option("--seed", o.seed, "64-bit seed (default: $PROCVAL_SEED or built-in)");
    oracle->add_flag("--json", o.as_json, "machine-readable report");

    auto *reduce = app.add_subcommand("reduce", "Trace out sub-parties and renormalize");
    reduce->add_option("file", o.file, "process file")->required();
    reduce->add_option("--keep", o.keep, "kept subsystems: NAME, NAME.K, NAME.inK, NAME.outK")->required();
    reduce->add_option("--split", o.split, "re-factor a party first: NAME=2x2/2x2");
    reduce->add_option("--output,-o", o.output, "output file (default stdout)");

    auto *gallery_cmd = app.add_subcommand("gallery", "Built-in fixture processes");
    gallery_cmd->require_subcommand(1);
    auto *list = gallery_cmd->add_subcommand("list", "List fixture names");
    list->add_flag("--json", o.as_json, "machine-readable listing");
    auto *exporter = gallery_cmd->add_subcommand("export", "Write a fixture as .procmat.json");
    exporter->add_option("name", o.gallery_name, "fixture name")->required();
    exporter->add_option("--output,-o", o.output, "output file (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*validate) return cmd_validate(o, out);
        if (*decompose) return cmd_decompose(o, out);
        if (*product) return cmd_product(o, out);
        if (*oracle) return cmd_oracle(o, out);
        if (*reduce) return cmd_reduce(o, out);
        if (*list) return cmd_gallery_list(o, out);
        if (*exporter) return cmd_gallery_export(o, out);
    } catch (const ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace procval::cli
