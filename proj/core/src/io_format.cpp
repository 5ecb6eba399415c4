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

#include "procval/io_format.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace procval {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(ParseErrorKind kind, const std::string &location, const std::string &message) {
    throw ParseError(kind, location, message);
}

const json &require_key(const json &obj, const char *key, const std::string &where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(ParseErrorKind::Schema, where, std::string("missing key \"") + key + "\"");
    return *it;
}

std::size_t read_positive(const json &value, const std::string &where) {
    if (!value.is_number_unsigned() || value.get<std::uint64_t>() == 0) {
        fail(ParseErrorKind::Schema, where, "expected a positive integer");
    }
    return value.get<std::size_t>();
}

std::vector<std::size_t> read_factors(const json &value, const std::string &where) {
    if (!value.is_array() || value.empty()) fail(ParseErrorKind::Schema, where, "expected a non-empty array");
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < value.size(); ++k) out.push_back(read_positive(value[k], where + "/" + std::to_string(k)));
    return out;
}

std::size_t product_of(const std::vector<std::size_t> &dims) {
    std::size_t p = 1;
    for (std::size_t d : dims) p *= d;
    return p;
}

Party read_party(const json &value, const std::string &where) {
    if (!value.is_object()) fail(ParseErrorKind::Schema, where, "expected a party object");
    const json &name = require_key(value, "name", where);
    if (!name.is_string()) fail(ParseErrorKind::Schema, where + "/name", "expected a string");
    const std::size_t d_in = read_positive(require_key(value, "d_in", where), where + "/d_in");
    const std::size_t d_out = read_positive(require_key(value, "d_out", where), where + "/d_out");
    Party party = Party::simple(name.get<std::string>(), d_in, d_out);
    if (auto it = value.find("in_factors"); it != value.end()) {
        party.in_factors = read_factors(*it, where + "/in_factors");
        if (product_of(party.in_factors) != d_in) {
            fail(ParseErrorKind::Dimension, where + "/in_factors", "input factors do not multiply to d_in");
        }
    }
    if (auto it = value.find("out_factors"); it != value.end()) {
        party.out_factors = read_factors(*it, where + "/out_factors");
        if (product_of(party.out_factors) != d_out) {
            fail(ParseErrorKind::Dimension, where + "/out_factors", "output factors do not multiply to d_out");
        }
    }
    return party;
}

double read_number(const json &value, const std::string &where) {
    if (!value.is_number()) fail(ParseErrorKind::Number, where, "expected a number, got " + std::string(value.type_name()));
    const double x = value.get<double>();
    if (!std::isfinite(x)) fail(ParseErrorKind::Number, where, "number is not finite");
    return x;
}

ProcmatMetadata read_metadata(const json &value) {
    if (!value.is_object()) fail(ParseErrorKind::Schema, "/metadata", "expected an object");
    ProcmatMetadata meta;
    if (auto it = value.find("description"); it != value.end()) {
        if (!it->is_string()) fail(ParseErrorKind::Schema, "/metadata/description", "expected a string");
        meta.description = it->get<std::string>();
    }
    if (auto it = value.find("seed"); it != value.end()) {
        if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0)) {
            fail(ParseErrorKind::Schema, "/metadata/seed", "expected a non-negative integer");
        }
        meta.seed = it->get<std::uint64_t>();
    }
    if (auto it = value.find("provenance"); it != value.end()) {
        if (!it->is_string()) fail(ParseErrorKind::Schema, "/metadata/provenance", "expected a string");
        meta.provenance = it->get<std::string>();
    }
    return meta;
}

std::string quoted(const std::string &s) { return json(s).dump(); }

std::string dims_list(const std::vector<std::size_t> &dims) {
    std::string out = "[";
    for (std::size_t k = 0; k < dims.size(); ++k) out += (k ? ", " : "") + std::to_string(dims[k]);
    return out + "]";
}

}  // namespace

std::string_view to_string(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::Syntax: return "syntax";
        case ParseErrorKind::Version: return "version";
        case ParseErrorKind::Schema: return "schema";
        case ParseErrorKind::Dimension: return "dimension";
        case ParseErrorKind::Number: return "number";
    }
    return "unknown";
}

ParseError::ParseError(ParseErrorKind kind, std::string location, const std::string &message)
    : std::runtime_error(std::string(to_string(kind)) + " error at " + location + ": " + message),
      kind_(kind),
      location_(std::move(location)) {}

std::string format_double(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("format_double: value is not finite");
    // "-0" would read back as the integer 0.
    if (value == 0.0 && std::signbit(value)) return "-0.0";
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

ProcmatDocument parse_procmat(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        fail(ParseErrorKind::Syntax, "byte " + std::to_string(e.byte), e.what());
    } catch (const json::out_of_range &e) {
        fail(ParseErrorKind::Number, "document", e.what());
    }
    if (!doc.is_object()) fail(ParseErrorKind::Schema, "/", "expected a JSON object");

    const json &version = require_key(doc, "format_version", "/");
    if (!version.is_string() || version.get<std::string>() != kProcmatVersion) {
        fail(ParseErrorKind::Version, "/format_version",
             "unsupported format version " + version.dump() + ", expected \"" + std::string(kProcmatVersion) + "\"");
    }

    const json &parties_json = require_key(doc, "parties", "/");
    if (!parties_json.is_array()) fail(ParseErrorKind::Schema, "/parties", "expected an array");
    std::vector<Party> parties;
    for (std::size_t p = 0; p < parties_json.size(); ++p) {
        parties.push_back(read_party(parties_json[p], "/parties/" + std::to_string(p)));
    }
    PartyLayout layout;
    try {
        layout = PartyLayout(std::move(parties));
    } catch (const std::invalid_argument &e) {
        fail(ParseErrorKind::Schema, "/parties", e.what());
    }

    const json &matrix = require_key(doc, "matrix", "/");
    if (!matrix.is_object()) fail(ParseErrorKind::Schema, "/matrix", "expected an object");
    const std::size_t dim = read_positive(require_key(matrix, "dim", "/matrix"), "/matrix/dim");
    if (dim != layout.total_dim()) {
        fail(ParseErrorKind::Dimension, "/matrix/dim",
             "dim " + std::to_string(dim) + " does not match party dimensions (" +
                 std::to_string(layout.total_dim()) + ")");
    }
    const json &entries = require_key(matrix, "entries", "/matrix");
    if (!entries.is_array()) fail(ParseErrorKind::Schema, "/matrix/entries", "expected an array");
    if (entries.size() != dim * dim) {
        fail(ParseErrorKind::Dimension, "/matrix/entries",
             "expected " + std::to_string(dim * dim) + " entries, found " + std::to_string(entries.size()));
    }
    std::vector<Complex> values;
    values.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const std::string where = "/matrix/entries/" + std::to_string(k);
        const json &pair = entries[k];
        if (!pair.is_array() || pair.size() != 2) fail(ParseErrorKind::Number, where, "expected an [re, im] pair");
        values.emplace_back(read_number(pair[0], where + "/0"), read_number(pair[1], where + "/1"));
    }

    ProcmatMetadata metadata;
    if (auto it = doc.find("metadata"); it != doc.end()) metadata = read_metadata(*it);
    return ProcmatDocument{ProcessMatrix(std::move(layout), CMatrix(dim, std::move(values))), std::move(metadata)};
}

std::string serialize_procmat(const ProcessMatrix &w, const ProcmatMetadata &metadata) {
    std::ostringstream out;
    out << "{\n  \"format_version\": " << quoted(std::string(kProcmatVersion)) << ",\n  \"parties\": [\n";
    const auto &parties = w.layout().parties();
    for (std::size_t p = 0; p < parties.size(); ++p) {
        const Party &party = parties[p];
        out << "    {\"name\": " << quoted(party.name) << ", \"d_in\": " << party.d_in()
            << ", \"d_out\": " << party.d_out();
        if (party.in_factors.size() > 1 || party.out_factors.size() > 1) {
            out << ", \"in_factors\": " << dims_list(party.in_factors)
                << ", \"out_factors\": " << dims_list(party.out_factors);
        }
        out << "}" << (p + 1 < parties.size() ? "," : "") << "\n";
    }
    const CMatrix &m = w.op();
    out << "  ],\n  \"matrix\": {\n    \"dim\": " << m.dim() << ",\n    \"entries\": [\n";
    for (std::size_t r = 0; r < m.dim(); ++r) {
        out << "      ";
        for (std::size_t c = 0; c < m.dim(); ++c) {
            const Complex z = m(r, c);
            out << (c ? ", " : "") << "[" << format_double(z.real()) << ", " << format_double(z.imag()) << "]";
        }
        out << (r + 1 < m.dim() ? "," : "") << "\n";
    }
    out << "    ]\n  }";
    if (!metadata.empty()) {
        out << ",\n  \"metadata\": {";
        bool first = true;
        auto sep = [&]() {
            out << (first ? "" : ", ");
            first = false;
        };
        if (metadata.description) {
            sep();
            out << "\"description\": " << quoted(*metadata.description);
        }
        if (metadata.seed) {
            sep();
            out << "\"seed\": " << *metadata.seed;
        }
        if (metadata.provenance) {
            sep();
            out << "\"provenance\": " << quoted(*metadata.provenance);
        }
        out << "}";
    }
    out << "\n}\n";
    return out.str();
}

std::string serialize_procmat(const ProcmatDocument &doc) { return serialize_procmat(doc.process, doc.metadata); }

ProcmatDocument read_procmat_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_procmat(buf.str());
}

void write_procmat_file(const std::filesystem::path &path, const ProcmatDocument &doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << serialize_procmat(doc);
}

}  // namespace procval
