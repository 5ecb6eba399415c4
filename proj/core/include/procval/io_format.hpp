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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "procval/process.hpp"

namespace procval {

inline constexpr std::string_view kProcmatVersion = "procmat/1";

/// Optional provenance carried alongside a matrix in a .procmat.json document.
struct ProcmatMetadata {
    std::optional<std::string> description;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> provenance;

    bool empty() const { return !description && !seed && !provenance; }
    bool operator==(const ProcmatMetadata &) const = default;
};

struct ProcmatDocument {
    ProcessMatrix process;
    ProcmatMetadata metadata;
};

enum class ParseErrorKind { Syntax, Version, Schema, Dimension, Number };

std::string_view to_string(ParseErrorKind kind);

/// Parse failure with a JSON-pointer (or byte offset) location.
class ParseError : public std::runtime_error {
  public:
    ParseError(ParseErrorKind kind, std::string location, const std::string &message);

    ParseErrorKind kind() const { return kind_; }
    const std::string &location() const { return location_; }

  private:
    ParseErrorKind kind_;
    std::string location_;
};

/// Reads a procmat/1 document. Hermiticity is not checked here.
ProcmatDocument parse_procmat(std::string_view text);

/// Canonical text: fixed key order, one matrix row per line, shortest
/// round-trip decimals, trailing newline.
std::string serialize_procmat(const ProcessMatrix &w, const ProcmatMetadata &metadata = {});
std::string serialize_procmat(const ProcmatDocument &doc);

ProcmatDocument read_procmat_file(const std::filesystem::path &path);
void write_procmat_file(const std::filesystem::path &path, const ProcmatDocument &doc);

/// Shortest decimal that reads back to the same double.
std::string format_double(double value);

}  // namespace procval
