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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "procval/linalg.hpp"
#include "procval/process.hpp"

namespace procval {

/// I_d / d.
CMatrix maximally_mixed(std::size_t d);

/// (1/d) sum_i |ii><ii| on C^d ⊗ C^d: the Choi state of the classical identity
/// channel in the computational basis. For d = 2 this is (I + Z ⊗ Z) / 4.
CMatrix classical_corr(std::size_t d);

enum class Direction { XtoY, YtoX };

/// Two parties X, Y with d-dimensional inputs and outputs, mixing with equal
/// weight a classical identity channel X -> Y and one Y -> X:
///   d_O/2 (w^{x1} ⊗ r^{x2 y1} ⊗ w^{y2} + w^{x2} ⊗ r^{x1 y2} ⊗ w^{y1}).
ProcessMatrix eq3_process(std::size_t d);

/// Single branch of eq3_process: a classical identity channel in one direction,
/// d_O w ⊗ r ⊗ w.
ProcessMatrix oneway_channel_process(std::size_t d, Direction direction);

/// rho on all party inputs (in layout order) tensored with identity on all outputs.
ProcessMatrix state_process(const CMatrix &rho, const PartyLayout &layout);

/// Two qubit parties X, Y; shared by the two-party fixtures.
PartyLayout qubit_pair_layout(std::size_t d = 2);

struct GalleryExpectation {
    bool valid = true;
    /// Signalling directions as "X->Y" strings.
    std::set<std::string> signalling;
    std::string notes;
};

struct GalleryEntry {
    std::string name;
    ProcessMatrix process;
    GalleryExpectation expected;
};

/// All named fixtures, in a stable order.
const std::vector<GalleryEntry> &gallery();
const GalleryEntry &gallery_entry(std::string_view name);

}  // namespace procval
