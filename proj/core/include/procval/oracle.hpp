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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "procval/linalg.hpp"
#include "procval/process.hpp"

namespace procval {

/// Choi operator C = sum_ij |i><j| ⊗ N(|i><j|) of a channel N, ordered input ⊗ output.
struct ChoiChannel {
    std::size_t d_in = 1;
    std::size_t d_out = 1;
    CMatrix choi;
    std::string label;
};

/// PSD and trace preserving (partial trace over the output is the identity), within tol.
bool is_cptp(const ChoiChannel &channel, double tol = 1e-10);

/// Random channel from a Haar-like isometry C^{d_in} -> C^{d_out} ⊗ C^{env_dim}
/// with the environment traced out. env_dim defaults to d_in * d_out.
ChoiChannel random_cptp(std::size_t d_in, std::size_t d_out, std::optional<std::size_t> env_dim,
                        std::uint64_t seed);

/// Channel X -> V X V† for an isometry V (d_out x d_in, V†V = I).
ChoiChannel isometry_channel(const std::vector<Complex> &isometry, std::size_t d_in, std::size_t d_out);
ChoiChannel identity_channel(std::size_t d);
/// X -> trace(X) I / d_out.
ChoiChannel depolarizing_channel(std::size_t d_in, std::size_t d_out);
/// X -> trace(X) |state><state|.
ChoiChannel trace_and_prepare(std::size_t d_in, std::size_t d_out, std::size_t state);
/// Identity channel that sends input factor route[k] to output factor k.
ChoiChannel routing_channel(const std::vector<std::size_t> &in_factors, const std::vector<std::size_t> &out_factors,
                            const std::vector<std::size_t> &route);

/// Outcome probability trace(W * (⊗_parties C_p)^T), one channel per party in layout order.
double probability(const ProcessMatrix &w, std::span<const ChoiChannel> channels);

/// Deterministic local operations tried before random sampling: identities,
/// factor-routing identities, depolarizers and trace-and-prepare channels.
std::vector<std::vector<ChoiChannel>> deterministic_battery(const PartyLayout &layout);

struct OracleVerdict {
    double max_deviation = 0.0;
    std::vector<ChoiChannel> witness;
    std::string witness_source;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    std::size_t battery_size = 0;
};

inline constexpr std::size_t kDefaultOracleSamples = 200;
inline constexpr std::uint64_t kDefaultOracleSeed = 0x70726f6376616cULL;

/// Largest |p - 1| over the deterministic battery and `samples` tuples of
/// random CPTP channels. Tuple t draws party p's channel from an independent
/// stream derived from (seed, t, p).
OracleVerdict normalization_oracle(const ProcessMatrix &w, std::size_t samples = kDefaultOracleSamples,
                                   std::uint64_t seed = kDefaultOracleSeed);

/// 64-bit mixing function used to derive per-sample streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace procval
