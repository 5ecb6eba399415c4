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

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace procval {

namespace {

constexpr std::size_t kMaxChannelDim = 1 << 12;
constexpr std::size_t kMaxBatterySize = 4096;

std::size_t checked_product(std::size_t a, std::size_t b) {
    if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
        throw std::overflow_error("channel dimension overflow");
    }
    return a * b;
}

std::vector<std::size_t> digits_of(std::size_t index, const std::vector<std::size_t> &dims) {
    std::vector<std::size_t> digits(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        digits[k] = index % dims[k];
        index /= dims[k];
    }
    return digits;
}

std::string party_label(const std::string &party, const std::string &channel) {
    return party + "=" + channel;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over the combined word.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

bool is_cptp(const ChoiChannel &channel, double tol) {
    if (channel.choi.dim() != channel.d_in * channel.d_out) return false;
    if (!is_hermitian(channel.choi)) return false;
    if (min_eigenvalue(channel.choi) < -tol) return false;
    const SubsystemShape shape{{channel.d_in, channel.d_out}};
    const std::size_t out_factor = 1;
    const CMatrix marginal = partial_trace(channel.choi, shape, std::span(&out_factor, 1));
    return max_abs_diff(marginal, CMatrix::identity(channel.d_in)) <= tol;
}

ChoiChannel isometry_channel(const std::vector<Complex> &isometry, std::size_t d_in, std::size_t d_out) {
    if (isometry.size() != d_in * d_out) throw std::invalid_argument("isometry has wrong size");
    // C = |V>><<V| with |V>> = sum_i |i> ⊗ V|i>.
    std::vector<Complex> vec(d_in * d_out);
    for (std::size_t i = 0; i < d_in; ++i) {
        for (std::size_t o = 0; o < d_out; ++o) vec[i * d_out + o] = isometry[o * d_in + i];
    }
    CMatrix choi(d_in * d_out);
    for (std::size_t r = 0; r < vec.size(); ++r) {
        for (std::size_t c = 0; c < vec.size(); ++c) choi(r, c) = vec[r] * std::conj(vec[c]);
    }
    return ChoiChannel{d_in, d_out, std::move(choi), "isometry"};
}

ChoiChannel random_cptp(std::size_t d_in, std::size_t d_out, std::optional<std::size_t> env_dim,
                        std::uint64_t seed) {
    if (d_in == 0 || d_out == 0) throw std::invalid_argument("channel dimensions must be positive");
    const std::size_t env = env_dim.value_or(checked_product(d_in, d_out));
    if (env == 0) throw std::invalid_argument("environment dimension must be positive");
    const std::size_t rows = checked_product(d_out, env);
    if (checked_product(d_in, d_out) > kMaxChannelDim || checked_product(rows, d_in) > kMaxChannelDim * kMaxChannelDim) {
        throw std::overflow_error("random_cptp: dimensions exceed the supported range");
    }
    if (rows < d_in) {
        throw std::invalid_argument("random_cptp: d_out * env_dim must be at least d_in for an isometry");
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(d_in));
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
        for (Eigen::Index r = 0; r < g.rows(); ++r) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(r, c) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    const Eigen::MatrixXcd v = qr.householderQ() * Eigen::MatrixXcd::Identity(g.rows(), g.cols());

    // N(|i><j|)[o, o'] = sum_e V[(o, e), i] conj(V[(o', e), j]).
    CMatrix choi(d_in * d_out);
    for (std::size_t i = 0; i < d_in; ++i) {
        for (std::size_t j = 0; j < d_in; ++j) {
            for (std::size_t o = 0; o < d_out; ++o) {
                for (std::size_t o2 = 0; o2 < d_out; ++o2) {
                    Complex acc = 0.0;
                    for (std::size_t e = 0; e < env; ++e) {
                        acc += v(static_cast<Eigen::Index>(o * env + e), static_cast<Eigen::Index>(i)) *
                               std::conj(v(static_cast<Eigen::Index>(o2 * env + e), static_cast<Eigen::Index>(j)));
                    }
                    choi(i * d_out + o, j * d_out + o2) = acc;
                }
            }
        }
    }
    return ChoiChannel{d_in, d_out, std::move(choi), "random"};
}

ChoiChannel identity_channel(std::size_t d) {
    std::vector<Complex> v(d * d);
    for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;
    ChoiChannel c = isometry_channel(v, d, d);
    c.label = "identity";
    return c;
}

ChoiChannel depolarizing_channel(std::size_t d_in, std::size_t d_out) {
    CMatrix choi = CMatrix::identity(d_in * d_out);
    choi *= 1.0 / static_cast<double>(d_out);
    return ChoiChannel{d_in, d_out, std::move(choi), "depolarize"};
}

ChoiChannel trace_and_prepare(std::size_t d_in, std::size_t d_out, std::size_t state) {
    if (state >= d_out) throw std::out_of_range("trace_and_prepare: state index out of range");
    CMatrix choi(d_in * d_out);
    for (std::size_t i = 0; i < d_in; ++i) choi(i * d_out + state, i * d_out + state) = 1.0;
    return ChoiChannel{d_in, d_out, std::move(choi), "prepare" + std::to_string(state)};
}

ChoiChannel routing_channel(const std::vector<std::size_t> &in_factors, const std::vector<std::size_t> &out_factors,
                            const std::vector<std::size_t> &route) {
    if (route.size() != out_factors.size() || in_factors.size() != out_factors.size()) {
        throw std::invalid_argument("routing_channel: route must map every output factor");
    }
    inverse_permutation(route);
    for (std::size_t k = 0; k < route.size(); ++k) {
        if (in_factors[route[k]] != out_factors[k]) {
            throw std::invalid_argument("routing_channel: routed factor dimensions differ");
        }
    }
    const std::size_t d_in = std::accumulate(in_factors.begin(), in_factors.end(), std::size_t{1}, std::multiplies<>());
    const std::size_t d_out = d_in;
    std::vector<Complex> v(d_in * d_out);
    for (std::size_t i = 0; i < d_in; ++i) {
        const auto in_digits = digits_of(i, in_factors);
        std::size_t o = 0;
        for (std::size_t k = 0; k < route.size(); ++k) o = o * out_factors[k] + in_digits[route[k]];
        v[o * d_in + i] = 1.0;
    }
    ChoiChannel c = isometry_channel(v, d_in, d_out);
    std::string name = "route(";
    for (std::size_t k = 0; k < route.size(); ++k) name += (k ? "," : "") + std::to_string(route[k]);
    c.label = name + ")";
    return c;
}

double probability(const ProcessMatrix &w, std::span<const ChoiChannel> channels) {
    const PartyLayout &layout = w.layout();
    if (channels.size() != layout.size()) {
        throw std::invalid_argument("probability: expected one channel per party");
    }
    CMatrix joint = CMatrix::identity(1);
    for (std::size_t p = 0; p < layout.size(); ++p) {
        const Party &party = layout.party(p);
        if (channels[p].d_in != party.d_in() || channels[p].d_out != party.d_out()) {
            throw std::invalid_argument("probability: channel dimensions do not match party '" + party.name + "'");
        }
        joint = tensor(joint, channels[p].choi);
    }
    // trace(W C^T) = sum_ij W_ij C_ij
    Complex acc = 0.0;
    const auto we = w.op().entries();
    const auto ce = joint.entries();
    for (std::size_t k = 0; k < we.size(); ++k) acc += we[k] * ce[k];
    return acc.real();
}

std::vector<std::vector<ChoiChannel>> deterministic_battery(const PartyLayout &layout) {
    std::vector<std::vector<ChoiChannel>> per_party;
    for (const Party &party : layout.parties()) {
        std::vector<ChoiChannel> options;
        const std::size_t d_in = party.d_in();
        const std::size_t d_out = party.d_out();
        if (d_in == d_out) options.push_back(identity_channel(d_in));
        if (party.in_factors.size() == party.out_factors.size() && party.in_factors.size() > 1) {
            std::vector<std::size_t> route(party.in_factors.size());
            std::iota(route.begin(), route.end(), 0);
            while (std::next_permutation(route.begin(), route.end())) {
                bool fits = true;
                for (std::size_t k = 0; k < route.size(); ++k) fits = fits && party.in_factors[route[k]] == party.out_factors[k];
                if (fits) options.push_back(routing_channel(party.in_factors, party.out_factors, route));
            }
        }
        options.push_back(depolarizing_channel(d_in, d_out));
        options.push_back(trace_and_prepare(d_in, d_out, 0));
        if (d_out > 1) options.push_back(trace_and_prepare(d_in, d_out, d_out - 1));
        for (ChoiChannel &c : options) c.label = party_label(party.name, c.label);
        per_party.push_back(std::move(options));
    }

    std::size_t combos = 1;
    for (const auto &options : per_party) combos = std::min(kMaxBatterySize + 1, combos * options.size());

    std::vector<std::vector<ChoiChannel>> battery;
    if (combos <= kMaxBatterySize) {
        std::vector<std::size_t> pick(per_party.size(), 0);
        for (std::size_t n = 0; n < combos; ++n) {
            std::vector<ChoiChannel> tuple;
            for (std::size_t p = 0; p < per_party.size(); ++p) tuple.push_back(per_party[p][pick[p]]);
            battery.push_back(std::move(tuple));
            for (std::size_t p = per_party.size(); p-- > 0;) {
                if (++pick[p] < per_party[p].size()) break;
                pick[p] = 0;
            }
        }
    } else {
        // Too many combinations: vary one party at a time against a depolarizing background.
        std::vector<ChoiChannel> background;
        for (std::size_t p = 0; p < per_party.size(); ++p) {
            const Party &party = layout.party(p);
            ChoiChannel c = depolarizing_channel(party.d_in(), party.d_out());
            c.label = party_label(party.name, c.label);
            background.push_back(std::move(c));
        }
        for (std::size_t p = 0; p < per_party.size(); ++p) {
            for (const ChoiChannel &option : per_party[p]) {
                auto tuple = background;
                tuple[p] = option;
                battery.push_back(std::move(tuple));
            }
        }
    }
    return battery;
}

OracleVerdict normalization_oracle(const ProcessMatrix &w, std::size_t samples, std::uint64_t seed) {
    OracleVerdict verdict;
    verdict.seed = seed;
    verdict.samples = samples;
    bool have_witness = false;
    auto consider = [&](std::vector<ChoiChannel> tuple, std::string source) {
        const double deviation = std::abs(probability(w, tuple) - 1.0);
        if (!have_witness || deviation > verdict.max_deviation) {
            verdict.max_deviation = deviation;
            verdict.witness = std::move(tuple);
            verdict.witness_source = std::move(source);
            have_witness = true;
        }
    };

    auto battery = deterministic_battery(w.layout());
    verdict.battery_size = battery.size();
    for (std::size_t b = 0; b < battery.size(); ++b) consider(std::move(battery[b]), "battery #" + std::to_string(b));

    const PartyLayout &layout = w.layout();
    for (std::size_t t = 0; t < samples; ++t) {
        const std::uint64_t tuple_seed = mix_seed(seed, t);
        std::vector<ChoiChannel> tuple;
        for (std::size_t p = 0; p < layout.size(); ++p) {
            const Party &party = layout.party(p);
            ChoiChannel c = random_cptp(party.d_in(), party.d_out(), std::nullopt, mix_seed(tuple_seed, p));
            c.label = party_label(party.name, c.label);
            tuple.push_back(std::move(c));
        }
        consider(std::move(tuple), "sample #" + std::to_string(t));
    }
    return verdict;
}

}  // namespace procval
