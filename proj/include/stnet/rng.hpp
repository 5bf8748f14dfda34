// stnet - space-terrestrial uplink network simulator
// Copyright 2026 the stnet authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace stnet {

using Rng = std::mt19937_64;

// Derives an independent engine from a base seed plus a tag path, e.g.
// make_stream(seed, {kStreamSlot, slot_id}). Streams with different tag
// paths are statistically independent and reproducible.
inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    std::vector<std::uint32_t> parts;
    parts.reserve(2 * (1 + tags.size()));
    auto push64 = [&parts](std::uint64_t v) {
        parts.push_back(static_cast<std::uint32_t>(v));
        parts.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push64(seed);
    for (std::uint64_t t : tags) {
        push64(t);
    }
    std::seed_seq seq(parts.begin(), parts.end());
    return Rng(seq);
}

// Stream tags used across the library; values are arbitrary but fixed.
inline constexpr std::uint64_t kStreamApLayout = 0xA1;
inline constexpr std::uint64_t kStreamSlot = 0xB2;

// Standard-normal source. Keeping one sampler per loop reuses the pair
// generated internally by the polar method, and the draw sequence stays
// reproducible for a fixed engine state.
struct GaussianSampler {
    std::normal_distribution<double> n01{0.0, 1.0};

    double operator()(Rng& rng) { return n01(rng); }

    // One draw from CN(0, variance).
    std::complex<double> complex_normal(Rng& rng, double variance) {
        const double s = std::sqrt(0.5 * variance);
        const double re = n01(rng) * s;
        const double im = n01(rng) * s;
        return {re, im};
    }
};

} // namespace stnet
