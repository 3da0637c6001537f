// SPDX-License-Identifier: Apache-2.0
//
// hnfsim - symbol-level secure precoding for hybrid near/far-field downlink
// Copyright (C) 2026 hnfsim contributors
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
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace hnf
{

// SplitMix64 generator. Used instead of <random> engines + distributions
// because identical output bytes across standard library implementations is a
// hard requirement of the simulation harness, and the standard distributions
// are only specified up to their statistical law.
class SplitMix64
{
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 mantissa bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

// Stable stream derivation: one finalizer pass over (master, stream). Streams
// indexed per receiver / per trial / per slot stay independent, and adding a
// stream never shifts the draws of any other stream.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t stream)
{
    std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (stream + 1ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Unbiased uniform index in [0, n) by rejection.
inline std::uint64_t uniform_index(SplitMix64 &rng, std::uint64_t n)
{
    if (n == 0)
        throw std::invalid_argument("uniform_index: n must be positive");
    const std::uint64_t bound = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
    std::uint64_t r = rng.next();
    while (r >= bound)
        r = rng.next();
    return r % n;
}

// One draw of a circularly symmetric complex Gaussian with E|n|^2 = variance.
// Radius/phase form: |n| = sqrt(-variance * ln u), arg n = 2*pi*w. The radius
// uses 1 - next_double() in (0, 1] so the logarithm never sees zero.
inline std::complex<double> complex_gaussian(SplitMix64 &rng, double variance)
{
    if (variance < 0.0)
        throw std::invalid_argument("complex_gaussian: variance must be >= 0");
    const double u = 1.0 - rng.next_double();
    const double w = rng.next_double();
    const double radius = std::sqrt(-variance * std::log(u));
    return std::polar(radius, 2.0 * 3.141592653589793238462643383279502884 * w);
}

} // namespace hnf
