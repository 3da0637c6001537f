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

#include "hnf/rng.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hnf
{

// M-PSK alphabet: unit-modulus points exp(j*(offset + 2*pi*m/M)), m = 0..M-1.
struct PskConstellation
{
    int order = 0;
    double phase_offset = 0.0;
    std::vector<std::complex<double>> points;
};

inline double point_phase(const PskConstellation &c, int index)
{
    // Unwrapped nominal phase; callers that need (-pi, pi] wrap it themselves.
    return c.phase_offset +
           2.0 * 3.141592653589793238462643383279502884 * static_cast<double>(index) /
               static_cast<double>(c.order);
}

inline PskConstellation constellation(int order, double phase_offset = 0.0)
{
    if (order < 2)
        throw std::invalid_argument("constellation: order must be >= 2");
    PskConstellation c;
    c.order = order;
    c.phase_offset = phase_offset;
    c.points.reserve(static_cast<std::size_t>(order));
    for (int m = 0; m < order; ++m)
        c.points.push_back(std::polar(1.0, point_phase(c, m)));
    return c;
}

// Nearest constellation point in angle; exact sector-boundary ties go to the
// lower index (deterministic tests depend on this). Amplitude is irrelevant
// for PSK decisions.
inline int demodulate(std::complex<double> point, const PskConstellation &c)
{
    if (point.real() == 0.0 && point.imag() == 0.0)
        throw std::domain_error("demodulate: zero point has undefined phase");
    constexpr double two_pi = 2.0 * 3.141592653589793238462643383279502884;
    const double phase = std::arg(point);
    int best = 0;
    double best_distance = std::numeric_limits<double>::infinity();
    for (int m = 0; m < c.order; ++m)
    {
        const double d = std::abs(std::remainder(phase - point_phase(c, m), two_pi));
        if (d < best_distance) // strict: ties keep the lower index
        {
            best_distance = d;
            best = m;
        }
    }
    return best;
}

// Relaxed correct-detection sector for one symbol: anchored at the apex
// amplitude * exp(j*ref_phase), opening half_width = pi/M on each side.
struct SectorSpec
{
    double ref_phase = 0.0;
    double half_width = 0.0;
    double amplitude = 0.0;
};

inline SectorSpec sector_for(double amplitude, double ref_phase, int order)
{
    if (order < 2)
        throw std::invalid_argument("sector_for: order must be >= 2");
    if (!(amplitude >= 0.0))
        throw std::invalid_argument("sector_for: amplitude must be >= 0");
    return SectorSpec{ref_phase, 3.141592653589793238462643383279502884 / static_cast<double>(order),
                      amplitude};
}

// Signed sector membership margin, >= 0 inside (boundary inclusive).
// Evaluated in the rotated frame z = exp(-j*ref_phase) * point, which avoids
// the tan singularities of the raw boundary-line form when ref_phase +/-
// half_width crosses +/-pi/2. For half_width = pi/2 (BPSK) the sector
// degenerates to the half-plane Re z >= amplitude.
inline double sector_margin(std::complex<double> point, const SectorSpec &sector)
{
    const std::complex<double> z = std::polar(1.0, -sector.ref_phase) * point;
    const double head = z.real() - sector.amplitude;
    if (sector.half_width >= 0.5 * 3.141592653589793238462643383279502884)
        return head;
    return head * std::tan(sector.half_width) - std::abs(z.imag());
}

inline bool in_relaxed_region(std::complex<double> point, const SectorSpec &sector)
{
    return sector_margin(point, sector) >= 0.0;
}

// Uniform i.i.d. symbol indices; identical seed gives the identical sequence.
inline std::vector<int> random_symbols(const PskConstellation &c, std::size_t count,
                                       std::uint64_t seed)
{
    SplitMix64 rng(seed);
    std::vector<int> symbols;
    symbols.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        symbols.push_back(static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(c.order))));
    return symbols;
}

} // namespace hnf
