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

#include <hnf/hnf.hpp>

#include <string>

namespace hnf_test
{

// Reference geometry used throughout: 256-element half-wavelength ULA at
// 28 GHz. Rayleigh distance 348.107... m separates the standard user
// placements (10, 35 near; 390, 420 far).
inline hnf::ArrayGeometry reference_geometry()
{
    return hnf::ArrayGeometry::half_wavelength(256, 28e9);
}

inline std::string scenario_path(const std::string &name)
{
    return std::string(HNF_SCENARIO_DIR) + "/" + name;
}

// Unit-variance circular complex Gaussian channel entries; gain 1 so the
// Channel invariant ||vector|| = sqrt(N)*|gain| is not asserted on these
// synthetic draws.
inline hnf::Channel random_channel(hnf::SplitMix64 &rng, std::size_t n)
{
    hnf::Channel ch;
    ch.vector.set_size(n);
    for (std::size_t i = 0; i < n; ++i)
        ch.vector(i) = hnf::complex_gaussian(rng, 1.0);
    ch.gain = {1.0, 0.0};
    ch.field_type = hnf::FieldType::far_field;
    return ch;
}

inline std::vector<hnf::Channel> random_channels(hnf::SplitMix64 &rng, std::size_t count,
                                                 std::size_t n)
{
    std::vector<hnf::Channel> channels;
    for (std::size_t k = 0; k < count; ++k)
        channels.push_back(random_channel(rng, n));
    return channels;
}

inline arma::cx_vec random_cx_vec(hnf::SplitMix64 &rng, std::size_t n)
{
    arma::cx_vec v(n);
    for (std::size_t i = 0; i < n; ++i)
        v(i) = hnf::complex_gaussian(rng, 1.0);
    return v;
}

} // namespace hnf_test
