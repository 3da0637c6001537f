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

#include "hnf/geometry.hpp"
#include "hnf/solver.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hnf
{

struct ModulationSpec
{
    int order = 4;
    double phase_offset = 0.0;
};

// Fully resolved simulation input: geometry, placements (legitimate users and
// eavesdroppers in file order), modulation, solver settings, and the master
// seed that fixes every random draw.
struct Scenario
{
    ArrayGeometry geometry;
    std::vector<UserSpec> users;
    ModulationSpec modulation;
    SolverConfig solver;
    GainMode gain_mode = GainMode::unit;
    double ref_phase = 0.0;
    std::uint64_t seed = 0;

    explicit Scenario(ArrayGeometry geometry_) : geometry(geometry_) {}

    std::vector<std::size_t> legit_indices() const
    {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < users.size(); ++i)
            if (users[i].role == Role::legitimate)
                idx.push_back(i);
        return idx;
    }

    std::vector<std::size_t> eve_indices() const
    {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < users.size(); ++i)
            if (users[i].role == Role::eavesdropper)
                idx.push_back(i);
        return idx;
    }
};

// Receive amplitude floor realizing a specified SNR: zeta = sqrt(sigma^2 * 10^(snr/10)),
// so SNR = zeta^2 / sigma^2 at the sector apex.
inline double amplitude_for_snr(double snr_db, double noise_var)
{
    if (!(noise_var > 0.0))
        throw std::invalid_argument("amplitude_for_snr: noise_var must be positive");
    return std::sqrt(noise_var * std::pow(10.0, snr_db / 10.0));
}

// Channels of the legitimate users, in scenario order. force_far substitutes
// the plane-wave model for every user (the far-field baseline design).
inline std::vector<Channel> legit_channels(const Scenario &scenario, bool force_far = false)
{
    std::vector<Channel> channels;
    for (std::size_t i : scenario.legit_indices())
        channels.push_back(
            build_channel(scenario.geometry, scenario.users[i], scenario.gain_mode, force_far));
    return channels;
}

inline arma::vec legit_targets(const Scenario &scenario)
{
    const auto idx = scenario.legit_indices();
    arma::vec targets(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k)
        targets(k) = scenario.users[idx[k]].target_amplitude;
    return targets;
}

} // namespace hnf
