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
//
// Receive-side evaluation: per-receiver SNR, secrecy capacity, angle-range
// power spectra, and symbol-error-rate Monte Carlo.

#pragma once

#include "hnf/modulation.hpp"
#include "hnf/precoder.hpp"
#include "hnf/rng.hpp"
#include "hnf/scenario.hpp"
#include "hnf/solver.hpp"

#include <armadillo>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace hnf
{

// Distributed single-antenna eavesdroppers; channels assembled columnwise
// into the orientation matrix. No joint combining across Eves.
struct EveSet
{
    std::vector<UserSpec> specs;
    std::vector<Channel> channels;

    arma::cx_mat orientation() const
    {
        if (channels.empty())
            return arma::cx_mat();
        arma::cx_mat h(channels.front().vector.n_elem, channels.size());
        for (std::size_t j = 0; j < channels.size(); ++j)
            h.col(j) = channels[j].vector;
        return h;
    }
};

inline EveSet build_eve_set(const ArrayGeometry &geometry, const std::vector<UserSpec> &eves,
                            GainMode mode = GainMode::unit)
{
    EveSet set;
    for (const UserSpec &eve : eves)
    {
        if (eve.role != Role::eavesdropper)
            throw std::invalid_argument("build_eve_set: every entry must have the eavesdropper role");
        set.specs.push_back(eve);
        set.channels.push_back(build_channel(geometry, eve, mode));
    }
    return set;
}

inline EveSet eve_set(const Scenario &scenario)
{
    std::vector<UserSpec> eves;
    for (std::size_t i : scenario.eve_indices())
        eves.push_back(scenario.users[i]);
    return build_eve_set(scenario.geometry, eves, scenario.gain_mode);
}

// Noise-free receive point h^H v.
inline std::complex<double> receive_point(const Channel &channel, const arma::cx_vec &v)
{
    if (channel.vector.n_elem != v.n_elem)
        throw std::invalid_argument("receive_point: dimension mismatch");
    return arma::cdot(channel.vector, v);
}

inline double user_snr(const Channel &channel, const arma::cx_vec &v, double noise_var)
{
    if (!(noise_var > 0.0))
        throw std::invalid_argument("user_snr: noise_var must be positive");
    return std::norm(receive_point(channel, v)) / noise_var;
}

struct SecrecyReport
{
    double c_legit = 0.0;   // bits per channel use
    double c_eve = 0.0;
    double c_secrecy = 0.0; // max(c_legit - c_eve, 0)
    std::vector<double> legit_snr;
    std::vector<double> eve_snr;
};

// C_L = sum_k (1/M) log2(1 + SNR_k) over legitimate users, C_E likewise over
// Eves, C_S = [C_L - C_E]^+. The 1/M normalization is kept as adopted from
// the reference formulation; per_symbol_factor = false drops it (both sides
// scale equally, so orderings are unaffected).
inline SecrecyReport secrecy_capacity(const std::vector<Channel> &legit,
                                      const std::vector<double> &legit_noise, const EveSet &eves,
                                      const arma::cx_vec &v, int order,
                                      bool per_symbol_factor = true)
{
    if (legit.empty())
        throw std::invalid_argument("secrecy_capacity: at least one legitimate user required");
    if (legit.size() != legit_noise.size())
        throw std::invalid_argument("secrecy_capacity: channel and noise counts disagree");
    if (order < 2)
        throw std::invalid_argument("secrecy_capacity: order must be >= 2");
    const double factor = per_symbol_factor ? 1.0 / static_cast<double>(order) : 1.0;

    SecrecyReport report;
    for (std::size_t k = 0; k < legit.size(); ++k)
    {
        const double snr = user_snr(legit[k], v, legit_noise[k]);
        report.legit_snr.push_back(snr);
        report.c_legit += factor * std::log2(1.0 + snr);
    }
    for (std::size_t j = 0; j < eves.channels.size(); ++j)
    {
        const double snr = user_snr(eves.channels[j], v, eves.specs[j].noise_var);
        report.eve_snr.push_back(snr);
        report.c_eve += factor * std::log2(1.0 + snr);
    }
    report.c_secrecy = std::max(report.c_legit - report.c_eve, 0.0);
    return report;
}

// Normalized |h(angle, range)^H v|^2 over an angle x range grid, probe
// channels built near/far by range classification. Unit probe gains by
// default so the map shows the array response rather than path loss.
struct SpectrumGrid
{
    arma::vec angles_rad;
    arma::vec ranges_m;
    arma::mat power_linear; // normalized so the maximum cell is exactly 1
    arma::mat power_db;     // 10*log10(power_linear); zero cells floored at -400 dB
};

inline SpectrumGrid power_spectrum(const ArrayGeometry &geometry, const arma::cx_vec &v,
                                   const arma::vec &angles_rad, const arma::vec &ranges_m,
                                   GainMode probe_gain = GainMode::unit)
{
    if (angles_rad.n_elem == 0 || ranges_m.n_elem == 0)
        throw std::invalid_argument("power_spectrum: grids must be non-empty");
    if (v.n_elem != static_cast<arma::uword>(geometry.n_elements))
        throw std::invalid_argument("power_spectrum: beamformer length != element count");

    SpectrumGrid grid;
    grid.angles_rad = angles_rad;
    grid.ranges_m = ranges_m;
    grid.power_linear.set_size(angles_rad.n_elem, ranges_m.n_elem);

    const double root_n = std::sqrt(static_cast<double>(geometry.n_elements));
    for (arma::uword i = 0; i < angles_rad.n_elem; ++i)
    {
        const arma::cx_vec far = far_steering(geometry, angles_rad(i));
        for (arma::uword j = 0; j < ranges_m.n_elem; ++j)
        {
            const double r = ranges_m(j);
            if (!(r > 0.0))
                throw std::invalid_argument("power_spectrum: ranges must be positive");
            const std::complex<double> gain = channel_gain(geometry, r, probe_gain);
            const arma::cx_vec &steering = classify_range(geometry, r) == FieldType::near_field
                                               ? near_steering(geometry, r, angles_rad(i))
                                               : far;
            const std::complex<double> point = arma::cdot(root_n * gain * steering, v);
            grid.power_linear(i, j) = std::norm(point);
        }
    }

    const double peak = grid.power_linear.max();
    if (!(peak > 0.0))
        throw std::domain_error("power_spectrum: spectrum is identically zero");
    grid.power_linear /= peak;
    grid.power_db = grid.power_linear;
    grid.power_db.transform([](double x) { return x > 0.0 ? 10.0 * std::log10(x) : -400.0; });
    return grid;
}

struct SerReport
{
    std::vector<std::size_t> receiver_indices; // indices into scenario.users
    std::vector<long long> error_counts;
    std::vector<double> ser;
    std::vector<double> ci95_halfwidth;
    long long trials = 0;
};

namespace detail
{
// Fixed stream tags; any change breaks byte-reproducibility of archived runs.
inline constexpr std::uint64_t seed_tag_symbols = 0x53594D42ull;
inline constexpr std::uint64_t seed_tag_noise = 0x4E4F4953ull;
} // namespace detail

// Per trial: draw one slot assignment, re-solve the precoder (symbol-rate
// update), add per-receiver circular complex Gaussian noise, demodulate,
// count errors. Legitimate receivers are graded against their own stream;
// eavesdroppers against the first legitimate user's stream (the secrecy
// question is whether that stream leaks). Noise draws use one stream per
// (receiver, trial), so adding a receiver never perturbs the others.
inline SerReport ser_monte_carlo(const Scenario &scenario, long long trials, std::uint64_t seed)
{
    if (trials < 1)
        throw std::invalid_argument("ser_monte_carlo: trials must be >= 1");
    const auto legit_idx = scenario.legit_indices();
    if (legit_idx.empty())
        throw std::invalid_argument("ser_monte_carlo: at least one legitimate user required");

    const PskConstellation psk = constellation(scenario.modulation.order, scenario.modulation.phase_offset);
    const std::vector<Channel> legit = legit_channels(scenario);
    const arma::vec targets = legit_targets(scenario);

    std::vector<Channel> receiver_channel;
    SerReport report;
    for (std::size_t i = 0; i < scenario.users.size(); ++i)
    {
        report.receiver_indices.push_back(i);
        receiver_channel.push_back(build_channel(scenario.geometry, scenario.users[i], scenario.gain_mode));
    }
    report.error_counts.assign(scenario.users.size(), 0);
    report.trials = trials;

    // Legitimate-user position within the assignment, for own-stream grading.
    std::vector<std::size_t> legit_position(scenario.users.size(), 0);
    for (std::size_t k = 0; k < legit_idx.size(); ++k)
        legit_position[legit_idx[k]] = k;

    const std::uint64_t symbol_root = derive_stream(seed, detail::seed_tag_symbols);
    const std::uint64_t noise_root = derive_stream(seed, detail::seed_tag_noise);

    // The solution depends only on the assignment, so repeated assignments
    // reuse the solved beamformer (observable behavior is unchanged).
    std::map<SlotAssignment, arma::cx_vec> cache;

    for (long long t = 0; t < trials; ++t)
    {
        const SlotAssignment assignment =
            random_symbols(psk, legit_idx.size(), derive_stream(symbol_root, static_cast<std::uint64_t>(t)));
        auto it = cache.find(assignment);
        if (it == cache.end())
        {
            try
            {
                const ConstraintSystem sys =
                    build_constraints(legit, assignment, psk, targets, scenario.ref_phase);
                PrecoderSolution sol = solve_iterative(sys, scenario.solver);
                it = cache.emplace(assignment, std::move(sol.v)).first;
            }
            catch (const std::exception &e)
            {
                std::ostringstream msg;
                msg << "ser_monte_carlo: solver failed at trial " << t << ": " << e.what();
                throw SolverError(msg.str());
            }
        }
        const arma::cx_vec &v = it->second;

        for (std::size_t i = 0; i < scenario.users.size(); ++i)
        {
            const UserSpec &user = scenario.users[i];
            SplitMix64 noise_rng(
                derive_stream(derive_stream(noise_root, static_cast<std::uint64_t>(i)),
                              static_cast<std::uint64_t>(t)));
            const std::complex<double> y = receive_point(receiver_channel[i], v) +
                                           complex_gaussian(noise_rng, user.noise_var);
            const int decided = demodulate(y, psk);
            const int sent = user.role == Role::legitimate ? assignment[legit_position[i]]
                                                           : assignment[0];
            if (decided != sent)
                ++report.error_counts[i];
        }
    }

    for (std::size_t i = 0; i < report.error_counts.size(); ++i)
    {
        const double p = static_cast<double>(report.error_counts[i]) / static_cast<double>(trials);
        report.ser.push_back(p);
        report.ci95_halfwidth.push_back(1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials)));
    }
    return report;
}

} // namespace hnf
