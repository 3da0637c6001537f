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

#include <armadillo>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hnf
{

inline constexpr double speed_of_light_mps = 299792458.0; // exact (SI definition)
inline constexpr double pi = 3.141592653589793238462643383279502884;

enum class FieldType
{
    near_field,
    far_field
};

enum class Role
{
    legitimate,
    eavesdropper
};

// Unit gain keeps |g| = 1 so spectra and constraint geometry are attributable
// to array phase structure alone; free_space applies the 1/r amplitude law
// with the propagation phase.
enum class GainMode
{
    unit,
    free_space
};

// Uniform linear array along a single axis. Element n sits at n * spacing_m
// from element 0, which is the phase and range reference. Derived quantities
// are fixed at construction:
//   wavelength = c / carrier
//   aperture   = (N - 1) * spacing
//   rayleigh   = 2 * aperture^2 / wavelength   (near/far regime boundary)
struct ArrayGeometry
{
    int n_elements;
    double spacing_m;
    double carrier_hz;
    double wavelength_m;
    double aperture_m;
    double rayleigh_m;

    ArrayGeometry(int n_elements_, double spacing_m_, double carrier_hz_)
        : n_elements(n_elements_), spacing_m(spacing_m_), carrier_hz(carrier_hz_),
          wavelength_m(0.0), aperture_m(0.0), rayleigh_m(0.0)
    {
        if (n_elements < 2)
            throw std::invalid_argument("ArrayGeometry: n_elements must be >= 2");
        if (!(spacing_m > 0.0))
            throw std::invalid_argument("ArrayGeometry: spacing_m must be positive");
        if (!(carrier_hz > 0.0))
            throw std::invalid_argument("ArrayGeometry: carrier_hz must be positive");
        wavelength_m = speed_of_light_mps / carrier_hz;
        aperture_m = static_cast<double>(n_elements - 1) * spacing_m;
        rayleigh_m = 2.0 * aperture_m * aperture_m / wavelength_m;
    }

    // Half-wavelength spacing resolved against the carrier.
    static ArrayGeometry half_wavelength(int n_elements_, double carrier_hz_)
    {
        if (!(carrier_hz_ > 0.0))
            throw std::invalid_argument("ArrayGeometry: carrier_hz must be positive");
        const double lambda = speed_of_light_mps / carrier_hz_;
        return ArrayGeometry(n_elements_, 0.5 * lambda, carrier_hz_);
    }
};

// One receiver placement. Angles are measured from the array axis and must
// stay strictly inside (0, pi); ranges are from element 0. target_amplitude
// is the per-user receive amplitude floor zeta (legitimate users only).
struct UserSpec
{
    double range_m = 1.0;
    double angle_rad = 0.5 * pi;
    Role role = Role::legitimate;
    double noise_var = 1.0;
    double target_amplitude = 0.0;
};

// Collects every violated UserSpec invariant (empty result means valid).
// Callers that need all-at-once reporting (scenario loading) join the lists.
inline std::vector<std::string> user_spec_issues(const UserSpec &user, const std::string &label)
{
    std::vector<std::string> issues;
    if (!(user.range_m > 0.0))
        issues.push_back(label + ": range_m must be positive");
    if (!(user.angle_rad > 0.0) || !(user.angle_rad < pi))
        issues.push_back(label + ": angle must lie strictly inside (0, 180) degrees");
    if (!(user.noise_var > 0.0))
        issues.push_back(label + ": noise_var must be positive");
    if (user.role == Role::legitimate && !(user.target_amplitude >= 0.0))
        issues.push_back(label + ": target_amplitude must be >= 0");
    return issues;
}

inline void validate_user(const UserSpec &user)
{
    const auto issues = user_spec_issues(user, "UserSpec");
    if (!issues.empty())
        throw std::invalid_argument(issues.front());
}

// Channel vector h = sqrt(N) * gain * steering, with the regime that produced
// the steering vector recorded. norm(vector) == sqrt(N) * |gain| by
// construction.
struct Channel
{
    arma::cx_vec vector;
    std::complex<double> gain{1.0, 0.0};
    FieldType field_type = FieldType::far_field;
};

inline double rayleigh_distance(const ArrayGeometry &geometry) { return geometry.rayleigh_m; }

// Boundary convention: a receiver exactly at the Rayleigh distance is treated
// as far-field (the planar model degrades gracefully there).
inline FieldType classify_range(const ArrayGeometry &geometry, double range_m)
{
    return range_m < geometry.rayleigh_m ? FieldType::near_field : FieldType::far_field;
}

inline FieldType classify(const ArrayGeometry &geometry, const UserSpec &user)
{
    return classify_range(geometry, user.range_m);
}

// Plane-wave steering vector, entry n = (1/sqrt(N)) * exp(+j*2*pi*f*n*d*cos(angle)/c).
// Range-independent. The formula extends continuously to the closed angle
// interval; keeping angles inside (0, pi) is the caller's contract.
inline arma::cx_vec far_steering(const ArrayGeometry &geometry, double angle_rad)
{
    const int n = geometry.n_elements;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const double step =
        2.0 * pi * geometry.carrier_hz * geometry.spacing_m * std::cos(angle_rad) / speed_of_light_mps;
    arma::cx_vec a(n);
    for (int i = 0; i < n; ++i)
        a(i) = std::polar(scale, step * static_cast<double>(i));
    return a;
}

// Exact distance from element n to the point at (range, angle):
// sqrt(r^2 + (n d)^2 - 2 r n d cos(angle)). Element 0 returns r exactly.
inline double near_element_distance(const ArrayGeometry &geometry, double range_m, double angle_rad,
                                    int element)
{
    if (element < 0 || element >= geometry.n_elements)
        throw std::out_of_range("near_element_distance: element index outside the array");
    if (element == 0)
        return range_m;
    const double nd = static_cast<double>(element) * geometry.spacing_m;
    return std::sqrt(range_m * range_m + nd * nd - 2.0 * range_m * nd * std::cos(angle_rad));
}

// Spherical-wave steering vector, entry n = (1/sqrt(N)) * exp(-j*2*pi*(r_n - r)/lambda)
// with r_n the exact element distance. The sign is fixed by the requirement
// that the far-range limit reproduce far_steering entrywise (r_n - r tends to
// -n*d*cos(angle), so the negative sign cancels it); with the opposite sign the
// limit would be the conjugate vector and the two models would disagree.
inline arma::cx_vec near_steering(const ArrayGeometry &geometry, double range_m, double angle_rad)
{
    if (!(range_m > 0.0))
        throw std::invalid_argument("near_steering: range_m must be positive");
    const int n = geometry.n_elements;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const double factor = -2.0 * pi / geometry.wavelength_m;
    arma::cx_vec b(n);
    b(0) = std::complex<double>(scale, 0.0);
    for (int i = 1; i < n; ++i)
    {
        const double excess = near_element_distance(geometry, range_m, angle_rad, i) - range_m;
        b(i) = std::polar(scale, factor * excess);
    }
    return b;
}

// Complex path gain. Free space: (lambda / (4*pi*r)) * exp(-j*2*pi*r/lambda).
// Unit mode returns exactly 1.
inline std::complex<double> channel_gain(const ArrayGeometry &geometry, double range_m,
                                         GainMode mode = GainMode::free_space)
{
    if (!(range_m > 0.0))
        throw std::invalid_argument("channel_gain: range_m must be positive");
    if (mode == GainMode::unit)
        return {1.0, 0.0};
    const double amplitude = geometry.wavelength_m / (4.0 * pi * range_m);
    const double phase = -2.0 * pi * range_m / geometry.wavelength_m;
    return std::polar(amplitude, phase);
}

// Full channel h = sqrt(N) * gain * steering, near or far by range
// classification. force_far substitutes the plane-wave model regardless of
// range (used by the far-field baseline design in the secrecy experiments).
inline Channel build_channel(const ArrayGeometry &geometry, const UserSpec &user,
                             GainMode mode = GainMode::unit, bool force_far = false)
{
    validate_user(user);
    Channel ch;
    ch.field_type = force_far ? FieldType::far_field : classify(geometry, user);
    ch.gain = channel_gain(geometry, user.range_m, mode);
    arma::cx_vec steering = ch.field_type == FieldType::near_field
                                ? near_steering(geometry, user.range_m, user.angle_rad)
                                : far_steering(geometry, user.angle_rad);
    ch.vector = std::sqrt(static_cast<double>(geometry.n_elements)) * ch.gain * steering;
    return ch;
}

} // namespace hnf
