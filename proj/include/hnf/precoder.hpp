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
// Constraint assembly for symbol-level precoding with relaxed-phase M-PSK
// sectors. Per symbol slot, each legitimate user k with channel h_k, symbol
// x_k and amplitude floor zeta_k contributes the requirement that the
// noise-free receive point h_k^H v lie inside the sector of x_k. Rotating
// each channel by beta_k = arg(x_k) - ref_phase moves every sector onto the
// common one anchored at zeta_k * e^{j*ref_phase}; splitting real/imaginary
// parts then turns the two boundary lines per user into the real linear
// system F * stack(v) >= rho with F of shape 2K x 2N.

#pragma once

#include "hnf/geometry.hpp"
#include "hnf/modulation.hpp"

#include <armadillo>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace hnf
{

// Symbol index per legitimate user for one slot.
using SlotAssignment = std::vector<int>;

// Boundary lines y = kappa*x + rho of one user's sector in the rotated frame.
struct SectorLines
{
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double rho1 = 0.0;
    double rho2 = 0.0;
};

struct ConstraintSystem
{
    arma::mat F;                   // 2K x 2N stacked real constraint matrix
    arma::vec rho;                 // 2K bounds
    arma::cx_mat rotated_channels; // N x K, column k = h_k * e^{j*beta_k}
    std::vector<SectorLines> lines; // per user; empty for order 2 (no line form)
    arma::vec amplitudes;          // zeta_k
    double ref_phase = 0.0;
    int order = 0;

    std::size_t n_users() const { return rotated_channels.n_cols; }
    std::size_t n_antennas() const { return rotated_channels.n_rows; }
};

// beta_k = arg(x_k) - ref_phase: a receive point with phase arg(x_k) maps to
// phase ref_phase after channel rotation.
inline double rotation_phase(std::size_t user_index, const SlotAssignment &assignment,
                             const PskConstellation &constellation, double ref_phase)
{
    if (user_index >= assignment.size())
        throw std::out_of_range("rotation_phase: user index outside the assignment");
    const int symbol = assignment[user_index];
    if (symbol < 0 || symbol >= constellation.order)
        throw std::invalid_argument("rotation_phase: symbol index outside the constellation");
    return std::arg(constellation.points[static_cast<std::size_t>(symbol)]) - ref_phase;
}

// Sector boundary lines through the apex amplitude * e^{j*ref_phase} with
// slopes tan(ref_phase -/+ pi/order). Defined for order >= 3; order 2 has a
// vertical boundary and is handled by the half-plane row form instead.
inline SectorLines sector_lines(double amplitude, double ref_phase, int order)
{
    if (order < 3)
        throw std::invalid_argument("sector_lines: line form needs order >= 3");
    if (!(amplitude >= 0.0))
        throw std::invalid_argument("sector_lines: amplitude must be >= 0");
    const double half = pi / static_cast<double>(order);
    const double a1 = ref_phase - half;
    const double a2 = ref_phase + half;
    if (std::abs(std::cos(a1)) < 1e-12 || std::abs(std::cos(a2)) < 1e-12)
        throw std::invalid_argument(
            "sector_lines: boundary slope is singular (ref_phase +/- pi/order hits +/-pi/2); "
            "use the canonical ref_phase = 0 frame");
    SectorLines lines;
    lines.kappa1 = std::tan(a1);
    lines.kappa2 = std::tan(a2);
    lines.rho1 = amplitude * (std::sin(ref_phase) - lines.kappa1 * std::cos(ref_phase));
    lines.rho2 = amplitude * (std::sin(ref_phase) - lines.kappa2 * std::cos(ref_phase));
    return lines;
}

// ConstraintSystem assembly. Row k enforces the lower boundary line of user
// k, row K+k the upper one:
//   rows 1..K    : H2' - kappa1 * H1'   >=  rho1
//   rows K+1..2K : kappa2 * H1' - H2'   >= -rho2
// where H1' = [Re H^H, -Im H^H] and H2' = [Im H^H, Re H^H] are built from the
// rotated channels, so H1' * stack(v) = Re(h~^H v) and H2' * stack(v) =
// Im(h~^H v). The feasible set equals "every rotated receive point inside its
// sector". The between-the-lines row signs select the correct wedge only
// while ref_phase +/- pi/order stays inside (-pi/2, pi/2); that window is
// enforced here. Order 2 degenerates to Re(e^{-j*arg(x_k)} h_k^H v) >= zeta_k,
// emitted as a duplicated row pair to keep the 2K x 2N shape.
inline ConstraintSystem build_constraints(const std::vector<Channel> &channels,
                                          const SlotAssignment &assignment,
                                          const PskConstellation &constellation,
                                          const arma::vec &targets, double ref_phase = 0.0)
{
    const std::size_t K = channels.size();
    if (K == 0)
        throw std::invalid_argument("build_constraints: at least one user required");
    const std::size_t N = channels.front().vector.n_elem;
    if (K > N)
        throw std::invalid_argument("build_constraints: more users than antennas (K > N)");
    if (assignment.size() != K)
        throw std::invalid_argument("build_constraints: assignment length != user count");
    if (targets.n_elem != K)
        throw std::invalid_argument("build_constraints: target count != user count");
    for (const Channel &ch : channels)
        if (ch.vector.n_elem != N)
            throw std::invalid_argument("build_constraints: channel dimensions disagree");
    for (std::size_t k = 0; k < K; ++k)
    {
        if (assignment[k] < 0 || assignment[k] >= constellation.order)
            throw std::invalid_argument("build_constraints: symbol index outside the constellation");
        if (!(targets(k) >= 0.0))
            throw std::invalid_argument("build_constraints: targets must be >= 0");
    }
    const int M = constellation.order;
    const double half = pi / static_cast<double>(M);
    if (M >= 3 && (!(ref_phase - half > -0.5 * pi) || !(ref_phase + half < 0.5 * pi)))
        throw std::invalid_argument(
            "build_constraints: sector boundaries leave (-pi/2, pi/2); use the canonical "
            "ref_phase = 0 frame");

    ConstraintSystem sys;
    sys.ref_phase = ref_phase;
    sys.order = M;
    sys.amplitudes = targets;
    sys.rotated_channels.set_size(N, K);
    sys.F.set_size(2 * K, 2 * N);
    sys.rho.set_size(2 * K);

    for (std::size_t k = 0; k < K; ++k)
    {
        const double beta = rotation_phase(k, assignment, constellation, ref_phase);
        sys.rotated_channels.col(k) = channels[k].vector * std::polar(1.0, beta);
    }

    if (M == 2)
    {
        // Half-plane form: rotate all the way onto the positive real axis.
        // h^ = h * e^{j*arg(x_k)} = h~ * e^{j*ref_phase}.
        for (std::size_t k = 0; k < K; ++k)
        {
            const arma::cx_vec hat = sys.rotated_channels.col(k) * std::polar(1.0, ref_phase);
            const arma::rowvec re = arma::real(hat).t();
            const arma::rowvec im = arma::imag(hat).t();
            // Row of H1': [Re conj(h)^T, -Im conj(h)^T] = [Re h^T, Im h^T].
            sys.F.row(k) = arma::join_rows(re, im);
            sys.F.row(K + k) = sys.F.row(k);
            sys.rho(k) = targets(k);
            sys.rho(K + k) = targets(k);
        }
        return sys;
    }

    for (std::size_t k = 0; k < K; ++k)
    {
        const SectorLines lines = sector_lines(targets(k), ref_phase, M);
        sys.lines.push_back(lines);
        const arma::cx_rowvec hh = sys.rotated_channels.col(k).t(); // h~^H
        const arma::rowvec re = arma::real(hh);
        const arma::rowvec im = arma::imag(hh);
        const arma::rowvec h1 = arma::join_rows(re, -im); // Re(h~^H v) row
        const arma::rowvec h2 = arma::join_rows(im, re);  // Im(h~^H v) row
        sys.F.row(k) = h2 - lines.kappa1 * h1;
        sys.F.row(K + k) = lines.kappa2 * h1 - h2;
        sys.rho(k) = lines.rho1;
        sys.rho(K + k) = -lines.rho2;
    }
    return sys;
}

// stack(v) = [Re v; Im v]; unstack inverts it. Both are isometries.
inline arma::vec stack(const arma::cx_vec &v)
{
    return arma::join_cols(arma::vec(arma::real(v)), arma::vec(arma::imag(v)));
}

inline arma::cx_vec unstack(const arma::vec &stacked)
{
    if (stacked.n_elem % 2 != 0)
        throw std::invalid_argument("unstack: input length must be even");
    const std::size_t n = stacked.n_elem / 2;
    return arma::cx_vec(stacked.head(n), stacked.tail(n));
}

// Canonical reporting decomposition w_k = v * conj(x_k) / K, which satisfies
// sum_k w_k x_k = v since |x_k| = 1. All physics depends on v alone.
inline std::vector<arma::cx_vec> per_user_beamformers(const arma::cx_vec &v,
                                                      const SlotAssignment &assignment,
                                                      const PskConstellation &constellation)
{
    const std::size_t K = assignment.size();
    if (K == 0)
        throw std::invalid_argument("per_user_beamformers: empty assignment");
    std::vector<arma::cx_vec> beams;
    beams.reserve(K);
    for (std::size_t k = 0; k < K; ++k)
    {
        const int symbol = assignment[k];
        if (symbol < 0 || symbol >= constellation.order)
            throw std::invalid_argument("per_user_beamformers: symbol index outside the constellation");
        beams.push_back(v * std::conj(constellation.points[static_cast<std::size_t>(symbol)]) /
                        static_cast<double>(K));
    }
    return beams;
}

} // namespace hnf
