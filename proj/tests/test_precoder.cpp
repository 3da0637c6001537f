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

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

using namespace hnf;
using Catch::Approx;

namespace
{

Channel make_channel(arma::cx_vec v)
{
    Channel ch;
    ch.vector = std::move(v);
    ch.gain = {1.0, 0.0};
    ch.field_type = FieldType::far_field;
    return ch;
}

} // namespace

TEST_CASE("rotation phase maps the assigned symbol onto the reference ray")
{
    const PskConstellation c = constellation(4, pi / 4.0);
    const SlotAssignment slot = {0, 1, 2, 3};
    const double ref = pi / 4.0;
    CHECK(rotation_phase(0, slot, c, ref) == Approx(0.0).margin(1e-15));
    CHECK(rotation_phase(1, slot, c, ref) == Approx(0.5 * pi).margin(1e-15));
    // Symbol 2 wraps to -3 pi/4 before the reference shift.
    CHECK(rotation_phase(2, slot, c, ref) == Approx(-pi).margin(1e-12));
    CHECK(rotation_phase(3, slot, c, ref) == Approx(-0.5 * pi).margin(1e-12));

    CHECK_THROWS_AS(rotation_phase(4, slot, c, ref), std::out_of_range);
    const SlotAssignment bad = {7};
    CHECK_THROWS_AS(rotation_phase(0, bad, c, ref), std::invalid_argument);
}

TEST_CASE("rotated receive points align on the reference ray for a full slot")
{
    // Orthogonal channels h_k = sqrt(N) e_k let us pick v with h_k^H v = x_k
    // exactly; the rotated points must then share phase ref for every user.
    const int n = 8;
    const PskConstellation c = constellation(8, 0.0);
    const SlotAssignment slot = {0, 3, 5, 7};
    const double ref = 0.1;

    std::vector<Channel> channels;
    arma::cx_vec v(n, arma::fill::zeros);
    for (std::size_t k = 0; k < slot.size(); ++k)
    {
        arma::cx_vec e(n, arma::fill::zeros);
        e(k) = std::sqrt(static_cast<double>(n));
        channels.push_back(make_channel(e));
        v(k) = c.points[static_cast<std::size_t>(slot[k])] / std::sqrt(static_cast<double>(n));
    }

    const arma::vec targets(slot.size(), arma::fill::ones);
    const ConstraintSystem sys = build_constraints(channels, slot, c, targets, ref);
    for (std::size_t k = 0; k < slot.size(); ++k)
    {
        const std::complex<double> point = arma::cdot(sys.rotated_channels.col(k), v);
        CHECK(std::abs(point) == Approx(1.0).epsilon(1e-12));
        CHECK(std::arg(point) == Approx(ref).margin(1e-12));
    }
}

TEST_CASE("sector boundary lines match the hand-evaluated slopes and offsets")
{
    SECTION("canonical QPSK frame")
    {
        const SectorLines lines = sector_lines(1.0, 0.0, 4);
        CHECK(lines.kappa1 == Approx(-1.0).epsilon(1e-12));
        CHECK(lines.kappa2 == Approx(1.0).epsilon(1e-12));
        CHECK(lines.rho1 == Approx(1.0).epsilon(1e-12));
        CHECK(lines.rho2 == Approx(-1.0).epsilon(1e-12));
    }
    SECTION("8-PSK slope is tan(pi/8)")
    {
        const SectorLines lines = sector_lines(2.0, 0.0, 8);
        CHECK(lines.kappa2 == Approx(0.41421356237309503).epsilon(1e-12));
        CHECK(lines.kappa1 == Approx(-0.41421356237309503).epsilon(1e-12));
        CHECK(lines.rho1 == Approx(2.0 * 0.41421356237309503).epsilon(1e-12));
    }
    SECTION("zero amplitude pins both offsets to zero")
    {
        const SectorLines lines = sector_lines(0.0, 0.0, 4);
        CHECK(lines.rho1 == 0.0);
        CHECK(lines.rho2 == 0.0);
    }
    SECTION("singular boundary slope is refused with a pointer to the fix")
    {
        try
        {
            sector_lines(1.0, pi / 4.0, 4); // boundary at pi/2 exactly
            FAIL("expected invalid_argument");
        }
        catch (const std::invalid_argument &e)
        {
            CHECK(std::string(e.what()).find("canonical ref_phase = 0") != std::string::npos);
        }
    }
    SECTION("order 2 has no line form")
    {
        CHECK_THROWS_AS(sector_lines(1.0, 0.0, 2), std::invalid_argument);
    }
}

TEST_CASE("constraint rows for a single-user canonical system")
{
    const PskConstellation c = constellation(4, 0.0);
    std::vector<Channel> channels = {make_channel(arma::cx_vec{{1.0, 0.0}, {0.0, 0.0}})};
    const SlotAssignment slot = {0};
    const arma::vec targets = {1.0};
    const ConstraintSystem sys = build_constraints(channels, slot, c, targets, 0.0);

    REQUIRE(sys.F.n_rows == 2);
    REQUIRE(sys.F.n_cols == 4);
    // Rows are [1 0 1 0] and [1 0 -1 0] up to tan(pi/4) rounding.
    CHECK(sys.F(0, 0) == Approx(1.0).epsilon(1e-12));
    CHECK(sys.F(0, 2) == Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(sys.F(0, 1)) < 1e-15);
    CHECK(std::abs(sys.F(0, 3)) < 1e-15);
    CHECK(sys.F(1, 0) == Approx(1.0).epsilon(1e-12));
    CHECK(sys.F(1, 2) == Approx(-1.0).epsilon(1e-15));
    CHECK(sys.rho(0) == Approx(1.0).epsilon(1e-12));
    CHECK(sys.rho(1) == Approx(1.0).epsilon(1e-12));

    // Feasibility of candidate precoders, checked as raw row inequalities.
    const arma::vec good = stack(arma::cx_vec{{2.0, 0.0}, {0.0, 0.0}});
    const arma::vec bad = stack(arma::cx_vec{{0.5, 0.0}, {0.0, 0.0}});
    CHECK(arma::all(sys.F * good - sys.rho >= -1e-12));
    CHECK((sys.F * bad - sys.rho).min() < -0.4);
}

TEST_CASE("stack and unstack are inverse isometries")
{
    const arma::cx_vec v = {{1.0, 2.0}, {-0.5, 0.25}, {0.0, -3.0}};
    const arma::vec s = stack(v);
    REQUIRE(s.n_elem == 6);
    CHECK(s(0) == 1.0);
    CHECK(s(3) == 2.0);
    CHECK(s(1) == -0.5);
    CHECK(s(4) == 0.25);
    CHECK(arma::norm(unstack(s) - v) == 0.0);
    CHECK(arma::norm(s) == Approx(arma::norm(v)).epsilon(1e-15));
    CHECK_THROWS_AS(unstack(arma::vec{1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("per-user beamformers superpose back to the slot precoder")
{
    const PskConstellation c = constellation(4, pi / 4.0);

    SECTION("single user: w x = v")
    {
        const arma::cx_vec v = {{1.0, -0.5}, {0.3, 2.0}};
        const SlotAssignment slot = {2};
        const auto w = per_user_beamformers(v, slot, c);
        REQUIRE(w.size() == 1);
        const std::complex<double> x = c.points[2];
        CHECK(arma::norm(w[0] * x - v) < 1e-14);
    }
    SECTION("superposition and equal power split")
    {
        SplitMix64 rng(11u);
        const arma::cx_vec v = hnf_test::random_cx_vec(rng, 6);
        const SlotAssignment slot = {0, 1, 3};
        const auto w = per_user_beamformers(v, slot, c);
        REQUIRE(w.size() == 3);
        arma::cx_vec sum(6, arma::fill::zeros);
        for (std::size_t k = 0; k < 3; ++k)
            sum += w[k] * c.points[static_cast<std::size_t>(slot[k])];
        CHECK(arma::norm(sum - v) < 1e-12);
        // |conj(x_k)| = 1, so every beamformer carries norm(v)/K.
        for (const auto &wk : w)
            CHECK(arma::norm(wk) == Approx(arma::norm(v) / 3.0).epsilon(1e-12));
    }
    SECTION("invalid symbol rejected")
    {
        const arma::cx_vec v = {{1.0, 0.0}};
        CHECK_THROWS_AS(per_user_beamformers(v, {9}, c), std::invalid_argument);
        CHECK_THROWS_AS(per_user_beamformers(v, {}, c), std::invalid_argument);
    }
}

TEST_CASE("row margins agree with geometric sector membership")
{
    // min over a user's two rows of (F v - rho) must carry the same sign as
    // the sector margin of the rotated receive point. Sweep random systems
    // and random probes; disagreements outside a scaled tolerance band fail.
    SplitMix64 rng(2024u);
    int checked = 0;
    for (int trial = 0; trial < 400; ++trial)
    {
        const int order = (trial % 2 == 0) ? 4 : 8;
        const PskConstellation c = constellation(order, 0.0);
        const std::size_t K = 1 + rng.next() % 4;
        const std::size_t N = K + rng.next() % (16 - K);
        std::vector<Channel> channels = hnf_test::random_channels(rng, K, N);
        SlotAssignment slot(K, 0);
        for (auto &s : slot)
            s = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(order)));
        arma::vec targets(K);
        for (auto &t : targets)
            t = 0.2 + 2.0 * rng.next_double();

        const ConstraintSystem sys = build_constraints(channels, slot, c, targets, 0.0);
        const arma::cx_vec v = 0.5 * hnf_test::random_cx_vec(rng, N);
        const arma::vec fv = sys.F * stack(v) - sys.rho;

        for (std::size_t k = 0; k < K; ++k)
        {
            const std::complex<double> point = arma::cdot(sys.rotated_channels.col(k), v);
            const SectorSpec sec = sector_for(targets(k), 0.0, order);
            const double geo = sector_margin(point, sec);
            const double alg = std::min(fv(k), fv(K + k));
            const double band = 1e-9 * std::max({1.0, std::abs(point), targets(k)});
            if (std::abs(geo) <= band || std::abs(alg) <= band)
                continue; // too close to the boundary to carry sign information
            CHECK((geo > 0.0) == (alg > 0.0));
            ++checked;
        }
    }
    CHECK(checked > 500);
}

TEST_CASE("solved systems meet the minimum-amplitude guarantee")
{
    // Any feasible point of the constraint system places the rotated receive
    // point inside the sector, which implies |h~^H v| >= zeta cos(pi/M).
    SplitMix64 rng(31u);
    for (int order : {2, 4, 8})
    {
        const PskConstellation c = constellation(order, 0.0);
        const std::size_t K = 3, N = 8;
        std::vector<Channel> channels = hnf_test::random_channels(rng, K, N);
        SlotAssignment slot(K, 0);
        for (auto &s : slot)
            s = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(order)));
        const arma::vec targets = {0.8, 1.1, 0.6};
        const ConstraintSystem sys = build_constraints(channels, slot, c, targets, 0.0);
        const PrecoderSolution sol = solve_iterative(sys);
        REQUIRE(sol.converged);
        REQUIRE(sol.max_violation <= 1e-9);
        const double shrink = std::cos(pi / static_cast<double>(order));
        for (std::size_t k = 0; k < K; ++k)
        {
            const std::complex<double> point = arma::cdot(sys.rotated_channels.col(k), sol.v);
            CHECK(std::abs(point) >= targets(k) * shrink * (1.0 - 1e-9));
        }
    }
}

TEST_CASE("raising one amplitude target never cheapens the optimum")
{
    SplitMix64 rng(57u);
    const PskConstellation c = constellation(4, 0.0);
    const std::size_t K = 2, N = 6;
    std::vector<Channel> channels = hnf_test::random_channels(rng, K, N);
    const SlotAssignment slot = {1, 2};

    double previous = 0.0;
    for (double zeta : {1.0, 1.5, 10.0})
    {
        const arma::vec targets = {zeta, 0.5};
        const ConstraintSystem sys = build_constraints(channels, slot, c, targets, 0.0);
        const PrecoderSolution sol = solve_oracle(sys);
        const double power = arma::dot(sol.v_stacked, sol.v_stacked);
        CHECK(power >= previous - 1e-12);
        previous = power;
    }
    CHECK(previous > 0.0);
}

TEST_CASE("constraint matrix shape and user ordering")
{
    SplitMix64 rng(3u);
    const PskConstellation c = constellation(4, 0.0);
    const std::size_t K = 3, N = 5;
    std::vector<Channel> channels = hnf_test::random_channels(rng, K, N);
    const SlotAssignment slot = {0, 1, 2};
    const arma::vec targets = {1.0, 2.0, 0.5};

    const ConstraintSystem sys = build_constraints(channels, slot, c, targets, 0.0);
    CHECK(sys.F.n_rows == 2 * K);
    CHECK(sys.F.n_cols == 2 * N);
    CHECK(sys.n_users() == K);
    CHECK(sys.n_antennas() == N);
    REQUIRE(sys.lines.size() == K);

    // Swapping users 0 and 2 permutes the paired rows and rho entries.
    std::vector<Channel> swapped = {channels[2], channels[1], channels[0]};
    const ConstraintSystem sys2 =
        build_constraints(swapped, {2, 1, 0}, c, arma::vec{0.5, 2.0, 1.0}, 0.0);
    CHECK(arma::norm(sys2.F.row(0) - sys.F.row(2)) == 0.0);
    CHECK(arma::norm(sys2.F.row(2) - sys.F.row(0)) == 0.0);
    CHECK(arma::norm(sys2.F.row(K) - sys.F.row(K + 2)) == 0.0);
    CHECK(sys2.rho(0) == sys.rho(2));
    CHECK(sys2.rho(K) == sys.rho(K + 2));
}

TEST_CASE("binary order emits the duplicated half-plane rows")
{
    const PskConstellation c = constellation(2, 0.0);
    std::vector<Channel> channels = {make_channel(arma::cx_vec{{0.0, 1.0}})}; // h = j
    const arma::vec targets = {0.7};

    SECTION("symbol 0: constraint reads Re(conj(h) v) via [Re h, Im h]")
    {
        const ConstraintSystem sys = build_constraints(channels, {0}, c, targets, 0.0);
        REQUIRE(sys.F.n_rows == 2);
        CHECK(arma::norm(sys.F.row(0) - sys.F.row(1)) == 0.0);
        CHECK(sys.rho(0) == 0.7);
        CHECK(sys.rho(1) == 0.7);
        // h = j: row should be [Re h, Im h] = [0, 1].
        CHECK(std::abs(sys.F(0, 0)) < 1e-15);
        CHECK(sys.F(0, 1) == Approx(1.0).epsilon(1e-15));
        // v = j * 0.7 gives h^H v = 0.7 exactly on the boundary.
        const arma::vec fv = sys.F * stack(arma::cx_vec{{0.0, 0.7}});
        CHECK(fv(0) == Approx(0.7).epsilon(1e-15));
    }
    SECTION("symbol 1 flips the constraint direction")
    {
        const ConstraintSystem sys = build_constraints(channels, {1}, c, targets, 0.0);
        // hat = h * e^{j pi} = -j: row = [0, -1]; v = -j t satisfies it.
        CHECK(sys.F(0, 1) == Approx(-1.0).epsilon(1e-12));
        const arma::vec fv = sys.F * stack(arma::cx_vec{{0.0, -1.0}});
        CHECK(fv(0) == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("constraint assembly rejects invalid configurations")
{
    const PskConstellation qpsk = constellation(4, 0.0);
    SplitMix64 rng(13u);
    std::vector<Channel> two = hnf_test::random_channels(rng, 2, 4);

    SECTION("empty user set")
    {
        CHECK_THROWS_AS(build_constraints({}, {}, qpsk, arma::vec{}, 0.0), std::invalid_argument);
    }
    SECTION("more users than antennas")
    {
        std::vector<Channel> crowded = hnf_test::random_channels(rng, 3, 2);
        CHECK_THROWS_AS(
            build_constraints(crowded, {0, 1, 2}, qpsk, arma::vec{1.0, 1.0, 1.0}, 0.0),
            std::invalid_argument);
    }
    SECTION("assignment and target lengths must match")
    {
        CHECK_THROWS_AS(build_constraints(two, {0}, qpsk, arma::vec{1.0, 1.0}, 0.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_constraints(two, {0, 1}, qpsk, arma::vec{1.0}, 0.0),
                        std::invalid_argument);
    }
    SECTION("symbol index and target sign")
    {
        CHECK_THROWS_AS(build_constraints(two, {0, 4}, qpsk, arma::vec{1.0, 1.0}, 0.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(build_constraints(two, {0, 1}, qpsk, arma::vec{1.0, -0.1}, 0.0),
                        std::invalid_argument);
    }
    SECTION("mismatched channel dimensions")
    {
        std::vector<Channel> ragged = {make_channel(arma::cx_vec(4, arma::fill::ones)),
                                       make_channel(arma::cx_vec(3, arma::fill::ones))};
        CHECK_THROWS_AS(build_constraints(ragged, {0, 1}, qpsk, arma::vec{1.0, 1.0}, 0.0),
                        std::invalid_argument);
    }
    SECTION("reference phase must keep the wedge inside (-pi/2, pi/2)")
    {
        CHECK_THROWS_AS(build_constraints(two, {0, 1}, qpsk, arma::vec{1.0, 1.0}, pi / 4.0),
                        std::invalid_argument);
        CHECK_NOTHROW(build_constraints(two, {0, 1}, qpsk, arma::vec{1.0, 1.0}, 0.2));
    }
}
