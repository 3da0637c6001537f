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
// Experiment orchestration behind the CLI subcommands. Each experiment has
// a pure core returning structured results, plus a cmd_* wrapper that
// renders CSVs and the run manifest into an output directory.
//
// Determinism contract: slot assignments depend only on (seed, slot index),
// never on the sweep point, so sweep curves are paired across SNR and
// rerunning with the same scenario + seed reproduces every byte.

#pragma once

#include "hnf/metrics.hpp"
#include "hnf/report.hpp"
#include "hnf/scenario_io.hpp"

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace hnf
{

// Angle x range grid for the power-spectrum map. Angles are linear and
// inclusive of both endpoints; ranges are log-spaced (the near-field
// structure lives at short range).
struct GridSpec
{
    int n_angles = 181;
    double angle_min_deg = 0.0;
    double angle_max_deg = 180.0;
    int n_ranges = 60;
    double range_min_m = 1.0;
    double range_max_m = 1000.0;

    arma::vec angles_rad() const
    {
        if (n_angles < 1)
            throw std::invalid_argument("GridSpec: n_angles must be >= 1");
        return arma::linspace(angle_min_deg * pi / 180.0, angle_max_deg * pi / 180.0, n_angles);
    }

    arma::vec ranges_m() const
    {
        if (n_ranges < 1)
            throw std::invalid_argument("GridSpec: n_ranges must be >= 1");
        if (!(range_min_m > 0.0) || !(range_max_m >= range_min_m))
            throw std::invalid_argument("GridSpec: need 0 < range_min_m <= range_max_m");
        return arma::logspace(std::log10(range_min_m), std::log10(range_max_m), n_ranges);
    }
};

struct SweepSpec
{
    double snr_min_db = 0.0;
    double snr_max_db = 20.0;
    int n_points = 5;

    arma::vec points_db() const
    {
        if (n_points < 1)
            throw std::invalid_argument("SweepSpec: n_points must be >= 1");
        if (n_points == 1)
            return arma::vec{snr_min_db};
        return arma::linspace(snr_min_db, snr_max_db, n_points);
    }
};

// Raised when the iterative solver exhausts max_iter without meeting the
// stopping rule; carries the objective trace so the CLI can dump it.
class ConvergenceError : public std::runtime_error
{
  public:
    ConvergenceError(const std::string &message, IterTrace trace)
        : std::runtime_error(message), trace_(std::move(trace))
    {
    }

    const IterTrace &trace() const { return trace_; }

  private:
    IterTrace trace_;
};

// Assignment for one slot. Depends only on (seed, slot): sweeps stay paired.
inline SlotAssignment assignment_for_slot(std::uint64_t seed, const PskConstellation &psk,
                                          std::size_t n_users, std::uint64_t slot)
{
    const std::uint64_t symbol_root = derive_stream(seed, detail::seed_tag_symbols);
    return random_symbols(psk, n_users, derive_stream(symbol_root, slot));
}

inline PrecoderSolution solve_assignment(const std::vector<Channel> &channels,
                                         const SlotAssignment &assignment,
                                         const PskConstellation &psk, const arma::vec &targets,
                                         double ref_phase, const SolverConfig &config)
{
    const ConstraintSystem sys = build_constraints(channels, assignment, psk, targets, ref_phase);
    IterTrace trace;
    PrecoderSolution sol = solve_iterative(sys, config, &trace);
    if (!sol.converged)
        throw ConvergenceError("solver exhausted max_iter without meeting the stopping rule",
                               std::move(trace));
    return sol;
}

inline std::string trace_csv(const IterTrace &trace)
{
    std::ostringstream out;
    out << "iter,objective,violation,power\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        out << i << ',' << format_float(trace[i].objective) << ','
            << format_float(trace[i].violation) << ',' << format_float(trace[i].power) << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// pattern: solve one slot, map |h(angle, range)^H v|^2 over the grid.

struct PatternResult
{
    SlotAssignment assignment;
    PrecoderSolution solution;
    SpectrumGrid grid;
};

inline PatternResult pattern_core(const Scenario &scenario, const GridSpec &grid_spec)
{
    const PskConstellation psk =
        constellation(scenario.modulation.order, scenario.modulation.phase_offset);
    const std::vector<Channel> channels = legit_channels(scenario);
    const arma::vec targets = legit_targets(scenario);

    PatternResult result;
    result.assignment = assignment_for_slot(scenario.seed, psk, channels.size(), 0);
    result.solution = solve_assignment(channels, result.assignment, psk, targets,
                                       scenario.ref_phase, scenario.solver);
    result.grid = power_spectrum(scenario.geometry, result.solution.v, grid_spec.angles_rad(),
                                 grid_spec.ranges_m());
    return result;
}

inline std::string pattern_csv(const SpectrumGrid &grid)
{
    std::ostringstream out;
    out << "angle_deg,range_m,power_db\n";
    for (arma::uword i = 0; i < grid.angles_rad.n_elem; ++i)
        for (arma::uword j = 0; j < grid.ranges_m.n_elem; ++j)
            out << format_float(grid.angles_rad(i) * 180.0 / pi) << ','
                << format_float(grid.ranges_m(j)) << ',' << format_float(grid.power_db(i, j))
                << '\n';
    return out.str();
}

inline RunManifest cmd_pattern(const Scenario &scenario, const GridSpec &grid_spec,
                               const std::filesystem::path &out_dir)
{
    const PatternResult result = pattern_core(scenario, grid_spec);

    RunManifest manifest;
    manifest.command = "pattern";
    manifest.scenario = scenario_to_json(scenario);
    manifest.seed = scenario.seed;
    manifest.parameters["n_angles"] = grid_spec.n_angles;
    manifest.parameters["angle_min_deg"] = grid_spec.angle_min_deg;
    manifest.parameters["angle_max_deg"] = grid_spec.angle_max_deg;
    manifest.parameters["n_ranges"] = grid_spec.n_ranges;
    manifest.parameters["range_min_m"] = grid_spec.range_min_m;
    manifest.parameters["range_max_m"] = grid_spec.range_max_m;
    manifest.parameters["solver_iterations"] = result.solution.iterations;
    manifest.parameters["transmit_power"] = result.solution.objective;

    emit_artifact(manifest, out_dir, "pattern.csv", pattern_csv(result.grid));
    write_manifest(manifest, out_dir);
    return manifest;
}

// ---------------------------------------------------------------------------
// constellation: noise-free receive points in each user's rotated frame.

struct ConstellationRow
{
    double re = 0.0;
    double im = 0.0;
    int user = 0;
    int slot = 0;
    bool in_region = false;
};

struct ConstellationResult
{
    std::vector<ConstellationRow> rows;
    int n_slots = 0;
};

inline ConstellationResult constellation_core(const Scenario &scenario, int n_slots)
{
    if (n_slots < 0)
        throw std::invalid_argument("constellation_core: n_slots must be >= 0");
    const PskConstellation psk =
        constellation(scenario.modulation.order, scenario.modulation.phase_offset);
    const std::vector<Channel> channels = legit_channels(scenario);
    const arma::vec targets = legit_targets(scenario);

    ConstellationResult result;
    result.n_slots = n_slots;
    for (int slot = 0; slot < n_slots; ++slot)
    {
        const SlotAssignment assignment = assignment_for_slot(
            scenario.seed, psk, channels.size(), static_cast<std::uint64_t>(slot));
        const ConstraintSystem sys =
            build_constraints(channels, assignment, psk, targets, scenario.ref_phase);
        IterTrace trace;
        PrecoderSolution sol = solve_iterative(sys, scenario.solver, &trace);
        if (!sol.converged)
            throw ConvergenceError("solver exhausted max_iter without meeting the stopping rule",
                                   std::move(trace));
        for (std::size_t k = 0; k < channels.size(); ++k)
        {
            // Receive point in the rotated frame: the sector test below is
            // the geometric twin of the solved F v >= rho rows.
            const std::complex<double> z = arma::cdot(sys.rotated_channels.col(k), sol.v);
            const SectorSpec sector =
                sector_for(targets(k), scenario.ref_phase, scenario.modulation.order);
            ConstellationRow row;
            row.re = z.real();
            row.im = z.imag();
            row.user = static_cast<int>(k);
            row.slot = slot;
            // Repaired solutions sit exactly on the binding boundary, so the
            // reported flag allows the same 1e-9 band the acceptance checks
            // use; in_relaxed_region itself stays strict.
            const double band = 1e-9 * std::max({1.0, std::abs(z), targets(k)});
            row.in_region = sector_margin(z, sector) >= -band;
            result.rows.push_back(row);
        }
    }
    return result;
}

inline std::string constellation_csv(const ConstellationResult &result)
{
    std::ostringstream out;
    out << "re,im,user,slot,in_region\n";
    for (const ConstellationRow &row : result.rows)
        out << format_float(row.re) << ',' << format_float(row.im) << ',' << row.user << ','
            << row.slot << ',' << (row.in_region ? 1 : 0) << '\n';
    return out.str();
}

inline RunManifest cmd_constellation(const Scenario &scenario, int n_slots,
                                     const std::filesystem::path &out_dir)
{
    const ConstellationResult result = constellation_core(scenario, n_slots);

    RunManifest manifest;
    manifest.command = "constellation";
    manifest.scenario = scenario_to_json(scenario);
    manifest.seed = scenario.seed;
    manifest.parameters["n_slots"] = n_slots;

    emit_artifact(manifest, out_dir, "constellation.csv", constellation_csv(result));
    write_manifest(manifest, out_dir);
    return manifest;
}

// ---------------------------------------------------------------------------
// secrecy-sweep: average per-slot secrecy capacity over an SNR sweep, for
// the proposed hybrid design, the no-eavesdropper ceiling, and a baseline
// that designs the precoder as if every user were far-field (then meets
// the true hybrid channel).

struct SecrecySweepResult
{
    arma::vec snr_db;
    arma::vec cs_proposed;
    arma::vec cs_no_eve;
    arma::vec cs_far_baseline;
    int n_slots = 0;
};

inline SecrecySweepResult secrecy_core(const Scenario &scenario, const SweepSpec &sweep,
                                       int n_slots)
{
    if (n_slots < 1)
        throw std::invalid_argument("secrecy_core: n_slots must be >= 1");
    const PskConstellation psk =
        constellation(scenario.modulation.order, scenario.modulation.phase_offset);
    const std::vector<Channel> channels = legit_channels(scenario);
    const std::vector<Channel> far_design = legit_channels(scenario, /*force_far=*/true);
    const EveSet eves = eve_set(scenario);
    const EveSet no_eves;

    std::vector<double> legit_noise;
    for (std::size_t i : scenario.legit_indices())
        legit_noise.push_back(scenario.users[i].noise_var);
    const std::size_t n_users = channels.size();

    SecrecySweepResult result;
    result.snr_db = sweep.points_db();
    result.n_slots = n_slots;
    result.cs_proposed.zeros(result.snr_db.n_elem);
    result.cs_no_eve.zeros(result.snr_db.n_elem);
    result.cs_far_baseline.zeros(result.snr_db.n_elem);

    // Assignments are drawn once per slot index, shared by every SNR point
    // and by both designs, so the three curves are exactly paired.
    std::vector<SlotAssignment> assignments;
    for (int slot = 0; slot < n_slots; ++slot)
        assignments.push_back(assignment_for_slot(scenario.seed, psk, n_users,
                                                  static_cast<std::uint64_t>(slot)));

    for (arma::uword p = 0; p < result.snr_db.n_elem; ++p)
    {
        arma::vec targets(n_users);
        for (std::size_t k = 0; k < n_users; ++k)
            targets(k) = amplitude_for_snr(result.snr_db(p), legit_noise[k]);

        double sum_proposed = 0.0, sum_no_eve = 0.0, sum_baseline = 0.0;
        for (const SlotAssignment &assignment : assignments)
        {
            const PrecoderSolution proposed = solve_assignment(channels, assignment, psk, targets,
                                                               scenario.ref_phase, scenario.solver);
            const PrecoderSolution baseline = solve_assignment(far_design, assignment, psk, targets,
                                                               scenario.ref_phase, scenario.solver);
            // Both designs are judged on the true hybrid channels.
            sum_proposed += secrecy_capacity(channels, legit_noise, eves, proposed.v,
                                             scenario.modulation.order)
                                .c_secrecy;
            sum_no_eve += secrecy_capacity(channels, legit_noise, no_eves, proposed.v,
                                           scenario.modulation.order)
                              .c_secrecy;
            sum_baseline += secrecy_capacity(channels, legit_noise, eves, baseline.v,
                                             scenario.modulation.order)
                                .c_secrecy;
        }
        result.cs_proposed(p) = sum_proposed / n_slots;
        result.cs_no_eve(p) = sum_no_eve / n_slots;
        result.cs_far_baseline(p) = sum_baseline / n_slots;
    }
    return result;
}

inline std::string secrecy_csv(const SecrecySweepResult &result)
{
    std::ostringstream out;
    out << "snr_db,cs_proposed,cs_no_eve,cs_far_baseline\n";
    for (arma::uword p = 0; p < result.snr_db.n_elem; ++p)
        out << format_float(result.snr_db(p)) << ',' << format_float(result.cs_proposed(p)) << ','
            << format_float(result.cs_no_eve(p)) << ',' << format_float(result.cs_far_baseline(p))
            << '\n';
    return out.str();
}

inline RunManifest cmd_secrecy_sweep(const Scenario &scenario, const SweepSpec &sweep, int n_slots,
                                     const std::filesystem::path &out_dir)
{
    const SecrecySweepResult result = secrecy_core(scenario, sweep, n_slots);

    RunManifest manifest;
    manifest.command = "secrecy-sweep";
    manifest.scenario = scenario_to_json(scenario);
    manifest.seed = scenario.seed;
    manifest.parameters["snr_min_db"] = sweep.snr_min_db;
    manifest.parameters["snr_max_db"] = sweep.snr_max_db;
    manifest.parameters["n_points"] = sweep.n_points;
    manifest.parameters["n_slots"] = n_slots;
    manifest.parameters["n_eves"] = scenario.eve_indices().size();

    emit_artifact(manifest, out_dir, "secrecy.csv", secrecy_csv(result));
    write_manifest(manifest, out_dir);
    return manifest;
}

// ---------------------------------------------------------------------------
// ser-sweep: Monte Carlo symbol error rates for every receiver across the
// SNR sweep. The specified SNR fixes each legitimate user's amplitude floor;
// trials are paired across sweep points by the shared master seed.

struct SerSweepResult
{
    arma::vec snr_db;
    std::vector<SerReport> reports; // one per sweep point
    long long trials = 0;
};

inline SerSweepResult ser_core(const Scenario &scenario, const SweepSpec &sweep, long long trials)
{
    SerSweepResult result;
    result.snr_db = sweep.points_db();
    result.trials = trials;
    for (arma::uword p = 0; p < result.snr_db.n_elem; ++p)
    {
        Scenario point = scenario;
        for (std::size_t i : point.legit_indices())
            point.users[i].target_amplitude =
                amplitude_for_snr(result.snr_db(p), point.users[i].noise_var);
        result.reports.push_back(ser_monte_carlo(point, trials, scenario.seed));
    }
    return result;
}

inline std::string ser_csv(const SerSweepResult &result)
{
    std::ostringstream out;
    out << "snr_db,user_id,ser,ci95_halfwidth\n";
    for (arma::uword p = 0; p < result.snr_db.n_elem; ++p)
    {
        const SerReport &report = result.reports[p];
        for (std::size_t r = 0; r < report.receiver_indices.size(); ++r)
            out << format_float(result.snr_db(p)) << ',' << report.receiver_indices[r] << ','
                << format_float(report.ser[r]) << ',' << format_float(report.ci95_halfwidth[r])
                << '\n';
    }
    return out.str();
}

inline RunManifest cmd_ser_sweep(const Scenario &scenario, const SweepSpec &sweep, long long trials,
                                 const std::filesystem::path &out_dir)
{
    const SerSweepResult result = ser_core(scenario, sweep, trials);

    RunManifest manifest;
    manifest.command = "ser-sweep";
    manifest.scenario = scenario_to_json(scenario);
    manifest.seed = scenario.seed;
    manifest.parameters["snr_min_db"] = sweep.snr_min_db;
    manifest.parameters["snr_max_db"] = sweep.snr_max_db;
    manifest.parameters["n_points"] = sweep.n_points;
    manifest.parameters["trials"] = trials;

    emit_artifact(manifest, out_dir, "ser.csv", ser_csv(result));
    write_manifest(manifest, out_dir);
    return manifest;
}

} // namespace hnf
