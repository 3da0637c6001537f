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
// Command-line front end. Exit codes: 0 success, 2 scenario/option
// validation failure, 3 solver failure (non-convergence dumps the
// objective trace next to the other artifacts).

#include <CLI11.hpp>

#include <hnf/hnf.hpp>

#include <cstdint>
#include <iostream>
#include <string>

namespace
{

struct CommonOpts
{
    std::string scenario_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    CLI::Option *seed_opt = nullptr;
};

void add_common(CLI::App *sub, CommonOpts &opts, bool needs_out)
{
    sub->add_option("--scenario", opts.scenario_path, "Scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    if (needs_out)
        sub->add_option("--out", opts.out_dir, "Output directory for CSVs and manifest.json")
            ->required();
    opts.seed_opt = sub->add_option("--seed", opts.seed, "Override the scenario's master seed");
}

hnf::Scenario load_with_overrides(const CommonOpts &opts)
{
    hnf::Scenario scenario = hnf::load_scenario(opts.scenario_path);
    if (opts.seed_opt != nullptr && opts.seed_opt->count() > 0)
        scenario.seed = opts.seed;
    return scenario;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"hnfsim: symbol-level secure precoding simulator for hybrid "
                 "near/far-field multi-user downlink"};
    app.set_version_flag("--version", std::string(hnf::version_string));
    app.require_subcommand(1);

    CLI::App *validate = app.add_subcommand("validate", "Parse and validate a scenario file; "
                                                        "print the resolved configuration");
    CommonOpts validate_opts;
    add_common(validate, validate_opts, /*needs_out=*/false);

    CLI::App *pattern = app.add_subcommand("pattern", "Solve one slot and map normalized receive "
                                                      "power over an angle x range grid");
    CommonOpts pattern_opts;
    hnf::GridSpec grid;
    add_common(pattern, pattern_opts, /*needs_out=*/true);
    pattern->add_option("--angles", grid.n_angles, "Number of angle samples (inclusive endpoints)")
        ->capture_default_str();
    pattern->add_option("--ranges", grid.n_ranges, "Number of log-spaced range samples")
        ->capture_default_str();
    pattern->add_option("--range-min", grid.range_min_m, "Smallest probe range in meters")
        ->capture_default_str();
    pattern->add_option("--range-max", grid.range_max_m, "Largest probe range in meters")
        ->capture_default_str();

    CLI::App *constel = app.add_subcommand("constellation", "Emit noise-free rotated receive "
                                                            "points for a batch of slots");
    CommonOpts constel_opts;
    int constel_slots = 100;
    add_common(constel, constel_opts, /*needs_out=*/true);
    constel->add_option("--slots", constel_slots, "Number of symbol slots")->capture_default_str();

    CLI::App *secrecy = app.add_subcommand("secrecy-sweep", "Average secrecy capacity across a "
                                                            "specified-SNR sweep");
    CommonOpts secrecy_opts;
    hnf::SweepSpec secrecy_sweep;
    int secrecy_slots = 50;
    add_common(secrecy, secrecy_opts, /*needs_out=*/true);
    secrecy->add_option("--snr-min", secrecy_sweep.snr_min_db, "Sweep start in dB")
        ->capture_default_str();
    secrecy->add_option("--snr-max", secrecy_sweep.snr_max_db, "Sweep end in dB")
        ->capture_default_str();
    secrecy->add_option("--snr-points", secrecy_sweep.n_points, "Number of sweep points")
        ->capture_default_str();
    secrecy->add_option("--slots", secrecy_slots, "Slots averaged per sweep point")
        ->capture_default_str();

    CLI::App *ser = app.add_subcommand("ser-sweep", "Monte Carlo symbol error rates for every "
                                                    "receiver across a specified-SNR sweep");
    CommonOpts ser_opts;
    hnf::SweepSpec ser_sweep;
    long long ser_trials = 10000;
    add_common(ser, ser_opts, /*needs_out=*/true);
    ser->add_option("--snr-min", ser_sweep.snr_min_db, "Sweep start in dB")->capture_default_str();
    ser->add_option("--snr-max", ser_sweep.snr_max_db, "Sweep end in dB")->capture_default_str();
    ser->add_option("--snr-points", ser_sweep.n_points, "Number of sweep points")
        ->capture_default_str();
    ser->add_option("--trials", ser_trials, "Monte Carlo trials per sweep point")
        ->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 2;
    }

    // Known while a command runs so a non-converged solve can dump its trace.
    std::string active_out;
    try
    {
        if (validate->parsed())
        {
            const hnf::Scenario scenario = load_with_overrides(validate_opts);
            std::cout << hnf::scenario_to_json(scenario).dump(2) << '\n';
            return 0;
        }
        if (pattern->parsed())
        {
            const hnf::Scenario scenario = load_with_overrides(pattern_opts);
            active_out = pattern_opts.out_dir;
            hnf::cmd_pattern(scenario, grid, pattern_opts.out_dir);
            std::cout << "wrote pattern.csv and manifest.json to " << pattern_opts.out_dir << '\n';
            return 0;
        }
        if (constel->parsed())
        {
            const hnf::Scenario scenario = load_with_overrides(constel_opts);
            active_out = constel_opts.out_dir;
            hnf::cmd_constellation(scenario, constel_slots, constel_opts.out_dir);
            std::cout << "wrote constellation.csv and manifest.json to " << constel_opts.out_dir
                      << '\n';
            return 0;
        }
        if (secrecy->parsed())
        {
            const hnf::Scenario scenario = load_with_overrides(secrecy_opts);
            active_out = secrecy_opts.out_dir;
            hnf::cmd_secrecy_sweep(scenario, secrecy_sweep, secrecy_slots, secrecy_opts.out_dir);
            std::cout << "wrote secrecy.csv and manifest.json to " << secrecy_opts.out_dir << '\n';
            return 0;
        }
        if (ser->parsed())
        {
            const hnf::Scenario scenario = load_with_overrides(ser_opts);
            active_out = ser_opts.out_dir;
            hnf::cmd_ser_sweep(scenario, ser_sweep, ser_trials, ser_opts.out_dir);
            std::cout << "wrote ser.csv and manifest.json to " << ser_opts.out_dir << '\n';
            return 0;
        }
        std::cerr << "no subcommand selected\n";
        return 2;
    }
    catch (const hnf::ScenarioError &e)
    {
        std::cerr << e.what() << '\n';
        return 2;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    }
    catch (const hnf::ConvergenceError &e)
    {
        std::cerr << "solver failure: " << e.what() << '\n';
        if (!active_out.empty())
        {
            const auto trace_path = std::filesystem::path(active_out) / "solver_trace.csv";
            try
            {
                hnf::write_file(trace_path, hnf::trace_csv(e.trace()));
                std::cerr << "objective trace written to " << trace_path.string() << '\n';
            }
            catch (const std::exception &io)
            {
                std::cerr << "could not write trace: " << io.what() << '\n';
            }
        }
        return 3;
    }
    catch (const hnf::InfeasibleError &e)
    {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 3;
    }
    catch (const hnf::SolverError &e)
    {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 3;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
