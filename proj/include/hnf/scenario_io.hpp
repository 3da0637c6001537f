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
// Scenario file loading. Strict JSON: unknown keys are rejected (typo guard)
// and validation reports every violated invariant at once, not first-failure.

#pragma once

#include "hnf/scenario.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hnf
{

class ScenarioError : public std::runtime_error
{
  public:
    explicit ScenarioError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues))
    {
    }

    const std::vector<std::string> &issues() const { return issues_; }

  private:
    static std::string join(const std::vector<std::string> &issues)
    {
        std::ostringstream out;
        out << "scenario validation failed (" << issues.size() << " issue"
            << (issues.size() == 1 ? "" : "s") << "):";
        for (const std::string &issue : issues)
            out << "\n  - " << issue;
        return out.str();
    }

    std::vector<std::string> issues_;
};

namespace detail
{

using json = nlohmann::json;

inline void reject_unknown_keys(const json &object, const std::vector<std::string> &allowed,
                                const std::string &where, std::vector<std::string> &issues)
{
    for (const auto &item : object.items())
    {
        bool known = false;
        for (const std::string &key : allowed)
            if (item.key() == key)
            {
                known = true;
                break;
            }
        if (!known)
            issues.push_back(where + ": unknown key \"" + item.key() + "\"");
    }
}

inline std::optional<double> take_number(const json &object, const std::string &key,
                                         const std::string &where, bool required,
                                         std::vector<std::string> &issues)
{
    if (!object.contains(key))
    {
        if (required)
            issues.push_back(where + ": missing required key \"" + key + "\"");
        return std::nullopt;
    }
    if (!object[key].is_number())
    {
        issues.push_back(where + ": \"" + key + "\" must be a number");
        return std::nullopt;
    }
    return object[key].get<double>();
}

inline std::optional<std::int64_t> take_integer(const json &object, const std::string &key,
                                                const std::string &where, bool required,
                                                std::vector<std::string> &issues)
{
    if (!object.contains(key))
    {
        if (required)
            issues.push_back(where + ": missing required key \"" + key + "\"");
        return std::nullopt;
    }
    if (!object[key].is_number_integer())
    {
        issues.push_back(where + ": \"" + key + "\" must be an integer");
        return std::nullopt;
    }
    return object[key].get<std::int64_t>();
}

inline std::optional<std::string> take_string(const json &object, const std::string &key,
                                              const std::string &where, bool required,
                                              std::vector<std::string> &issues)
{
    if (!object.contains(key))
    {
        if (required)
            issues.push_back(where + ": missing required key \"" + key + "\"");
        return std::nullopt;
    }
    if (!object[key].is_string())
    {
        issues.push_back(where + ": \"" + key + "\" must be a string");
        return std::nullopt;
    }
    return object[key].get<std::string>();
}

} // namespace detail

// Parses and validates a scenario file. Angles arrive in degrees and are
// stored in radians; "half_wavelength" spacing is resolved against the
// carrier; a per-user target SNR is resolved to the amplitude floor zeta
// using that user's noise variance. Every violated invariant is collected
// before throwing.
inline Scenario load_scenario(const std::filesystem::path &path)
{
    namespace fs = std::filesystem;
    using detail::json;

    if (!fs::exists(path))
        throw ScenarioError({"file not found: " + path.string()});

    json root;
    {
        std::ifstream in(path);
        if (!in)
            throw ScenarioError({"cannot open: " + path.string()});
        try
        {
            root = json::parse(in);
        }
        catch (const json::parse_error &e)
        {
            throw ScenarioError({std::string("JSON parse error: ") + e.what()});
        }
    }

    std::vector<std::string> issues;
    if (!root.is_object())
        throw ScenarioError({"top level must be a JSON object"});

    detail::reject_unknown_keys(root,
                                {"geometry", "users", "modulation", "solver", "channel_gain",
                                 "ref_phase_deg", "seed"},
                                "top level", issues);

    // Geometry block first: everything else resolves against it.
    int n_elements = 2;
    double carrier_hz = 1.0;
    double spacing_m = 1.0;
    bool geometry_ok = false;
    if (!root.contains("geometry") || !root["geometry"].is_object())
        issues.push_back("top level: missing required object \"geometry\"");
    else
    {
        const json &g = root["geometry"];
        detail::reject_unknown_keys(g, {"n_elements", "spacing", "carrier_hz"}, "geometry", issues);
        const auto n = detail::take_integer(g, "n_elements", "geometry", true, issues);
        const auto fc = detail::take_number(g, "carrier_hz", "geometry", true, issues);
        bool spacing_ok = false;
        double spacing_value = 0.0;
        bool half_wavelength = false;
        if (!g.contains("spacing"))
            issues.push_back("geometry: missing required key \"spacing\"");
        else if (g["spacing"].is_string())
        {
            if (g["spacing"].get<std::string>() == "half_wavelength")
            {
                half_wavelength = true;
                spacing_ok = true;
            }
            else
                issues.push_back("geometry: \"spacing\" string must be \"half_wavelength\"");
        }
        else if (g["spacing"].is_number())
        {
            spacing_value = g["spacing"].get<double>();
            spacing_ok = true;
        }
        else
            issues.push_back("geometry: \"spacing\" must be a number (meters) or \"half_wavelength\"");

        if (n && fc && spacing_ok)
        {
            if (*n < 2)
                issues.push_back("geometry: n_elements must be >= 2");
            if (!(*fc > 0.0))
                issues.push_back("geometry: carrier_hz must be positive");
            if (!half_wavelength && !(spacing_value > 0.0))
                issues.push_back("geometry: spacing must be positive");
            if (*n >= 2 && *fc > 0.0 && (half_wavelength || spacing_value > 0.0))
            {
                n_elements = static_cast<int>(*n);
                carrier_hz = *fc;
                spacing_m = half_wavelength ? 0.5 * speed_of_light_mps / carrier_hz : spacing_value;
                geometry_ok = true;
            }
        }
    }

    ModulationSpec modulation;
    if (!root.contains("modulation") || !root["modulation"].is_object())
        issues.push_back("top level: missing required object \"modulation\"");
    else
    {
        const json &m = root["modulation"];
        detail::reject_unknown_keys(m, {"order", "phase_offset_deg"}, "modulation", issues);
        const auto order = detail::take_integer(m, "order", "modulation", true, issues);
        const auto offset = detail::take_number(m, "phase_offset_deg", "modulation", false, issues);
        if (order)
        {
            if (*order < 2)
                issues.push_back("modulation: order must be >= 2");
            else
                modulation.order = static_cast<int>(*order);
        }
        if (offset)
            modulation.phase_offset = *offset * pi / 180.0;
    }

    std::vector<UserSpec> users;
    std::size_t n_legit = 0;
    if (!root.contains("users") || !root["users"].is_array())
        issues.push_back("top level: missing required array \"users\"");
    else
    {
        const json &list = root["users"];
        for (std::size_t i = 0; i < list.size(); ++i)
        {
            const std::string where = "users[" + std::to_string(i) + "]";
            const json &u = list[i];
            if (!u.is_object())
            {
                issues.push_back(where + ": must be an object");
                continue;
            }
            detail::reject_unknown_keys(
                u, {"range_m", "angle_deg", "role", "noise_var", "target_amplitude", "target_snr_db"},
                where, issues);
            UserSpec spec;
            const auto range = detail::take_number(u, "range_m", where, true, issues);
            const auto angle = detail::take_number(u, "angle_deg", where, true, issues);
            const auto role = detail::take_string(u, "role", where, true, issues);
            const auto noise = detail::take_number(u, "noise_var", where, true, issues);
            if (range)
            {
                if (!(*range > 0.0))
                    issues.push_back(where + ": range_m must be positive");
                spec.range_m = *range;
            }
            if (angle)
            {
                if (!(*angle > 0.0 && *angle < 180.0))
                    issues.push_back(where + ": angle_deg must lie strictly inside (0, 180)");
                spec.angle_rad = *angle * pi / 180.0;
            }
            if (noise)
            {
                if (!(*noise > 0.0))
                    issues.push_back(where + ": noise_var must be positive");
                spec.noise_var = *noise;
            }
            bool is_legit = true;
            if (role)
            {
                if (*role == "legitimate")
                    spec.role = Role::legitimate;
                else if (*role == "eavesdropper")
                {
                    spec.role = Role::eavesdropper;
                    is_legit = false;
                }
                else
                    issues.push_back(where + ": role must be \"legitimate\" or \"eavesdropper\"");
            }
            const bool has_amp = u.contains("target_amplitude");
            const bool has_snr = u.contains("target_snr_db");
            if (is_legit)
            {
                if (has_amp == has_snr)
                    issues.push_back(where +
                                     ": legitimate users need exactly one of target_amplitude, "
                                     "target_snr_db");
                const auto amp = detail::take_number(u, "target_amplitude", where, false, issues);
                const auto snr = detail::take_number(u, "target_snr_db", where, false, issues);
                if (amp)
                {
                    if (!(*amp >= 0.0))
                        issues.push_back(where + ": target_amplitude must be >= 0");
                    else
                        spec.target_amplitude = *amp;
                }
                else if (snr && noise && *noise > 0.0)
                    spec.target_amplitude = amplitude_for_snr(*snr, *noise);
                ++n_legit;
            }
            else if (has_amp || has_snr)
                issues.push_back(where + ": eavesdroppers take no target (amplitude or SNR)");
            users.push_back(spec);
        }
        if (n_legit == 0)
            issues.push_back("users: at least one legitimate user required");
        if (geometry_ok && n_legit > static_cast<std::size_t>(n_elements))
            issues.push_back("users: more legitimate users than array elements (K > N)");
    }

    SolverConfig solver;
    if (root.contains("solver"))
    {
        if (!root["solver"].is_object())
            issues.push_back("top level: \"solver\" must be an object");
        else
        {
            const json &s = root["solver"];
            detail::reject_unknown_keys(s, {"lambda", "epsilon", "max_iter", "repair"}, "solver",
                                        issues);
            const auto lambda = detail::take_number(s, "lambda", "solver", false, issues);
            const auto epsilon = detail::take_number(s, "epsilon", "solver", false, issues);
            const auto max_iter = detail::take_integer(s, "max_iter", "solver", false, issues);
            if (lambda)
            {
                if (!(*lambda > 0.0))
                    issues.push_back("solver: lambda must be positive");
                else
                    solver.lambda = *lambda;
            }
            if (epsilon)
            {
                if (!(*epsilon > 0.0))
                    issues.push_back("solver: epsilon must be positive");
                else
                    solver.epsilon = *epsilon;
            }
            if (max_iter)
            {
                if (*max_iter < 1)
                    issues.push_back("solver: max_iter must be >= 1");
                else
                    solver.max_iter = static_cast<int>(*max_iter);
            }
            if (s.contains("repair"))
            {
                if (!s["repair"].is_boolean())
                    issues.push_back("solver: \"repair\" must be a boolean");
                else
                    solver.repair = s["repair"].get<bool>();
            }
        }
    }

    GainMode gain_mode = GainMode::unit;
    if (root.contains("channel_gain"))
    {
        const auto mode = detail::take_string(root, "channel_gain", "top level", false, issues);
        if (mode)
        {
            if (*mode == "unit")
                gain_mode = GainMode::unit;
            else if (*mode == "free_space")
                gain_mode = GainMode::free_space;
            else
                issues.push_back("top level: channel_gain must be \"unit\" or \"free_space\"");
        }
    }

    double ref_phase = 0.0;
    if (root.contains("ref_phase_deg"))
    {
        const auto ref = detail::take_number(root, "ref_phase_deg", "top level", false, issues);
        if (ref)
            ref_phase = *ref * pi / 180.0;
    }

    std::uint64_t seed = 0;
    if (!root.contains("seed"))
        issues.push_back("top level: missing required key \"seed\"");
    else if (!root["seed"].is_number_integer() ||
             (root["seed"].is_number_integer() && !root["seed"].is_number_unsigned() &&
              root["seed"].get<std::int64_t>() < 0))
        issues.push_back("top level: seed must be a nonnegative integer");
    else
        seed = root["seed"].get<std::uint64_t>();

    if (!issues.empty())
        throw ScenarioError(std::move(issues));

    Scenario scenario{ArrayGeometry(n_elements, spacing_m, carrier_hz)};
    scenario.users = std::move(users);
    scenario.modulation = modulation;
    scenario.solver = solver;
    scenario.gain_mode = gain_mode;
    scenario.ref_phase = ref_phase;
    scenario.seed = seed;
    return scenario;
}

// Resolved scenario echo for the run manifest: every quantity after unit
// conversion and target resolution.
inline nlohmann::json scenario_to_json(const Scenario &scenario)
{
    using detail::json;
    json g;
    g["n_elements"] = scenario.geometry.n_elements;
    g["spacing_m"] = scenario.geometry.spacing_m;
    g["carrier_hz"] = scenario.geometry.carrier_hz;
    g["wavelength_m"] = scenario.geometry.wavelength_m;
    g["aperture_m"] = scenario.geometry.aperture_m;
    g["rayleigh_m"] = scenario.geometry.rayleigh_m;

    json users = json::array();
    for (const UserSpec &u : scenario.users)
    {
        json e;
        e["range_m"] = u.range_m;
        e["angle_deg"] = u.angle_rad * 180.0 / pi;
        e["role"] = u.role == Role::legitimate ? "legitimate" : "eavesdropper";
        e["noise_var"] = u.noise_var;
        if (u.role == Role::legitimate)
        {
            e["target_amplitude"] = u.target_amplitude;
            e["field"] = classify(scenario.geometry, u) == FieldType::near_field ? "near" : "far";
        }
        else
            e["field"] = classify(scenario.geometry, u) == FieldType::near_field ? "near" : "far";
        users.push_back(e);
    }

    json m;
    m["order"] = scenario.modulation.order;
    m["phase_offset_deg"] = scenario.modulation.phase_offset * 180.0 / pi;

    json s;
    s["lambda"] = scenario.solver.lambda;
    s["epsilon"] = scenario.solver.epsilon;
    s["max_iter"] = scenario.solver.max_iter;
    s["repair"] = scenario.solver.repair;

    json root;
    root["geometry"] = g;
    root["users"] = users;
    root["modulation"] = m;
    root["solver"] = s;
    root["channel_gain"] = scenario.gain_mode == GainMode::unit ? "unit" : "free_space";
    root["ref_phase_deg"] = scenario.ref_phase * 180.0 / pi;
    root["seed"] = scenario.seed;
    return root;
}

} // namespace hnf
