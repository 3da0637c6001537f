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
// Output plumbing: fixed-format CSV cells, content digests, and the run
// manifest written next to every artifact set. Identical scenario + seed
// must yield byte-identical CSVs, so all floats go through one formatter.

#pragma once

#include "hnf/version.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hnf
{

// All numeric CSV cells use this: scientific, 8 fractional digits, locale-free.
inline std::string format_float(double value)
{
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.8e", value);
    if (n < 0 || n >= static_cast<int>(sizeof buf))
        throw std::runtime_error("format_float: snprintf failed");
    return std::string(buf, static_cast<std::size_t>(n));
}

// FNV-1a, 64-bit. Stable across platforms; good enough to detect any byte
// change in an artifact, which is all the manifest needs.
inline std::uint64_t fnv1a64(const std::string &data)
{
    std::uint64_t hash = 0xCBF29CE484222325ull;
    for (unsigned char byte : data)
    {
        hash ^= byte;
        hash *= 0x00000100000001B3ull;
    }
    return hash;
}

inline std::string hex64(std::uint64_t value)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return std::string(buf, 16);
}

// ISO 8601 UTC. Honors SOURCE_DATE_EPOCH so reproducible builds/tests can
// pin the manifest timestamp.
inline std::string manifest_timestamp()
{
    std::time_t now = std::time(nullptr);
    if (const char *epoch = std::getenv("SOURCE_DATE_EPOCH"))
    {
        char *end = nullptr;
        const long long pinned = std::strtoll(epoch, &end, 10);
        if (end != epoch && *end == '\0')
            now = static_cast<std::time_t>(pinned);
    }
    std::tm parts{};
#if defined(_WIN32)
    gmtime_s(&parts, &now);
#else
    gmtime_r(&now, &parts);
#endif
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &parts);
    return std::string(buf);
}

inline void write_file(const std::filesystem::path &path, const std::string &content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

struct ArtifactRecord
{
    std::string name;      // file name relative to the output directory
    std::string digest;    // fnv1a64 of the bytes, zero-padded hex
    std::uint64_t bytes = 0;
};

struct RunManifest
{
    std::string command;              // subcommand that produced this run
    nlohmann::json scenario;          // resolved scenario echo
    std::uint64_t seed = 0;           // effective master seed
    nlohmann::json parameters;        // per-command knobs after defaulting
    std::vector<ArtifactRecord> artifacts;
    std::string timestamp;            // set at write time if empty
};

inline nlohmann::json manifest_to_json(const RunManifest &manifest)
{
    nlohmann::json root;
    root["tool"] = "hnfsim";
    root["version"] = version_string;
    root["command"] = manifest.command;
    root["timestamp"] = manifest.timestamp.empty() ? manifest_timestamp() : manifest.timestamp;
    root["seed"] = manifest.seed;
    root["scenario"] = manifest.scenario;
    root["parameters"] = manifest.parameters;
    nlohmann::json files = nlohmann::json::array();
    for (const ArtifactRecord &a : manifest.artifacts)
    {
        nlohmann::json e;
        e["name"] = a.name;
        e["fnv1a64"] = a.digest;
        e["bytes"] = a.bytes;
        files.push_back(e);
    }
    root["artifacts"] = files;
    return root;
}

// Writes one artifact into the output directory and records its digest.
inline void emit_artifact(RunManifest &manifest, const std::filesystem::path &out_dir,
                          const std::string &name, const std::string &content)
{
    write_file(out_dir / name, content);
    ArtifactRecord record;
    record.name = name;
    record.digest = hex64(fnv1a64(content));
    record.bytes = content.size();
    manifest.artifacts.push_back(record);
}

inline void write_manifest(const RunManifest &manifest, const std::filesystem::path &out_dir)
{
    write_file(out_dir / "manifest.json", manifest_to_json(manifest).dump(2) + "\n");
}

} // namespace hnf
