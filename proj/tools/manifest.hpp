#pragma once

#include "cli_options.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace bellsim::cli {

/// Record of one CLI run, written next to its outputs as manifest.json.
struct RunManifest {
    std::string version;
    std::string mode;
    std::uint64_t seed = 0;
    nlohmann::json config;
    std::string started_at;
    std::string finished_at;
    std::vector<std::string> outputs;

    friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

void to_json(nlohmann::json& j, const RunManifest& m);
void from_json(const nlohmann::json& j, RunManifest& m);

nlohmann::json config_echo(const CliOptions& options);

/// UTC, ISO 8601.
std::string utc_timestamp();

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

} // namespace bellsim::cli
