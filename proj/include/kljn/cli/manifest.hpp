#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace kljn::cli {

std::string version();

/// Everything needed to re-run a command: the subcommand and every resolved
/// option (flag name without dashes -> value). created_utc is informational.
struct RunManifest {
    std::string command;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::vector<std::string> outputs;
};

nlohmann::ordered_json to_json(const RunManifest& manifest, const std::string& created_utc);
RunManifest manifest_from_json(const nlohmann::ordered_json& j);

/// Argument vector (without program name) that reproduces the run; flags
/// named in `skip` are left out.
std::vector<std::string> replay_arguments(const RunManifest& manifest,
                                          const std::vector<std::string>& skip = {});

std::string utc_timestamp();

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j, int indent = 2);
nlohmann::ordered_json read_json(const std::filesystem::path& path);

} // namespace kljn::cli
