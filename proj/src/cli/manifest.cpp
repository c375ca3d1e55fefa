#include "kljn/cli/manifest.hpp"

#include "kljn/csv.hpp"
#include "kljn/error.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>

namespace kljn::cli {

std::string version() { return KLJN_VERSION; }

nlohmann::ordered_json to_json(const RunManifest& manifest, const std::string& created_utc) {
    nlohmann::ordered_json j;
    j["tool"] = "kljn";
    j["version"] = version();
    j["command"] = manifest.command;
    j["config"] = manifest.config;
    j["outputs"] = manifest.outputs;
    j["created_utc"] = created_utc;
    return j;
}

RunManifest manifest_from_json(const nlohmann::ordered_json& j) {
    RunManifest m;
    try {
        m.command = j.at("command").get<std::string>();
        m.config = j.at("config");
        if (j.contains("outputs"))
            m.outputs = j.at("outputs").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidConfig, std::string("malformed manifest: ") + e.what());
    }
    if (!m.config.is_object())
        throw Error(ErrorKind::InvalidConfig, "manifest config must be an object");
    return m;
}

std::vector<std::string> replay_arguments(const RunManifest& manifest,
                                          const std::vector<std::string>& skip) {
    std::vector<std::string> args{manifest.command};
    for (const auto& [key, value] : manifest.config.items()) {
        if (std::find(skip.begin(), skip.end(), key) != skip.end())
            continue;
        if (value.is_null())
            continue;
        if (value.is_boolean()) {
            if (value.get<bool>())
                args.push_back("--" + key);
            continue;
        }
        args.push_back("--" + key);
        if (value.is_string())
            args.push_back(value.get<std::string>());
        else if (value.is_number_float())
            args.push_back(csv::format_double(value.get<double>()));
        else
            args.push_back(value.dump());
    }
    return args;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j, int indent) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out << j.dump(indent) << '\n';
    if (!out)
        throw Error(ErrorKind::Io, "write failed for " + path.string());
}

nlohmann::ordered_json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    try {
        return nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::InvalidConfig, path.string() + ": " + e.what());
    }
}

} // namespace kljn::cli
