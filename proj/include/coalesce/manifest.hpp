#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <map>
#include <string>

#include <json.hpp>

#include "coalesce/graph.hpp"
#include "coalesce/version.hpp"

namespace coalesce {

/// FNV-1a 64-bit over the canonical edge list, so the digest is independent
/// of input formatting.
inline std::uint64_t graph_digest(const Graph& g) {
    const std::string canonical = g.to_edge_list();
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : canonical) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

inline std::string hex64(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xF];
        value >>= 4;
    }
    return out;
}

/// Everything needed to replay a command: the command name, its full
/// parameter set, the master seed, and a digest of the input graph. The
/// timestamp is informational; replays match bit-for-bit apart from it.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> params;  // sorted, stable serialization
    std::uint64_t seed = 0;
    std::string version = version_string;
    std::string timestamp;  // ISO 8601 UTC
    std::string graph_sha;  // empty when no graph input

    static std::string now_utc() {
        const auto now = std::chrono::system_clock::now();
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        char buf[32];
        std::tm tm_utc{};
        gmtime_r(&t, &tm_utc);
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
        return buf;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["command"] = command;
        nlohmann::ordered_json p;
        for (const auto& [key, value] : params) p[key] = value;
        j["params"] = p;
        j["seed"] = seed;
        j["version"] = version;
        j["timestamp"] = timestamp;
        if (!graph_sha.empty()) j["graph_digest"] = graph_sha;
        return j;
    }

    static RunManifest from_json(const nlohmann::json& j) {
        RunManifest m;
        m.command = j.at("command").get<std::string>();
        for (const auto& [key, value] : j.at("params").items())
            m.params[key] = value.get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.version = j.value("version", std::string{});
        m.timestamp = j.value("timestamp", std::string{});
        m.graph_sha = j.value("graph_digest", std::string{});
        return m;
    }
};

inline RunManifest make_manifest(const std::string& command,
                                 std::map<std::string, std::string> params,
                                 std::uint64_t seed, const Graph* g = nullptr) {
    RunManifest m;
    m.command = command;
    m.params = std::move(params);
    m.seed = seed;
    m.timestamp = RunManifest::now_utc();
    if (g != nullptr) m.graph_sha = hex64(graph_digest(*g));
    return m;
}

}  // namespace coalesce
