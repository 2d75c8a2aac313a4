#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ising/report.hpp"

namespace ising {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCapacity = 3;

// Command options live in `options` under snake_case keys; absent keys take
// the command defaults.
struct RunConfig {
    std::string command;
    std::string variant;  // counterexample: path | tree | insertion
    nlohmann::json options = nlohmann::json::object();
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::string out;  // JSON lines; empty: caller prints the records
    std::string reproducer_dir = "reproducers";
    bool verbose = false;
};

const std::vector<std::string>& run_commands();
bool is_randomized(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);
// Throws ValidationError naming the offending field.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
void validate(const RunConfig& config);
// Digest of the fields that determine the payload (not out, threads, verbose).
std::string config_digest(const RunConfig& config);

struct RunOutcome {
    int exit_code = kExitSuccess;
    std::vector<ResultRecord> records;
    std::string message;
    RunConfig config;  // with the seed actually used
};

// Never throws: errors map to exit codes with the message set.
RunOutcome run(RunConfig config);

}  // namespace ising
