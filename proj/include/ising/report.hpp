#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ising/errors.hpp"

namespace ising {

inline constexpr int kSchemaVersion = 1;

struct ResultRecord {
    int schema_version = kSchemaVersion;
    std::string command;
    std::string config_digest;
    std::string started;   // UTC, ISO 8601
    std::string finished;
    nlohmann::json payload;
    std::optional<std::string> reproducer;
};

nlohmann::json to_json(const ResultRecord& r);
ResultRecord record_from_json(const nlohmann::json& j);
bool operator==(const ResultRecord& a, const ResultRecord& b);

std::string utc_timestamp();

// One JSON object per line; the file is created with its parent directories.
void append_records(const std::filesystem::path& path, const std::vector<ResultRecord>& records);
// Throws ValidationError naming the line on malformed input.
std::vector<ResultRecord> read_records(const std::filesystem::path& path);

struct PayloadTypeError : ValidationError {
    using ValidationError::ValidationError;
};

enum class PlotKind { decay, lambda_sweep, tv_distance };
const char* to_string(PlotKind k);
PlotKind plot_kind_from_string(const std::string& s);
// Plot kind a record can feed, if any.
std::optional<PlotKind> plot_kind_of(const ResultRecord& r);

// CSV text: comment lines starting with '#' document the columns (and the fit
// parameters for decay), then a header row and one row per point. Throws
// ValidationError on no records and PayloadTypeError on records of another kind.
std::string emit_plot_data(const std::vector<ResultRecord>& records, PlotKind kind);

}  // namespace ising
