#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ising/inequality.hpp"
#include "ising/random.hpp"

namespace ising {

// Erdos-Renyi G(n, p) conditioned on connectivity by rejection.
IsingGraph random_connected_graph(Rng& rng, int n, double p = 0.5);

struct FuzzConfig {
    std::uint64_t seed = 0;
    int min_n = 2;
    int max_n = 8;
    long long trials = 1000;
    double field_scale = 3.0;
    double tolerance = kDefaultTolerance;
    bool zero_field = false;
    bool check_theorem = true;
    bool check_correlation = true;
    bool keep_records = false;
    unsigned threads = 1;
    std::filesystem::path reproducer_dir;  // empty: no reproducer files
};

struct FuzzRecord {
    long long trial = 0;
    std::string kind;  // "theorem" | "correlation"
    int n = 0;
    InequalityReport report;
};

struct FuzzSummary {
    long long trials = 0;
    long long theorem_checks = 0;
    long long correlation_checks = 0;
    long long theorem_violations = 0;
    long long correlation_violations = 0;
    double worst_theorem_margin = 0.0;
    std::string worst_theorem_digest;
    double worst_correlation_margin = 0.0;
    std::string worst_correlation_digest;
    double max_abs_theorem_margin = 0.0;
    std::vector<std::string> reproducers;
    std::vector<FuzzRecord> records;
};

// One random trial: instance, h and targets. Pure function of (seed, trial).
struct FuzzTrial {
    InfluenceQuery theorem;
    int u = 0;
    int v = 1;
};
FuzzTrial make_fuzz_trial(const FuzzConfig& config, long long trial);

FuzzSummary fuzz_inequalities(const FuzzConfig& config);

nlohmann::json to_json(const FuzzSummary& s);
nlohmann::json to_json(const FuzzRecord& r);

// Instance JSON plus a "query" block, as written for violations.
nlohmann::json theorem_reproducer(const InfluenceQuery& q, const InequalityReport& r);
nlohmann::json correlation_reproducer(const IsingInstance& instance, int u, int v, const InequalityReport& r);

}  // namespace ising
