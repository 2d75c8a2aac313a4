#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ising/glauber.hpp"

namespace ising {

inline constexpr int kBatchCount = 32;

struct McOptions {
    long long sweeps = 20000;  // first half discarded as burn-in
    int replicas = 4;
    int threads = 1;
    std::uint64_t seed = 1;
    ScanOrder scan = ScanOrder::systematic;
};

void validate(const McOptions& options);
nlohmann::json to_json(const McOptions& options);

// Batch means pooled over replicas: mean of all batch means and its standard
// error from their sample deviation.
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long long samples = 0;
    int batches = 0;
    long long ordering_violations = 0;
};

nlohmann::json to_json(const McEstimate& e);
McEstimate mc_estimate_from_json(const nlohmann::json& j);

// Runs options.replicas coupled pairs from the extremal start, replica r seeded
// by derive_seed(options.seed, label, r), and averages observable(chains) once
// per sweep after burn-in. Results do not depend on options.threads.
McEstimate run_coupled(const HeatBath& kernel, const std::function<double(const CoupledChains&)>& observable,
                       const McOptions& options, const std::string& label);

}  // namespace ising
