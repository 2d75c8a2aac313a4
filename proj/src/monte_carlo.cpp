#include "ising/monte_carlo.hpp"

#include <cmath>

#include "ising/errors.hpp"
#include "ising/parallel.hpp"

namespace ising {

void validate(const McOptions& options) {
    if (options.sweeps < 2 * kBatchCount)
        throw ValidationError("sweeps must be at least " + std::to_string(2 * kBatchCount) +
                              " so that every batch holds a sample");
    if (options.replicas < 1) throw ValidationError("replicas must be at least 1");
    if (options.threads < 1) throw ValidationError("threads must be at least 1");
}

nlohmann::json to_json(const McOptions& o) {
    return {{"sweeps", o.sweeps},
            {"burn_in", o.sweeps / 2},
            {"replicas", o.replicas},
            {"seed", o.seed},
            {"scan", to_string(o.scan)},
            {"batches_per_replica", kBatchCount}};
}

nlohmann::json to_json(const McEstimate& e) {
    return {{"mean", e.mean},
            {"std_error", e.std_error},
            {"samples", e.samples},
            {"batches", e.batches},
            {"ordering_violations", e.ordering_violations}};
}

McEstimate mc_estimate_from_json(const nlohmann::json& j) {
    McEstimate e;
    e.mean = j.at("mean").get<double>();
    e.std_error = j.at("std_error").get<double>();
    e.samples = j.at("samples").get<long long>();
    e.batches = j.at("batches").get<int>();
    e.ordering_violations = j.at("ordering_violations").get<long long>();
    return e;
}

McEstimate run_coupled(const HeatBath& kernel, const std::function<double(const CoupledChains&)>& observable,
                       const McOptions& options, const std::string& label) {
    validate(options);
    const long long burn_in = options.sweeps / 2;
    const long long kept = options.sweeps - burn_in;
    std::vector<std::vector<double>> batch_means(options.replicas);
    std::vector<long long> violations(options.replicas, 0);

    parallel_for(options.replicas, options.threads, [&](std::size_t r) {
        Rng rng(derive_seed(options.seed, label, r));
        CoupledChains chains = extremal_chains(kernel.domain());
        std::vector<double> sums(kBatchCount, 0.0);
        std::vector<long long> counts(kBatchCount, 0);
        for (long long t = 0; t < options.sweeps; ++t) {
            kernel.sweep(chains, rng, options.scan);
            violations[r] += ordering_violations(chains);
            if (t < burn_in) continue;
            const long long k = t - burn_in;
            const auto b = static_cast<std::size_t>(k * kBatchCount / kept);
            sums[b] += observable(chains);
            ++counts[b];
        }
        auto& means = batch_means[r];
        for (int b = 0; b < kBatchCount; ++b) means.push_back(sums[b] / static_cast<double>(counts[b]));
    });

    McEstimate e;
    double total = 0.0;
    for (const auto& means : batch_means)
        for (double m : means) total += m;
    e.batches = options.replicas * kBatchCount;
    e.mean = total / e.batches;
    double ss = 0.0;
    for (const auto& means : batch_means)
        for (double m : means) ss += (m - e.mean) * (m - e.mean);
    e.std_error = std::sqrt(ss / (e.batches - 1) / e.batches);
    e.samples = kept * options.replicas;
    for (long long v : violations) e.ordering_violations += v;
    return e;
}

}  // namespace ising
