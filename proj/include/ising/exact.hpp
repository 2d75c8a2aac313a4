#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "ising/instance.hpp"

namespace ising {

struct EngineOptions {
    int max_vertices = 26;  // after reduction of infinite fields
    unsigned threads = 1;
};

// What one enumeration pass should accumulate. Vertex ids refer to the
// unreduced instance.
struct ExactQuery {
    std::vector<int> vertices;
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> window;  // joint law of these spins; bit k of a pattern <=> window[k] = +1
};

// Bits of a configuration: bit v set <=> sigma_v = +1.
using SpinConfiguration = std::uint32_t;

struct ExactStats {
    // log Z of the reduced instance (clamped spins contribute no terms).
    double log_z = 0.0;
    // Aligned with ExactQuery::vertices.
    std::vector<double> magnetizations;
    std::vector<double> marginals;  // mu(sigma_v = +1)
    std::vector<double> log_plus;   // log of the unnormalized weight of {sigma_v = +1}
    std::vector<double> log_minus;
    // Aligned with ExactQuery::pairs.
    std::vector<double> pair_products;
    // Unnormalized log weights per window pattern; -inf where impossible.
    std::vector<double> log_window;

    double window_probability(std::size_t pattern) const;
};

// One Gray-code enumeration pass over the reduced instance. Accumulation is
// log-domain per 2^16-configuration chunk, chunks merged in index order, so the
// result does not depend on options.threads.
// Throws CapacityError if the reduced vertex count exceeds options.max_vertices.
ExactStats exact_stats(const IsingInstance& instance, const ExactQuery& query, const EngineOptions& options = {});

// All single-spin magnetizations.
std::vector<double> magnetizations(const IsingInstance& instance, const EngineOptions& options = {});

// <sigma_o | sigma_v = s> by enumeration restricted to sigma_v = s; falls back to
// clamping when the event carries negligible weight.
// Throws ImpossibleEventError when v is clamped to -s.
double conditional_expectation(const IsingInstance& instance, int o, int v, int s,
                               const EngineOptions& options = {});
// Same quantity via g_v := s * inf and reduction.
double conditional_expectation_clamped(const IsingInstance& instance, int o, int v, int s,
                                       const EngineOptions& options = {});

// <s_u s_v> - <s_u><s_v>. Throws DomainError when u == v.
double covariance(const IsingInstance& instance, int u, int v, const EngineOptions& options = {});

struct EffectiveFieldResult {
    double lambda = 0.0;
};

// Field induced on o by the rest of the system with g_o zeroed:
// exp(2 lambda) = mu(sigma_o = +1) / mu(sigma_o = -1). Throws DomainError if g_o is infinite.
EffectiveFieldResult effective_field(const IsingInstance& instance, int o, const EngineOptions& options = {});

struct MixtureAlpha {
    double alpha = 1.0;
    bool degenerate = false;  // h_v == 0
};

// alpha in <s_v>_h = alpha <s_v>_h^(0) + (1 - alpha), i.e.
// alpha = (1 - tanh h_v) / (1 + tanh z tanh h_v), z the effective field at v.
// Throws DomainError if any h entry is negative.
MixtureAlpha mixture_alpha(const IsingInstance& instance_h, int v, const EngineOptions& options = {});
// The same coefficient from its defining equation (two magnetizations).
double mixture_alpha_from_magnetizations(const IsingInstance& instance_h, int v, const EngineOptions& options = {});

}  // namespace ising
