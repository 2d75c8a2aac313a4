#pragma once

#include <vector>

#include <json.hpp>

namespace ising {

struct DecayPoint {
    double x = 0.0;  // radius or distance
    double y = 0.0;  // estimated difference, > 0
    double std_error = 0.0;
};

// Least squares of log y = intercept + slope x. r_squared in [0, 1].
struct DecayFit {
    std::vector<DecayPoint> points;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Throws DomainError for fewer than two points, equal x values or y <= 0.
DecayFit fit_decay(std::vector<DecayPoint> points);

nlohmann::json to_json(const DecayFit& fit);
DecayFit decay_fit_from_json(const nlohmann::json& j);

}  // namespace ising
