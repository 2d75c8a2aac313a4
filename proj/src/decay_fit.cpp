#include "ising/decay_fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ising/errors.hpp"

namespace ising {

DecayFit fit_decay(std::vector<DecayPoint> points) {
    if (points.size() < 2) throw DomainError("decay fit needs at least two points");
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        if (!(p.y > 0.0) || !std::isfinite(p.y))
            throw DomainError("decay fit needs positive values, got " + std::to_string(p.y) + " at x = " +
                              std::to_string(p.x));
        mx += p.x;
        my += std::log(p.y);
    }
    const double n = static_cast<double>(points.size());
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : points) {
        const double dx = p.x - mx, dy = std::log(p.y) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw DomainError("decay fit needs at least two distinct x values");
    DecayFit fit;
    fit.points = std::move(points);
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    return fit;
}

nlohmann::json to_json(const DecayFit& fit) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : fit.points) pts.push_back({{"x", p.x}, {"y", p.y}, {"std_error", p.std_error}});
    return {{"points", pts}, {"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
}

DecayFit decay_fit_from_json(const nlohmann::json& j) {
    DecayFit fit;
    for (const auto& p : j.at("points"))
        fit.points.push_back({p.at("x").get<double>(), p.at("y").get<double>(), p.at("std_error").get<double>()});
    fit.slope = j.at("slope").get<double>();
    fit.intercept = j.at("intercept").get<double>();
    fit.r_squared = j.at("r_squared").get<double>();
    return fit;
}

}  // namespace ising
