#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ising/instance.hpp"

namespace ising {

// Field induced across an edge of coupling j by a spin carrying total field phi
// (tree recursion): atanh(tanh j tanh phi), saturating at +-40.
double edge_message(double j, ExtendedField phi);

struct BisectionResult {
    double root = 0.0;
    int iterations = 0;
};

// Root of a monotone f on [lo, hi]. Throws ConstructionError reporting the
// bracket when f(lo), f(hi) do not straddle zero.
BisectionResult bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-15);

inline constexpr int kScaleGridPoints = 101;
inline constexpr double kPathStrictness = 1e-4;
inline constexpr double kTreeStrictness = 1e-5;

// Path -2 .. 2 (ids 0..4, target id 2), J = 1, g = (-2, -2, 0, g1, g2) with g1
// solved so the two branches induce opposite fields on the target; h = 1 at the
// target. D(s) = <s_0>_{s g + h} - <s_0>_{s g - h} over a uniform grid on [0, 1].
struct PathCertificate {
    IsingInstance instance;
    double g1 = 0.0;
    double g2 = 0.0;
    std::pair<double, double> bracket;
    int iterations = 0;
    std::vector<double> scales;
    std::vector<double> influence;
    double at_zero = 0.0;
    double at_one = 0.0;
    double min_interior = 0.0;
    double argmin_interior = 0.0;
    double expected_max = 0.0;  // 2 tanh 1
    bool certified = false;
};

PathCertificate counterexample_path(double g2 = 3.0, int grid_points = kScaleGridPoints);

// Star with root u and leaves v, a, b (ids 0, 1, 2, 3); an optional inserted
// vertex (id 4) sits between u and a. margin(s) = <s_u s_v>_0 - Cov_{s g}(s_u, s_v).
struct TreeCertificate {
    IsingInstance instance;  // field is the unscaled g
    double j_ua = 0.0;
    bool inserted = false;
    ExtendedField g_a;
    std::pair<double, double> bracket;
    std::vector<double> scales;
    std::vector<double> covariances;
    std::vector<double> margins;
    double margin_at_one = 0.0;
    double best_interior_margin = 0.0;
    double best_scale = 0.0;
    bool certified = false;  // equality at 1, strict inside, so not monotone
};

// 0 < j_ua < 1; g_a < -1 solved in (-40, -1). Throws DomainError outside the
// range and ConstructionError when no root exists (j_ua <= atanh(tanh^2 1)).
TreeCertificate counterexample_tree(double j_ua, int grid_points = kScaleGridPoints);

// J = 1 everywhere with a vertex inserted between u and a. The effective
// coupling is exactly atanh(tanh^2 1), so balance needs g_a = -inf.
TreeCertificate counterexample_tree_inserted(int grid_points = kScaleGridPoints);

struct InsertionCheck {
    double j_star = 0.0;  // (1/2) log cosh 2
    std::vector<double> path_joint;  // mu(s_u, s_a) on u - a~ - a, order (--, +-, -+, ++)
    std::vector<double> edge_joint;  // same on a single edge with coupling j_star
    double max_joint_difference = 0.0;
    bool symmetric = false;
    double max_tree_covariance_difference = 0.0;  // inserted tree vs. star with j_star
    bool holds = false;
};

InsertionCheck effective_coupling_insertion_check(double tolerance = 1e-12);

nlohmann::json to_json(const PathCertificate& c);
nlohmann::json to_json(const TreeCertificate& c);
nlohmann::json to_json(const InsertionCheck& c);

}  // namespace ising
