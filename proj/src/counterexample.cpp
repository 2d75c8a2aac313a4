#include "ising/counterexample.hpp"

#include <cmath>
#include <string>

#include "ising/errors.hpp"
#include "ising/exact.hpp"
#include "ising/inequality.hpp"
#include "ising/instance_json.hpp"
#include "ising/log_sum_exp.hpp"

namespace ising {

using nlohmann::json;

double edge_message(double j, ExtendedField phi) {
    const double t = phi.is_infinite() ? phi.infinite_sign() : std::tanh(phi.value());
    return saturating_atanh(std::tanh(j) * t);
}

BisectionResult bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return {lo, 0};
    if (fhi == 0.0) return {hi, 0};
    if ((flo < 0.0) == (fhi < 0.0))
        throw ConstructionError("no sign change on bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                "]: f = " + std::to_string(flo) + ", " + std::to_string(fhi));
    BisectionResult r;
    while (hi - lo > tol && r.iterations < 200) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = f(mid);
        ++r.iterations;
        if (fm == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    r.root = 0.5 * (lo + hi);
    return r;
}

namespace {

std::vector<double> uniform_grid(int points) {
    if (points < 3) throw ValidationError("scale grid needs at least 3 points");
    std::vector<double> grid(points);
    for (int k = 0; k < points; ++k) grid[k] = static_cast<double>(k) / (points - 1);
    return grid;
}

IsingGraph path_graph(int n) {
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    return IsingGraph(n, edges);
}

}  // namespace

PathCertificate counterexample_path(double g2, int grid_points) {
    constexpr int target = 2;
    const double left = edge_message(1.0, -2.0 + edge_message(1.0, -2.0));
    auto imbalance = [&](double g1) { return left + edge_message(1.0, g1 + edge_message(1.0, g2)); };

    PathCertificate c;
    c.g2 = g2;
    c.bracket = {-40.0, 2.0};
    const BisectionResult root = bisect(imbalance, c.bracket.first, c.bracket.second);
    c.g1 = root.root;
    c.iterations = root.iterations;
    c.instance = build_instance(path_graph(5), 1.0, std::vector<double>{-2.0, -2.0, 0.0, c.g1, g2});

    std::vector<ExtendedField> h(5, ExtendedField(0.0));
    h[target] = 1.0;
    c.scales = uniform_grid(grid_points);
    for (double s : c.scales) {
        const IsingInstance scaled_g = c.instance.with_fields(scale_fields(c.instance.fields(), s));
        const auto r = check_boundary_influence(InfluenceQuery{scaled_g, h, target});
        c.influence.push_back(r.lhs);
    }
    c.expected_max = 2.0 * std::tanh(1.0);
    c.at_zero = c.influence.front();
    c.at_one = c.influence.back();
    c.min_interior = c.influence[1];
    c.argmin_interior = c.scales[1];
    for (std::size_t k = 1; k + 1 < c.scales.size(); ++k) {
        if (c.influence[k] < c.min_interior) {
            c.min_interior = c.influence[k];
            c.argmin_interior = c.scales[k];
        }
    }
    c.certified = std::fabs(c.at_one - c.expected_max) <= 1e-9 && std::fabs(c.at_zero - c.expected_max) <= 1e-9 &&
                  c.min_interior < c.at_one - kPathStrictness;
    return c;
}

namespace {

// ids: u = 0, v = 1, a = 2, b = 3, inserted = 4
TreeCertificate tree_certificate(const IsingInstance& instance, int grid_points) {
    TreeCertificate c;
    c.instance = instance;
    c.scales = uniform_grid(grid_points);
    for (double s : c.scales) {
        const auto r = check_correlation(instance.with_fields(scale_fields(instance.fields(), s)), 0, 1);
        c.covariances.push_back(r.lhs);
        c.margins.push_back(r.margin);
    }
    c.margin_at_one = c.margins.back();
    c.best_interior_margin = c.margins[1];
    c.best_scale = c.scales[1];
    for (std::size_t k = 1; k + 1 < c.scales.size(); ++k) {
        if (c.margins[k] > c.best_interior_margin) {
            c.best_interior_margin = c.margins[k];
            c.best_scale = c.scales[k];
        }
    }
    c.certified = std::fabs(c.margin_at_one) <= 1e-9 && c.best_interior_margin > kTreeStrictness;
    return c;
}

}  // namespace

TreeCertificate counterexample_tree(double j_ua, int grid_points) {
    if (!(j_ua > 0.0 && j_ua < 1.0)) throw DomainError("j_ua must lie in (0, 1)");
    const double from_b = edge_message(1.0, 1.0);
    auto imbalance = [&](double ga) { return edge_message(j_ua, ga) + from_b; };
    const std::pair<double, double> bracket{-40.0, -1.0};
    // At tanh(j_ua) = tanh^2(1) the imbalance tends to 0 only as g_a -> -inf.
    if (std::fabs(imbalance(bracket.first)) < 1e-9)
        throw ConstructionError("no finite g_a balances the root for j_ua = " + std::to_string(j_ua) +
                                "; the balancing field is -inf");
    const double ga = bisect(imbalance, bracket.first, bracket.second).root;
    const IsingGraph star(4, {{0, 1, 1.0}, {0, 2, j_ua}, {0, 3, 1.0}});
    TreeCertificate c = tree_certificate(build_instance(star, 1.0, std::vector<double>{0.0, 0.0, ga, 1.0}), grid_points);
    c.j_ua = j_ua;
    c.g_a = ga;
    c.bracket = bracket;
    return c;
}

TreeCertificate counterexample_tree_inserted(int grid_points) {
    const IsingGraph tree(5, {{0, 1, 1.0}, {0, 4, 1.0}, {4, 2, 1.0}, {0, 3, 1.0}});
    const std::vector<ExtendedField> g{0.0, 0.0, ExtendedField::minus_infinity(), 1.0, 0.0};
    TreeCertificate c = tree_certificate(build_instance(tree, 1.0, g), grid_points);
    c.j_ua = 0.5 * std::log(std::cosh(2.0));
    c.inserted = true;
    c.g_a = ExtendedField::minus_infinity();
    c.bracket = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    return c;
}

InsertionCheck effective_coupling_insertion_check(double tolerance) {
    InsertionCheck r;
    r.j_star = 0.5 * std::log(std::cosh(2.0));
    // u = 0, a~ = 1, a = 2
    const auto path = build_instance(IsingGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}}), 1.0, std::vector<double>(3, 0.0));
    const auto edge = build_instance(IsingGraph(2, {{0, 1, r.j_star}}), 1.0, std::vector<double>(2, 0.0));
    ExactQuery qp, qe;
    qp.window = {0, 2};
    qe.window = {0, 1};
    const ExactStats sp = exact_stats(path, qp);
    const ExactStats se = exact_stats(edge, qe);
    for (std::size_t p = 0; p < 4; ++p) {
        r.path_joint.push_back(sp.window_probability(p));
        r.edge_joint.push_back(se.window_probability(p));
        r.max_joint_difference = std::max(r.max_joint_difference, std::fabs(r.path_joint[p] - r.edge_joint[p]));
    }
    r.symmetric = std::fabs(r.path_joint[0] - r.path_joint[3]) <= tolerance &&
                  std::fabs(r.path_joint[1] - r.path_joint[2]) <= tolerance;

    // Star with j_star and a clamped to -1 versus the J = 1 tree with the inserted vertex.
    const IsingGraph star(4, {{0, 1, 1.0}, {0, 2, r.j_star}, {0, 3, 1.0}});
    const std::vector<ExtendedField> g{0.0, 0.0, ExtendedField::minus_infinity(), 1.0};
    const TreeCertificate direct = tree_certificate(build_instance(star, 1.0, g), kScaleGridPoints);
    const TreeCertificate inserted = counterexample_tree_inserted();
    for (std::size_t k = 0; k < direct.covariances.size(); ++k)
        r.max_tree_covariance_difference =
            std::max(r.max_tree_covariance_difference, std::fabs(direct.covariances[k] - inserted.covariances[k]));
    r.holds = r.max_joint_difference <= tolerance && r.symmetric && r.j_star > 0.0 && r.j_star < 1.0 &&
              r.max_tree_covariance_difference <= tolerance && direct.certified && inserted.certified;
    return r;
}

json to_json(const PathCertificate& c) {
    return json{{"instance", instance_to_json(c.instance)},
                {"g1", c.g1},
                {"g2", c.g2},
                {"bracket", {c.bracket.first, c.bracket.second}},
                {"iterations", c.iterations},
                {"scales", c.scales},
                {"influence", c.influence},
                {"at_zero", c.at_zero},
                {"at_one", c.at_one},
                {"expected_max", c.expected_max},
                {"min_interior", c.min_interior},
                {"argmin_interior", c.argmin_interior},
                {"certified", c.certified}};
}

json to_json(const TreeCertificate& c) {
    return json{{"instance", instance_to_json(c.instance)},
                {"j_ua", c.j_ua},
                {"inserted", c.inserted},
                {"g_a", field_to_json(c.g_a)},
                {"scales", c.scales},
                {"covariances", c.covariances},
                {"margins", c.margins},
                {"margin_at_one", c.margin_at_one},
                {"best_interior_margin", c.best_interior_margin},
                {"best_scale", c.best_scale},
                {"certified", c.certified}};
}

json to_json(const InsertionCheck& c) {
    return json{{"j_star", c.j_star},
                {"path_joint", c.path_joint},
                {"edge_joint", c.edge_joint},
                {"max_joint_difference", c.max_joint_difference},
                {"symmetric", c.symmetric},
                {"max_tree_covariance_difference", c.max_tree_covariance_difference},
                {"holds", c.holds}};
}

}  // namespace ising
