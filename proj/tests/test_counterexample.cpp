#include <doctest.h>

#include <cmath>

#include "ising/counterexample.hpp"
#include "ising/errors.hpp"
#include "ising/exact.hpp"
#include "ising/inequality.hpp"
#include "oracles.hpp"

using namespace ising;

TEST_CASE("edge message and bisection") {
    CHECK(edge_message(1.0, 0.0) == 0.0);
    CHECK(edge_message(0.7, ExtendedField::plus_infinity()) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(edge_message(50.0, ExtendedField::plus_infinity()) == 40.0);
    const auto r = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0);
    CHECK(r.root == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK_THROWS_WITH_AS(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0), doctest::Contains("bracket"),
                         ConstructionError);
}

TEST_CASE("path counterexample") {
    const auto c = counterexample_path();
    CHECK(c.g1 < 2.0);
    CHECK(c.g2 == 3.0);
    CHECK(c.scales.size() == 101);
    // Balanced effective field at the target, checked by enumeration.
    CHECK(std::fabs(effective_field(c.instance, 2).lambda) < 1e-12);
    CHECK(c.at_zero == doctest::Approx(2 * std::tanh(1.0)).epsilon(1e-12));
    CHECK(std::fabs(c.at_zero - 1.5231883119115297) < 1e-12);
    CHECK(std::fabs(c.at_one - 2 * std::tanh(1.0)) < 1e-9);
    // Scale 1/2 from an independent brute-force evaluation.
    std::vector<ExtendedField> half(c.instance.fields().begin(), c.instance.fields().end());
    for (auto& f : half) f = scaled(f, 0.5);
    auto plus = half, minus = half;
    plus[2] = 1.0;
    minus[2] = -1.0;
    const double d_half = oracle::magnetization(c.instance.with_fields(plus), 2) -
                          oracle::magnetization(c.instance.with_fields(minus), 2);
    CHECK(c.influence[50] == doctest::Approx(d_half).epsilon(1e-12));
    CHECK(d_half < c.at_one - 1e-4);
    CHECK(c.min_interior < c.at_one - kPathStrictness);
    CHECK(c.certified);
}

TEST_CASE("tree counterexample") {
    const auto c = counterexample_tree(0.8);
    CHECK(c.g_a.value() < -1.0);
    CHECK(c.g_a.value() > -40.0);
    CHECK(std::fabs(c.margin_at_one) < 1e-9);
    CHECK(c.covariances.front() == doctest::Approx(std::tanh(1.0)).epsilon(1e-13));
    CHECK(c.best_interior_margin > kTreeStrictness);
    // Brute-force margin at the best interior scale.
    std::vector<ExtendedField> g(c.instance.fields().begin(), c.instance.fields().end());
    for (auto& f : g) f = scaled(f, c.best_scale);
    const double brute = std::tanh(1.0) - oracle::covariance(c.instance.with_fields(g), 0, 1);
    CHECK(c.best_interior_margin == doctest::Approx(brute).epsilon(1e-11));
    CHECK(c.certified);
    CHECK_THROWS_AS(counterexample_tree(1.0), DomainError);
    // Below atanh(tanh^2 1) the leaf a can no longer cancel leaf b.
    CHECK_THROWS_AS(counterexample_tree(0.6), ConstructionError);
    CHECK_THROWS_AS(counterexample_tree(0.5 * std::log(std::cosh(2.0))), ConstructionError);
}

TEST_CASE("effective coupling of an inserted vertex") {
    const auto r = effective_coupling_insertion_check();
    CHECK(r.j_star == doctest::Approx(0.66246).epsilon(1e-4));
    CHECK(std::tanh(r.j_star) == doctest::Approx(std::tanh(1.0) * std::tanh(1.0)).epsilon(1e-14));
    CHECK(r.max_joint_difference <= 1e-12);
    CHECK(r.symmetric);
    CHECK(r.max_tree_covariance_difference <= 1e-12);
    CHECK(r.holds);
    const auto inserted = counterexample_tree_inserted();
    CHECK(inserted.certified);
    CHECK(std::fabs(inserted.margin_at_one) < 1e-9);
}

TEST_CASE("GHS scan on the mixed-sign tree field is not monotone") {
    const auto c = counterexample_tree(0.8);
    std::vector<double> grid(c.scales);
    std::vector<ExtendedField> g(c.instance.fields().begin(), c.instance.fields().end());
    CHECK_THROWS_AS(ghs_monotonicity_scan(c.instance, g, 0, 1, grid), DomainError);
    const auto scan = ghs_monotonicity_scan(c.instance, g, 0, 1, grid, kDefaultTolerance, false);
    CHECK_FALSE(scan.monotone);
    CHECK(scan.worst_increase > 1e-6);
}
