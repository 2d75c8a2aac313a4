#include <doctest.h>

#include <cmath>

#include "ising/errors.hpp"
#include "ising/exact.hpp"
#include "ising/log_sum_exp.hpp"
#include "ising/random.hpp"
#include "oracles.hpp"

using namespace ising;

namespace {

const ExtendedField kPlusInf = ExtendedField::plus_infinity();

IsingInstance edge_instance(double j, std::vector<ExtendedField> g) {
    return build_instance(IsingGraph(2, {{0, 1, j}}), 1.0, std::move(g));
}

IsingGraph path(int n, double j = 1.0) {
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, j});
    return IsingGraph(n, edges);
}

IsingInstance random_instance(Rng& rng, int n, double field_scale, bool allow_infinite) {
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.bernoulli(0.5)) edges.push_back({u, v, rng.uniform(0.0, 2.0)});
    std::vector<ExtendedField> g;
    for (int v = 0; v < n; ++v) {
        if (allow_infinite && rng.bernoulli(0.1))
            g.push_back(rng.bernoulli(0.5) ? ExtendedField::plus_infinity() : ExtendedField::minus_infinity());
        else
            g.push_back(rng.uniform(-field_scale, field_scale));
    }
    return build_instance(IsingGraph(n, edges), rng.uniform(0.3, 1.5), g);
}

}  // namespace

TEST_CASE("exact_stats small closed forms") {
    ExactQuery q;
    q.vertices = {0};
    const auto single0 = exact_stats(build_instance(IsingGraph(1, {}), 1.0, std::vector<double>{0.0}), q);
    CHECK(single0.log_z == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(single0.magnetizations[0] == 0.0);

    const auto single1 = exact_stats(build_instance(IsingGraph(1, {}), 1.0, std::vector<double>{1.0}), q);
    CHECK(single1.magnetizations[0] == doctest::Approx(0.761594155955765).epsilon(1e-14));
    CHECK(single1.magnetizations[0] == doctest::Approx(std::tanh(1.0)).epsilon(1e-15));

    ExactQuery qp;
    qp.pairs = {{0, 1}};
    const auto e = exact_stats(edge_instance(1.0, {0.0, 0.0}), qp);
    const double brute = (2 * std::exp(1.0) - 2 * std::exp(-1.0)) / (2 * std::exp(1.0) + 2 * std::exp(-1.0));
    CHECK(e.pair_products[0] == doctest::Approx(brute).epsilon(1e-14));
}

TEST_CASE("capacity error above the cap") {
    const auto inst = build_instance(path(12), 1.0, std::vector<double>(12, 0.0));
    EngineOptions opts;
    opts.max_vertices = 10;
    CHECK_THROWS_WITH_AS(magnetizations(inst, opts), doctest::Contains("Monte Carlo"), CapacityError);
    // Clamped spins do not count toward the cap.
    const auto clamped = inst.with_field(0, kPlusInf).with_field(1, kPlusInf);
    CHECK_NOTHROW(magnetizations(clamped, opts));
}

TEST_CASE("conditional expectation") {
    const auto e = edge_instance(1.0, {0.0, 0.0});
    CHECK(conditional_expectation(e, 0, 1, 1) == doctest::Approx(std::tanh(1.0)).epsilon(1e-14));
    const auto apart = build_instance(IsingGraph(2, {}), 1.0, std::vector<double>{0.0, 0.0});
    CHECK(conditional_expectation(apart, 0, 1, 1) == doctest::Approx(0.0));
    CHECK_THROWS_AS(conditional_expectation(edge_instance(1.0, {0.0, kPlusInf}), 0, 1, -1), ImpossibleEventError);
    CHECK(conditional_expectation(edge_instance(1.0, {0.0, kPlusInf}), 0, 1, 1) ==
          doctest::Approx(std::tanh(1.0)));

    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = random_instance(rng, rng.uniform_int(2, 8), 3.0, false);
        const int n = inst.vertex_count();
        const int o = rng.uniform_int(0, n - 1);
        int v = rng.uniform_int(0, n - 1);
        if (v == o) v = (v + 1) % n;
        ExactQuery q;
        q.vertices = {o, v};
        const auto st = exact_stats(inst, q);
        const double cp = conditional_expectation(inst, o, v, 1);
        const double cm = conditional_expectation(inst, o, v, -1);
        const double mu_plus = st.marginals[1];
        // Law of total expectation.
        CHECK(std::fabs(mu_plus * cp + (1 - mu_plus) * cm - st.magnetizations[0]) < 1e-12);
        // Restricted enumeration and clamping agree; both match the oracle.
        CHECK(std::fabs(cp - conditional_expectation_clamped(inst, o, v, 1)) < 1e-12);
        CHECK(std::fabs(cm - conditional_expectation_clamped(inst, o, v, -1)) < 1e-12);
        CHECK(std::fabs(cp - oracle::conditional(inst, o, v, 1)) < 1e-12);
        // FKG: conditioning upward never lowers another spin.
        CHECK(cp - cm >= -1e-12);
    }
}

TEST_CASE("conditioning on a heavily suppressed event uses the clamping route") {
    // sigma_1 = -1 has relative weight about exp(-2000).
    const auto inst = edge_instance(1.0, {0.0, 1000.0});
    CHECK(conditional_expectation(inst, 0, 1, -1) == doctest::Approx(-std::tanh(1.0)).epsilon(1e-14));
}

TEST_CASE("covariance") {
    CHECK(covariance(edge_instance(1.0, {0.0, 0.0}), 0, 1) == doctest::Approx(std::tanh(1.0)).epsilon(1e-14));
    CHECK(covariance(edge_instance(1.0, {kPlusInf, 0.3}), 0, 1) == doctest::Approx(0.0));
    const auto p3 = build_instance(path(3), 1.0, std::vector<double>(3, 0.0));
    // Brute force over the 8 configurations.
    CHECK(covariance(p3, 0, 2) == doctest::Approx(oracle::covariance(p3, 0, 2)).epsilon(1e-14));
    CHECK(covariance(p3, 0, 2) == doctest::Approx(std::pow(std::tanh(1.0), 2)).epsilon(1e-14));
    CHECK_THROWS_AS(covariance(p3, 1, 1), DomainError);
}

TEST_CASE("covariance identity (random finite instances)") {
    Rng rng(31337);
    for (int trial = 0; trial < 300; ++trial) {
        const auto inst = random_instance(rng, rng.uniform_int(2, 12), 3.0, false);
        const int n = inst.vertex_count();
        const int u = rng.uniform_int(0, n - 1);
        int v = rng.uniform_int(0, n - 1);
        if (v == u) v = (v + 1) % n;
        ExactQuery q;
        q.vertices = {v};
        const double mu_plus = exact_stats(inst, q).marginals[0];
        const double rhs = 2 * mu_plus * (1 - mu_plus) *
                           (conditional_expectation(inst, u, v, 1) - conditional_expectation(inst, u, v, -1));
        CHECK(std::fabs(covariance(inst, u, v) - rhs) < 1e-10);
    }
}

TEST_CASE("GKS: correlations grow with couplings at zero field") {
    // All graphs on 4 vertices, couplings from {0, 0.3, 1.0}; raising one coupling never lowers <s_u s_v>.
    const std::vector<std::pair<int, int>> pairs{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    const double levels[] = {0.0, 0.3, 1.0};
    int codes = 1;
    for (std::size_t i = 0; i < pairs.size(); ++i) codes *= 3;
    auto instance_for = [&](std::vector<int> level) {
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if (level[i] > 0) edges.push_back({pairs[i].first, pairs[i].second, levels[level[i]]});
        return build_instance(IsingGraph(4, edges), 1.0, std::vector<double>(4, 0.0));
    };
    ExactQuery q;
    q.pairs = pairs;
    for (int code = 0; code < codes; ++code) {
        std::vector<int> level(pairs.size());
        for (int c = code, i = 0; i < static_cast<int>(pairs.size()); ++i, c /= 3) level[i] = c % 3;
        const auto base = exact_stats(instance_for(level), q).pair_products;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (level[i] == 2) continue;
            auto up = level;
            ++up[i];
            const auto raised = exact_stats(instance_for(up), q).pair_products;
            for (std::size_t p = 0; p < pairs.size(); ++p) CHECK(raised[p] >= base[p] - 1e-14);
        }
    }
}

TEST_CASE("log-domain sums match direct summation") {
    Rng rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = random_instance(rng, rng.uniform_int(1, 10), 5.0, false);
        ExactQuery q;
        const double z = oracle::partition(inst);
        CHECK(std::fabs(std::exp(exact_stats(inst, q).log_z) / z - 1.0) < 1e-12);
    }
}

TEST_CASE("large fields do not overflow") {
    const auto inst = build_instance(path(6, 2.0), 3.0, std::vector<double>{400, -300, 50, 50, -50, 800});
    const auto m = magnetizations(inst);
    CHECK(m[0] == 1.0);
    CHECK(std::isfinite(exact_stats(inst, {}).log_z));
}

TEST_CASE("chunking and threads give the same result") {
    Rng rng(7);
    const auto inst = random_instance(rng, 19, 2.0, false);  // 8 chunks of 2^16
    ExactQuery q;
    for (int v = 0; v < 19; ++v) q.vertices.push_back(v);
    q.pairs = {{0, 5}, {3, 18}};
    q.window = {1, 2, 7};
    EngineOptions one, four;
    four.threads = 4;
    const auto a = exact_stats(inst, q, one);
    const auto b = exact_stats(inst, q, four);
    CHECK(a.log_z == b.log_z);
    CHECK(a.magnetizations == b.magnetizations);
    CHECK(a.pair_products == b.pair_products);
    CHECK(a.log_window == b.log_window);
    // Spot check against brute force on a reduced copy.
    const auto small = random_instance(rng, 10, 2.0, true);
    const auto m = magnetizations(small);
    for (int v = 0; v < 10; ++v) CHECK(std::fabs(m[v] - oracle::magnetization(small, v)) < 1e-12);
}

TEST_CASE("window table") {
    Rng rng(11);
    const auto inst = random_instance(rng, 7, 2.0, true);
    ExactQuery q;
    q.window = {0, 3, 5};
    const auto st = exact_stats(inst, q);
    double total = 0.0;
    for (std::size_t p = 0; p < 8; ++p) {
        total += st.window_probability(p);
        const double brute = oracle::expectation(inst, [&](const std::vector<int>& s) {
            return double(((s[0] > 0) == bool(p & 1)) && ((s[3] > 0) == bool(p & 2)) && ((s[5] > 0) == bool(p & 4)));
        });
        CHECK(std::fabs(st.window_probability(p) - brute) < 1e-12);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
    ExactQuery big;
    for (int v = 0; v < 21; ++v) big.window.push_back(v % 7);
    CHECK_THROWS_AS(exact_stats(inst, big), CapacityError);
}

TEST_CASE("effective field") {
    const auto zero = build_instance(path(5), 1.0, std::vector<double>(5, 0.0));
    CHECK(effective_field(zero, 2).lambda == doctest::Approx(0.0));

    // Pendant neighbour with field phi: lambda = atanh(tanh J tanh phi).
    for (double phi : {-3.0, -0.4, 0.7, 2.5}) {
        for (double j : {0.2, 1.0, 1.7}) {
            const auto e = edge_instance(j, {0.9, phi});
            CHECK(effective_field(e, 0).lambda ==
                  doctest::Approx(std::atanh(std::tanh(j) * std::tanh(phi))).epsilon(1e-12));
        }
    }

    // Trees factorize: contributions of the two branches of a path add.
    const auto inst = build_instance(path(5), 1.0, std::vector<double>{-2, -2, 0.4, 1.9, 3});
    auto message = [](double j, double phi) { return std::atanh(std::tanh(j) * std::tanh(phi)); };
    const double left = message(1.0, -2 + message(1.0, -2));
    const double right = message(1.0, 1.9 + message(1.0, 3));
    CHECK(effective_field(inst, 2).lambda == doctest::Approx(left + right).epsilon(1e-12));

    CHECK_THROWS_AS(effective_field(inst.with_field(2, kPlusInf), 2), DomainError);

    Rng rng(1234);
    for (int trial = 0; trial < 200; ++trial) {
        const auto r = random_instance(rng, rng.uniform_int(1, 9), 3.0, true);
        const int o = rng.uniform_int(0, r.vertex_count() - 1);
        if (r.field(o).is_infinite()) continue;
        const double lam = effective_field(r, o).lambda;
        CHECK(std::fabs(std::tanh(lam + r.field(o).value()) - magnetizations(r)[o]) < 1e-10);
    }
}

TEST_CASE("mixture coefficient") {
    const auto inf_v = build_instance(IsingGraph(2, {{0, 1, 1.0}}), 1.0, {0.0, kPlusInf});
    CHECK(mixture_alpha(inf_v, 1).alpha == 0.0);
    const auto isolated = build_instance(IsingGraph(1, {}), 1.0, std::vector<double>{0.8});
    CHECK(mixture_alpha(isolated, 0).alpha == doctest::Approx(1 - std::tanh(0.8)).epsilon(1e-14));
    const auto degenerate = mixture_alpha(edge_instance(1.0, {0.5, 0.0}), 1);
    CHECK(degenerate.degenerate);
    CHECK(degenerate.alpha == 1.0);
    CHECK_THROWS_AS(mixture_alpha(edge_instance(1.0, {-0.5, 1.0}), 1), DomainError);
    const auto e = edge_instance(1.0, {0.0, 1.0});
    CHECK(mixture_alpha(e, 1).alpha == doctest::Approx(mixture_alpha_from_magnetizations(e, 1)).epsilon(1e-13));
}

TEST_CASE("mixture decomposition of magnetizations (random instances)") {
    Rng rng(2718);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = rng.uniform_int(2, 10);
        auto base = random_instance(rng, n, 1.0, false);
        std::vector<ExtendedField> h(n);
        for (int w = 0; w < n; ++w) h[w] = rng.bernoulli(0.5) ? ExtendedField(rng.uniform(0, 3)) : ExtendedField(0.0);
        const int v = rng.uniform_int(0, n - 1);
        h[v] = rng.uniform(0.05, 3.0);
        const int o = rng.uniform_int(0, n - 1);
        const auto plus_h = base.with_fields(h);
        const auto minus_h = base.with_fields(negate_fields(h));
        const double alpha = mixture_alpha(plus_h, v).alpha;
        CHECK(std::fabs(alpha - mixture_alpha_from_magnetizations(plus_h, v)) < 1e-10);
        for (const auto* inst : {&plus_h, &minus_h}) {
            const int sign = inst == &plus_h ? 1 : -1;
            const double lhs = magnetizations(*inst)[o];
            const double reset = magnetizations(inst->with_field(v, 0.0))[o];
            const double clamped = magnetizations(
                inst->with_field(v, sign > 0 ? ExtendedField::plus_infinity() : ExtendedField::minus_infinity()))[o];
            CHECK(std::fabs(lhs - (alpha * reset + (1 - alpha) * clamped)) < 1e-10);
        }
    }
}
