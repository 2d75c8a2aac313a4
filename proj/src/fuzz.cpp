#include "ising/fuzz.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "ising/instance_json.hpp"
#include "ising/parallel.hpp"

namespace ising {

using nlohmann::json;

IsingGraph random_connected_graph(Rng& rng, int n, double p) {
    for (;;) {
        std::vector<Edge> edges;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng.bernoulli(p)) edges.push_back({u, v, 0.0});
        IsingGraph g(n, edges);
        if (g.is_connected()) return g;
    }
}

FuzzTrial make_fuzz_trial(const FuzzConfig& config, long long trial) {
    Rng rng(derive_seed(config.seed, "fuzz-trial", static_cast<std::uint64_t>(trial)));
    const int n = rng.uniform_int(config.min_n, config.max_n);
    const IsingGraph shape = random_connected_graph(rng, n);
    std::vector<Edge> edges(shape.edges().begin(), shape.edges().end());
    for (Edge& e : edges) e.coupling = 2.0 * rng.uniform_open_low();  // (0, 2]

    const double scale = config.field_scale;
    std::vector<ExtendedField> g(n), h(n);
    for (int v = 0; v < n; ++v) {
        if (config.zero_field) {
            g[v] = 0.0;
        } else if (rng.bernoulli(0.1)) {
            g[v] = rng.bernoulli(0.5) ? ExtendedField::plus_infinity() : ExtendedField::minus_infinity();
        } else {
            g[v] = rng.uniform(-scale, scale);
        }
    }
    for (int v = 0; v < n; ++v) {
        if (!rng.bernoulli(0.5)) {
            h[v] = 0.0;
        } else if (g[v].is_finite() && rng.bernoulli(0.2)) {
            h[v] = ExtendedField::plus_infinity();
        } else {
            h[v] = rng.uniform(0.0, scale);
        }
    }
    FuzzTrial t;
    t.theorem.instance = build_instance(IsingGraph(n, std::move(edges)), 1.0, std::move(g));
    t.theorem.h = std::move(h);
    t.theorem.o = rng.uniform_int(0, n - 1);
    t.u = rng.uniform_int(0, n - 1);
    t.v = rng.uniform_int(0, n - 2);
    if (t.v >= t.u) ++t.v;
    return t;
}

json theorem_reproducer(const InfluenceQuery& q, const InequalityReport& r) {
    json j = instance_to_json(q.instance);
    json h = json::array();
    for (ExtendedField f : q.h) h.push_back(field_to_json(f));
    j["query"] = json{{"kind", "theorem"}, {"h", std::move(h)}, {"o", q.o}, {"report", to_json(r)}};
    return j;
}

json correlation_reproducer(const IsingInstance& instance, int u, int v, const InequalityReport& r) {
    json j = instance_to_json(instance);
    j["query"] = json{{"kind", "correlation"}, {"u", u}, {"v", v}, {"report", to_json(r)}};
    return j;
}

FuzzSummary fuzz_inequalities(const FuzzConfig& config) {
    struct TrialResult {
        int n = 0;
        std::optional<InequalityReport> theorem, correlation;
        FuzzTrial trial;
    };
    std::vector<TrialResult> results(static_cast<std::size_t>(std::max(0LL, config.trials)));
    parallel_for(results.size(), config.threads, [&](std::size_t i) {
        TrialResult& r = results[i];
        r.trial = make_fuzz_trial(config, static_cast<long long>(i));
        r.n = r.trial.theorem.instance.vertex_count();
        if (config.check_theorem) r.theorem = check_boundary_influence(r.trial.theorem, config.tolerance);
        if (config.check_correlation)
            r.correlation = check_correlation(r.trial.theorem.instance, r.trial.u, r.trial.v, config.tolerance);
    });

    FuzzSummary s;
    s.trials = config.trials;
    bool first_t = true, first_c = true;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const TrialResult& r = results[i];
        if (r.theorem) {
            ++s.theorem_checks;
            s.max_abs_theorem_margin = std::max(s.max_abs_theorem_margin, std::fabs(r.theorem->margin));
            if (first_t || r.theorem->margin < s.worst_theorem_margin) {
                first_t = false;
                s.worst_theorem_margin = r.theorem->margin;
                s.worst_theorem_digest = r.theorem->instance_digest;
            }
            if (!r.theorem->holds) {
                ++s.theorem_violations;
                if (!config.reproducer_dir.empty()) {
                    const auto path = config.reproducer_dir / ("theorem-" + r.theorem->instance_digest + ".json");
                    write_json_file(path, theorem_reproducer(r.trial.theorem, *r.theorem));
                    s.reproducers.push_back(path.string());
                }
            }
            if (config.keep_records) s.records.push_back({static_cast<long long>(i), "theorem", r.n, *r.theorem});
        }
        if (r.correlation) {
            ++s.correlation_checks;
            if (first_c || r.correlation->margin < s.worst_correlation_margin) {
                first_c = false;
                s.worst_correlation_margin = r.correlation->margin;
                s.worst_correlation_digest = r.correlation->instance_digest;
            }
            if (!r.correlation->holds) {
                ++s.correlation_violations;
                if (!config.reproducer_dir.empty()) {
                    const auto path =
                        config.reproducer_dir / ("correlation-" + r.correlation->instance_digest + ".json");
                    write_json_file(path, correlation_reproducer(r.trial.theorem.instance, r.trial.u, r.trial.v,
                                                                 *r.correlation));
                    s.reproducers.push_back(path.string());
                }
            }
            if (config.keep_records)
                s.records.push_back({static_cast<long long>(i), "correlation", r.n, *r.correlation});
        }
    }
    return s;
}

json to_json(const FuzzRecord& r) {
    return json{{"trial", r.trial}, {"kind", r.kind}, {"n", r.n}, {"report", to_json(r.report)}};
}

json to_json(const FuzzSummary& s) {
    return json{{"trials", s.trials},
                {"theorem_checks", s.theorem_checks},
                {"correlation_checks", s.correlation_checks},
                {"theorem_violations", s.theorem_violations},
                {"correlation_violations", s.correlation_violations},
                {"worst_theorem_margin", s.worst_theorem_margin},
                {"worst_theorem_digest", s.worst_theorem_digest},
                {"worst_correlation_margin", s.worst_correlation_margin},
                {"worst_correlation_digest", s.worst_correlation_digest},
                {"max_abs_theorem_margin", s.max_abs_theorem_margin},
                {"reproducers", s.reproducers}};
}

}  // namespace ising
