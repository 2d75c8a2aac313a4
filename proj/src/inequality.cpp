#include "ising/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "ising/errors.hpp"
#include "ising/instance_json.hpp"
#include "ising/random.hpp"

namespace ising {

using nlohmann::json;

InequalityReport make_report(double lhs, double rhs, double tolerance, std::string digest) {
    InequalityReport r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.tolerance = tolerance;
    r.holds = r.margin >= -tolerance;
    r.instance_digest = std::move(digest);
    return r;
}

json to_json(const InequalityReport& r) {
    return json{{"lhs", r.lhs},       {"rhs", r.rhs},           {"margin", r.margin},
                {"holds", r.holds},   {"tolerance", r.tolerance}, {"instance_digest", r.instance_digest}};
}

InequalityReport report_from_json(const json& j) {
    InequalityReport r;
    r.lhs = j.at("lhs").get<double>();
    r.rhs = j.at("rhs").get<double>();
    r.margin = j.at("margin").get<double>();
    r.holds = j.at("holds").get<bool>();
    r.tolerance = j.at("tolerance").get<double>();
    r.instance_digest = j.at("instance_digest").get<std::string>();
    return r;
}

std::string stable_digest(const json& j) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
    return buf;
}

json to_json(const InfluenceQuery& q) {
    json h = json::array();
    for (ExtendedField f : q.h) h.push_back(field_to_json(f));
    return json{{"instance", instance_to_json(q.instance)}, {"h", std::move(h)}, {"o", q.o}};
}

void validate(const InfluenceQuery& q) {
    const int n = q.instance.vertex_count();
    if (static_cast<int>(q.h.size()) != n) throw ValidationError("h must have one entry per vertex");
    if (q.o < 0 || q.o >= n) throw ValidationError("target vertex out of range");
    for (int v = 0; v < n; ++v) {
        if (q.h[v].value() < 0.0) throw ValidationError("h must be non-negative (vertex " + std::to_string(v) + ")");
        if (q.instance.field(v).is_infinite() && q.h[v].is_infinite())
            throw DomainError("min{|g_v|, h_v} must be finite; both are infinite at vertex " + std::to_string(v));
    }
}

namespace {

struct FourMeasures {
    std::vector<double> g_plus, g_minus, plus, minus;
};

std::vector<ExtendedField> zero_fields(int n) { return std::vector<ExtendedField>(n, ExtendedField(0.0)); }

FourMeasures four_measures(const IsingInstance& inst, const std::vector<ExtendedField>& h, const EngineOptions& opts) {
    const auto g = inst.fields();
    const auto neg_h = negate_fields(h);
    FourMeasures m;
    m.g_plus = magnetizations(inst.with_fields(add_fields(g, h)), opts);
    m.g_minus = magnetizations(inst.with_fields(add_fields(g, neg_h)), opts);
    m.plus = magnetizations(inst.with_fields(h), opts);
    m.minus = magnetizations(inst.with_fields(neg_h), opts);
    return m;
}

}  // namespace

InequalityReport check_boundary_influence(const InfluenceQuery& q, double tolerance, const EngineOptions& options) {
    validate(q);
    const auto g = q.instance.fields();
    const auto neg_h = negate_fields(q.h);
    ExactQuery eq;
    eq.vertices = {q.o};
    auto mag = [&](std::vector<ExtendedField> f) {
        return exact_stats(q.instance.with_fields(std::move(f)), eq, options).magnetizations[0];
    };
    const double lhs = mag(add_fields(g, q.h)) - mag(add_fields(g, neg_h));
    const double rhs = mag(q.h) - mag(neg_h);
    return make_report(lhs, rhs, tolerance, stable_digest(to_json(q)));
}

std::vector<InequalityReport> check_boundary_influence_all_targets(const IsingInstance& instance,
                                                                   const std::vector<ExtendedField>& h,
                                                                   double tolerance, const EngineOptions& options) {
    InfluenceQuery q{instance, h, 0};
    validate(q);
    const FourMeasures m = four_measures(instance, h, options);
    std::vector<InequalityReport> out;
    for (int o = 0; o < instance.vertex_count(); ++o) {
        q.o = o;
        out.push_back(make_report(m.g_plus[o] - m.g_minus[o], m.plus[o] - m.minus[o], tolerance,
                                  stable_digest(to_json(q))));
    }
    return out;
}

InequalityReport check_boundary_condition_influence(const IsingInstance& instance, const std::vector<int>& boundary,
                                                    int o, double tolerance, const EngineOptions& options) {
    const int n = instance.vertex_count();
    std::vector<ExtendedField> h(n, ExtendedField(0.0));
    for (int b : boundary) {
        if (b < 0 || b >= n) throw ValidationError("boundary vertex out of range");
        if (b == o) throw DomainError("target vertex " + std::to_string(o) + " lies on the boundary");
        h[b] = ExtendedField::plus_infinity();
    }
    // Boundary spins are fixed by h, so their own g is irrelevant.
    std::vector<ExtendedField> g(instance.fields().begin(), instance.fields().end());
    for (int v = 0; v < n; ++v) {
        if (h[v].is_infinite()) {
            g[v] = 0.0;
        } else if (g[v].is_infinite()) {
            throw DomainError("interior vertex " + std::to_string(v) + " carries an infinite field");
        }
    }
    return check_boundary_influence(InfluenceQuery{instance.with_fields(std::move(g)), std::move(h), o}, tolerance,
                                    options);
}

InequalityReport check_correlation(const IsingInstance& instance, int u, int v, double tolerance,
                                   const EngineOptions& options) {
    if (u == v) throw DomainError("correlation check needs u != v");
    const double lhs = covariance(instance, u, v, options);
    ExactQuery q;
    q.pairs = {{u, v}};
    const double rhs =
        exact_stats(instance.with_fields(zero_fields(instance.vertex_count())), q, options).pair_products[0];
    const json key{{"instance", instance_to_json(instance)}, {"u", u}, {"v", v}};
    return make_report(lhs, rhs, tolerance, stable_digest(key));
}

GhsScan ghs_monotonicity_scan(const IsingInstance& instance, const std::vector<ExtendedField>& g_tilde, int u, int v,
                              const std::vector<double>& grid, double tolerance, bool validate_sign,
                              const EngineOptions& options) {
    if (static_cast<int>(g_tilde.size()) != instance.vertex_count())
        throw ValidationError("g_tilde must have one entry per vertex");
    if (validate_sign) {
        for (std::size_t w = 0; w < g_tilde.size(); ++w)
            if (g_tilde[w].value() < 0.0)
                throw DomainError("GHS monotonicity needs g_tilde >= 0; vertex " + std::to_string(w) + " is " +
                                  g_tilde[w].to_string());
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid[k] < 0.0) throw DomainError("scale grid must be non-negative");
        if (k > 0 && grid[k] < grid[k - 1]) throw ValidationError("scale grid must be ascending");
    }
    GhsScan scan;
    scan.grid = grid;
    for (double s : grid) scan.covariances.push_back(covariance(instance.with_fields(scale_fields(g_tilde, s)), u, v, options));
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double inc = scan.covariances[k] - scan.covariances[k - 1];
        scan.worst_increase = std::max(scan.worst_increase, inc);
    }
    scan.monotone = scan.worst_increase <= tolerance;
    return scan;
}

double single_spin_gap(double g, double h) { return std::tanh(g + h) - std::tanh(g - h); }

std::vector<std::vector<std::pair<int, int>>> connected_graphs_up_to_isomorphism(int n) {
    std::vector<std::pair<int, int>> all_pairs;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) all_pairs.emplace_back(u, v);
    const int m = static_cast<int>(all_pairs.size());
    std::vector<int> perm(n);
    std::set<unsigned> canonical_seen;
    std::vector<std::vector<std::pair<int, int>>> out;
    auto index_of = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        for (int i = 0; i < m; ++i)
            if (all_pairs[i] == std::make_pair(a, b)) return i;
        return -1;
    };
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::vector<Edge> edges;
        for (int i = 0; i < m; ++i)
            if (mask >> i & 1u) edges.push_back({all_pairs[i].first, all_pairs[i].second, 1.0});
        if (!IsingGraph(n, edges).is_connected()) continue;
        unsigned best = ~0u;
        std::iota(perm.begin(), perm.end(), 0);
        do {
            unsigned image = 0;
            for (int i = 0; i < m; ++i)
                if (mask >> i & 1u) image |= 1u << index_of(perm[all_pairs[i].first], perm[all_pairs[i].second]);
            best = std::min(best, image);
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (!canonical_seen.insert(best).second) continue;
        std::vector<std::pair<int, int>> list;
        for (int i = 0; i < m; ++i)
            if (mask >> i & 1u) list.push_back(all_pairs[i]);
        out.push_back(std::move(list));
    }
    return out;
}

ExhaustiveSummary exhaustive_theorem_check(int max_n, double tolerance) {
    const double couplings[] = {0.5, 1.5};
    const double g_values[] = {-2.0, -0.5, 0.0, 0.5, 2.0};
    const ExtendedField h_values[] = {ExtendedField(0.0), ExtendedField(1.0), ExtendedField::plus_infinity()};
    ExhaustiveSummary s;
    bool first = true;
    for (int n = 1; n <= max_n; ++n) {
        for (const auto& shape : connected_graphs_up_to_isomorphism(n)) {
            ++s.graphs;
            const int m = static_cast<int>(shape.size());
            for (unsigned jmask = 0; jmask < (1u << m); ++jmask) {
                std::vector<Edge> edges;
                for (int i = 0; i < m; ++i) edges.push_back({shape[i].first, shape[i].second, couplings[jmask >> i & 1u]});
                const IsingInstance base = build_instance(IsingGraph(n, edges), 1.0, std::vector<double>(n, 0.0));
                int h_codes = 1, g_codes = 1;
                for (int v = 0; v < n; ++v) {
                    h_codes *= 3;
                    g_codes *= 5;
                }
                std::vector<ExtendedField> h(n), g(n);
                for (int hc = 0; hc < h_codes; ++hc) {
                    for (int v = 0, c = hc; v < n; ++v, c /= 3) h[v] = h_values[c % 3];
                    const auto neg_h = negate_fields(h);
                    // g is always finite here, so min{|g|, h} < inf holds for every h.
                    const auto rhs_plus = magnetizations(base.with_fields(h));
                    const auto rhs_minus = magnetizations(base.with_fields(neg_h));
                    for (int gc = 0; gc < g_codes; ++gc) {
                        for (int v = 0, c = gc; v < n; ++v, c /= 5) g[v] = g_values[c % 5];
                        const auto lhs_plus = magnetizations(base.with_fields(add_fields(g, h)));
                        const auto lhs_minus = magnetizations(base.with_fields(add_fields(g, neg_h)));
                        ++s.instances;
                        for (int o = 0; o < n; ++o) {
                            ++s.checks;
                            const double margin = (rhs_plus[o] - rhs_minus[o]) - (lhs_plus[o] - lhs_minus[o]);
                            if (margin < -tolerance) ++s.violations;
                            if (first || margin < s.worst_margin) {
                                first = false;
                                s.worst_margin = margin;
                                s.worst_digest = stable_digest(to_json(InfluenceQuery{base.with_fields(g), h, o}));
                            }
                        }
                    }
                }
            }
        }
    }
    return s;
}

json to_json(const ExhaustiveSummary& s) {
    return json{{"graphs", s.graphs},         {"instances", s.instances},
                {"checks", s.checks},         {"violations", s.violations},
                {"worst_margin", s.worst_margin}, {"worst_digest", s.worst_digest}};
}

}  // namespace ising
