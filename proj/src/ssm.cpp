#include "ising/ssm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ising/errors.hpp"

namespace ising {

void validate(const SSMQuery& q) {
    const auto& d = q.domain;
    if (!(q.beta >= 0.0) || !std::isfinite(q.beta)) throw ValidationError("beta must be finite and non-negative");
    if (static_cast<int>(q.h.size()) != d.size()) throw ValidationError("field length does not match V");
    for (double x : q.h)
        if (!std::isfinite(x)) throw ValidationError("field must be finite");
    if (static_cast<int>(q.tau.size()) != d.boundary_size())
        throw ValidationError("boundary condition length does not match the boundary");
    for (int s : q.tau)
        if (s != 1 && s != -1) throw ValidationError("boundary condition entries must be +-1");
    if (q.flip < -1 || q.flip >= d.boundary_size()) throw ValidationError("flip site is not on the boundary");
    if (q.window.empty()) throw ValidationError("window must not be empty");
    std::vector<int> w = q.window;
    std::sort(w.begin(), w.end());
    if (std::adjacent_find(w.begin(), w.end()) != w.end()) throw ValidationError("window repeats a site");
    if (w.front() < 0 || w.back() >= d.size()) throw ValidationError("window site is not in V");
}

nlohmann::json to_json(const SSMQuery& q) {
    auto window = nlohmann::json::array();
    for (int v : q.window) window.push_back(q.domain.site(v));
    nlohmann::json j{{"dim", q.domain.dim()}, {"sites", q.domain.size()}, {"beta", q.beta},
                     {"h", q.h},             {"tau", q.tau},             {"window", window}};
    j["y"] = q.flip >= 0 ? nlohmann::json(q.domain.boundary_site(q.flip)) : nlohmann::json(nullptr);
    return j;
}

int ssm_distance(const SSMQuery& q) {
    if (q.flip < 0) return -1;
    int best = std::numeric_limits<int>::max();
    for (int v : q.window) best = std::min(best, l1_distance(q.domain.site(v), q.domain.boundary_site(q.flip)));
    return best;
}

std::vector<int> flipped_tau(const SSMQuery& q) {
    auto t = q.tau;
    if (q.flip >= 0) t[q.flip] = -t[q.flip];
    return t;
}

const char* to_string(SsmMethod m) { return m == SsmMethod::exact ? "exact" : "coupled-mc"; }

SsmMethod ssm_method_from_string(const std::string& s) {
    if (s == "exact") return SsmMethod::exact;
    if (s == "coupled-mc") return SsmMethod::coupled_mc;
    throw ValidationError("unknown method '" + s + "'");
}

nlohmann::json to_json(const SsmEstimate& e) {
    return {{"method", to_string(e.method)}, {"tv", e.tv},          {"std_error", e.std_error},
            {"distance", e.distance},        {"backend", e.backend}};
}

namespace {

std::vector<ExtendedField> extended(const std::vector<double>& h) { return {h.begin(), h.end()}; }

}  // namespace

SsmEstimate ssm_estimate(const SSMQuery& q, SsmMethod method, const McOptions& budget,
                         const LatticeExactOptions& options) {
    validate(q);
    SsmEstimate e;
    e.method = method;
    e.distance = ssm_distance(q);
    const auto h = extended(q.h);
    const auto tau_y = flipped_tau(q);
    if (method == SsmMethod::exact) {
        e.backend = to_string(select_backend(q.domain, options));
        if (static_cast<int>(q.window.size()) > kMaxTransferWindow &&
            select_backend(q.domain, options) == LatticeBackend::transfer_matrix)
            throw CapacityError("window too large to tabulate");
        if (q.flip < 0) return e;
        e.tv = total_variation(lattice_window_law(q.domain, q.beta, h, q.tau, q.window, options),
                               lattice_window_law(q.domain, q.beta, h, tau_y, q.window, options));
        return e;
    }
    e.backend = "heat-bath";
    if (q.flip < 0) return e;
    const bool tau_upper = q.tau[q.flip] > 0;
    const HeatBath kernel(q.domain, q.beta, h, tau_upper ? q.tau : tau_y, tau_upper ? tau_y : q.tau);
    const McEstimate m = run_coupled(
        kernel,
        [&](const CoupledChains& c) {
            for (int v : q.window)
                if (c.upper[v] != c.lower[v]) return 1.0;
            return 0.0;
        },
        budget, "ssm");
    e.tv = m.mean;
    e.std_error = m.std_error;
    return e;
}

SphereCouplingTrace sphere_coupling(const SSMQuery& q, const LatticeExactOptions& options) {
    validate(q);
    if (q.flip < 0) throw ValidationError("sphere coupling needs a flipped boundary site");
    const auto& dom = q.domain;
    const auto& y = dom.boundary_site(q.flip);
    const auto h = extended(q.h);
    const auto tau_y = flipped_tau(q);

    SphereCouplingTrace t;
    t.distance = ssm_distance(q);
    t.radius = t.distance / 2;
    std::vector<int> sphere;
    if (t.radius == 0) {
        t.window_used = true;
        sphere = q.window;
    } else {
        for (int i = 0; i < dom.size(); ++i)
            if (l1_distance(dom.site(i), y) == t.radius) sphere.push_back(i);
    }
    const auto p = lattice_window_law(dom, q.beta, h, q.tau, sphere, options);
    const auto p_y = lattice_window_law(dom, q.beta, h, tau_y, sphere, options);
    t.tv_sphere = total_variation(p, p_y);
    t.tv_window = total_variation(lattice_window_law(dom, q.beta, h, q.tau, q.window, options),
                                  lattice_window_law(dom, q.beta, h, tau_y, q.window, options));

    // Zero field, free boundary except y = +1: field beta on the sites next to y.
    std::vector<ExtendedField> near_y(dom.size(), 0.0);
    for (int i : dom.boundary_attachments(q.flip)) near_y[i] = near_y[i] + ExtendedField(q.beta);
    const auto bound = lattice_magnetizations(dom, q.beta, near_y, std::vector<int>(dom.boundary_size(), 0), sphere,
                                              options);

    // prefix[k][x] = law of the first k sphere spins.
    const std::size_t n = sphere.size();
    std::vector<std::vector<double>> prefix(n + 1), prefix_y(n + 1);
    prefix[n] = p;
    prefix_y[n] = p_y;
    for (std::size_t k = n; k-- > 0;) {
        prefix[k].assign(std::size_t{1} << k, 0.0);
        prefix_y[k].assign(std::size_t{1} << k, 0.0);
        for (std::size_t x = 0; x < prefix[k + 1].size(); ++x) {
            prefix[k][x & ((std::size_t{1} << k) - 1)] += prefix[k + 1][x];
            prefix_y[k][x & ((std::size_t{1} << k) - 1)] += prefix_y[k + 1][x];
        }
    }
    // success[x] = probability that both chains agree on the prefix x.
    std::vector<double> success{1.0};
    for (std::size_t k = 0; k < n; ++k) {
        SphereStep step;
        step.site = sphere[k];
        step.coords = dom.site(sphere[k]);
        step.theorem_bound = bound[k];
        std::vector<double> next(std::size_t{1} << (k + 1), 0.0);
        for (std::size_t hist = 0; hist < prefix[k].size(); ++hist) {
            const double a = prefix[k][hist], b = prefix_y[k][hist];
            if (a <= 0.0 || b <= 0.0) continue;
            const std::size_t plus = hist | (std::size_t{1} << k);
            const double pa = prefix[k + 1][plus] / a, pb = prefix_y[k + 1][plus] / b;
            step.max_disagreement = std::max(step.max_disagreement, std::fabs(pa - pb));
            next[plus] = success[hist] * std::min(pa, pb);
            next[hist] = success[hist] * std::min(1.0 - pa, 1.0 - pb);
        }
        success.swap(next);
        t.union_bound += step.max_disagreement;
        t.theorem_total += step.theorem_bound;
        t.steps.push_back(step);
    }
    double agree = 0.0;
    for (double s : success) agree += s;
    t.coupling_failure = std::max(0.0, 1.0 - agree);
    const double slack = 1e-12;
    t.valid = t.theorem_total >= t.union_bound - slack && t.union_bound >= t.coupling_failure - slack &&
              t.coupling_failure >= t.tv_sphere - slack && t.tv_sphere >= t.tv_window - slack;
    return t;
}

nlohmann::json to_json(const SphereCouplingTrace& t) {
    auto steps = nlohmann::json::array();
    for (const auto& s : t.steps)
        steps.push_back({{"site", s.coords},
                         {"max_disagreement", s.max_disagreement},
                         {"theorem_bound", s.theorem_bound}});
    return {{"distance", t.distance},
            {"radius", t.radius},
            {"window_used", t.window_used},
            {"sphere_size", t.steps.size()},
            {"steps", steps},
            {"union_bound", t.union_bound},
            {"union_bound_capped", std::min(1.0, t.union_bound)},
            {"theorem_total", t.theorem_total},
            {"coupling_failure", t.coupling_failure},
            {"tv_sphere", t.tv_sphere},
            {"tv_window", t.tv_window},
            {"valid", t.valid}};
}

std::vector<TvProfilePoint> ssm_tv_profile(const SSMQuery& base, const LatticeExactOptions& options) {
    SSMQuery q = base;
    q.flip = -1;
    validate(q);
    const auto h = extended(q.h);
    const auto p = lattice_window_law(q.domain, q.beta, h, q.tau, q.window, options);
    std::vector<TvProfilePoint> out;
    for (int b = 0; b < q.domain.boundary_size(); ++b) {
        q.flip = b;
        TvProfilePoint pt;
        pt.flip = b;
        pt.y = q.domain.boundary_site(b);
        pt.distance = ssm_distance(q);
        pt.tv = total_variation(p, lattice_window_law(q.domain, q.beta, h, flipped_tau(q), q.window, options));
        out.push_back(pt);
    }
    return out;
}

nlohmann::json to_json(const TvProfilePoint& p) {
    return {{"y", p.y}, {"distance", p.distance}, {"tv", p.tv}};
}

double worst_distance_increase(const std::vector<TvProfilePoint>& profile) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& a : profile)
        for (const auto& b : profile)
            if (a.distance < b.distance) worst = std::max(worst, b.tv - a.tv);
    return worst;
}

}  // namespace ising
