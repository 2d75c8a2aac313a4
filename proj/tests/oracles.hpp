#pragma once

// Brute-force reference computations used only by tests. They sum plain
// exponentials over every configuration consistent with the clamped spins and
// share no code with the Gray-code engine.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "ising/instance.hpp"

namespace oracle {

struct Weighted {
    std::vector<int> spins;
    double weight;
};

// Every configuration (clamped spins fixed) with its Gibbs weight exp(H).
inline std::vector<Weighted> configurations(const ising::IsingInstance& inst) {
    const int n = inst.vertex_count();
    std::vector<Weighted> out;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
        std::vector<int> s(n);
        bool ok = true;
        double h = 0.0;
        for (int v = 0; v < n; ++v) {
            s[v] = (bits >> v) & 1u ? 1 : -1;
            const auto f = inst.field(v);
            if (f.is_infinite()) {
                if (f.infinite_sign() != s[v]) ok = false;
            } else {
                h += f.value() * s[v];
            }
        }
        if (!ok) continue;
        for (const auto& e : inst.graph().edges()) h += inst.beta() * e.coupling * s[e.u] * s[e.v];
        out.push_back({s, std::exp(h)});
    }
    return out;
}

inline double expectation(const ising::IsingInstance& inst, const std::function<double(const std::vector<int>&)>& f) {
    double z = 0.0, acc = 0.0;
    for (const auto& c : configurations(inst)) {
        z += c.weight;
        acc += c.weight * f(c.spins);
    }
    return acc / z;
}

inline double partition(const ising::IsingInstance& inst) {
    double z = 0.0;
    for (const auto& c : configurations(inst)) z += c.weight;
    return z;
}

inline double magnetization(const ising::IsingInstance& inst, int o) {
    return expectation(inst, [o](const std::vector<int>& s) { return double(s[o]); });
}

inline double conditional(const ising::IsingInstance& inst, int o, int v, int sv) {
    double z = 0.0, acc = 0.0;
    for (const auto& c : configurations(inst)) {
        if (c.spins[v] != sv) continue;
        z += c.weight;
        acc += c.weight * c.spins[o];
    }
    return acc / z;
}

inline double covariance(const ising::IsingInstance& inst, int u, int v) {
    const double uv = expectation(inst, [u, v](const std::vector<int>& s) { return double(s[u] * s[v]); });
    return uv - magnetization(inst, u) * magnetization(inst, v);
}

}  // namespace oracle

namespace oracle {

// sup over d in [-1, 1] of f by a uniform grid of `points` nodes followed by
// golden-section refinement inside the neighbouring cells of the best node.
inline double grid_refined_sup(const std::function<double(double)>& f, int points = 10000) {
    double best = -1e300;
    int best_k = 0;
    const double step = 2.0 / (points - 1);
    for (int k = 0; k < points; ++k) {
        const double v = f(-1.0 + k * step);
        if (v > best) {
            best = v;
            best_k = k;
        }
    }
    double lo = std::max(-1.0, -1.0 + (best_k - 1) * step);
    double hi = std::min(1.0, -1.0 + (best_k + 1) * step);
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double x1 = hi - ratio * (hi - lo);
        const double x2 = lo + ratio * (hi - lo);
        if (f(x1) < f(x2))
            lo = x1;
        else
            hi = x2;
    }
    return std::max(best, f(0.5 * (lo + hi)));
}

}  // namespace oracle
