#include "ising/lattice_exact.hpp"

#include <cmath>
#include <cstdint>

#include "ising/errors.hpp"
#include "ising/log_sum_exp.hpp"
#include "ising/transfer_matrix.hpp"

namespace ising {

const char* to_string(LatticeBackend backend) {
    switch (backend) {
        case LatticeBackend::automatic: return "automatic";
        case LatticeBackend::enumeration: return "enumeration";
        case LatticeBackend::transfer_matrix: return "transfer-matrix";
    }
    return "?";
}

namespace {

struct Grid {
    int rows = 0;
    int cols = 0;
};

// Sites of a full rectangle in lexicographic order are row-major.
bool as_grid(const LatticeDomain& domain, Grid& grid) {
    if (domain.dim() != 2 || domain.size() == 0) return false;
    const auto& first = domain.site(0);
    const auto& last = domain.site(domain.size() - 1);
    grid.rows = last[0] - first[0] + 1;
    grid.cols = last[1] - first[1] + 1;
    return grid.rows * grid.cols == domain.size();
}

int free_count(const std::vector<ExtendedField>& fields) {
    int n = 0;
    for (const auto& f : fields) n += f.is_finite();
    return n;
}

struct GridProblem {
    Grid grid;
    double beta;
    std::vector<double> fields;
    std::vector<std::int8_t> clamps;

    double log_weight() const { return grid_log_weight(grid.rows, grid.cols, beta, fields, clamps); }
};

GridProblem grid_problem(const LatticeDomain& domain, const Grid& grid, double beta,
                         const std::vector<ExtendedField>& fields, const std::vector<int>& boundary_signs) {
    GridProblem p{grid, beta, boundary_field(domain, beta, boundary_signs), std::vector<std::int8_t>(domain.size(), 0)};
    for (int i = 0; i < domain.size(); ++i) {
        if (fields[i].is_finite())
            p.fields[i] += fields[i].value();
        else
            p.clamps[i] = static_cast<std::int8_t>(fields[i].infinite_sign());
    }
    return p;
}

void check_window(const LatticeDomain& domain, const std::vector<int>& window) {
    for (int v : window)
        if (v < 0 || v >= domain.size()) throw ValidationError("window site " + std::to_string(v) + " is not in V");
}

// beta = 0: independent spins, mu(sigma_i = +1) = 1 / (1 + exp(-2 h_i)).
double independent_plus(ExtendedField h) {
    if (!h.is_finite()) return h.infinite_sign() > 0 ? 1.0 : 0.0;
    return 1.0 / (1.0 + std::exp(-2.0 * h.value()));
}

}  // namespace

LatticeBackend select_backend(const LatticeDomain& domain, const LatticeExactOptions& options) {
    Grid grid;
    const bool grid_ok = as_grid(domain, grid);
    switch (options.backend) {
        case LatticeBackend::enumeration:
            return LatticeBackend::enumeration;
        case LatticeBackend::transfer_matrix:
            if (!grid_ok) throw CapacityError("transfer matrix needs a full two-dimensional rectangle");
            return LatticeBackend::transfer_matrix;
        case LatticeBackend::automatic:
            break;
    }
    if (domain.size() <= options.engine.max_vertices) return LatticeBackend::enumeration;
    if (grid_ok && std::min(grid.rows, grid.cols) <= kMaxTransferWidth) return LatticeBackend::transfer_matrix;
    throw CapacityError("domain of " + std::to_string(domain.size()) +
                        " sites is beyond exact computation; use the coupled-mc method");
}

std::vector<double> lattice_window_law(const LatticeDomain& domain, double beta,
                                       const std::vector<ExtendedField>& fields,
                                       const std::vector<int>& boundary_signs, const std::vector<int>& window,
                                       const LatticeExactOptions& options) {
    check_window(domain, window);
    const LatticeBackend backend = select_backend(domain, options);
    const std::size_t patterns = std::size_t{1} << window.size();
    std::vector<double> law(patterns, 0.0);
    if (beta == 0.0) {
        for (std::size_t p = 0; p < patterns; ++p) {
            law[p] = 1.0;
            for (std::size_t k = 0; k < window.size(); ++k) {
                const double q = independent_plus(fields[window[k]]);
                law[p] *= (p >> k) & 1u ? q : 1.0 - q;
            }
        }
        return law;
    }
    if (backend == LatticeBackend::enumeration) {
        if (free_count(fields) > options.engine.max_vertices)
            throw CapacityError("domain of " + std::to_string(domain.size()) +
                                " sites is beyond exact enumeration; use the coupled-mc method");
        ExactQuery q;
        q.window = window;
        const ExactStats st = exact_stats(folded_instance(domain, beta, fields, boundary_signs), q, options.engine);
        for (std::size_t p = 0; p < patterns; ++p) law[p] = st.window_probability(p);
        return law;
    }
    if (static_cast<int>(window.size()) > kMaxTransferWindow)
        throw CapacityError("window of " + std::to_string(window.size()) + " spins is too large to tabulate");
    Grid grid;
    as_grid(domain, grid);
    GridProblem base = grid_problem(domain, grid, beta, fields, boundary_signs);
    const double log_z = base.log_weight();
    for (std::size_t p = 0; p < patterns; ++p) {
        GridProblem clamped = base;
        bool consistent = true;
        for (std::size_t k = 0; k < window.size(); ++k) {
            const std::int8_t s = (p >> k) & 1u ? 1 : -1;
            std::int8_t& c = clamped.clamps[window[k]];
            if (c != 0 && c != s) consistent = false;
            c = s;
        }
        if (consistent) law[p] = std::exp(clamped.log_weight() - log_z);
    }
    return law;
}

std::vector<double> lattice_magnetizations(const LatticeDomain& domain, double beta,
                                           const std::vector<ExtendedField>& fields,
                                           const std::vector<int>& boundary_signs, const std::vector<int>& sites,
                                           const LatticeExactOptions& options) {
    check_window(domain, sites);
    const LatticeBackend backend = select_backend(domain, options);
    std::vector<double> out;
    if (beta == 0.0) {
        for (int v : sites) out.push_back(2.0 * independent_plus(fields[v]) - 1.0);
        return out;
    }
    if (backend == LatticeBackend::enumeration) {
        ExactQuery q;
        q.vertices = sites;
        const ExactStats st = exact_stats(folded_instance(domain, beta, fields, boundary_signs), q, options.engine);
        for (std::size_t k = 0; k < sites.size(); ++k) out.push_back(st.magnetizations[k]);
        return out;
    }
    Grid grid;
    as_grid(domain, grid);
    const GridProblem base = grid_problem(domain, grid, beta, fields, boundary_signs);
    for (int v : sites) {
        if (base.clamps[v] != 0) {
            out.push_back(base.clamps[v]);
            continue;
        }
        GridProblem plus = base, minus = base;
        plus.clamps[v] = 1;
        minus.clamps[v] = -1;
        out.push_back(spin_mean_from_logs(plus.log_weight(), minus.log_weight()));
    }
    return out;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw ValidationError("distributions differ in support size");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::fabs(p[i] - q[i]);
    return 0.5 * s;
}

}  // namespace ising
