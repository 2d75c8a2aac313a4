#include "ising/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>

#include "ising/errors.hpp"

namespace ising {

LatticeDomain::LatticeDomain(int dim, std::vector<std::vector<int>> sites) : dim_(dim), sites_(std::move(sites)) {
    if (dim < 1) throw ValidationError("lattice dimension must be at least 1");
    for (const auto& x : sites_)
        if (static_cast<int>(x.size()) != dim) throw ValidationError("site coordinate has the wrong dimension");
    std::sort(sites_.begin(), sites_.end());
    if (std::adjacent_find(sites_.begin(), sites_.end()) != sites_.end())
        throw ValidationError("duplicate lattice site");

    std::map<std::vector<int>, int> outside;
    neighbors_.resize(sites_.size());
    for (int i = 0; i < size(); ++i) {
        for (int axis = 0; axis < dim_; ++axis) {
            for (int step : {-1, 1}) {
                auto y = sites_[i];
                y[axis] += step;
                const int j = index_of(y);
                if (j >= 0)
                    neighbors_[i].push_back(j);
                else
                    outside.emplace(std::move(y), 0);
            }
        }
        std::sort(neighbors_[i].begin(), neighbors_[i].end());
    }
    int b = 0;
    for (auto& [x, id] : outside) {
        id = b++;
        boundary_.push_back(x);
    }
    boundary_neighbors_.resize(sites_.size());
    attachments_.resize(boundary_.size());
    for (int i = 0; i < size(); ++i) {
        for (int axis = 0; axis < dim_; ++axis) {
            for (int step : {-1, 1}) {
                auto y = sites_[i];
                y[axis] += step;
                const auto it = outside.find(y);
                if (it == outside.end()) continue;
                boundary_neighbors_[i].push_back(it->second);
                attachments_[it->second].push_back(i);
            }
        }
    }
}

int LatticeDomain::index_of(const std::vector<int>& x) const {
    const auto it = std::lower_bound(sites_.begin(), sites_.end(), x);
    return it != sites_.end() && *it == x ? static_cast<int>(it - sites_.begin()) : -1;
}

int LatticeDomain::boundary_index_of(const std::vector<int>& x) const {
    const auto it = std::lower_bound(boundary_.begin(), boundary_.end(), x);
    return it != boundary_.end() && *it == x ? static_cast<int>(it - boundary_.begin()) : -1;
}

std::vector<std::pair<int, int>> LatticeDomain::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < size(); ++i)
        for (int j : neighbors_[i])
            if (i < j) out.emplace_back(i, j);
    return out;
}

int l1_distance(const std::vector<int>& x, const std::vector<int>& y) {
    int d = 0;
    for (std::size_t k = 0; k < x.size(); ++k) d += std::abs(x[k] - y[k]);
    return d;
}

std::size_t box_memory_estimate(int dim, int radius) {
    // coordinates, adjacency and two spin copies per site of the padded box
    const double per_site = 8.0 * dim + 24.0 * dim + 64.0;
    const double sites = std::pow(2.0 * radius + 3.0, dim);
    const double bytes = sites * per_site;
    return bytes > 1e18 ? static_cast<std::size_t>(1e18) : static_cast<std::size_t>(bytes);
}

LatticeDomain build_box(int dim, int radius, std::size_t memory_cap) {
    if (dim < 1) throw ValidationError("dim must be at least 1");
    if (radius < 0) throw ValidationError("radius must be non-negative");
    const std::size_t estimate = box_memory_estimate(dim, radius);
    if (estimate > memory_cap)
        throw CapacityError("box of dimension " + std::to_string(dim) + " and radius " + std::to_string(radius) +
                            " needs about " + std::to_string(estimate) + " bytes, above the cap of " +
                            std::to_string(memory_cap));
    const int side = 2 * radius + 1;
    std::size_t count = 1;
    for (int k = 0; k < dim; ++k) count *= static_cast<std::size_t>(side);
    std::vector<std::vector<int>> sites;
    sites.reserve(count);
    std::vector<int> x(dim, -radius);
    for (std::size_t n = 0; n < count; ++n) {
        sites.push_back(x);
        for (int axis = dim - 1; axis >= 0; --axis) {
            if (++x[axis] <= radius) break;
            x[axis] = -radius;
        }
    }
    return LatticeDomain(dim, std::move(sites));
}

int box_origin(const LatticeDomain& box) { return box.index_of(std::vector<int>(box.dim(), 0)); }

namespace {

void check_lengths(const LatticeDomain& domain, const std::vector<ExtendedField>& omega,
                   const std::vector<int>& boundary_signs) {
    if (static_cast<int>(omega.size()) != domain.size())
        throw ValidationError("field length " + std::to_string(omega.size()) + " does not match " +
                              std::to_string(domain.size()) + " sites");
    if (static_cast<int>(boundary_signs.size()) != domain.boundary_size())
        throw ValidationError("boundary condition length does not match the boundary");
    for (int s : boundary_signs)
        if (s < -1 || s > 1) throw ValidationError("boundary signs must be -1, 0 or +1");
}

}  // namespace

std::vector<double> boundary_field(const LatticeDomain& domain, double beta, const std::vector<int>& boundary_signs) {
    std::vector<double> out(domain.size(), 0.0);
    for (int i = 0; i < domain.size(); ++i)
        for (int b : domain.boundary_neighbors(i)) out[i] += beta * boundary_signs[b];
    return out;
}

IsingInstance lattice_instance(const LatticeDomain& domain, double beta, const std::vector<ExtendedField>& omega,
                               const std::vector<int>& boundary_signs) {
    check_lengths(domain, omega, boundary_signs);
    const int n = domain.size();
    std::vector<Edge> edges;
    for (auto [i, j] : domain.edges()) edges.push_back({i, j, 1.0});
    for (int b = 0; b < domain.boundary_size(); ++b)
        for (int i : domain.boundary_attachments(b)) edges.push_back({i, n + b, 1.0});
    std::vector<ExtendedField> fields = omega;
    for (int s : boundary_signs)
        fields.push_back(s > 0 ? ExtendedField::plus_infinity() : s < 0 ? ExtendedField::minus_infinity() : 0.0);
    return build_instance(IsingGraph(n + domain.boundary_size(), edges), beta, std::move(fields));
}

IsingInstance folded_instance(const LatticeDomain& domain, double beta, const std::vector<ExtendedField>& omega,
                              const std::vector<int>& boundary_signs) {
    check_lengths(domain, omega, boundary_signs);
    std::vector<Edge> edges;
    for (auto [i, j] : domain.edges()) edges.push_back({i, j, 1.0});
    const auto extra = boundary_field(domain, beta, boundary_signs);
    std::vector<ExtendedField> fields;
    for (int i = 0; i < domain.size(); ++i) fields.push_back(omega[i] + ExtendedField(extra[i]));
    return build_instance(IsingGraph(domain.size(), edges), beta, std::move(fields));
}

}  // namespace ising
