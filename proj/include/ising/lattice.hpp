#pragma once

#include <cstddef>
#include <vector>

#include "ising/instance.hpp"

namespace ising {

inline constexpr std::size_t kDefaultLatticeMemoryCap = std::size_t{1} << 30;

// Finite V in Z^d with its outer vertex boundary. Sites and boundary sites are
// in lexicographic coordinate order.
class LatticeDomain {
public:
    LatticeDomain(int dim, std::vector<std::vector<int>> sites);

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(sites_.size()); }
    int boundary_size() const { return static_cast<int>(boundary_.size()); }
    const std::vector<int>& site(int i) const { return sites_[i]; }
    const std::vector<int>& boundary_site(int b) const { return boundary_[b]; }
    // Neighbours inside V.
    const std::vector<int>& neighbors(int i) const { return neighbors_[i]; }
    // Boundary neighbours of a site, as boundary indices.
    const std::vector<int>& boundary_neighbors(int i) const { return boundary_neighbors_[i]; }
    // Sites of V adjacent to a boundary site.
    const std::vector<int>& boundary_attachments(int b) const { return attachments_[b]; }
    // -1 when the coordinate is not in V.
    int index_of(const std::vector<int>& x) const;
    int boundary_index_of(const std::vector<int>& x) const;
    std::vector<std::pair<int, int>> edges() const;

private:
    int dim_;
    std::vector<std::vector<int>> sites_;
    std::vector<std::vector<int>> boundary_;
    std::vector<std::vector<int>> neighbors_;
    std::vector<std::vector<int>> boundary_neighbors_;
    std::vector<std::vector<int>> attachments_;
};

int l1_distance(const std::vector<int>& x, const std::vector<int>& y);

// Lambda_N = [-N, N]^d. N = 0 gives the single-site box.
LatticeDomain build_box(int dim, int radius, std::size_t memory_cap = kDefaultLatticeMemoryCap);
std::size_t box_memory_estimate(int dim, int radius);
int box_origin(const LatticeDomain& box);

// Ising instance on V followed by the boundary sites, J = 1 on every lattice
// edge. Boundary sign 0 leaves that boundary vertex free with zero field.
IsingInstance lattice_instance(const LatticeDomain& domain, double beta, const std::vector<ExtendedField>& omega,
                               const std::vector<int>& boundary_signs);

// Same measure on V alone: boundary spins folded into the fields of V.
IsingInstance folded_instance(const LatticeDomain& domain, double beta, const std::vector<ExtendedField>& omega,
                              const std::vector<int>& boundary_signs);

// beta times the sum of boundary signs adjacent to each site of V.
std::vector<double> boundary_field(const LatticeDomain& domain, double beta, const std::vector<int>& boundary_signs);

}  // namespace ising
