#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ising/extended_field.hpp"
#include "ising/lattice.hpp"
#include "ising/random.hpp"

namespace ising {

enum class ScanOrder { systematic, random };

const char* to_string(ScanOrder order);
ScanOrder scan_order_from_string(const std::string& name);

// Two spin states on V driven by the same noise. Invariant: lower <= upper.
struct CoupledChains {
    std::vector<std::int8_t> upper;
    std::vector<std::int8_t> lower;
    long long sweeps = 0;
};

CoupledChains extremal_chains(const LatticeDomain& domain);
// Sites where lower > upper.
int ordering_violations(const CoupledChains& chains);

// Heat-bath kernel pair for boundary conditions upper >= lower. P(+) at a site
// is 1 / (1 + exp(-2L)) with L = omega + beta (sum of neighbour spins).
class HeatBath {
public:
    HeatBath(const LatticeDomain& domain, double beta, const std::vector<ExtendedField>& omega,
             const std::vector<int>& upper_boundary, const std::vector<int>& lower_boundary);

    const LatticeDomain& domain() const { return *domain_; }
    double beta() const { return beta_; }
    // Local field of a site in one chain; +-inf when omega is.
    double local_field(const CoupledChains& chains, int site, bool upper) const;
    // E[sigma_site | neighbours] in one chain.
    double local_mean(const CoupledChains& chains, int site, bool upper) const;
    void update(CoupledChains& chains, int site, double u) const;
    void sweep(CoupledChains& chains, Rng& rng, ScanOrder order = ScanOrder::systematic) const;

private:
    double probability(int site, int neighbor_sum, bool upper) const;

    const LatticeDomain* domain_;
    double beta_;
    std::vector<ExtendedField> omega_;
    std::vector<double> boundary_upper_;
    std::vector<double> boundary_lower_;
    std::vector<std::size_t> offset_;
    std::vector<double> table_upper_;  // per site, index (sum + degree) / 2
    std::vector<double> table_lower_;
};

void glauber_sweep(CoupledChains& chains, const HeatBath& kernel, Rng& rng, ScanOrder order = ScanOrder::systematic);

}  // namespace ising
