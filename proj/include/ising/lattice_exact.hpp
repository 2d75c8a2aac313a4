#pragma once

#include <string>
#include <vector>

#include "ising/exact.hpp"
#include "ising/lattice.hpp"

namespace ising {

enum class LatticeBackend { automatic, enumeration, transfer_matrix };

const char* to_string(LatticeBackend backend);

inline constexpr int kMaxTransferWindow = 16;

struct LatticeExactOptions {
    EngineOptions engine;
    LatticeBackend backend = LatticeBackend::automatic;
};

// Backend actually used: enumeration while |V| fits the engine cap, else the
// transfer matrix for full 2-d rectangles. CapacityError otherwise.
LatticeBackend select_backend(const LatticeDomain& domain, const LatticeExactOptions& options);

// Joint law of the window spins on V under boundary signs (0 = free). Entry p
// has bit k set <=> window[k] = +1.
std::vector<double> lattice_window_law(const LatticeDomain& domain, double beta,
                                       const std::vector<ExtendedField>& fields,
                                       const std::vector<int>& boundary_signs, const std::vector<int>& window,
                                       const LatticeExactOptions& options = {});

std::vector<double> lattice_magnetizations(const LatticeDomain& domain, double beta,
                                           const std::vector<ExtendedField>& fields,
                                           const std::vector<int>& boundary_signs, const std::vector<int>& sites,
                                           const LatticeExactOptions& options = {});

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace ising
