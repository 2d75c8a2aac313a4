#pragma once

#include <cstdint>
#include <span>

namespace ising {

inline constexpr int kMaxTransferWidth = 20;

// log of sum over spins of exp(beta sum_<ij> s_i s_j + sum_i h_i s_i) on a
// rows x cols square grid, sites row-major. clamps[i] = +-1 fixes s_i (its
// field term is kept); 0 leaves it free. Returns -inf when no configuration is
// allowed. The shorter side is used as the transfer direction.
double grid_log_weight(int rows, int cols, double beta, std::span<const double> fields,
                       std::span<const std::int8_t> clamps);

}  // namespace ising
