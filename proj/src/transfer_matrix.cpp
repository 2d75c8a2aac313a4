#include "ising/transfer_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ising/errors.hpp"

namespace ising {

double grid_log_weight(int rows, int cols, double beta, std::span<const double> fields,
                       std::span<const std::int8_t> clamps) {
    if (rows < 1 || cols < 1) throw ValidationError("grid must have at least one row and column");
    const std::size_t n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    if (fields.size() != n || clamps.size() != n) throw ValidationError("grid field or clamp length mismatch");
    const bool transpose = cols > rows;
    const int width = transpose ? rows : cols;
    const int height = transpose ? cols : rows;
    if (width > kMaxTransferWidth)
        throw CapacityError("transfer width " + std::to_string(width) + " exceeds " +
                            std::to_string(kMaxTransferWidth));
    auto site = [&](int r, int c) { return transpose ? static_cast<std::size_t>(c) * cols + r
                                                     : static_cast<std::size_t>(r) * cols + c; };

    // Frontier holds the last `width` spins; bit c is column c, set <=> +1.
    const std::size_t states = std::size_t{1} << width;
    std::vector<double> v(states, 0.0), next(states);
    v[0] = 1.0;  // row 0 overwrites zero placeholders, so each bit is summed once
    double log_scale = 0.0;
    const double bond[2] = {std::exp(-beta), std::exp(beta)};  // [aligned]
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const std::size_t i = site(r, c);
            const std::size_t bit = std::size_t{1} << c;
            const std::size_t left = c > 0 ? bit >> 1 : 0;
            double weight[2];
            weight[1] = clamps[i] < 0 ? 0.0 : std::exp(fields[i]);
            weight[0] = clamps[i] > 0 ? 0.0 : std::exp(-fields[i]);
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t s = 0; s < states; ++s) {
                const double x = v[s];
                if (x == 0.0) continue;
                const int up = (s & bit) ? 1 : 0;
                const int lf = (s & left) ? 1 : 0;
                for (int spin = 0; spin < 2; ++spin) {
                    if (weight[spin] == 0.0) continue;
                    double w = weight[spin];
                    if (r > 0) w *= bond[spin == up];
                    if (c > 0) w *= bond[spin == lf];
                    next[spin ? (s | bit) : (s & ~bit)] += x * w;
                }
            }
            const double peak = *std::max_element(next.begin(), next.end());
            if (peak == 0.0) return -std::numeric_limits<double>::infinity();
            for (auto& x : next) x /= peak;
            log_scale += std::log(peak);
            v.swap(next);
        }
    }
    double total = 0.0;
    for (double x : v) total += x;
    return log_scale + std::log(total);
}

}  // namespace ising
