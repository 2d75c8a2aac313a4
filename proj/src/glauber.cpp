#include "ising/glauber.hpp"

#include <cmath>
#include <limits>

#include "ising/errors.hpp"

namespace ising {

const char* to_string(ScanOrder order) { return order == ScanOrder::systematic ? "systematic" : "random"; }

ScanOrder scan_order_from_string(const std::string& name) {
    if (name == "systematic") return ScanOrder::systematic;
    if (name == "random") return ScanOrder::random;
    throw ValidationError("unknown scan order '" + name + "'");
}

CoupledChains extremal_chains(const LatticeDomain& domain) {
    CoupledChains c;
    c.upper.assign(domain.size(), 1);
    c.lower.assign(domain.size(), -1);
    return c;
}

int ordering_violations(const CoupledChains& chains) {
    int bad = 0;
    for (std::size_t i = 0; i < chains.upper.size(); ++i) bad += chains.lower[i] > chains.upper[i];
    return bad;
}

namespace {

double plus_probability(ExtendedField omega, double field) {
    if (!omega.is_finite()) return omega.infinite_sign() > 0 ? 1.0 : 0.0;
    return 1.0 / (1.0 + std::exp(-2.0 * (omega.value() + field)));
}

}  // namespace

HeatBath::HeatBath(const LatticeDomain& domain, double beta, const std::vector<ExtendedField>& omega,
                   const std::vector<int>& upper_boundary, const std::vector<int>& lower_boundary)
    : domain_(&domain), beta_(beta), omega_(omega) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be finite and non-negative");
    if (static_cast<int>(omega.size()) != domain.size()) throw ValidationError("field length does not match the domain");
    if (static_cast<int>(upper_boundary.size()) != domain.boundary_size() ||
        static_cast<int>(lower_boundary.size()) != domain.boundary_size())
        throw ValidationError("boundary condition length does not match the boundary");
    for (int b = 0; b < domain.boundary_size(); ++b)
        if (upper_boundary[b] < lower_boundary[b])
            throw ValidationError("upper boundary condition must dominate the lower one");
    boundary_upper_ = boundary_field(domain, beta, upper_boundary);
    boundary_lower_ = boundary_field(domain, beta, lower_boundary);
    offset_.resize(domain.size() + 1, 0);
    for (int i = 0; i < domain.size(); ++i) offset_[i + 1] = offset_[i] + domain.neighbors(i).size() + 1;
    table_upper_.resize(offset_.back());
    table_lower_.resize(offset_.back());
    for (int i = 0; i < domain.size(); ++i) {
        const int degree = static_cast<int>(domain.neighbors(i).size());
        for (int k = 0; k <= degree; ++k) {
            const double coupling = beta * (2 * k - degree);
            table_upper_[offset_[i] + k] = plus_probability(omega[i], coupling + boundary_upper_[i]);
            table_lower_[offset_[i] + k] = plus_probability(omega[i], coupling + boundary_lower_[i]);
        }
    }
}

double HeatBath::probability(int site, int neighbor_sum, bool upper) const {
    const int degree = static_cast<int>(domain_->neighbors(site).size());
    const auto& table = upper ? table_upper_ : table_lower_;
    return table[offset_[site] + (neighbor_sum + degree) / 2];
}

double HeatBath::local_field(const CoupledChains& chains, int site, bool upper) const {
    const ExtendedField w = omega_[site];
    if (!w.is_finite())
        return w.infinite_sign() * std::numeric_limits<double>::infinity();
    const auto& spins = upper ? chains.upper : chains.lower;
    int sum = 0;
    for (int j : domain_->neighbors(site)) sum += spins[j];
    return w.value() + beta_ * sum + (upper ? boundary_upper_[site] : boundary_lower_[site]);
}

double HeatBath::local_mean(const CoupledChains& chains, int site, bool upper) const {
    return std::tanh(local_field(chains, site, upper));
}

void HeatBath::update(CoupledChains& chains, int site, double u) const {
    int su = 0, sl = 0;
    for (int j : domain_->neighbors(site)) {
        su += chains.upper[j];
        sl += chains.lower[j];
    }
    chains.upper[site] = u < probability(site, su, true) ? 1 : -1;
    chains.lower[site] = u < probability(site, sl, false) ? 1 : -1;
}

void HeatBath::sweep(CoupledChains& chains, Rng& rng, ScanOrder order) const {
    const int n = domain_->size();
    if (order == ScanOrder::systematic) {
        for (int i = 0; i < n; ++i) update(chains, i, rng.uniform());
    } else {
        for (int k = 0; k < n; ++k) {
            const int i = static_cast<int>(rng.uniform_int(0, n - 1));
            update(chains, i, rng.uniform());
        }
    }
    ++chains.sweeps;
}

void glauber_sweep(CoupledChains& chains, const HeatBath& kernel, Rng& rng, ScanOrder order) {
    kernel.sweep(chains, rng, order);
}

}  // namespace ising
