#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ising/decay_fit.hpp"
#include "ising/lattice.hpp"
#include "ising/lattice_exact.hpp"
#include "ising/monte_carlo.hpp"

namespace ising {

enum class FieldKind { zero, gaussian, rademacher, explicit_values, plus_infinity };

// omega on the interior. gaussian: N(0, scale^2); rademacher: +-scale.
struct FieldSpec {
    FieldKind kind = FieldKind::zero;
    double scale = 1.0;
    std::vector<ExtendedField> values;
};

// "zero", "+inf", "gaussian:<sigma>", "rademacher:<eps>".
FieldSpec field_spec_from_string(const std::string& text);
nlohmann::json to_json(const FieldSpec& spec);
FieldSpec field_spec_from_json(const nlohmann::json& j);

// One realization, each site seeded from derive_seed(seed, "omega,<coords>", 0)
// so nested boxes share the field on their common sites.
std::vector<ExtendedField> realize_field(const FieldSpec& spec, const LatticeDomain& domain, std::uint64_t seed);

struct BoxInfluence {
    double plus = 0.0;   // <sigma_0>^{omega,+}
    double minus = 0.0;  // <sigma_0>^{omega,-}
    double difference = 0.0;
    LatticeBackend backend = LatticeBackend::enumeration;
};

BoxInfluence exact_box_influence(const LatticeDomain& box, double beta, const std::vector<ExtendedField>& omega,
                                 const LatticeExactOptions& options = {});

// Coupled +/- boundary chains; observable tanh(L+_0) - tanh(L-_0) at the origin.
McEstimate mc_box_influence(const LatticeDomain& box, double beta, const std::vector<ExtendedField>& omega,
                            const McOptions& options, const std::string& label);

struct RfimConfig {
    int dim = 2;
    std::vector<int> radii{1, 2, 3};
    double beta = 0.3;
    FieldSpec field;
    McOptions mc;
    int exact_max_sites = 26;  // exact oracle attached when |Lambda_N| is at most this
};

void validate(const RfimConfig& config);
nlohmann::json to_json(const RfimConfig& config);

struct RfimPoint {
    int radius = 0;
    int sites = 0;
    McEstimate lhs;  // random field
    McEstimate rhs;  // omega = 0
    std::optional<double> exact_lhs;
    std::optional<double> exact_rhs;
    bool dominated = true;  // lhs <= rhs + 3 combined standard errors
};

struct RfimResult {
    RfimConfig config;
    std::vector<RfimPoint> points;
    std::optional<DecayFit> fit;  // of rhs against N
    std::string fit_error;
    bool all_dominated = true;
};

RfimResult rfim_influence(const RfimConfig& config);
nlohmann::json to_json(const RfimResult& result);

}  // namespace ising
