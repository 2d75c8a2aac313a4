#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ising/exact.hpp"
#include "ising/instance.hpp"

namespace ising {

inline constexpr double kDefaultTolerance = 1e-9;

struct InequalityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
    bool holds = true;    // margin >= -tolerance
    double tolerance = kDefaultTolerance;
    std::string instance_digest;
};

InequalityReport make_report(double lhs, double rhs, double tolerance, std::string digest);
nlohmann::json to_json(const InequalityReport& r);
InequalityReport report_from_json(const nlohmann::json& j);

// 16 hex digits of FNV-1a over the compact JSON dump.
std::string stable_digest(const nlohmann::json& j);

// Boundary influence at o: compares g +- h against +-h.
struct InfluenceQuery {
    IsingInstance instance;  // carries g
    std::vector<ExtendedField> h;
    int o = 0;
};

nlohmann::json to_json(const InfluenceQuery& q);
// Throws ValidationError on length mismatch / negative h, DomainError when
// min{|g_v|, h_v} is infinite for some v.
void validate(const InfluenceQuery& q);

// lhs = <s_o>_{g+h} - <s_o>_{g-h}, rhs = <s_o>_h - <s_o>_{-h}.
InequalityReport check_boundary_influence(const InfluenceQuery& q, double tolerance = kDefaultTolerance,
                                          const EngineOptions& options = {});
// Same check for every target vertex from four enumerations.
std::vector<InequalityReport> check_boundary_influence_all_targets(const IsingInstance& instance,
                                                                   const std::vector<ExtendedField>& h,
                                                                   double tolerance = kDefaultTolerance,
                                                                   const EngineOptions& options = {});

// Boundary conditions +-inf on `boundary`, interior field g versus zero interior
// field. Throws DomainError if o is on the boundary or g is infinite off it.
InequalityReport check_boundary_condition_influence(const IsingInstance& instance, const std::vector<int>& boundary,
                                                    int o, double tolerance = kDefaultTolerance,
                                                    const EngineOptions& options = {});

// lhs = Cov_g(s_u, s_v), rhs = <s_u s_v>_0 on the same graph and beta.
InequalityReport check_correlation(const IsingInstance& instance, int u, int v, double tolerance = kDefaultTolerance,
                                   const EngineOptions& options = {});

struct GhsScan {
    std::vector<double> grid;
    std::vector<double> covariances;
    bool monotone = true;         // non-increasing up to tolerance
    double worst_increase = 0.0;  // max over consecutive steps of cov[k+1] - cov[k]
};

// Covariance of (u, v) under scale * g_tilde along an ascending grid.
// Throws DomainError for negative g_tilde entries unless validate_sign is false.
GhsScan ghs_monotonicity_scan(const IsingInstance& instance, const std::vector<ExtendedField>& g_tilde, int u, int v,
                              const std::vector<double>& grid, double tolerance = kDefaultTolerance,
                              bool validate_sign = true, const EngineOptions& options = {});

// tanh(g + h) - tanh(g - h): the single-spin boundary influence.
double single_spin_gap(double g, double h);

// Connected simple graphs on n vertices, one per isomorphism class, as edge lists.
std::vector<std::vector<std::pair<int, int>>> connected_graphs_up_to_isomorphism(int n);

struct ExhaustiveSummary {
    int graphs = 0;
    long long instances = 0;  // (graph, J, g, h) tuples
    long long checks = 0;     // instances x targets
    long long violations = 0;
    double worst_margin = 0.0;
    std::string worst_digest;
};

// Every connected graph on 1..max_n vertices, J in {0.5, 1.5}^E,
// g in {-2, -0.5, 0, 0.5, 2}^V, h in {0, 1, inf}^V, every target.
ExhaustiveSummary exhaustive_theorem_check(int max_n, double tolerance);

nlohmann::json to_json(const ExhaustiveSummary& s);

}  // namespace ising
