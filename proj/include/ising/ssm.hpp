#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ising/decay_fit.hpp"
#include "ising/lattice.hpp"
#include "ising/lattice_exact.hpp"
#include "ising/monte_carlo.hpp"

namespace ising {

// tau on the boundary of V; flip is a boundary index (-1: no flip, tau^y = tau).
struct SSMQuery {
    LatticeDomain domain;
    double beta = 0.3;
    std::vector<double> h;
    std::vector<int> tau;
    int flip = -1;
    std::vector<int> window;
};

void validate(const SSMQuery& q);
nlohmann::json to_json(const SSMQuery& q);
// l1 distance from the flipped boundary site to the window; -1 without a flip.
int ssm_distance(const SSMQuery& q);
std::vector<int> flipped_tau(const SSMQuery& q);

enum class SsmMethod { exact, coupled_mc };
const char* to_string(SsmMethod m);
SsmMethod ssm_method_from_string(const std::string& s);

struct SsmEstimate {
    SsmMethod method = SsmMethod::exact;
    double tv = 0.0;
    double std_error = 0.0;  // 0 for exact
    int distance = -1;
    std::string backend;
};

nlohmann::json to_json(const SsmEstimate& e);

// coupled-mc reports the frequency of any disagreement on the window between
// chains under the two boundary conditions, an upper bound on TV.
SsmEstimate ssm_estimate(const SSMQuery& q, SsmMethod method, const McOptions& budget = {},
                         const LatticeExactOptions& options = {});

struct SphereStep {
    int site = 0;
    std::vector<int> coords;
    double max_disagreement = 0.0;  // over histories where both chains agree so far
    double theorem_bound = 0.0;     // <sigma_site> on V, free boundary, field beta next to y
};

// Sequential maximal coupling of S n V in lexicographic order, S the l1 sphere
// of radius floor(d/2) about y; the window itself when that radius is 0.
// Expected chain: theorem_total >= union_bound >= coupling_failure >= tv_sphere >= tv_window.
struct SphereCouplingTrace {
    int distance = 0;
    int radius = 0;
    bool window_used = false;
    std::vector<SphereStep> steps;
    double union_bound = 0.0;  // raw sum, may exceed 1
    double theorem_total = 0.0;
    double coupling_failure = 0.0;
    double tv_sphere = 0.0;
    double tv_window = 0.0;
    bool valid = false;
};

SphereCouplingTrace sphere_coupling(const SSMQuery& q, const LatticeExactOptions& options = {});
nlohmann::json to_json(const SphereCouplingTrace& t);

struct TvProfilePoint {
    int flip = 0;
    std::vector<int> y;
    int distance = 0;
    double tv = 0.0;
};

// Exact window TV for every boundary flip.
std::vector<TvProfilePoint> ssm_tv_profile(const SSMQuery& base, const LatticeExactOptions& options = {});
nlohmann::json to_json(const TvProfilePoint& p);

// Largest increase of TV between any two flips with d(y) < d(y'), i.e.
// max(TV(y') - TV(y)); <= 0 means non-increasing in distance.
double worst_distance_increase(const std::vector<TvProfilePoint>& profile);

}  // namespace ising
