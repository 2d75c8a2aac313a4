#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

#include <json.hpp>

namespace ising {

// One point of the scalar inequality behind the induction step, in the
// variables a = tanh x, b = tanh y, c = tanh h_v, d = tanh H.
struct LemmaPoint {
    double theta = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double c_plus = 0.0;   // sin^2 theta
    double c_minus = 0.0;  // cos^2 theta
    double alpha = 0.0;    // (1 - c) / (1 + (a - b) c / 2)
    double m_theta = 0.0;  // sup over d of lemma_objective
    double m_theta_argmax = 0.0;
    double f_value = 0.0;
    std::optional<double> d_witness;
    double witness_slack_first = 0.0;   // (1+ad)/(1-d) - (1+ac)/(1+(a-b)c/2)
    double witness_slack_second = 0.0;  // (1+bd)/(1+d) - (1-bc)/(1+(a-b)c/2)
    double lhs_sum = 0.0;               // sum of the two left-hand sides, 2 in exact arithmetic
};

// sin^2 theta (a+d)/(1+ad) - cos^2 theta (b+d)/(1+bd)
double lemma_objective(double theta, double a, double b, double d);

struct LemmaSup {
    double value;
    double argmax;
};

// Supremum of lemma_objective over d in [-1, 1]. The derivative changes sign at
// most once, so the maximum is at an endpoint or at the single critical point.
LemmaSup lemma_sup(double theta, double a, double b);

// F in its unsimplified form: sin^2 (a+c)/(1+ac) - cos^2 (b-c)/(1-bc) + alpha (1 - M) - 1.
double lemma_f_unsimplified(double theta, double a, double b, double c, double m_theta);

// Throws DomainError unless 0 <= theta <= pi/2, -1 < b <= a < 1, 0 <= c < 1.
LemmaPoint lemma_point(double theta, double a, double b, double c);

nlohmann::json to_json(const LemmaPoint& p);

struct LemmaCampaignSummary {
    long long points = 0;
    double max_f = -1.0;
    double min_witness_slack = 1.0;
    long long missing_witness = 0;
    double max_lhs_sum_error = 0.0;
};

// Random points: theta uniform, (a, b) sorted from tanh of uniform(-6, 6) or
// uniform(-1, 1) with equal odds, c = tanh of uniform(0, 6) or uniform[0, 1).
// Calls visit(point) when given.
template <class Visit>
LemmaCampaignSummary lemma_campaign(std::uint64_t seed, long long count, Visit&& visit);
LemmaCampaignSummary lemma_campaign(std::uint64_t seed, long long count);

nlohmann::json to_json(const LemmaCampaignSummary& s);

// Draws the k-th campaign point.
struct LemmaParameters {
    double theta, a, b, c;
};
LemmaParameters lemma_random_parameters(std::uint64_t seed, long long index);

template <class Visit>
LemmaCampaignSummary lemma_campaign(std::uint64_t seed, long long count, Visit&& visit) {
    LemmaCampaignSummary s;
    for (long long k = 0; k < count; ++k) {
        const auto p = lemma_random_parameters(seed, k);
        const LemmaPoint pt = lemma_point(p.theta, p.a, p.b, p.c);
        ++s.points;
        s.max_f = std::max(s.max_f, pt.f_value);
        if (!pt.d_witness) {
            ++s.missing_witness;
        } else {
            s.min_witness_slack = std::min({s.min_witness_slack, pt.witness_slack_first, pt.witness_slack_second});
        }
        s.max_lhs_sum_error = std::max(s.max_lhs_sum_error, std::abs(pt.lhs_sum - 2.0));
        visit(pt);
    }
    return s;
}

}  // namespace ising
