#include "ising/lemma.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ising/errors.hpp"
#include "ising/random.hpp"

namespace ising {

using nlohmann::json;

double lemma_objective(double theta, double a, double b, double d) {
    const double sp = std::sin(theta) * std::sin(theta);
    const double cm = std::cos(theta) * std::cos(theta);
    return sp * (a + d) / (1.0 + a * d) - cm * (b + d) / (1.0 + b * d);
}

LemmaSup lemma_sup(double theta, double a, double b) {
    const double sp = std::sin(theta) * std::sin(theta);
    const double cm = std::cos(theta) * std::cos(theta);
    // sign of the derivative = sign of A(1+bd) - B(1+ad), linear in d
    const double A = std::sqrt(sp * (1.0 - a * a));
    const double B = std::sqrt(cm * (1.0 - b * b));
    LemmaSup best{lemma_objective(theta, a, b, -1.0), -1.0};
    const double at_one = lemma_objective(theta, a, b, 1.0);
    if (at_one > best.value) best = {at_one, 1.0};
    const double denom = A * b - B * a;
    if (denom != 0.0) {
        const double d = (B - A) / denom;
        if (d > -1.0 && d < 1.0) {
            const double v = lemma_objective(theta, a, b, d);
            if (v > best.value) best = {v, d};
        }
    }
    return best;
}

double lemma_f_unsimplified(double theta, double a, double b, double c, double m_theta) {
    const double sp = std::sin(theta) * std::sin(theta);
    const double cm = std::cos(theta) * std::cos(theta);
    const double alpha = (1.0 - c) / (1.0 + 0.5 * (a - b) * c);
    return sp * (a + c) / (1.0 + a * c) - cm * (b - c) / (1.0 - b * c) + alpha * (1.0 - m_theta) - 1.0;
}

namespace {

struct Witness {
    double d;
    double slack_first;
    double slack_second;
    double lhs_sum;
};

// Equality in the first inequality after reducing to a + b >= 0.
Witness find_witness(double a, double b, double c) {
    const bool mirrored = a + b < 0.0;
    const double ra = mirrored ? -b : a;
    const double rb = mirrored ? -a : b;
    const double scale = 1.0 + 0.5 * (ra - rb) * c;
    const double l1 = (1.0 + ra * c) / scale;
    const double d_reduced = (l1 - 1.0) / (l1 + ra);
    const double d = mirrored ? -d_reduced : d_reduced;

    const double s = 1.0 + 0.5 * (a - b) * c;
    const double lhs1 = (1.0 + a * c) / s;
    const double lhs2 = (1.0 - b * c) / s;
    return {d, (1.0 + a * d) / (1.0 - d) - lhs1, (1.0 + b * d) / (1.0 + d) - lhs2, lhs1 + lhs2};
}

}  // namespace

LemmaPoint lemma_point(double theta, double a, double b, double c) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2))
        throw DomainError("theta must lie in [0, pi/2], got " + std::to_string(theta));
    if (!(a > -1.0 && a < 1.0 && b > -1.0 && b < 1.0 && b <= a))
        throw DomainError("need -1 < b <= a < 1, got a=" + std::to_string(a) + " b=" + std::to_string(b));
    if (!(c >= 0.0 && c < 1.0)) throw DomainError("c must lie in [0, 1), got " + std::to_string(c));

    LemmaPoint p;
    p.theta = theta;
    p.a = a;
    p.b = b;
    p.c = c;
    p.c_plus = std::sin(theta) * std::sin(theta);
    p.c_minus = std::cos(theta) * std::cos(theta);
    const double s = 1.0 + 0.5 * (a - b) * c;
    p.alpha = (1.0 - c) / s;
    const LemmaSup sup = lemma_sup(theta, a, b);
    p.m_theta = sup.value;
    p.m_theta_argmax = sup.argmax;
    p.f_value = (1.0 - c) * ((1.0 - p.m_theta) / s -
                             (p.c_plus * (1.0 - a) / (1.0 + a * c) + p.c_minus * (1.0 + b) / (1.0 - b * c)));
    const Witness w = find_witness(a, b, c);
    if (w.d >= -1.0 && w.d <= 1.0) p.d_witness = w.d;
    p.witness_slack_first = w.slack_first;
    p.witness_slack_second = w.slack_second;
    p.lhs_sum = w.lhs_sum;
    return p;
}

json to_json(const LemmaPoint& p) {
    return json{{"theta", p.theta},
                {"a", p.a},
                {"b", p.b},
                {"c", p.c},
                {"c_plus", p.c_plus},
                {"c_minus", p.c_minus},
                {"alpha", p.alpha},
                {"m_theta", p.m_theta},
                {"m_theta_argmax", p.m_theta_argmax},
                {"f_value", p.f_value},
                {"d_witness", p.d_witness ? json(*p.d_witness) : json(nullptr)},
                {"witness_slack_first", p.witness_slack_first},
                {"witness_slack_second", p.witness_slack_second},
                {"lhs_sum", p.lhs_sum}};
}

LemmaParameters lemma_random_parameters(std::uint64_t seed, long long index) {
    Rng rng(derive_seed(seed, "lemma", static_cast<std::uint64_t>(index)));
    const double theta = rng.uniform(0.0, std::numbers::pi / 2);
    double a, b;
    if (rng.bernoulli(0.5)) {
        a = std::tanh(rng.uniform(-6.0, 6.0));
        b = std::tanh(rng.uniform(-6.0, 6.0));
    } else {
        a = rng.uniform(-1.0, 1.0);
        b = rng.uniform(-1.0, 1.0);
    }
    // Keep strictly inside (-1, 1) after rounding.
    a = std::clamp(a, -1.0 + 1e-15, 1.0 - 1e-15);
    b = std::clamp(b, -1.0 + 1e-15, 1.0 - 1e-15);
    if (b > a) std::swap(a, b);
    const double c = rng.bernoulli(0.5) ? std::min(std::tanh(rng.uniform(0.0, 6.0)), 1.0 - 1e-15) : rng.uniform();
    return {theta, a, b, c};
}

LemmaCampaignSummary lemma_campaign(std::uint64_t seed, long long count) {
    return lemma_campaign(seed, count, [](const LemmaPoint&) {});
}

json to_json(const LemmaCampaignSummary& s) {
    return json{{"points", s.points},
                {"max_f", s.max_f},
                {"min_witness_slack", s.min_witness_slack},
                {"missing_witness", s.missing_witness},
                {"max_lhs_sum_error", s.max_lhs_sum_error}};
}

}  // namespace ising
