#include "ising/rfim.hpp"

#include <cmath>
#include <cstdlib>

#include "ising/errors.hpp"
#include "ising/instance_json.hpp"
#include "ising/random.hpp"

namespace ising {

namespace {

const char* kind_name(FieldKind k) {
    switch (k) {
        case FieldKind::zero: return "zero";
        case FieldKind::gaussian: return "gaussian";
        case FieldKind::rademacher: return "rademacher";
        case FieldKind::explicit_values: return "explicit";
        case FieldKind::plus_infinity: return "+inf";
    }
    return "?";
}

FieldKind kind_from_name(const std::string& s) {
    if (s == "zero") return FieldKind::zero;
    if (s == "gaussian") return FieldKind::gaussian;
    if (s == "rademacher") return FieldKind::rademacher;
    if (s == "explicit") return FieldKind::explicit_values;
    if (s == "+inf") return FieldKind::plus_infinity;
    throw ValidationError("unknown field kind '" + s + "'");
}

}  // namespace

FieldSpec field_spec_from_string(const std::string& text) {
    FieldSpec spec;
    const auto colon = text.find(':');
    spec.kind = kind_from_name(text.substr(0, colon));
    if (spec.kind == FieldKind::explicit_values)
        throw ValidationError("explicit fields must be given as a JSON list");
    if (colon != std::string::npos) {
        const std::string num = text.substr(colon + 1);
        char* end = nullptr;
        spec.scale = std::strtod(num.c_str(), &end);
        if (num.empty() || *end != '\0' || !std::isfinite(spec.scale) || spec.scale < 0.0)
            throw ValidationError("bad field scale '" + num + "'");
    }
    return spec;
}

nlohmann::json to_json(const FieldSpec& spec) {
    nlohmann::json j{{"kind", kind_name(spec.kind)}, {"scale", spec.scale}};
    if (spec.kind == FieldKind::explicit_values) {
        auto values = nlohmann::json::array();
        for (const auto& v : spec.values) values.push_back(field_to_json(v));
        j["values"] = values;
    }
    return j;
}

FieldSpec field_spec_from_json(const nlohmann::json& j) {
    if (j.is_string()) return field_spec_from_string(j.get<std::string>());
    FieldSpec spec;
    spec.kind = kind_from_name(j.at("kind").get<std::string>());
    spec.scale = j.value("scale", 1.0);
    if (spec.kind == FieldKind::explicit_values) {
        const auto& values = j.at("values");
        for (std::size_t i = 0; i < values.size(); ++i)
            spec.values.push_back(field_from_json(values[i]));
    }
    return spec;
}

std::vector<ExtendedField> realize_field(const FieldSpec& spec, const LatticeDomain& domain, std::uint64_t seed) {
    std::vector<ExtendedField> omega;
    omega.reserve(domain.size());
    if (spec.kind == FieldKind::explicit_values) {
        if (static_cast<int>(spec.values.size()) != domain.size())
            throw ValidationError("explicit field has " + std::to_string(spec.values.size()) + " values for " +
                                  std::to_string(domain.size()) + " sites");
        return spec.values;
    }
    for (int i = 0; i < domain.size(); ++i) {
        // Keyed by coordinates so nested boxes agree on shared sites.
        std::string key = "omega";
        for (int c : domain.site(i)) key += "," + std::to_string(c);
        Rng rng(derive_seed(seed, key, 0));
        switch (spec.kind) {
            case FieldKind::zero: omega.emplace_back(0.0); break;
            case FieldKind::gaussian: omega.emplace_back(spec.scale * rng.gaussian()); break;
            case FieldKind::rademacher: omega.emplace_back(rng.bernoulli(0.5) ? spec.scale : -spec.scale); break;
            case FieldKind::plus_infinity: omega.push_back(ExtendedField::plus_infinity()); break;
            case FieldKind::explicit_values: break;
        }
    }
    return omega;
}

BoxInfluence exact_box_influence(const LatticeDomain& box, double beta, const std::vector<ExtendedField>& omega,
                                 const LatticeExactOptions& options) {
    const int o = box_origin(box);
    if (o < 0) throw ValidationError("box does not contain the origin");
    BoxInfluence r;
    r.backend = select_backend(box, options);
    r.plus = lattice_magnetizations(box, beta, omega, std::vector<int>(box.boundary_size(), 1), {o}, options)[0];
    r.minus = lattice_magnetizations(box, beta, omega, std::vector<int>(box.boundary_size(), -1), {o}, options)[0];
    r.difference = r.plus - r.minus;
    return r;
}

McEstimate mc_box_influence(const LatticeDomain& box, double beta, const std::vector<ExtendedField>& omega,
                            const McOptions& options, const std::string& label) {
    const int o = box_origin(box);
    if (o < 0) throw ValidationError("box does not contain the origin");
    const HeatBath kernel(box, beta, omega, std::vector<int>(box.boundary_size(), 1),
                          std::vector<int>(box.boundary_size(), -1));
    return run_coupled(
        kernel,
        [&](const CoupledChains& c) { return kernel.local_mean(c, o, true) - kernel.local_mean(c, o, false); },
        options, label);
}

void validate(const RfimConfig& c) {
    if (c.dim < 2) throw ValidationError("dim must be at least 2");
    if (c.radii.empty()) throw ValidationError("at least one radius is needed");
    for (int n : c.radii)
        if (n < 1) throw ValidationError("radii must be at least 1");
    if (!(c.beta > 0.0) || !std::isfinite(c.beta)) throw ValidationError("beta must be positive and finite");
    validate(c.mc);
}

nlohmann::json to_json(const RfimConfig& c) {
    return {{"dim", c.dim}, {"radii", c.radii},       {"beta", c.beta},
            {"field", to_json(c.field)}, {"mc", to_json(c.mc)}, {"exact_max_sites", c.exact_max_sites}};
}

RfimResult rfim_influence(const RfimConfig& config) {
    validate(config);
    RfimResult result;
    result.config = config;
    std::vector<DecayPoint> decay;
    for (int n : config.radii) {
        const LatticeDomain box = build_box(config.dim, n);
        const auto omega = realize_field(config.field, box, config.mc.seed);
        const std::vector<ExtendedField> zero(box.size(), 0.0);
        RfimPoint p;
        p.radius = n;
        p.sites = box.size();
        // Both sides share the noise stream.
        const std::string label = "rfim/N=" + std::to_string(n);
        p.lhs = mc_box_influence(box, config.beta, omega, config.mc, label);
        p.rhs = mc_box_influence(box, config.beta, zero, config.mc, label);
        if (box.size() <= config.exact_max_sites) {
            LatticeExactOptions ex;
            ex.engine.threads = static_cast<unsigned>(config.mc.threads);
            p.exact_lhs = exact_box_influence(box, config.beta, omega, ex).difference;
            p.exact_rhs = exact_box_influence(box, config.beta, zero, ex).difference;
        }
        const double combined = std::hypot(p.lhs.std_error, p.rhs.std_error);
        p.dominated = p.lhs.mean <= p.rhs.mean + 3.0 * combined;
        result.all_dominated = result.all_dominated && p.dominated;
        decay.push_back({static_cast<double>(n), p.rhs.mean, p.rhs.std_error});
        result.points.push_back(p);
    }
    if (decay.size() >= 2) {
        try {
            result.fit = fit_decay(decay);
        } catch (const DomainError& e) {
            result.fit_error = e.what();
        }
    } else {
        result.fit_error = "decay fit needs at least two radii";
    }
    return result;
}

nlohmann::json to_json(const RfimResult& r) {
    auto points = nlohmann::json::array();
    for (const auto& p : r.points) {
        nlohmann::json j{{"N", p.radius}, {"sites", p.sites}, {"lhs", to_json(p.lhs)},
                         {"rhs", to_json(p.rhs)}, {"dominated", p.dominated}};
        j["exact_lhs"] = p.exact_lhs ? nlohmann::json(*p.exact_lhs) : nlohmann::json(nullptr);
        j["exact_rhs"] = p.exact_rhs ? nlohmann::json(*p.exact_rhs) : nlohmann::json(nullptr);
        points.push_back(j);
    }
    nlohmann::json j{{"config", to_json(r.config)}, {"points", points}, {"all_dominated", r.all_dominated}};
    j["fit"] = r.fit ? to_json(*r.fit) : nlohmann::json(nullptr);
    if (!r.fit_error.empty()) j["fit_error"] = r.fit_error;
    return j;
}

}  // namespace ising
