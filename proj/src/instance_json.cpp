#include "ising/instance_json.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ising/errors.hpp"

namespace ising {

using nlohmann::json;

json field_to_json(ExtendedField f) {
    if (f.infinite_sign() > 0) return "+inf";
    if (f.infinite_sign() < 0) return "-inf";
    return f.value();
}

ExtendedField field_from_json(const json& j) {
    if (j.is_number()) return ExtendedField(j.get<double>());
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "+inf" || s == "inf") return ExtendedField::plus_infinity();
        if (s == "-inf") return ExtendedField::minus_infinity();
    }
    throw ValidationError("field value must be a number, \"+inf\" or \"-inf\", got " + j.dump());
}

json instance_to_json(const IsingInstance& instance) {
    json edges = json::array();
    for (const Edge& e : instance.graph().edges()) edges.push_back(json::array({e.u, e.v, e.coupling}));
    json field = json::array();
    for (ExtendedField f : instance.fields()) field.push_back(field_to_json(f));
    return json{{"beta", instance.beta()},
                {"vertices", instance.vertex_count()},
                {"edges", std::move(edges)},
                {"field", std::move(field)}};
}

IsingInstance instance_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("instance: expected a JSON object");
    auto require = [&](const char* key) -> const json& {
        if (!j.contains(key)) throw ValidationError(std::string("instance: missing field '") + key + "'");
        return j.at(key);
    };
    const json& jn = require("vertices");
    if (!jn.is_number_integer() || jn.get<long long>() < 0)
        throw ValidationError("instance field 'vertices': expected a non-negative integer");
    const int n = jn.get<int>();
    double beta = 1.0;
    if (j.contains("beta")) {
        if (!j.at("beta").is_number()) throw ValidationError("instance field 'beta': expected a number");
        beta = j.at("beta").get<double>();
    }
    std::vector<Edge> edges;
    const json& je = require("edges");
    if (!je.is_array()) throw ValidationError("instance field 'edges': expected an array");
    for (std::size_t i = 0; i < je.size(); ++i) {
        const json& e = je[i];
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
            !e[2].is_number())
            throw ValidationError("instance field 'edges[" + std::to_string(i) + "]': expected [u, v, J]");
        edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    std::vector<ExtendedField> fields;
    if (j.contains("field")) {
        const json& jf = j.at("field");
        if (!jf.is_array()) throw ValidationError("instance field 'field': expected an array");
        for (std::size_t i = 0; i < jf.size(); ++i) {
            try {
                fields.push_back(field_from_json(jf[i]));
            } catch (const ValidationError& err) {
                throw ValidationError("instance field 'field[" + std::to_string(i) + "]': " + err.what());
            }
        }
    } else {
        fields.assign(n, ExtendedField(0.0));
    }
    return build_instance(IsingGraph(n, std::move(edges)), beta, std::move(fields));
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& err) {
        throw ValidationError(path.string() + ": " + err.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace ising
