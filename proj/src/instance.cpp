#include "ising/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "ising/errors.hpp"

namespace ising {

namespace {

std::string edge_name(const Edge& e) {
    return "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
}

}  // namespace

IsingGraph::IsingGraph(int vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
    if (vertex_count < 0) throw ValidationError("vertex count must be non-negative");
    std::set<std::pair<int, int>> seen;
    std::vector<std::size_t> degree(vertex_count, 0);
    for (const Edge& e : edges_) {
        if (e.u < 0 || e.v < 0 || e.u >= vertex_count || e.v >= vertex_count)
            throw ValidationError(edge_name(e) + ": vertex id out of range");
        if (e.u == e.v) throw ValidationError(edge_name(e) + ": self-loop");
        if (!std::isfinite(e.coupling)) throw ValidationError(edge_name(e) + ": non-finite coupling");
        if (e.coupling < 0.0) throw ValidationError(edge_name(e) + ": negative coupling");
        if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second)
            throw ValidationError(edge_name(e) + ": duplicate edge");
        ++degree[e.u];
        ++degree[e.v];
    }
    offsets_.assign(vertex_count + 1, 0);
    for (int v = 0; v < vertex_count; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
    adjacency_.resize(offsets_.back());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges_) {
        adjacency_[cursor[e.u]++] = {e.v, e.coupling};
        adjacency_[cursor[e.v]++] = {e.u, e.coupling};
    }
}

double IsingGraph::coupling(int u, int v) const {
    for (const Neighbor& n : neighbors(u))
        if (n.vertex == v) return n.coupling;
    return 0.0;
}

bool IsingGraph::is_connected() const {
    if (vertex_count_ <= 1) return true;
    std::vector<char> seen(vertex_count_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const Neighbor& n : neighbors(v)) {
            if (!seen[n.vertex]) {
                seen[n.vertex] = 1;
                ++count;
                stack.push_back(n.vertex);
            }
        }
    }
    return count == vertex_count_;
}

bool IsingInstance::all_finite() const {
    return std::all_of(fields_.begin(), fields_.end(), [](ExtendedField f) { return f.is_finite(); });
}

IsingInstance IsingInstance::with_fields(std::vector<ExtendedField> fields) const {
    return build_instance(graph_, beta_, std::move(fields));
}

IsingInstance IsingInstance::with_field(int v, ExtendedField f) const {
    IsingInstance copy = *this;
    copy.fields_.at(v) = f;
    return copy;
}

IsingInstance IsingInstance::with_beta(double beta) const {
    return build_instance(graph_, beta, fields_);
}

IsingInstance build_instance(IsingGraph graph, double beta, std::vector<ExtendedField> fields) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be a positive finite number");
    if (static_cast<int>(fields.size()) != graph.vertex_count())
        throw ValidationError("field has " + std::to_string(fields.size()) + " entries, expected " +
                              std::to_string(graph.vertex_count()));
    IsingInstance instance;
    instance.graph_ = std::move(graph);
    instance.beta_ = beta;
    instance.fields_ = std::move(fields);
    return instance;
}

IsingInstance build_instance(IsingGraph graph, double beta, const std::vector<double>& fields) {
    return build_instance(std::move(graph), beta, to_fields(fields));
}

ReducedInstance reduce_infinite_fields(const IsingInstance& instance) {
    const int n = instance.vertex_count();
    ReducedInstance out;
    out.vertex_map.assign(n, -1);
    std::vector<double> field;
    for (int v = 0; v < n; ++v) {
        ExtendedField f = instance.field(v);
        if (f.is_infinite()) {
            out.fixed_spins[v] = f.infinite_sign();
        } else {
            out.vertex_map[v] = static_cast<int>(out.original_ids.size());
            out.original_ids.push_back(v);
            field.push_back(f.value());
        }
    }
    std::vector<Edge> edges;
    for (const Edge& e : instance.graph().edges()) {
        int ru = out.vertex_map[e.u];
        int rv = out.vertex_map[e.v];
        if (ru >= 0 && rv >= 0) {
            edges.push_back({ru, rv, e.coupling});
        } else if (ru >= 0) {
            field[ru] += out.fixed_spins.at(e.v) * instance.beta() * e.coupling;
        } else if (rv >= 0) {
            field[rv] += out.fixed_spins.at(e.u) * instance.beta() * e.coupling;
        }
    }
    out.instance = build_instance(IsingGraph(static_cast<int>(field.size()), std::move(edges)), instance.beta(),
                                  to_fields(field));
    return out;
}

std::vector<ExtendedField> to_fields(const std::vector<double>& values) {
    return {values.begin(), values.end()};
}

std::vector<ExtendedField> add_fields(std::span<const ExtendedField> a, std::span<const ExtendedField> b) {
    if (a.size() != b.size()) throw ValidationError("field length mismatch");
    std::vector<ExtendedField> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

std::vector<ExtendedField> negate_fields(std::span<const ExtendedField> a) {
    std::vector<ExtendedField> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
    return out;
}

std::vector<ExtendedField> scale_fields(std::span<const ExtendedField> a, double scale) {
    std::vector<ExtendedField> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = scaled(a[i], scale);
    return out;
}

}  // namespace ising
