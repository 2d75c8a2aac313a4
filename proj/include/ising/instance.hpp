#pragma once

#include <map>
#include <span>
#include <vector>

#include "ising/extended_field.hpp"
#include "ising/graph.hpp"

namespace ising {

// Gibbs measure  mu(sigma) ~ exp{ beta * sum_{uv} J_uv s_u s_v + sum_u g_u s_u }.
// The field is not multiplied by beta.
class IsingInstance {
public:
    IsingInstance() = default;

    const IsingGraph& graph() const { return graph_; }
    int vertex_count() const { return graph_.vertex_count(); }
    double beta() const { return beta_; }
    std::span<const ExtendedField> fields() const { return fields_; }
    ExtendedField field(int v) const { return fields_[v]; }
    bool all_finite() const;

    IsingInstance with_fields(std::vector<ExtendedField> fields) const;
    IsingInstance with_field(int v, ExtendedField f) const;
    IsingInstance with_beta(double beta) const;

private:
    friend IsingInstance build_instance(IsingGraph, double, std::vector<ExtendedField>);
    IsingGraph graph_;
    double beta_ = 1.0;
    std::vector<ExtendedField> fields_;
};

// Throws ValidationError on beta <= 0 (or non-finite) and on field length mismatch.
IsingInstance build_instance(IsingGraph graph, double beta, std::vector<ExtendedField> fields);
IsingInstance build_instance(IsingGraph graph, double beta, const std::vector<double>& fields);

// Instance with every +-inf vertex removed. Each surviving neighbour v of a
// removed u gains the finite field +-beta*J_uv.
struct ReducedInstance {
    IsingInstance instance;
    std::map<int, int> fixed_spins;  // original id -> +1/-1
    std::vector<int> vertex_map;     // original id -> reduced id, -1 if removed
    std::vector<int> original_ids;   // reduced id -> original id
};

ReducedInstance reduce_infinite_fields(const IsingInstance& instance);

// Field vector helpers.
std::vector<ExtendedField> to_fields(const std::vector<double>& values);
std::vector<ExtendedField> add_fields(std::span<const ExtendedField> a, std::span<const ExtendedField> b);
std::vector<ExtendedField> negate_fields(std::span<const ExtendedField> a);
std::vector<ExtendedField> scale_fields(std::span<const ExtendedField> a, double scale);

}  // namespace ising
