#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ising {

struct Edge {
    int u = 0;
    int v = 0;
    double coupling = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
    int vertex;
    double coupling;
};

// Undirected simple graph with non-negative couplings. Immutable after construction.
class IsingGraph {
public:
    IsingGraph() = default;
    // Throws ValidationError naming the offending edge on self-loops, duplicate
    // pairs, out-of-range ids, negative or non-finite couplings.
    IsingGraph(int vertex_count, std::vector<Edge> edges);

    int vertex_count() const { return vertex_count_; }
    std::span<const Edge> edges() const { return edges_; }
    std::span<const Neighbor> neighbors(int v) const {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    // Coupling of the pair, 0 when not adjacent.
    double coupling(int u, int v) const;
    bool is_connected() const;

private:
    int vertex_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> adjacency_;
};

}  // namespace ising
