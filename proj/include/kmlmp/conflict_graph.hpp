#ifndef KMLMP_CONFLICT_GRAPH_HPP
#define KMLMP_CONFLICT_GRAPH_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "kmlmp/core_model.hpp"

namespace kmlmp {

inline bool in_conflict(double cost, double ti, double tj, double delta) {
    return cost <= delta * (ti < tj ? ti : tj);
}

struct ConflictGraph {
    std::vector<int> vertices;  // ascending facility indices
    std::vector<double> t;      // parallel to vertices
    double delta = 1.0;
    Objective objective = Objective::KMeans;
    std::vector<std::vector<char>> adj;  // by vertex position

    std::size_t size() const { return vertices.size(); }
    // position of facility index in vertices, -1 if absent
    int position(int facility) const;
    bool has_edge_pos(std::size_t a, std::size_t b) const { return adj[a][b] != 0; }
    bool has_edge(int fa, int fb) const;
    std::size_t edge_count() const;
};

class ContractBreach : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

ConflictGraph build_conflict_graph(const std::vector<Point>& facilities,
                                   const std::vector<int>& vertices,
                                   const std::vector<double>& t_per_vertex, double delta,
                                   Objective objective);

// Vertices restricted to `subset` (must be a subset of the graph's vertices), as facility indices.
std::vector<int> maximal_independent_set(const ConflictGraph& g);
std::vector<int> maximal_independent_set(const ConflictGraph& g, const std::vector<int>& subset);
std::vector<int> warm_start_mis(const ConflictGraph& g, const std::vector<int>& previous);

bool is_independent(const ConflictGraph& g, const std::vector<int>& set);
bool is_maximal_in(const ConflictGraph& g, const std::vector<int>& set,
                   const std::vector<int>& universe);

}  // namespace kmlmp

#endif  // KMLMP_CONFLICT_GRAPH_HPP
