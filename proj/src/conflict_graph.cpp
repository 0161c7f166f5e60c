#include "kmlmp/conflict_graph.hpp"

#include <algorithm>

namespace kmlmp {

int ConflictGraph::position(int facility) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), facility);
    if (it == vertices.end() || *it != facility) return -1;
    return static_cast<int>(it - vertices.begin());
}

bool ConflictGraph::has_edge(int fa, int fb) const {
    int a = position(fa);
    int b = position(fb);
    if (a < 0 || b < 0) return false;
    return adj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0;
}

std::size_t ConflictGraph::edge_count() const {
    std::size_t e = 0;
    for (std::size_t a = 0; a < size(); ++a)
        for (std::size_t b = a + 1; b < size(); ++b) e += adj[a][b] ? 1 : 0;
    return e;
}

ConflictGraph build_conflict_graph(const std::vector<Point>& facilities,
                                   const std::vector<int>& vertices,
                                   const std::vector<double>& t_per_vertex, double delta,
                                   Objective objective) {
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    if (t_per_vertex.size() != vertices.size())
        throw std::invalid_argument("t must be given per vertex");
    std::vector<std::size_t> idx(vertices.size());
    for (std::size_t a = 0; a < idx.size(); ++a) idx[a] = a;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vertices[a] < vertices[b]; });

    ConflictGraph g;
    g.delta = delta;
    g.objective = objective;
    for (std::size_t a : idx) {
        if (t_per_vertex[a] < 0.0) throw std::invalid_argument("t values must be nonnegative");
        if (!g.vertices.empty() && g.vertices.back() == vertices[a])
            throw std::invalid_argument("duplicate vertex");
        g.vertices.push_back(vertices[a]);
        g.t.push_back(t_per_vertex[a]);
    }
    const std::size_t v = g.vertices.size();
    g.adj.assign(v, std::vector<char>(v, 0));
    for (std::size_t a = 0; a < v; ++a)
        for (std::size_t b = a + 1; b < v; ++b) {
            double cost = pair_cost(facilities[static_cast<std::size_t>(g.vertices[a])],
                                    facilities[static_cast<std::size_t>(g.vertices[b])], objective);
            char e = in_conflict(cost, g.t[a], g.t[b], delta) ? 1 : 0;
            g.adj[a][b] = e;
            g.adj[b][a] = e;
        }
    return g;
}

namespace {

std::vector<std::size_t> positions_of(const ConflictGraph& g, const std::vector<int>& set) {
    std::vector<std::size_t> out;
    out.reserve(set.size());
    for (int f : set) {
        int p = g.position(f);
        if (p < 0) throw std::invalid_argument("facility is not a vertex of the graph");
        out.push_back(static_cast<std::size_t>(p));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int> greedy_extend(const ConflictGraph& g, std::vector<std::size_t> chosen,
                               const std::vector<std::size_t>& candidates) {
    std::vector<char> blocked(g.size(), 0);
    std::vector<char> in(g.size(), 0);
    for (std::size_t a : chosen) {
        in[a] = 1;
        for (std::size_t b = 0; b < g.size(); ++b)
            if (g.adj[a][b]) blocked[b] = 1;
    }
    for (std::size_t a : candidates) {
        if (in[a] || blocked[a]) continue;
        in[a] = 1;
        chosen.push_back(a);
        for (std::size_t b = 0; b < g.size(); ++b)
            if (g.adj[a][b]) blocked[b] = 1;
    }
    std::sort(chosen.begin(), chosen.end());
    std::vector<int> out;
    out.reserve(chosen.size());
    for (std::size_t a : chosen) out.push_back(g.vertices[a]);
    return out;
}

}  // namespace

std::vector<int> maximal_independent_set(const ConflictGraph& g) {
    std::vector<std::size_t> all(g.size());
    for (std::size_t a = 0; a < all.size(); ++a) all[a] = a;
    return greedy_extend(g, {}, all);
}

std::vector<int> maximal_independent_set(const ConflictGraph& g, const std::vector<int>& subset) {
    return greedy_extend(g, {}, positions_of(g, subset));
}

std::vector<int> warm_start_mis(const ConflictGraph& g, const std::vector<int>& previous) {
    std::vector<std::size_t> kept;
    std::vector<int> sorted_prev = previous;
    std::sort(sorted_prev.begin(), sorted_prev.end());
    for (int f : sorted_prev) {
        int p = g.position(f);
        if (p < 0) continue;
        std::size_t a = static_cast<std::size_t>(p);
        bool ok = true;
        for (std::size_t b : kept)
            if (g.adj[a][b]) {
                ok = false;
                break;
            }
        if (ok) kept.push_back(a);
    }
    for (std::size_t x = 0; x < kept.size(); ++x)
        for (std::size_t y = x + 1; y < kept.size(); ++y)
            if (g.adj[kept[x]][kept[y]]) throw ContractBreach("retained set is not independent");
    std::vector<std::size_t> all(g.size());
    for (std::size_t a = 0; a < all.size(); ++a) all[a] = a;
    return greedy_extend(g, kept, all);
}

bool is_independent(const ConflictGraph& g, const std::vector<int>& set) {
    auto pos = positions_of(g, set);
    for (std::size_t x = 0; x < pos.size(); ++x)
        for (std::size_t y = x + 1; y < pos.size(); ++y)
            if (g.adj[pos[x]][pos[y]]) return false;
    return true;
}

bool is_maximal_in(const ConflictGraph& g, const std::vector<int>& set,
                   const std::vector<int>& universe) {
    auto pos = positions_of(g, set);
    std::vector<char> in(g.size(), 0);
    for (std::size_t a : pos) in[a] = 1;
    for (std::size_t u : positions_of(g, universe)) {
        if (in[u]) continue;
        bool covered = false;
        for (std::size_t a : pos)
            if (g.adj[u][a]) {
                covered = true;
                break;
            }
        if (!covered) return false;
    }
    return true;
}

}  // namespace kmlmp
