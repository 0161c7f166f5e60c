#include "kmlmp/nqis.hpp"

#include <algorithm>
#include <cmath>

#include "kmlmp/rng.hpp"

namespace kmlmp {

Deltas default_deltas(Objective objective) {
    if (objective == Objective::KMeans)
        return {(4.0 + 8.0 * std::sqrt(2.0)) / 7.0, 2.0, 0.265};
    return {std::sqrt(2.0), 1.395, 2.0 - std::sqrt(2.0)};
}

Variant variant_for(Objective objective) {
    return objective == Objective::KMeans ? Variant::KMeansAlg1 : Variant::KMedianAlg3;
}

NqisGraphs build_nqis_graphs(const DualGrowthResult& growth, const Instance& inst,
                             const Deltas& deltas) {
    if (!(deltas.d1 >= deltas.d2 && deltas.d2 >= deltas.d3 && deltas.d3 > 0.0))
        throw std::invalid_argument("deltas must satisfy d1 >= d2 >= d3 > 0");
    std::vector<double> tv;
    tv.reserve(growth.tight.size());
    for (int i : growth.tight) tv.push_back(growth.t[static_cast<std::size_t>(i)]);
    NqisGraphs g;
    g.h1 = build_conflict_graph(inst.facilities, growth.tight, tv, deltas.d1, inst.objective);
    g.h2 = build_conflict_graph(inst.facilities, growth.tight, tv, deltas.d2, inst.objective);
    g.h3 = build_conflict_graph(inst.facilities, growth.tight, tv, deltas.d3, inst.objective);
    return g;
}

NestedQIS build_nqis(const DualGrowthResult& growth, const Instance& inst, const Deltas& deltas,
                     Variant variant) {
    return build_nqis(build_nqis_graphs(growth, inst, deltas), deltas, variant);
}

NestedQIS build_nqis(const NqisGraphs& graphs, const Deltas& deltas, Variant variant,
                     const std::vector<int>* previous_i1) {
    if (!(deltas.d1 >= deltas.d2 && deltas.d2 >= deltas.d3 && deltas.d3 > 0.0))
        throw std::invalid_argument("deltas must satisfy d1 >= d2 >= d3 > 0");
    const ConflictGraph& h1 = graphs.h1;
    const ConflictGraph& h2 = graphs.h2;
    const ConflictGraph& h3 = graphs.h3;
    const ConflictGraph& hx = graphs.inner(variant);
    const std::size_t v = h1.size();

    NestedQIS out;
    out.variant = variant;
    out.deltas = deltas;
    out.i1 = previous_i1 ? warm_start_mis(h1, *previous_i1) : maximal_independent_set(h1);

    std::vector<char> in1(v, 0), in2(v, 0);
    for (int f : out.i1) in1[static_cast<std::size_t>(h1.position(f))] = 1;

    for (std::size_t a = 0; a < v; ++a) {
        if (in1[a]) continue;
        bool near_i1 = false;
        for (std::size_t b = 0; b < v && !near_i1; ++b) near_i1 = in1[b] && h2.adj[a][b];
        if (!near_i1) out.v2.push_back(h1.vertices[a]);
    }
    out.i2 = maximal_independent_set(hx, out.v2);
    for (int f : out.i2) in2[static_cast<std::size_t>(h1.position(f))] = 1;

    std::map<int, int> partner;
    for (int f : out.v2) {
        std::size_t a = static_cast<std::size_t>(h1.position(f));
        if (in2[a]) continue;
        int count = 0;
        int only = -1;
        bool near3 = false;
        for (std::size_t b = 0; b < v; ++b) {
            if (!in2[b]) continue;
            if (hx.adj[a][b]) {
                ++count;
                only = h1.vertices[b];
            }
            if (h3.adj[a][b]) near3 = true;
        }
        if (count == 1 && !near3) {
            out.v3.push_back(f);
            partner[f] = only;
        }
    }
    out.i3 = maximal_independent_set(hx, out.v3);
    for (int f : out.i3) out.q[f] = partner.at(f);
    return out;
}

double expected_size(const NestedQIS& nqis, double p) {
    return static_cast<double>(nqis.i1.size()) +
           p * static_cast<double>(nqis.i2.size() + nqis.i3.size());
}

namespace {

std::map<int, std::vector<int>> preimages(const NestedQIS& nqis) {
    std::map<int, std::vector<int>> pre;
    for (int x : nqis.i2) pre[x];
    for (const auto& [i3, i2] : nqis.q) pre[i2].push_back(i3);
    return pre;
}

}  // namespace

std::vector<int> sample_solution(const NestedQIS& nqis, const RoundingParams& params,
                                 std::uint64_t sample_index) {
    if (!(params.p >= 0.0 && params.p < 0.5)) throw std::invalid_argument("p must lie in [0, 1/2)");
    Rng rng(params.rng_seed, sample_index);
    std::vector<int> s = nqis.i1;
    const double two_p = 2.0 * params.p;
    for (const auto& [x, members] : preimages(nqis)) {
        if (rng.bernoulli(0.5)) {
            if (rng.bernoulli(two_p)) s.push_back(x);
        } else {
            for (int y : members)
                if (rng.bernoulli(two_p)) s.push_back(y);
        }
    }
    std::sort(s.begin(), s.end());
    return s;
}

std::vector<int> round_to_at_most_k(const NestedQIS& nqis, int k, const RoundingParams& params) {
    const int C = params.group_threshold;
    if (C < 1) throw std::invalid_argument("group threshold must be >= 1");
    if (!(params.p >= 0.0 && params.p < 0.5)) throw std::invalid_argument("p must lie in [0, 1/2)");

    struct Group {
        int head;
        std::vector<int> rest;
    };
    std::vector<Group> groups;
    for (auto& [x, members] : preimages(nqis)) groups.push_back({x, members});
    std::stable_sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
        return a.rest.size() > b.rest.size();
    });
    std::size_t s_count = 0;
    while (s_count < groups.size() && groups[s_count].rest.size() + 1 >= static_cast<std::size_t>(C))
        ++s_count;
    const double pp = std::max(0.0, params.p - 2.0 / static_cast<double>(C));

    std::vector<int> best;
    bool have_best = false;
    const int attempts = 10 * C;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        Rng rng(params.rng_seed, static_cast<std::uint64_t>(attempt));
        std::vector<int> s = nqis.i1;
        for (std::size_t l = 0; l < groups.size(); ++l) {
            const Group& g = groups[l];
            if (l < s_count) {
                s.push_back(g.head);
                for (int y : g.rest)
                    if (rng.bernoulli(pp)) s.push_back(y);
            } else if (rng.bernoulli(0.5)) {
                if (rng.bernoulli(2.0 * pp)) s.push_back(g.head);
            } else {
                for (int y : g.rest)
                    if (rng.bernoulli(2.0 * pp)) s.push_back(y);
            }
        }
        std::sort(s.begin(), s.end());
        if (static_cast<int>(s.size()) <= k) return s;
        if (!have_best || s.size() < best.size()) {
            best = s;
            have_best = true;
        }
    }
    throw RoundingFailure("no sample with |S| <= k within the retry budget", best);
}

}  // namespace kmlmp
