#ifndef KMLMP_NQIS_HPP
#define KMLMP_NQIS_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "kmlmp/conflict_graph.hpp"
#include "kmlmp/core_model.hpp"
#include "kmlmp/dual_growth.hpp"

namespace kmlmp {

struct Deltas {
    double d1 = 1.0;
    double d2 = 1.0;
    double d3 = 1.0;
};

enum class Variant { KMeansAlg1, KMedianAlg3 };

Deltas default_deltas(Objective objective);
Variant variant_for(Objective objective);

struct NqisGraphs {
    ConflictGraph h1;
    ConflictGraph h2;
    ConflictGraph h3;
    // graph used for I2/I3 construction: H(d2) for k-means, H(d1) for k-median
    const ConflictGraph& inner(Variant v) const { return v == Variant::KMeansAlg1 ? h2 : h1; }
};

struct NestedQIS {
    Variant variant = Variant::KMeansAlg1;
    Deltas deltas;
    std::vector<int> i1;
    std::vector<int> i2;
    std::vector<int> i3;
    std::vector<int> v2;
    std::vector<int> v3;
    std::map<int, int> q;  // I3 member -> its unique inner-graph neighbour in I2
};

struct RoundingParams {
    double p = 0.0;
    std::uint64_t rng_seed = 0;
    int group_threshold = 3;
};

class RoundingFailure : public std::runtime_error {
public:
    RoundingFailure(const std::string& what, std::vector<int> best_seen)
        : std::runtime_error(what), best(std::move(best_seen)) {}
    std::vector<int> best;
};

NqisGraphs build_nqis_graphs(const DualGrowthResult& growth, const Instance& inst,
                             const Deltas& deltas);

NestedQIS build_nqis(const DualGrowthResult& growth, const Instance& inst, const Deltas& deltas,
                     Variant variant);
// optional warm start of I1 from a previous independent set
NestedQIS build_nqis(const NqisGraphs& graphs, const Deltas& deltas, Variant variant,
                     const std::vector<int>* previous_i1 = nullptr);

double expected_size(const NestedQIS& nqis, double p);

// Draw number `sample_index` from the stream identified by params.rng_seed.
std::vector<int> sample_solution(const NestedQIS& nqis, const RoundingParams& params,
                                 std::uint64_t sample_index = 0);

std::vector<int> round_to_at_most_k(const NestedQIS& nqis, int k, const RoundingParams& params);

}  // namespace kmlmp

#endif  // KMLMP_NQIS_HPP
