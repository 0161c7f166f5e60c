#ifndef KMLMP_TESTS_SUPPORT_HPP
#define KMLMP_TESTS_SUPPORT_HPP

#include <cmath>
#include <limits>
#include <vector>

#include "kmlmp/core_model.hpp"
#include "kmlmp/dual_growth.hpp"
#include "kmlmp/nqis.hpp"
#include "kmlmp/rng.hpp"

namespace testsupport {

using kmlmp::Instance;
using kmlmp::Objective;
using kmlmp::Point;

inline Point random_point(kmlmp::Rng& rng, std::size_t d, double scale = 1.0) {
    Point p(d);
    for (auto& x : p) x = scale * rng.uniform();
    return p;
}

// small instance with uniform coordinates; sizes drawn from [lo, hi]
inline Instance small_instance(std::uint64_t seed, Objective obj, std::size_t n_max = 12,
                               std::size_t m_max = 8, std::size_t d_max = 3) {
    kmlmp::Rng rng(seed, 0xABCD);
    Instance inst;
    inst.objective = obj;
    const std::size_t n = 1 + rng.below(n_max);
    const std::size_t m = 1 + rng.below(m_max);
    const std::size_t d = 1 + rng.below(d_max);
    for (std::size_t j = 0; j < n; ++j) inst.clients.push_back(random_point(rng, d, 10.0));
    for (std::size_t i = 0; i < m; ++i) inst.facilities.push_back(random_point(rng, d, 10.0));
    return inst;
}

// written independently of the library: explicit Euclidean norm
inline double naive_cost(const Point& a, const Point& b, Objective obj) {
    long double s = 0;
    for (std::size_t d = 0; d < a.size(); ++d) s += (long double)(a[d] - b[d]) * (a[d] - b[d]);
    return obj == Objective::KMeans ? (double)s : (double)std::sqrt(s);
}

inline double naive_assignment(const Instance& inst, unsigned mask) {
    double total = 0.0;
    for (const auto& c : inst.clients) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < inst.m(); ++i)
            if (mask & (1u << i)) best = std::min(best, naive_cost(c, inst.facilities[i], inst.objective));
        total += best;
    }
    return total;
}

// bitmask enumeration of all k-subsets
inline double naive_opt(const Instance& inst, int k) {
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask < (1u << inst.m()); ++mask)
        if (__builtin_popcount(mask) == k) best = std::min(best, naive_assignment(inst, mask));
    return best;
}

inline bool close_rel(double a, double b, double rel = 1e-9) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// Cluster centres come first in index order so they enter I1; ring members sit in the thin
// annulus between the first two thresholds, where V2 and V3 live. A few noise points are added.
inline void planted_trace(kmlmp::Rng& rng, Objective obj, Instance& inst, kmlmp::DualGrowthResult& g) {
    const kmlmp::Deltas d = kmlmp::default_deltas(obj);
    inst.objective = obj;
    inst.clients = {{0.0, 0.0}};
    const std::size_t clusters = 1 + rng.below(3);
    std::vector<std::pair<Point, double>> centres;
    for (std::size_t c = 0; c < clusters; ++c) centres.push_back({{20.0 * c, 0.0}, rng.uniform(0.5, 2.0)});
    auto add = [&](Point p, double t) {
        g.tight.push_back(static_cast<int>(inst.facilities.size()));
        g.t.push_back(t);
        inst.facilities.push_back(std::move(p));
    };
    for (const auto& [c, t] : centres) add(c, t);
    for (const auto& [c, t] : centres) {
        const std::size_t ring = 2 + rng.below(8);
        for (std::size_t r = 0; r < ring; ++r) {
            const double level = rng.uniform(d.d2, d.d1) * t;
            const double radius = obj == Objective::KMeans ? std::sqrt(level) : level;
            const double a = rng.uniform(0.0, 2.0 * M_PI);
            add({c[0] + radius * std::cos(a), c[1] + radius * std::sin(a)}, rng.uniform(t, 1.5 * t));
        }
    }
    const std::size_t noise = rng.below(4);
    for (std::size_t r = 0; r < noise; ++r) add({rng.uniform(-3.0, 45.0), rng.uniform(-3.0, 3.0)}, rng.uniform(0.5, 2.0));
}

}  // namespace testsupport

#endif  // KMLMP_TESTS_SUPPORT_HPP
