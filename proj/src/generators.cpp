#include "kmlmp/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kmlmp/rng.hpp"

namespace kmlmp {

InstanceKind kind_from_string(const std::string& s) {
    if (s == "uniform") return InstanceKind::Uniform;
    if (s == "clustered") return InstanceKind::Clustered;
    throw std::invalid_argument("unknown instance kind '" + s + "'");
}

std::string to_string(InstanceKind kind) {
    return kind == InstanceKind::Uniform ? "uniform" : "clustered";
}

Instance gen_random_instance(std::size_t n, std::size_t m, std::size_t d, InstanceKind kind,
                             std::uint64_t seed, Objective objective, double separation) {
    if (n < 1 || m < 1 || d < 1) throw std::invalid_argument("n, m and d must be at least 1");
    Instance inst;
    inst.objective = objective;
    inst.label = to_string(kind) + "-n" + std::to_string(n) + "-m" + std::to_string(m) + "-d" +
                 std::to_string(d) + "-s" + std::to_string(seed);
    Rng rng(seed, 0);
    if (kind == InstanceKind::Uniform) {
        auto point = [&] {
            Point p(d);
            for (double& x : p) x = rng.uniform();
            return p;
        };
        for (std::size_t j = 0; j < n; ++j) inst.clients.push_back(point());
        for (std::size_t i = 0; i < m; ++i) inst.facilities.push_back(point());
        return inst;
    }
    const std::size_t blobs = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m))));
    std::vector<Point> centre(blobs, Point(d));
    for (std::size_t b = 0; b < blobs; ++b) {
        centre[b][0] = separation * static_cast<double>(b);
        for (std::size_t x = 1; x < d; ++x) centre[b][x] = separation * rng.uniform();
    }
    const double sigma = 1.0 / std::sqrt(static_cast<double>(d));
    auto around = [&](std::size_t b) {
        Point p = centre[b];
        for (double& x : p) x += sigma * rng.normal();
        return p;
    };
    for (std::size_t j = 0; j < n; ++j) inst.clients.push_back(around(j % blobs));
    for (std::size_t i = 0; i < m; ++i) inst.facilities.push_back(around(i % blobs));
    return inst;
}

double lower_bound_T_prime(std::size_t h, double eps) {
    const double hh = static_cast<double>(h);
    return 1.0 / (1.0 - (1.0 - eps) * std::sqrt((hh - 1.0) / hh));
}

LowerBoundInstance gen_lower_bound_instance(double T, std::size_t N, std::size_t h, double eps) {
    if (h < 2) throw std::invalid_argument("h must be at least 2");
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
    if (N < 1) throw std::invalid_argument("N must be at least 1");
    if (!(T > 0.0)) throw std::invalid_argument("T must be positive");

    LowerBoundInstance out;
    out.lambda = T;
    // the simplex scale is chosen so that its tightness level coincides with lambda = T
    out.T_prime = T * lower_bound_T_prime(h, eps);
    const std::size_t dim = h;
    const double far = 1e3 * std::max(T * (1.0 + std::sqrt(2.0)), std::sqrt(2.0) * out.T_prime);

    Instance& inst = out.instance;
    inst.objective = Objective::KMedian;
    inst.label = "lower-bound-N" + std::to_string(N) + "-h" + std::to_string(h);
    auto on_axis = [&](double x) {
        Point p(dim, 0.0);
        p[0] = x;
        return p;
    };
    const double x2 = T + std::sqrt(2.0) * T;
    for (std::size_t c = 0; c < N; ++c) inst.clients.push_back(on_axis(0.0));
    inst.clients.push_back(on_axis(T));
    inst.clients.push_back(on_axis(x2));
    inst.facilities.push_back(on_axis(x2));
    inst.facilities.push_back(on_axis(T));

    const double scale = out.T_prime * (1.0 - eps);
    const double hh = static_cast<double>(h);
    inst.clients.push_back(on_axis(far));
    for (std::size_t r = 0; r < h; ++r) {
        Point p(dim, -scale / hh);
        p[r] += scale;
        p[0] += far;
        inst.facilities.push_back(std::move(p));
    }
    return out;
}

double GadgetValue::ratio() const {
    if (!(dual > 0.0)) return std::numeric_limits<double>::infinity();
    return cost / dual;
}

GadgetValue lower_bound_gadget_value(double T, std::size_t N, std::size_t h, double eps,
                                     double delta) {
    if (h < 2) throw std::invalid_argument("h must be at least 2");
    const double lambda = T;
    const double Nd = static_cast<double>(N);
    GadgetValue v;

    // line gadget: j1 sits on i1, j2 on i2, copies of j at distance T from i1.
    // Each facility is paid for by its co-located client alone, so both become
    // tight when that client's dual reaches lambda; the copies reach i1 at the
    // same level but not strictly, so they stay outside N(i1).
    const double d_j_i1 = T;
    const double d_j_i2 = T + std::sqrt(2.0) * T;
    const double d_i1_i2 = std::sqrt(2.0) * T;
    const double alpha_line = lambda;
    const double t_line = alpha_line;
    const bool line_conflict = d_i1_i2 <= delta * t_line;
    if (line_conflict) {
        // the far facility carries the smaller index and wins the greedy pass
        v.cost += Nd * d_j_i2 + d_i1_i2;
        v.centers += 1;
    } else {
        v.cost += Nd * d_j_i1;
        v.centers += 2;
    }
    v.dual += (Nd + 2.0) * alpha_line;

    // simplex gadget: one client at the centroid, equidistant from all h facilities
    const double hh = static_cast<double>(h);
    const double Tp = T * lower_bound_T_prime(h, eps);
    const double edge = std::sqrt(2.0) * Tp * (1.0 - eps);
    const double radius = edge * std::sqrt((hh - 1.0) / (2.0 * hh));
    const double alpha_simplex = radius + lambda;
    const bool complete = edge <= delta * alpha_simplex;
    v.cost += radius;
    v.centers += complete ? 1 : h;
    v.dual += alpha_simplex;

    v.dual -= lambda * static_cast<double>(v.centers);
    return v;
}

}  // namespace kmlmp
