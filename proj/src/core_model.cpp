#include "kmlmp/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kmlmp {

std::string to_string(Objective obj) {
    return obj == Objective::KMeans ? "kmeans" : "kmedian";
}

Objective objective_from_string(const std::string& s) {
    if (s == "kmeans") return Objective::KMeans;
    if (s == "kmedian") return Objective::KMedian;
    throw std::invalid_argument("unknown objective '" + s + "'");
}

double squared_distance(const Point& a, const Point& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        double diff = a[d] - b[d];
        s += diff * diff;
    }
    return s;
}

double pair_cost(const Point& a, const Point& b, Objective objective) {
    double sq = squared_distance(a, b);
    return objective == Objective::KMeans ? sq : std::sqrt(sq);
}

CostMatrix::CostMatrix(const Instance& inst)
    : n_(inst.n()), m_(inst.m()), data_(inst.n() * inst.m()) {
    for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t i = 0; i < m_; ++i)
            data_[j * m_ + i] = pair_cost(inst.clients[j], inst.facilities[i], inst.objective);
}

double assignment_cost(const CostMatrix& cost, const std::vector<int>& centers) {
    if (centers.empty()) throw std::invalid_argument("empty center set");
    for (int c : centers)
        if (c < 0 || static_cast<std::size_t>(c) >= cost.m())
            throw std::out_of_range("center index out of range");
    double total = 0.0;
    for (std::size_t j = 0; j < cost.n(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (int c : centers) best = std::min(best, cost(j, static_cast<std::size_t>(c)));
        total += best;
    }
    return total;
}

double assignment_cost(const Instance& inst, const std::vector<int>& centers) {
    if (centers.empty()) throw std::invalid_argument("empty center set");
    double total = 0.0;
    for (const auto& client : inst.clients) {
        double best = std::numeric_limits<double>::infinity();
        for (int c : centers) {
            if (c < 0 || static_cast<std::size_t>(c) >= inst.m())
                throw std::out_of_range("center index out of range");
            best = std::min(best, pair_cost(client, inst.facilities[static_cast<std::size_t>(c)],
                                            inst.objective));
        }
        total += best;
    }
    return total;
}

double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(r);
}

CenterSet brute_force_opt(const Instance& inst, int k, double budget) {
    check_instance_shape(inst);
    std::size_t m = inst.m();
    if (k < 1 || static_cast<std::size_t>(k) > m)
        throw std::invalid_argument("k must lie in [1, m]");
    if (binomial(m, static_cast<std::size_t>(k)) > budget)
        throw BudgetExceeded("subset enumeration exceeds budget; shrink the instance or k");

    CostMatrix cost(inst);
    // revolving combination in lexicographic order; strict < keeps the first optimum
    std::vector<int> comb(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
    CenterSet best;
    best.cost = std::numeric_limits<double>::infinity();
    std::vector<double> nearest(inst.n());
    while (true) {
        double total = 0.0;
        for (std::size_t j = 0; j < inst.n(); ++j) {
            double b = std::numeric_limits<double>::infinity();
            for (int c : comb) b = std::min(b, cost(j, static_cast<std::size_t>(c)));
            total += b;
        }
        if (total < best.cost) {
            best.cost = total;
            best.indices = comb;
        }
        int pos = k - 1;
        while (pos >= 0 && comb[static_cast<std::size_t>(pos)] == static_cast<int>(m) - k + pos) --pos;
        if (pos < 0) break;
        ++comb[static_cast<std::size_t>(pos)];
        for (int q = pos + 1; q < k; ++q)
            comb[static_cast<std::size_t>(q)] = comb[static_cast<std::size_t>(q - 1)] + 1;
    }
    return best;
}

void check_instance_shape(const Instance& inst) {
    if (inst.clients.empty()) throw std::invalid_argument("instance has no clients");
    if (inst.facilities.empty()) throw std::invalid_argument("instance has no facilities");
    std::size_t d = inst.clients.front().size();
    if (d == 0) throw std::invalid_argument("points must have dimension >= 1");
    for (const auto& p : inst.clients)
        if (p.size() != d) throw std::invalid_argument("client dimension mismatch");
    for (const auto& p : inst.facilities)
        if (p.size() != d) throw std::invalid_argument("facility dimension mismatch");
}

Instance validate_instance(const Instance& inst) {
    check_instance_shape(inst);
    Instance out = inst;
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = 0.0;
    for (const auto& c : inst.clients)
        for (const auto& f : inst.facilities) {
            double d = std::sqrt(squared_distance(c, f));
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
    double n = static_cast<double>(inst.n());
    if (dmin <= 0.0) {
        out.degenerate = true;
        out.range_flag = false;
        return out;
    }
    out.degenerate = false;
    out.range_flag = dmax / dmin > std::pow(n, 6.0);
    if (dmin == 1.0) return out;
    double s = 1.0 / dmin;
    for (auto& p : out.clients)
        for (auto& x : p) x *= s;
    for (auto& p : out.facilities)
        for (auto& x : p) x *= s;
    out.scale = inst.scale * s;
    return out;
}

}  // namespace kmlmp
