#include "kmlmp/dual_growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace kmlmp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double level_tol(double x) { return 1e-12 * std::max(1.0, std::abs(x)); }

}  // namespace

bool strictly_reaches(double alpha, double cost) {
    return alpha > cost + level_tol(alpha);
}

DualGrowthResult grow_duals(const Instance& inst, double lambda) {
    check_instance_shape(inst);
    return grow_duals(CostMatrix(inst), lambda);
}

DualGrowthResult grow_duals(const CostMatrix& c, double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("lambda must be a finite nonnegative number");
    const std::size_t n = c.n();
    const std::size_t m = c.m();

    std::vector<std::vector<int>> order(m, std::vector<int>(n));
    for (std::size_t i = 0; i < m; ++i) {
        auto& o = order[i];
        std::iota(o.begin(), o.end(), 0);
        std::stable_sort(o.begin(), o.end(), [&](int a, int b) {
            return c(static_cast<std::size_t>(a), i) < c(static_cast<std::size_t>(b), i);
        });
    }

    DualGrowthResult r;
    r.lambda = lambda;
    r.alpha.assign(n, 0.0);
    r.is_tight.assign(m, 0);
    r.tight_level.assign(m, -1.0);
    r.witness.assign(n, -1);

    std::vector<char> growing(n, 1);
    std::vector<double> frozen_load(m, 0.0);
    std::vector<double> nearest_tight(n, kInf);
    std::size_t n_growing = n;
    double level = 0.0;
    const double lam_tol = level_tol(lambda);

    auto tight_time = [&](std::size_t i) {
        double need = lambda - frozen_load[i];
        if (need <= lam_tol) return level;
        double cnt = 0.0;
        double sum = 0.0;
        for (int j : order[i]) {
            if (!growing[static_cast<std::size_t>(j)]) continue;
            double cj = c(static_cast<std::size_t>(j), i);
            if (cnt > 0.0) {
                double tau = (need + sum) / cnt;
                if (tau <= cj) return std::max(tau, level);
            }
            cnt += 1.0;
            sum += cj;
        }
        if (cnt == 0.0) return kInf;
        return std::max((need + sum) / cnt, level);
    };

    auto freeze = [&](std::size_t j, double tau, int wit) {
        growing[j] = 0;
        --n_growing;
        r.alpha[j] = tau;
        r.witness[j] = wit;
        for (std::size_t i = 0; i < m; ++i) frozen_load[i] += std::max(tau - c(j, i), 0.0);
    };

    std::vector<double> ttime(m, kInf);
    while (n_growing > 0) {
        double next = kInf;
        for (std::size_t i = 0; i < m; ++i) {
            if (r.is_tight[i]) continue;
            ttime[i] = tight_time(i);
            next = std::min(next, ttime[i]);
        }
        for (std::size_t j = 0; j < n; ++j)
            if (growing[j]) next = std::min(next, nearest_tight[j]);
        if (!std::isfinite(next)) throw std::logic_error("growth process stalled");
        level = next;
        const double tol = level_tol(level);

        std::vector<std::size_t> fresh;
        for (std::size_t i = 0; i < m; ++i) {
            if (!r.is_tight[i] && ttime[i] <= level + tol) {
                r.is_tight[i] = 1;
                r.tight_level[i] = level;
                fresh.push_back(i);
                ++r.events;
            }
        }
        for (std::size_t i : fresh)
            for (std::size_t j = 0; j < n; ++j)
                if (growing[j] && c(j, i) <= level + tol) {
                    freeze(j, level, static_cast<int>(i));
                    ++r.events;
                }
        for (std::size_t j = 0; j < n; ++j) {
            if (!growing[j]) continue;
            for (std::size_t i : fresh) nearest_tight[j] = std::min(nearest_tight[j], c(j, i));
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!growing[j] || nearest_tight[j] > level + tol) continue;
            int wit = -1;
            for (std::size_t i = 0; i < m; ++i)
                if (r.is_tight[i] && c(j, i) <= level + tol) {
                    wit = static_cast<int>(i);
                    break;
                }
            freeze(j, level, wit);
            ++r.events;
        }
    }

    for (std::size_t i = 0; i < m; ++i)
        if (r.is_tight[i]) r.tight.push_back(static_cast<int>(i));

    r.client_neighbors.assign(n, {});
    r.facility_neighbors.assign(m, {});
    r.t.assign(m, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i)
            if (strictly_reaches(r.alpha[j], c(j, i))) {
                r.client_neighbors[j].push_back(static_cast<int>(i));
                r.facility_neighbors[i].push_back(static_cast<int>(j));
                r.t[i] = std::max(r.t[i], r.alpha[j]);
            }
    return r;
}

std::vector<DualViolation> check_dual_feasibility(const Instance& inst,
                                                  const std::vector<double>& alpha,
                                                  double lambda) {
    return check_dual_feasibility(CostMatrix(inst), alpha, lambda);
}

std::vector<DualViolation> check_dual_feasibility(const CostMatrix& c,
                                                  const std::vector<double>& alpha,
                                                  double lambda) {
    if (alpha.size() != c.n()) throw std::invalid_argument("alpha size mismatch");
    std::vector<DualViolation> out;
    double tol = lambda > 0.0 ? 1e-9 * lambda : 1e-9;
    for (std::size_t i = 0; i < c.m(); ++i) {
        double load = 0.0;
        for (std::size_t j = 0; j < c.n(); ++j) load += std::max(alpha[j] - c(j, i), 0.0);
        if (load > lambda + tol) out.push_back({static_cast<int>(i), load, lambda});
    }
    for (std::size_t j = 0; j < c.n(); ++j)
        if (alpha[j] < 0.0) out.push_back({-1, alpha[j], lambda});
    return out;
}

double dual_objective(const std::vector<double>& alpha, double lambda, double k) {
    double s = 0.0;
    for (double a : alpha) s += a;
    return s - lambda * k;
}

}  // namespace kmlmp
