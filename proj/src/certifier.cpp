#include "kmlmp/certifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "kmlmp/parallel.hpp"
#include "kmlmp/rng.hpp"
#include "kmlmp/simplex_gmp.hpp"

namespace kmlmp {

namespace {

const double kSqrt2 = std::sqrt(2.0);

double sq(double x) { return x * x; }

double kmeans_K(const Deltas& d) { return sq(1.0 + std::sqrt(d.d1)); }

void need(bool ok, const std::string& id, const std::string& what) {
    if (!ok) throw std::invalid_argument("case " + id + ": " + what);
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

double kmeans_case(const std::string& id, double p, const Deltas& d, const CaseAux& x) {
    const double K = kmeans_K(d);
    const double s1 = std::sqrt(d.d1);
    const double s3 = std::sqrt(d.d3);
    const double q = 1.0 - 2.0 * p;
    if (id == "1.a" || id == "4.a.i" || id == "4.b.i") return sq(1.0 + std::sqrt(d.d2));
    if (id == "1.b" || id == "1.e" || id == "4.a.ii" || id == "4.b.ii")
        return 1.0 + p * d.d2 + (1.0 - p) * d.d1 + 2.0 * std::sqrt(p * p * d.d2 + (1.0 - p) * d.d1);
    if (id == "1.c")
        return std::max(sq(std::sqrt(0.75) + s1), ((1.0 - p) * K + 0.75 * p) / (1.0 - p / 4.0));
    if (id == "1.d") return p + (1.0 - p) * K;
    if (id == "1.g.i") {
        const double w = sq(1.0 - s3);
        return std::max(sq(s1 + s3), ((1.0 - p) * K + p * w) / (1.0 - p + p * w));
    }
    if (id == "1.g.ii") return p * sq(1.0 + s3) + (1.0 - p) * K;
    if (id == "2.a") {
        need(x.c2 >= 1, id, "c2 must be >= 1");
        const double P = (1.0 - p) * (0.5 + 0.5 * std::pow(q, x.c2));
        return (P * K + 1.0 - P) / (1.0 - p);
    }
    if (id == "2.b") {
        need(x.c >= 2, id, "c must be >= 2");
        if (x.c >= 6) return (0.5 + (1.0 - p - 0.5 * (1.0 - std::pow(q, 6))) * K) / q;
        const double hit = 0.5 * (1.0 - std::pow(q, x.c));
        const double c = static_cast<double>(x.c);
        return (hit * (c - 1.0) / c + (1.0 - p - hit) * K) / q;
    }
    if (id == "2.c")
        return (1.0 - p * (2.0 * kSqrt2 - 2.0) + q * (1.0 - p) * (K - 1.0)) / (1.0 - p * (2.0 * kSqrt2 - 1.0));
    if (id == "2.d") {
        const double E = d.d1 + sq(s1 + s3);
        return (q * K * E + p * K * d.d3) / (q * E + p * K * d.d3);
    }
    if (id == "3.a") {
        const double m = sq(1.0 - p);
        return (m * K + 1.0 - m) / (1.0 - p);
    }
    if (id == "3.b") {
        need(x.b >= 2, id, "b must be >= 2");
        if (x.b >= 6) return (std::pow(1.0 - p, 5) * q * K + 1.0) / (1.0 - (1.0 + (2.0 - d.d3) / 7.0) * p);
        const double m = std::pow(1.0 - p, x.b - 1) * q;
        return (m * K + 1.0 - m) / (1.0 - (1.0 + (2.0 - d.d3) / (x.b + 1.0)) * p);
    }
    if (id == "3.c") {
        need(x.b >= 2, id, "b must be >= 2");
        need(x.c1 >= 2 || (x.c1 == 1 && x.c2 >= 1), id, "needs c1 >= 2 or c1 = 1, c2 >= 1");
        need(x.c2 >= 0, id, "c2 must be >= 0");
        if (x.b >= 6) return (1.0 + std::pow(1.0 - p, 5) * q * (K - 1.0)) / q;
        const double b = static_cast<double>(x.b);
        const double none = std::pow(1.0 - p, x.b - 1) * (0.5 * q + 0.5 * std::pow(q, x.c1)) *
                            (0.5 + 0.5 * std::pow(q, x.c2));
        return ((b - 1.0) / b + std::pow(1.0 - p, x.b) / b + none * (K - 1.0)) / q;
    }
    if (id == "4.c") {
        need(x.c >= 2, id, "c must be >= 2");
        const int c = std::min(x.c, 3);
        const double tail = x.c >= 3 ? 0.0 : p / static_cast<double>(c);
        const double v = ((0.5 * q + 0.5 * std::pow(q, c)) * K - (0.5 + 0.5 * std::pow(q, c)) +
                          p * sq(1.0 + kSqrt2) + 1.0 - tail) /
                         (1.0 - p);
        return std::max(2.5 + kSqrt2, v);
    }
    if (id == "5.a") {
        need(x.a >= 1 && x.h >= 0, id, "needs a >= 1 and h >= 0");
        if (x.a == 1 && x.h == 0) return 1.0;
        const double a = x.a;
        const double h = x.h;
        const double pb = 2.0 * p;
        const double T1 = a + pb * h;
        const double T3 = d.d1 * a * (a - 1.0) / 2.0 + d.d2 * pb * a * h + d.d2 * pb * pb * h * (h - 1.0) / 2.0;
        return T3 / (T1 * (T1 - T1 * T1 + T3));
    }
    throw UnknownCase("unknown k-means case " + id);
}

double kmedian_case(const std::string& id, double p, const Deltas& d, const CaseAux& x) {
    const double q = 1.0 - 2.0 * p;
    const double one_r2 = 1.0 + kSqrt2;
    if (id == "1.a'") return 1.0 + d.d2;
    if (id == "1.b'" || id == "1.e'") return kmedian_F(p, d.d2, 1.1);
    if (id == "1.c'" || id == "1.d'") return 1.0 + (1.0 - p) * d.d1;
    if (id == "1.f'") return (q + d.d1) / (q + p * d.d1);
    if (id == "1.g.i'") return std::max(d.d1 + d.d3, (1.0 + d.d1 - p * (d.d1 + d.d3)) / (1.0 - p * d.d3));
    if (id == "1.g.ii'") return p * (1.0 + d.d3) + (1.0 - p) * (1.0 + d.d1);
    if (id == "2.a'" || id == "2.b'") return std::max(1.0 + d.d2, kmedian_F(p, d.d2, 1.1));
    if (id == "3.a'") {
        const double u = 2.0 * p - 2.0 * p * p;
        return (one_r2 - (3.0 - kSqrt2) * u) / (1.0 - (2.0 - kSqrt2) * u);
    }
    if (id == "3.b.i'") return (one_r2 * q + d.d3 * p) / (q + d.d3 * p);
    if (id == "3.b.ii'") {
        need(x.c >= 2, id, "c must be >= 2");
        if (x.c >= 3) return 0.5 * (1.0 + one_r2 * q + kSqrt2 * std::pow(q, 3)) / q;
        const double c = x.c;
        const double qc = std::pow(q, x.c);
        return (one_r2 * (0.5 * q + 0.5 * qc) + 0.5 * (1.0 - qc) * std::sqrt((c - 1.0) / c)) /
               (1.0 - p * (1.0 + c - std::sqrt(c * (c - 1.0))));
    }
    if (id == "4.a'") return 2.0;
    if (id == "4.b'") return 1.0 / q;
    if (id == "4.c'") return (d.d2 - 1.0) / ((d.d2 - 1.0) - 2.0 * (2.0 - kSqrt2) * p);
    if (id == "4.d'") return 1.0 / (0.5 - (2.0 - d.d2) * 2.0 * p);
    if (id == "4.e'") return 1.0 / (0.5 - (2.0 - kSqrt2) * 2.0 * p);
    throw UnknownCase("unknown k-median case " + id);
}

void check_rho_domain(Objective objective, double p) {
    RhoDomain dom = rho_domain(objective);
    if (!(p >= dom.lo - 1e-12 && p <= dom.hi + 1e-12))
        throw OutOfDomain("p = " + fmt(p) + " outside the proven range [" + fmt(dom.lo) + ", " +
                          fmt(dom.hi) + "]");
}

}  // namespace

const std::vector<std::string>& case_ids(Objective objective) {
    static const std::vector<std::string> kmeans{
        "1.a", "1.b", "1.c", "1.d", "1.e", "1.g.i", "1.g.ii", "2.a", "2.b", "2.c",
        "2.d", "3.a", "3.b", "3.c", "4.a.i", "4.a.ii", "4.b.i", "4.b.ii", "4.c", "5.a"};
    static const std::vector<std::string> kmedian{
        "1.a'", "1.b'", "1.c'", "1.d'", "1.e'", "1.f'", "1.g.i'", "1.g.ii'", "2.a'",
        "2.b'", "3.a'", "3.b.i'", "3.b.ii'", "4.a'", "4.b'", "4.c'", "4.d'", "4.e'"};
    return objective == Objective::KMeans ? kmeans : kmedian;
}

double kmedian_F(double p, double delta2, double T) {
    const double X = p * p + p * (1.0 - p) * T;
    const double Y = sq(1.0 - p) + p * (1.0 - p) / T;
    const double S = X + Y;
    return std::sqrt(3.0 * S + 2.0 * std::sqrt(2.0 * S * S - delta2 * delta2 * X * Y));
}

double kmedian_F_inf(double p, double delta2, double* argmin_T) {
    double lo = 0.05, hi = 20.0;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - g * (hi - lo);
    double b = lo + g * (hi - lo);
    double fa = kmedian_F(p, delta2, a);
    double fb = kmedian_F(p, delta2, b);
    for (int it = 0; it < 200; ++it) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = kmedian_F(p, delta2, a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = kmedian_F(p, delta2, b);
        }
    }
    const double T = 0.5 * (lo + hi);
    if (argmin_T) *argmin_T = T;
    return kmedian_F(p, delta2, T);
}

double kmeans_small_zeta_2d(double p, const Deltas& d) {
    const double r = d.d1 / d.d3;
    const double q = 1.0 - 2.0 * p;
    return (q * (sq(1.0 + std::sqrt(r)) + r) + p) / (q / 0.25 + p);
}

double kmeans_5a_tail(double p, const Deltas& d, int regime) {
    const double q = 1.0 - 2.0 * p;
    const double e = d.d1 / 2.0 - 1.0;
    switch (regime) {
        case 0:  // a = 1, h >= 1
            return 2.0 / (1.0 - 4.0 * p * p);
        case 1:  // a >= 2, h = 0
            return 0.5 * (1.0 + 1.0 / e);
        case 2:  // a = 2, h >= 1
            return 1.0 / (2.0 + 2.0 * p) + std::max((1.0 + 2.0 * p) / (d.d1 - 2.0 + 2.0 * p * q), 1.0 / q);
        case 3:  // a >= 3, h >= 1
            return 1.0 / 3.0 + std::max(1.0 / (3.0 * e), 1.0 / q);
        default:
            throw std::invalid_argument("unknown tail regime");
    }
}

double eval_case_bound(Objective objective, const std::string& case_id, double p,
                       const Deltas& deltas, const CaseAux& aux) {
    const double hi = objective == Objective::KMeans ? 0.5 : 0.337;
    if (!(p >= 0.0 && p < hi)) throw OutOfDomain("p = " + fmt(p) + " outside the case validity range");
    return objective == Objective::KMeans ? kmeans_case(case_id, p, deltas, aux)
                                          : kmedian_case(case_id, p, deltas, aux);
}

RhoDomain rho_domain(Objective objective) {
    if (objective == Objective::KMeans) return {0.096, 0.402};
    return {0.01, 0.068};
}

std::vector<CaseBound> case_table(Objective objective, double p, const Deltas& deltas) {
    std::vector<CaseBound> out;
    auto add = [&](const std::string& id, CaseAux aux, const std::string& note) {
        CaseBound cb;
        cb.objective = objective;
        cb.case_id = id;
        cb.aux = aux;
        cb.note = note;
        cb.value = eval_case_bound(objective, id, p, deltas, aux);
        out.push_back(cb);
    };
    if (objective == Objective::KMeans) {
        for (const char* id : {"1.a", "1.b", "1.c", "1.d", "1.e", "1.g.i", "1.g.ii", "2.c", "2.d", "3.a",
                               "4.a.i", "4.a.ii", "4.b.i", "4.b.ii"})
            add(id, {}, "exact");
        for (int c2 = 1; c2 <= 5; ++c2) {
            CaseAux x;
            x.c = c2;
            x.c2 = c2;
            add("2.a", x, "exact");
        }
        for (int c = 2; c <= 6; ++c) {
            CaseAux x;
            x.c = c;
            x.c1 = c;
            add("2.b", x, c >= 6 ? "tail c>=6" : "exact");
        }
        for (int b = 2; b <= 6; ++b) {
            CaseAux x;
            x.b = b;
            x.c = 1;
            x.c1 = 1;
            add("3.b", x, b >= 6 ? "tail b>=6" : "exact");
            for (auto [c1, c2] : {std::pair{1, 1}, std::pair{2, 0}}) {
                CaseAux y;
                y.b = b;
                y.c1 = c1;
                y.c2 = c2;
                y.c = c1 + c2;
                add("3.c", y, b >= 6 ? "tail b>=6" : "exact");
                if (b >= 6) break;
            }
        }
        for (int c = 2; c <= 3; ++c) {
            CaseAux x;
            x.c = c;
            add("4.c", x, c >= 3 ? "tail c>=3" : "exact");
        }
        for (int a = 1; a <= 4; ++a)
            for (int h = 0; h <= 4; ++h) {
                CaseAux x;
                x.a = a;
                x.h = h;
                add("5.a", x, "exact");
            }
        const char* regimes[] = {"tail a=1,h>=1", "tail a>=2,h=0", "tail a=2,h>=1", "tail a>=3,h>=1"};
        for (int r = 0; r < 4; ++r) {
            CaseBound cb;
            cb.objective = objective;
            cb.case_id = "5.a";
            cb.aux.a = r == 0 ? 1 : (r == 3 ? 3 : 2);
            cb.aux.h = r == 1 ? 0 : 1;
            cb.note = regimes[r];
            cb.value = kmeans_5a_tail(p, deltas, r);
            out.push_back(cb);
        }
    } else {
        for (const char* id : {"1.a'", "1.b'", "1.c'", "1.d'", "1.e'", "1.f'", "1.g.i'", "1.g.ii'", "2.a'",
                               "2.b'", "3.a'", "3.b.i'", "4.a'", "4.b'", "4.c'", "4.d'", "4.e'"})
            add(id, {}, "exact");
        for (int c = 2; c <= 3; ++c) {
            CaseAux x;
            x.b = 1;
            x.c = c;
            add("3.b.ii'", x, c >= 3 ? "tail c>=3" : "exact");
        }
    }
    return out;
}

double rho(Objective objective, double p, const Deltas& deltas) {
    check_rho_domain(objective, p);
    double best = 0.0;
    for (const CaseBound& cb : case_table(objective, p, deltas)) best = std::max(best, cb.value);
    return best;
}

double rho(Objective objective, double p) { return rho(objective, p, default_deltas(objective)); }

int group_count(Objective objective) { return objective == Objective::KMeans ? 5 : 3; }

double group_rho(Objective objective, int group, double p, const Deltas& d) {
    if (group < 1 || group > group_count(objective))
        throw std::invalid_argument("group " + std::to_string(group) + " out of range");
    check_rho_domain(objective, p);
    if (objective == Objective::KMeans) {
        const double K = kmeans_K(d);
        switch (group) {
            case 1:
                return sq(1.0 + std::sqrt(d.d2));
            case 2:
                return 1.0 + p * d.d2 + (1.0 - p) * d.d1 + 2.0 * std::sqrt(p * p * d.d2 + (1.0 - p) * d.d1);
            case 3: {
                const double w = sq(1.0 - std::sqrt(d.d3));
                return ((1.0 - p) * K + p * w) / (1.0 - p + p * w);
            }
            case 4:
                return kmeans_case("2.d", p, d, {});
            default:
                return 5.68;
        }
    }
    switch (group) {
        case 1:
            return std::max(1.0 + d.d2, kmedian_F(p, d.d2, 1.1));
        case 2:
            return kmedian_case("3.a'", p, d, {});
        default:
            return 1.0 / (0.5 - 2.0 * (2.0 - d.d2) * p);
    }
}

double group_rho(Objective objective, int group, double p) {
    return group_rho(objective, group, p, default_deltas(objective));
}

bool group_increasing(Objective objective, int group) {
    return objective == Objective::KMedian && group == 3;
}

std::vector<double> group_ratio_caps(Objective objective, const Deltas& d) {
    if (objective == Objective::KMeans) return {1.0, 1.0, 1.0, 1.75, 2.0};
    return {1.0, 2.0, 2.0 * (2.0 - kSqrt2) / (d.d2 - 1.0)};
}

double default_p1(Objective objective) { return objective == Objective::KMeans ? 0.402 : 0.068; }
double default_p0(Objective objective) { return objective == Objective::KMeans ? 0.5 : 0.337; }

double fallback_branch(double rho_p1, double r, double p1, double p0) {
    const double inner = p0 * r / p1 - 1.0;
    if (!(inner > 0.0)) return std::numeric_limits<double>::infinity();
    return rho_p1 * (1.0 + 1.0 / (4.0 * r * inner));
}

FinalBound final_ratio_bound(Objective objective, double p1, double p0, const Deltas& deltas,
                             double r_step) {
    check_rho_domain(objective, p1);
    FinalBound out;
    out.rho_p1 = rho(objective, p1, deltas);
    const RhoDomain dom = rho_domain(objective);
    const double r_edge = p1 / dom.lo;
    auto value_at = [&](double r) {
        const double B = fallback_branch(out.rho_p1, r, p1, p0);
        const double p = p1 / r;
        if (p < dom.lo) return B;
        return std::min(rho(objective, std::min(p, dom.hi), deltas), B);
    };
    double best = -1.0;
    double best_r = 1.0;
    const long steps = static_cast<long>(std::floor((r_edge - 1.0) / r_step));
    for (long s = 0; s <= steps; ++s) {
        const double r = 1.0 + static_cast<double>(s) * r_step;
        const double v = value_at(r);
        if (v > best) {
            best = v;
            best_r = r;
        }
    }
    // beyond the edge only the fallback branch applies and it is decreasing in r
    const double edge_v = fallback_branch(out.rho_p1, r_edge, p1, p0);
    if (edge_v > best) {
        best = edge_v;
        best_r = r_edge;
    }
    const double lo = std::max(1.0, best_r - r_step);
    const double hi = std::min(r_edge, best_r + r_step);
    for (int s = 0; s <= 2000; ++s) {
        const double r = lo + (hi - lo) * s / 2000.0;
        const double v = value_at(r);
        if (v > best) {
            best = v;
            best_r = r;
        }
    }
    out.value = best;
    out.argmax_r = best_r;
    return out;
}

FinalBound final_ratio_bound(Objective objective) {
    return final_ratio_bound(objective, default_p1(objective), default_p0(objective),
                             default_deltas(objective));
}

FeasibilityResult<double> lp_feasible_double(std::size_t num_vars,
                                             const std::vector<LinearConstraint<double>>& cons,
                                             long scale_var, double tol) {
    return solve_feasibility<double>(num_vars, cons, scale_var, tol);
}

Verdict lp_feasible_exact(std::size_t num_vars, const std::vector<LinearConstraint<double>>& cons,
                          long scale_var, double tol, double* slack) {
    std::vector<LinearConstraint<mpq_class>> q;
    q.reserve(cons.size());
    for (const auto& c : cons) {
        LinearConstraint<mpq_class> e;
        e.rel = c.rel;
        e.strict = c.strict;
        e.rhs = mpq_class(c.rhs);
        for (double v : c.coeffs) e.coeffs.emplace_back(v);
        q.push_back(std::move(e));
    }
    auto res = solve_feasibility<mpq_class>(num_vars, q, scale_var, mpq_class(tol));
    if (slack) *slack = res.verdict == Verdict::Feasible || !res.point.empty() ? res.slack.get_d() : 0.0;
    return res.verdict;
}

LpCheck lp_feasible(std::size_t num_vars, const std::vector<LinearConstraint<double>>& cons,
                    long scale_var, double tol, double recheck_band) {
    LpCheck out;
    FeasibilityResult<double> r;
    bool cycled = false;
    try {
        r = lp_feasible_double(num_vars, cons, scale_var, tol);
    } catch (const CyclingError&) {
        cycled = true;
    }
    if (!cycled) {
        out.verdict = r.verdict;
        out.slack = r.slack;
        out.point = r.point;
    }
    const bool borderline = !cycled && !r.point.empty() && std::fabs(r.slack - tol) <= recheck_band;
    if (cycled || borderline) {
        double s = 0.0;
        out.verdict = lp_feasible_exact(num_vars, cons, scale_var, tol, &s);
        out.slack = s;
        out.exact_recheck = true;
    }
    return out;
}

GridConfig default_grid(Objective objective) {
    GridConfig g;
    g.deltas = default_deltas(objective);
    g.p1 = default_p1(objective);
    g.p0 = default_p0(objective);
    if (objective == Objective::KMeans) {
        g.r_lo = 2.37;
        g.r_hi = 4.18;
        g.coarse_step = 0.01;
        g.refine_factors = {10, 10};
    } else {
        g.r_lo = 2.4;
        g.r_hi = 3.42;
        g.coarse_step = 0.005;
        g.refine_factors = {5};
    }
    return g;
}

std::vector<LinearConstraint<double>> cell_constraints(Objective objective, double rho_target,
                                                       const CellSpec& cell, const GridConfig& grid,
                                                       double rho_p1) {
    const int g = group_count(objective);
    const std::size_t nv = static_cast<std::size_t>(2 * g + 1);
    const std::size_t D = static_cast<std::size_t>(2 * g);
    const double p1 = grid.p1;
    const double lo_p = p1 / cell.r1;
    const double hi_p = p1 / cell.r0;
    const std::vector<double> caps = group_ratio_caps(objective, grid.deltas);

    std::vector<LinearConstraint<double>> cons;

    // D' = sum(Q_i - (p1/r0) R_i)
    LinearConstraint<double> c1;
    c1.coeffs.assign(nv, 0.0);
    c1.rel = Relation::EQ;
    for (int i = 0; i < g; ++i) {
        c1.coeffs[static_cast<std::size_t>(i)] = -1.0;
        c1.coeffs[static_cast<std::size_t>(g + i)] = hi_p;
    }
    c1.coeffs[D] = 1.0;
    cons.push_back(c1);

    // rho D' < (th1/r0) sum rho_i(p1)(Q_i - p1 R_i) + (1 - th0/r1) rho(p1) (D' + p1 (th1/r0) sum R_i)
    const double w_in = cell.theta1 / cell.r0;
    const double w_out = 1.0 - cell.theta0 / cell.r1;
    LinearConstraint<double> c2;
    c2.coeffs.assign(nv, 0.0);
    c2.rel = Relation::LE;
    c2.strict = true;
    for (int i = 0; i < g; ++i) {
        const double ri = group_rho(objective, i + 1, p1, grid.deltas);
        c2.coeffs[static_cast<std::size_t>(i)] = -w_in * ri;
        c2.coeffs[static_cast<std::size_t>(g + i)] = w_in * ri * p1 - w_out * rho_p1 * p1 * w_in;
    }
    c2.coeffs[D] = rho_target - w_out * rho_p1;
    cons.push_back(c2);

    // rho D' < sum rho_i(p1/r)(Q_i - (p1/r1) R_i), each rho_i at its larger end of the cell
    LinearConstraint<double> c3;
    c3.coeffs.assign(nv, 0.0);
    c3.rel = Relation::LE;
    c3.strict = true;
    for (int i = 0; i < g; ++i) {
        const double pe = group_increasing(objective, i + 1) ? hi_p : lo_p;
        const double ri = group_rho(objective, i + 1, pe, grid.deltas);
        c3.coeffs[static_cast<std::size_t>(i)] = -ri;
        c3.coeffs[static_cast<std::size_t>(g + i)] = ri * lo_p;
    }
    c3.coeffs[D] = rho_target;
    cons.push_back(c3);

    for (int i = 0; i < g; ++i) {
        LinearConstraint<double> c;
        c.coeffs.assign(nv, 0.0);
        c.rel = Relation::LE;
        c.coeffs[static_cast<std::size_t>(g + i)] = 1.0;
        c.coeffs[static_cast<std::size_t>(i)] = -caps[static_cast<std::size_t>(i)];
        cons.push_back(c);
    }
    return cons;
}

namespace {

CellVerdict check_cell(Objective objective, double rho_target, const CellSpec& cell,
                       const GridConfig& grid, double rho_p1, int level, long parent) {
    const int g = group_count(objective);
    auto cons = cell_constraints(objective, rho_target, cell, grid, rho_p1);
    LpCheck r = lp_feasible(static_cast<std::size_t>(2 * g + 1), cons, 2 * g, grid.tol);
    CellVerdict v;
    v.level = level;
    v.parent = parent;
    v.cell = cell;
    v.feasible = r.verdict == Verdict::Feasible;
    v.slack = r.slack;
    v.exact_recheck = r.exact_recheck;
    if (v.feasible) v.point = r.point;
    return v;
}

void range_checks(Objective objective, double rho_target, const GridConfig& grid, double rho_p1,
                  std::vector<RangeCheck>& out) {
    const int g = group_count(objective);
    // small r: the single-set bound rho_i(p1/r) already stays below the target
    {
        const double p_lo = grid.p1 / grid.r_lo;
        const double p_hi = grid.p1;
        double worst = 0.0;
        double worst_p = p_lo;
        const long n = static_cast<long>(std::ceil((p_hi - p_lo) / grid.range_check_step));
        for (long s = 0; s <= n; ++s) {
            const double p = std::min(p_hi, p_lo + static_cast<double>(s) * grid.range_check_step);
            double v = 0.0;
            for (int i = 1; i <= g; ++i) v = std::max(v, group_rho(objective, i, p, grid.deltas));
            if (v > worst) {
                worst = v;
                worst_p = p;
            }
        }
        RangeCheck rc;
        rc.name = "r below grid";
        rc.value = worst;
        rc.bound = rho_target;
        rc.ok = worst < rho_target;
        rc.detail = "max over groups of rho_i(p) for p in [" + fmt(p_lo) + ", " + fmt(p_hi) +
                    "] (worst at p = " + fmt(worst_p) + ")";
        out.push_back(rc);
    }
    // large r: the fallback branch is decreasing in r
    {
        RangeCheck rc;
        rc.name = "r above grid";
        rc.value = fallback_branch(rho_p1, grid.r_hi, grid.p1, grid.p0);
        rc.bound = rho_target;
        rc.ok = rc.value < rho_target;
        rc.detail = "rho(p1) (1 + 1/(4r(p0 r/p1 - 1))) at r = " + fmt(grid.r_hi);
        out.push_back(rc);
    }
}

}  // namespace

CertReport grid_certify(Objective objective, double rho_target, const GridConfig& grid) {
    const auto t0 = std::chrono::steady_clock::now();
    if (!(grid.coarse_step > 0.0)) throw std::invalid_argument("coarse step must be positive");
    if (!(grid.r_lo >= 1.0 && grid.r_hi > grid.r_lo)) throw std::invalid_argument("bad r range");
    if (!(grid.theta_lo >= 0.0 && grid.theta_hi <= 1.0 && grid.theta_hi > grid.theta_lo))
        throw std::invalid_argument("bad theta range");

    CertReport rep;
    rep.objective = objective;
    rep.rho_target = rho_target;
    rep.grid = grid;
    rep.rho_lmp = rho(objective, grid.p1, grid.deltas);
    rep.rho_final = final_ratio_bound(objective, grid.p1, grid.p0, grid.deltas);
    for (int i = 1; i <= group_count(objective); ++i)
        rep.group_rho_p1.push_back(group_rho(objective, i, grid.p1, grid.deltas));
    if (objective == Objective::KMedian) {
        rep.F_at_T = kmedian_F(grid.p1, grid.deltas.d2, 1.1);
        rep.F_inf = kmedian_F_inf(grid.p1, grid.deltas.d2, &rep.F_inf_T);
    }
    range_checks(objective, rho_target, grid, rep.rho_lmp, rep.range_checks);

    const long nt = std::lround((grid.theta_hi - grid.theta_lo) / grid.coarse_step);
    const long nr = std::lround((grid.r_hi - grid.r_lo) / grid.coarse_step);
    std::vector<CellSpec> coarse;
    coarse.reserve(static_cast<std::size_t>(nt * nr));
    for (long a = 0; a < nt; ++a)
        for (long b = 0; b < nr; ++b) {
            CellSpec c;
            c.theta0 = grid.theta_lo + grid.coarse_step * static_cast<double>(a);
            c.theta1 = a + 1 == nt ? grid.theta_hi : grid.theta_lo + grid.coarse_step * static_cast<double>(a + 1);
            c.r0 = grid.r_lo + grid.coarse_step * static_cast<double>(b);
            c.r1 = b + 1 == nr ? grid.r_hi : grid.r_lo + grid.coarse_step * static_cast<double>(b + 1);
            coarse.push_back(c);
        }
    std::vector<CellVerdict> first(coarse.size());
    parallel_for(coarse.size(), grid.threads, [&](std::size_t i) {
        first[i] = check_cell(objective, rho_target, coarse[i], grid, rep.rho_lmp, 0, -1);
    });
    rep.coarse_cells = coarse.size();
    rep.cells = std::move(first);

    const int depth = static_cast<int>(grid.refine_factors.size());
    bool failed = false;
    // depth-first refinement of each feasible coarse cell, stopping at the first
    // cell that stays feasible at the finest level
    std::function<void(std::size_t)> refine = [&](std::size_t idx) {
        if (failed) return;
        const CellVerdict parent = rep.cells[idx];
        if (parent.level >= depth) {
            failed = true;
            rep.witness = parent;
            return;
        }
        const int f = grid.refine_factors[static_cast<std::size_t>(parent.level)];
        const double dt = (parent.cell.theta1 - parent.cell.theta0) / f;
        const double dr = (parent.cell.r1 - parent.cell.r0) / f;
        for (int a = 0; a < f && !failed; ++a)
            for (int b = 0; b < f && !failed; ++b) {
                CellSpec c;
                c.theta0 = parent.cell.theta0 + dt * a;
                c.theta1 = a + 1 == f ? parent.cell.theta1 : parent.cell.theta0 + dt * (a + 1);
                c.r0 = parent.cell.r0 + dr * b;
                c.r1 = b + 1 == f ? parent.cell.r1 : parent.cell.r0 + dr * (b + 1);
                rep.cells.push_back(check_cell(objective, rho_target, c, grid, rep.rho_lmp,
                                               parent.level + 1, static_cast<long>(idx)));
                ++rep.refined_cells;
                if (rep.cells.back().feasible) refine(rep.cells.size() - 1);
            }
    };
    for (std::size_t i = 0; i < rep.coarse_cells; ++i)
        if (rep.cells[i].feasible) ++rep.feasible_coarse;
    for (std::size_t i = 0; i < rep.coarse_cells && !failed; ++i)
        if (rep.cells[i].feasible) refine(i);

    bool ranges_ok = true;
    for (const auto& rc : rep.range_checks) ranges_ok = ranges_ok && rc.ok;
    rep.success = !failed && ranges_ok;
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

namespace {

struct Tracker {
    OracleResult r;
    double tol;
    void see(double observed, std::vector<double> where) {
        ++r.samples;
        if (observed > r.max_observed || r.samples == 1) {
            r.max_observed = observed;
            if (r.violations == 0) r.witness = where;
        }
        if (observed > r.closed_form + tol) {
            if (r.violations == 0) r.witness = std::move(where);
            ++r.violations;
        }
    }
    OracleResult done() {
        r.max_slack = r.closed_form - r.max_observed;
        return r;
    }
};

std::array<double, 3> random_unit(Rng& rng) {
    double x, y, z, n;
    do {
        x = rng.normal();
        y = rng.normal();
        z = rng.normal();
        n = std::sqrt(x * x + y * y + z * z);
    } while (n < 1e-12);
    return {x / n, y / n, z / n};
}

double dist3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return std::sqrt(sq(a[0] - b[0]) + sq(a[1] - b[1]) + sq(a[2] - b[2]));
}

// radius in [0, cap], pushed toward the cap half of the time
double radius(Rng& rng, double cap) {
    return rng.bernoulli(0.5) ? cap : cap * std::cbrt(rng.uniform());
}

}  // namespace

OracleReport closed_form_oracles(const OracleConfig& cfg) {
    OracleReport rep;
    const Deltas dm = default_deltas(Objective::KMeans);
    const Deltas dk = default_deltas(Objective::KMedian);
    const double p = cfg.kmeans_p;
    const double pk = cfg.kmedian_p;
    const double s1 = std::sqrt(dm.d1);
    const double s3 = std::sqrt(dm.d3);

    {  // 1.c: max over t in [0,1]
        Tracker t{{"1.c", 0, kmeans_case("1.c", p, dm, {}), 0, 0, 0, {}}, cfg.tol};
        Rng rng(cfg.seed, 1);
        for (std::size_t s = 0; s < cfg.samples; ++s) {
            const double x = s == 0 ? 0.0 : (s == 1 ? 1.0 : rng.uniform());
            const double v = (p * x * x + (1.0 - p) * sq(x + s1)) / (1.0 - p + p * x * x);
            t.see(v, {x});
        }
        rep.results.push_back(t.done());
    }
    {  // 1.g.i: t, u in [0,1], d >= max(0, u - sqrt(d3 t))
        Tracker t{{"1.g.i", 0, kmeans_case("1.g.i", p, dm, {}), 0, 0, 0, {}}, cfg.tol};
        Rng rng(cfg.seed, 2);
        for (std::size_t s = 0; s < cfg.samples; ++s) {
            const double tt = rng.bernoulli(0.25) ? 1.0 : rng.uniform();
            const double u = rng.bernoulli(0.25) ? 1.0 : rng.uniform();
            const double lo = std::max(0.0, u - std::sqrt(dm.d3 * tt));
            const double dd = rng.bernoulli(0.5) ? lo : lo + 2.0 * rng.uniform();
            const double v = ((1.0 - p) * sq(u + std::sqrt(dm.d1 * tt)) + p * dd * dd) / (1.0 - p + p * dd * dd);
            t.see(v, {tt, u, dd});
        }
        rep.results.push_back(t.done());
    }
    {  // 2.d: t >= 1, beta + gamma >= sqrt(d3 t)
        Tracker t{{"2.d", 0, kmeans_case("2.d", p, dm, {}), 0, 0, 0, {}}, cfg.tol};
        Rng rng(cfg.seed, 3);
        auto raw = [&](double tt, double be, double ga) {
            const double top = std::min(1.0 + s1, std::max(be, ga) + std::sqrt(dm.d1 * tt));
            return ((1.0 - 2.0 * p) * top * top + p * be * be + p * ga * ga) /
                   (1.0 - p * (1.0 - be * be) - p * (1.0 - ga * ga));
        };
        for (std::size_t s = 0; s < cfg.samples; ++s) {
            const double tt = 1.0 + 3.0 * rng.uniform() * rng.uniform();
            const double need_sum = std::sqrt(dm.d3 * tt);
            const double sum = need_sum + (rng.bernoulli(0.5) ? 0.0 : 1.5 * rng.uniform());
            const double be = sum * rng.uniform();
            const double ga = sum - be;
            t.see(raw(tt, be, ga), {tt, be, ga});
        }
        rep.results.push_back(t.done());
        // the stated optimiser attains the closed form
        const double E = dm.d1 + sq(s1 + s3);
        const double scale = s3 * (1.0 + s1) / E;
        const double be = (s3 + s1) * scale;
        const double ga = s1 * scale;
        const double tt = sq(be + ga) / dm.d3;
        OracleResult att;
        att.name = "2.d optimiser";
        att.samples = 1;
        att.closed_form = kmeans_case("2.d", p, dm, {});
        att.max_observed = raw(std::max(1.0, tt), be, ga);
        att.max_slack = att.closed_form - att.max_observed;
        att.witness = {tt, be, ga, be * be + ga * ga, dm.d3 * sq(1.0 + s1) / E};
        if (std::fabs(att.max_slack) > cfg.tol) att.violations = 1;
        rep.results.push_back(att);
    }
    {  // 1.a degenerate boundary: t = 0 attains (1 + sqrt d2)^2
        OracleResult r;
        r.name = "1.a boundary";
        r.samples = 1;
        r.closed_form = kmeans_case("1.a", p, dm, {});
        const double v = (1.0 - p) * sq(1.0 + std::sqrt(dm.d2)) / (1.0 - p);
        r.max_observed = v;
        r.max_slack = r.closed_form - v;
        if (std::fabs(r.max_slack) > cfg.tol) r.violations = 1;
        rep.results.push_back(r);
    }
    {  // k-median 1.g.i': t, u in [0,1]
        Tracker t{{"1.g.i'", 0, kmedian_case("1.g.i'", pk, dk, {}), 0, 0, 0, {}}, cfg.tol};
        Rng rng(cfg.seed, 4);
        for (std::size_t s = 0; s < cfg.samples; ++s) {
            const double tt = rng.bernoulli(0.25) ? 1.0 : rng.uniform();
            const double u = rng.bernoulli(0.25) ? 1.0 : rng.uniform();
            const double m = std::max(0.0, u - tt * dk.d3);
            const double v = ((1.0 - pk) * (u + dk.d1 * tt) + pk * m) / (1.0 - pk + pk * m);
            t.see(v, {tt, u});
        }
        rep.results.push_back(t.done());
    }
    {  // four-point bound in squared distances (the k-means witness argument)
        const double nu1 = dm.d2, nu2 = dm.d1, nu3 = dm.d2;
        const double closed = 1.0 + p * nu1 + (1.0 - p) * nu2 + 2.0 * std::sqrt(p * nu1 + (1.0 - p) * nu2 - p * (1.0 - p) * nu3);
        Tracker t{{"four-point", 0, closed, 0, 0, 0, {}}, cfg.tol};
        Rng rng(cfg.seed, 5);
        std::size_t accepted = 0;
        while (accepted < cfg.samples) {
            const double sg1 = rng.bernoulli(0.5) ? 1.0 : rng.uniform();
            const double sg2 = rng.uniform(0.0, 3.0);
            const double sg3 = rng.uniform(0.0, 3.0);
            std::array<double, 3> B{0, 0, 0};
            auto ua = random_unit(rng);
            const double ra = radius(rng, 1.0);
            std::array<double, 3> A{ua[0] * ra, ua[1] * ra, ua[2] * ra};
            auto uc = random_unit(rng);
            const double rc = radius(rng, std::sqrt(nu1 * std::min(sg1, sg2)));
            std::array<double, 3> C{uc[0] * rc, uc[1] * rc, uc[2] * rc};
            auto ud = random_unit(rng);
            const double rd = radius(rng, std::sqrt(nu2 * std::min(sg1, sg3)));
            std::array<double, 3> Dp{ud[0] * rd, ud[1] * rd, ud[2] * rd};
            if (sq(dist3(C, Dp)) < nu3 * std::min(sg2, sg3)) continue;
            ++accepted;
            (void)B;
            const double v = p * sq(dist3(C, A)) + (1.0 - p) * sq(dist3(Dp, A));
            t.see(v, {sg1, sg2, sg3});
        }
        rep.results.push_back(t.done());
    }
    {  // k-median four points, linear distances, bound at T = 1.1 and at random T
        const double d1 = std::sqrt(2.0);
        Rng rng(cfg.seed, 6);
        Tracker t{{"B.1 (T=1.1)", 0, kmedian_F(pk, dk.d2, 1.1), 0, 0, 0, {}}, cfg.tol};
        Tracker tr{{"B.1 (random T)", 0, 0.0, 0, 0, 0, {}}, cfg.tol};
        double worst_gap = -std::numeric_limits<double>::infinity();
        std::vector<double> worst_w;
        std::size_t violations_rt = 0;
        std::size_t accepted = 0;
        while (accepted < cfg.samples) {
            const double ts = rng.bernoulli(0.5) ? 1.0 : rng.uniform();
            const double t1 = rng.uniform(0.0, 3.0);
            const double t3 = rng.uniform(0.0, 3.0);
            auto uj = random_unit(rng);
            const double rj = radius(rng, 1.0);
            std::array<double, 3> J{uj[0] * rj, uj[1] * rj, uj[2] * rj};
            auto u1 = random_unit(rng);
            const double r1 = radius(rng, d1 * std::min(ts, t1));
            std::array<double, 3> I1{u1[0] * r1, u1[1] * r1, u1[2] * r1};
            auto u3 = random_unit(rng);
            const double r3 = radius(rng, d1 * std::min(ts, t3));
            std::array<double, 3> I3{u3[0] * r3, u3[1] * r3, u3[2] * r3};
            if (dist3(I1, I3) < dk.d2 * std::min(t1, t3)) continue;
            ++accepted;
            const double v = (1.0 - pk) * dist3(J, I1) + pk * dist3(J, I3);
            t.see(v, {ts, t1, t3});
            const double T = std::exp(rng.uniform(-3.0, 3.0));
            const double gap = v - kmedian_F(pk, dk.d2, T);
            if (gap > worst_gap) {
                worst_gap = gap;
                worst_w = {T, v};
            }
            if (gap > cfg.tol) ++violations_rt;
        }
        rep.results.push_back(t.done());
        tr.r.samples = accepted;
        tr.r.closed_form = 0.0;
        tr.r.max_observed = worst_gap;
        tr.r.max_slack = -worst_gap;
        tr.r.violations = violations_rt;
        tr.r.witness = worst_w;
        rep.results.push_back(tr.r);
    }
    for (const auto& r : rep.results) rep.ok = rep.ok && r.violations == 0;
    return rep;
}

}  // namespace kmlmp
