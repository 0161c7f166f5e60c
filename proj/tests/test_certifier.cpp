#include <gtest/gtest.h>

#include <cmath>
#include <gmpxx.h>

#include "kmlmp/certifier.hpp"
#include "kmlmp/io.hpp"
#include "kmlmp/rng.hpp"

using namespace kmlmp;

namespace {

const double kS2 = std::sqrt(2.0);

double sq(double x) { return x * x; }

// second transcriptions of the unbounded families, valid for every aux value
double kmeans_K(const Deltas& d) { return sq(1 + std::sqrt(d.d1)); }

double exact_2b(double p, const Deltas& d, int c) {
    const double q = 1 - 2 * p, K = kmeans_K(d);
    const double hit = 0.5 * (1 - std::pow(q, c));
    return (hit * (c - 1.0) / c + (1 - p - hit) * K) / q;
}

double exact_3b(double p, const Deltas& d, int b) {
    const double q = 1 - 2 * p, K = kmeans_K(d);
    const double m = std::pow(1 - p, b - 1) * q;
    return (m * K + 1 - m) / (1 - (1 + (2 - d.d3) / (b + 1.0)) * p);
}

double exact_3c(double p, const Deltas& d, int b, int c1, int c2) {
    const double q = 1 - 2 * p, K = kmeans_K(d);
    const double none = std::pow(1 - p, b - 1) * (0.5 * q + 0.5 * std::pow(q, c1)) * (0.5 + 0.5 * std::pow(q, c2));
    return ((b - 1.0) / b + std::pow(1 - p, b) / b + none * (K - 1)) / q;
}

double exact_4c(double p, const Deltas& d, int c) {
    const double q = 1 - 2 * p, K = kmeans_K(d);
    const double v = ((0.5 * q + 0.5 * std::pow(q, c)) * K - (0.5 + 0.5 * std::pow(q, c)) + p * sq(1 + kS2) + 1 - p / c) /
                     (1 - p);
    return std::max(2.5 + kS2, v);
}

double exact_5a(double p, const Deltas& d, int a, int h) {
    if (a == 1 && h == 0) return 1.0;
    const double pb = 2 * p;
    const double T1 = a + pb * h;
    const double T3 = d.d1 * a * (a - 1) / 2.0 + d.d2 * pb * a * h + d.d2 * pb * pb * h * (h - 1) / 2.0;
    return T3 / (T1 * (T1 - T1 * T1 + T3));
}

double exact_3bii(double p, int c) {
    const double q = 1 - 2 * p, qc = std::pow(q, c);
    return ((1 + kS2) * (0.5 * q + 0.5 * qc) + 0.5 * (1 - qc) * std::sqrt((c - 1.0) / c)) /
           (1 - p * (1 + c - std::sqrt(c * (c - 1.0))));
}

CaseAux aux_bc(int b, int c, int c1, int c2) {
    CaseAux x;
    x.b = b;
    x.c = c;
    x.c1 = c1;
    x.c2 = c2;
    return x;
}

LinearConstraint<double> row(std::vector<double> coeffs, Relation rel, double rhs, bool strict) {
    LinearConstraint<double> c;
    c.coeffs = std::move(coeffs);
    c.rel = rel;
    c.rhs = rhs;
    c.strict = strict;
    return c;
}

}  // namespace

TEST(CaseBound, Examples) {
    const Deltas km = default_deltas(Objective::KMeans);
    const Deltas kd = default_deltas(Objective::KMedian);
    EXPECT_NEAR(eval_case_bound(Objective::KMeans, "1.a", 0.402, km), 3 + 2 * kS2, 1e-12);
    CaseAux a10;
    a10.a = 1;
    EXPECT_DOUBLE_EQ(eval_case_bound(Objective::KMeans, "5.a", 0.3, km, a10), 1.0);
    EXPECT_NEAR(eval_case_bound(Objective::KMedian, "4.b'", 0.068, kd), 1 / (1 - 0.136), 1e-12);
    EXPECT_NEAR(eval_case_bound(Objective::KMedian, "4.b'", 0.068, kd), 1.15741, 1e-5);
    EXPECT_NEAR(eval_case_bound(Objective::KMedian, "1.c'", 0.068, kd), 1 + (1 - 0.068) * kS2, 1e-12);
    EXPECT_NEAR(eval_case_bound(Objective::KMedian, "1.c'", 0.068, kd), 2.3180, 1e-4);
}

TEST(CaseBound, Errors) {
    const Deltas km = default_deltas(Objective::KMeans);
    EXPECT_THROW(eval_case_bound(Objective::KMeans, "1.f", 0.3, km), UnknownCase);
    EXPECT_THROW(eval_case_bound(Objective::KMedian, "1.a", 0.05, km), UnknownCase);
    EXPECT_THROW(eval_case_bound(Objective::KMeans, "2.b", 0.3, km, aux_bc(0, 1, 1, 0)), std::invalid_argument);
    EXPECT_THROW(eval_case_bound(Objective::KMeans, "3.b", 0.3, km, aux_bc(1, 1, 1, 0)), std::invalid_argument);
    CaseAux bad;
    bad.a = 0;
    EXPECT_THROW(eval_case_bound(Objective::KMeans, "5.a", 0.3, km, bad), std::invalid_argument);
}

TEST(CaseBound, FiniteAndAtLeastOneOverTheDomain) {
    for (Objective obj : {Objective::KMeans, Objective::KMedian}) {
        const RhoDomain dom = rho_domain(obj);
        for (int s = 0; s <= 200; ++s) {
            const double p = dom.lo + (dom.hi - dom.lo) * s / 200.0;
            for (const CaseBound& cb : case_table(obj, p, default_deltas(obj))) {
                EXPECT_TRUE(std::isfinite(cb.value)) << cb.case_id;
                EXPECT_GE(cb.value, 1.0 - 1e-12) << cb.case_id;
            }
        }
    }
}

TEST(CaseBound, TableMatchesSecondTranscription) {
    const Deltas d = default_deltas(Objective::KMeans);
    for (double p : {0.1, 0.2, 0.3, 0.402}) {
        for (int c = 2; c <= 5; ++c)
            EXPECT_NEAR(eval_case_bound(Objective::KMeans, "2.b", p, d, aux_bc(0, c, c, 0)), exact_2b(p, d, c), 1e-12);
        for (int b = 2; b <= 5; ++b) {
            EXPECT_NEAR(eval_case_bound(Objective::KMeans, "3.b", p, d, aux_bc(b, 1, 1, 0)), exact_3b(p, d, b), 1e-12);
            EXPECT_NEAR(eval_case_bound(Objective::KMeans, "3.c", p, d, aux_bc(b, 2, 1, 1)), exact_3c(p, d, b, 1, 1), 1e-12);
        }
        EXPECT_NEAR(eval_case_bound(Objective::KMeans, "4.c", p, d, aux_bc(0, 2, 0, 0)), exact_4c(p, d, 2), 1e-12);
        for (int a = 1; a <= 4; ++a)
            for (int h = 0; h <= 4; ++h) {
                CaseAux x;
                x.a = a;
                x.h = h;
                EXPECT_NEAR(eval_case_bound(Objective::KMeans, "5.a", p, d, x), exact_5a(p, d, a, h), 1e-12);
            }
    }
    const Deltas m = default_deltas(Objective::KMedian);
    EXPECT_NEAR(eval_case_bound(Objective::KMedian, "3.b.ii'", 0.05, m, aux_bc(1, 2, 0, 0)), exact_3bii(0.05, 2), 1e-12);
}

// the truncated aux ranges are covered by the tail values
TEST(CaseBound, TailsDominateLargeAux) {
    const Deltas d = default_deltas(Objective::KMeans);
    const RhoDomain dom = rho_domain(Objective::KMeans);
    for (int s = 0; s <= 60; ++s) {
        const double p = dom.lo + (dom.hi - dom.lo) * s / 60.0;
        const double t2b = eval_case_bound(Objective::KMeans, "2.b", p, d, aux_bc(0, 6, 6, 0));
        for (int c = 6; c <= 300; ++c) EXPECT_LE(exact_2b(p, d, c), t2b + 1e-12) << "c=" << c << " p=" << p;
        const double t3b = eval_case_bound(Objective::KMeans, "3.b", p, d, aux_bc(6, 1, 1, 0));
        const double t3c = eval_case_bound(Objective::KMeans, "3.c", p, d, aux_bc(6, 2, 1, 1));
        for (int b = 6; b <= 100; ++b) {
            EXPECT_LE(exact_3b(p, d, b), t3b + 1e-12) << "b=" << b;
            for (int c1 = 1; c1 <= 6; ++c1)
                for (int c2 = (c1 == 1 ? 1 : 0); c2 <= 6; ++c2) EXPECT_LE(exact_3c(p, d, b, c1, c2), t3c + 1e-12);
        }
        const double t4c = eval_case_bound(Objective::KMeans, "4.c", p, d, aux_bc(0, 3, 0, 0));
        for (int c = 3; c <= 100; ++c) EXPECT_LE(exact_4c(p, d, c), t4c + 1e-12);
        for (int a = 1; a <= 60; ++a)
            for (int h = 0; h <= 60; ++h) {
                if (a <= 4 && h <= 4) continue;
                int regime = a == 1 ? 0 : (h == 0 ? 1 : (a == 2 ? 2 : 3));
                EXPECT_LE(exact_5a(p, d, a, h), kmeans_5a_tail(p, d, regime) + 1e-12) << "a=" << a << " h=" << h;
            }
        if (HasFailure()) break;
    }
    const Deltas m = default_deltas(Objective::KMedian);
    const RhoDomain md = rho_domain(Objective::KMedian);
    for (int s = 0; s <= 60; ++s) {
        const double p = md.lo + (md.hi - md.lo) * s / 60.0;
        const double tail = eval_case_bound(Objective::KMedian, "3.b.ii'", p, m, aux_bc(1, 3, 0, 0));
        for (int c = 3; c <= 300; ++c) EXPECT_LE(exact_3bii(p, c), tail + 1e-12);
    }
}

TEST(CaseBound, MonotoneWhereClaimed) {
    const Deltas d = default_deltas(Objective::KMeans);
    for (double p : {0.1, 0.2, 0.3, 0.402})
        for (int b = 2; b <= 5; ++b) {
            for (int c1 = 1; c1 <= 6; ++c1)
                for (int c2 = (c1 == 1 ? 1 : 0); c2 <= 6; ++c2) {
                    const double v = eval_case_bound(Objective::KMeans, "3.c", p, d, aux_bc(b, c1 + c2, c1, c2));
                    if (c1 + 1 <= 6)
                        EXPECT_LE(eval_case_bound(Objective::KMeans, "3.c", p, d, aux_bc(b, c1 + c2 + 1, c1 + 1, c2)), v + 1e-12);
                    if (c2 + 1 <= 6)
                        EXPECT_LE(eval_case_bound(Objective::KMeans, "3.c", p, d, aux_bc(b, c1 + c2 + 1, c1, c2 + 1)), v + 1e-12);
                }
            for (int c2 = 1; c2 < 6; ++c2)
                EXPECT_LE(eval_case_bound(Objective::KMeans, "2.a", p, d, aux_bc(0, c2 + 1, 0, c2 + 1)),
                          eval_case_bound(Objective::KMeans, "2.a", p, d, aux_bc(0, c2, 0, c2)) + 1e-12);
        }
}

TEST(Rho, CertifiedConstants) {
    EXPECT_LE(rho(Objective::KMeans, 0.402), 3 + 2 * kS2 + 1e-9);
    EXPECT_LE(rho(Objective::KMedian, 0.068), 2.395 + 1e-9);
}

TEST(Rho, CoarseEnvelopeOnWideRange) {
    for (int s = 0; s <= 278; ++s) {
        const double p = 0.1248 + 0.001 * s;
        if (p > 0.402) break;
        EXPECT_LE(rho(Objective::KMeans, p), 5.979) << "p=" << p;
    }
}

TEST(Rho, EqualsMaxOfGroups) {
    for (Objective obj : {Objective::KMeans, Objective::KMedian}) {
        const RhoDomain dom = rho_domain(obj);
        for (int s = 0; s <= 50; ++s) {
            const double p = dom.lo + (dom.hi - dom.lo) * s / 50.0;
            double g = 0;
            for (int i = 1; i <= group_count(obj); ++i) g = std::max(g, group_rho(obj, i, p));
            EXPECT_NEAR(rho(obj, p), g, 1e-9) << to_string(obj) << " p=" << p;
        }
    }
}

TEST(Rho, OutOfDomain) {
    EXPECT_THROW(rho(Objective::KMeans, 0.45), OutOfDomain);
    EXPECT_THROW(rho(Objective::KMeans, 0.01), OutOfDomain);
    EXPECT_THROW(rho(Objective::KMedian, 0.2), OutOfDomain);
    EXPECT_THROW(group_rho(Objective::KMeans, 6, 0.3), std::invalid_argument);
    EXPECT_THROW(group_rho(Objective::KMedian, 0, 0.05), std::invalid_argument);
}

TEST(GroupRho, Examples) {
    for (double p : {0.1, 0.25, 0.402}) {
        EXPECT_DOUBLE_EQ(group_rho(Objective::KMeans, 5, p), 5.68);
        EXPECT_NEAR(group_rho(Objective::KMeans, 1, p), 3 + 2 * kS2, 1e-12);
    }
    EXPECT_NEAR(group_rho(Objective::KMedian, 3, 0.068), 1 / (0.5 - 2 * (2 - 1.395) * 0.068), 1e-12);
    EXPECT_NEAR(group_rho(Objective::KMedian, 3, 0.068), 2.39395, 1e-5);
}

TEST(FinalBound, Examples) {
    FinalBound km = final_ratio_bound(Objective::KMeans);
    EXPECT_LE(km.value, 5.979);
    const double b = fallback_branch(2.395, 3.42, 0.068, 0.337);
    EXPECT_NEAR(b, 2.395 * (1 + 1 / (4 * 3.42 * (0.337 * 3.42 / 0.068 - 1))), 1e-12);
    EXPECT_LT(b, 2.406);
    for (Objective obj : {Objective::KMeans, Objective::KMedian}) {
        const double r = rho(obj, default_p1(obj));
        EXPECT_GE(fallback_branch(r, 1.0, default_p1(obj), default_p0(obj)), r);
        EXPECT_DOUBLE_EQ(std::min(r, fallback_branch(r, 1.0, default_p1(obj), default_p0(obj))), r);
    }
}

TEST(LpFeasible, TrivialSystems) {
    EXPECT_EQ(lp_feasible(1, {row({1}, Relation::GE, 0, false), row({1}, Relation::LE, -1, false)}, -1).verdict,
              Verdict::Infeasible);
    EXPECT_EQ(lp_feasible(1, {row({1}, Relation::GE, 0, false), row({1}, Relation::GE, 1, false)}, -1).verdict,
              Verdict::Feasible);
    EXPECT_EQ(lp_feasible(1, {row({1}, Relation::GE, 1, true),
                              row({1}, Relation::LE, 1, true)},
                          -1)
                  .verdict,
              Verdict::Infeasible);
    // unbounded slack direction is capped and still feasible
    EXPECT_EQ(lp_feasible(1, {row({1}, Relation::GE, 1, true)}, -1).verdict, Verdict::Feasible);
}

// one variable: decide by interval intersection
TEST(LpFeasible, AgreesWithIntervalOracle) {
    Rng rng(41, 0);
    int agree = 0;
    for (int t = 0; t < 1000; ++t) {
        const int rows = 1 + static_cast<int>(rng.below(4));
        std::vector<LinearConstraint<double>> cons;
        double lo = 0, hi = INFINITY;
        bool lo_open = false, hi_open = false, ok = true;
        for (int r = 0; r < rows; ++r) {
            const double a = static_cast<double>(static_cast<int>(rng.below(11)) - 5);
            const double b = static_cast<double>(static_cast<int>(rng.below(11)) - 5);
            const bool le = rng.bernoulli(0.5);
            const bool strict = rng.bernoulli(0.5);
            cons.push_back(row({a}, le ? Relation::LE : Relation::GE, b, strict));
            // a x <= b  <=>  x <= b/a (a>0) or x >= b/a (a<0)
            const double s = le ? 1.0 : -1.0;
            const double A = s * a, B = s * b;
            if (A == 0) {
                ok = ok && (strict ? 0 < B : 0 <= B);
            } else if (A > 0) {
                const double v = B / A;
                if (v < hi || (v == hi && strict)) {
                    hi = v;
                    hi_open = strict;
                }
            } else {
                const double v = B / A;
                if (v > lo || (v == lo && strict)) {
                    lo = v;
                    lo_open = strict;
                }
            }
        }
        const bool feasible = ok && (lo < hi || (lo == hi && !lo_open && !hi_open));
        const Verdict v = lp_feasible(1, cons, -1).verdict;
        EXPECT_EQ(v == Verdict::Feasible, feasible) << "trial " << t;
        agree += (v == Verdict::Feasible) == feasible;
    }
    EXPECT_EQ(agree, 1000);
}

TEST(LpFeasible, DoubleAgreesWithRational) {
    Rng rng(42, 0);
    for (int t = 0; t < 100; ++t) {
        const std::size_t nv = 2 + rng.below(4);
        std::vector<LinearConstraint<double>> cons;
        const int rows = 2 + static_cast<int>(rng.below(6));
        for (int r = 0; r < rows; ++r) {
            std::vector<double> coeffs(nv);
            for (auto& c : coeffs) c = static_cast<double>(static_cast<int>(rng.below(13)) - 6) / 2.0;
            const int rel = static_cast<int>(rng.below(3));
            const bool strict = rel != 2 && rng.bernoulli(0.6);
            cons.push_back(row(coeffs, rel == 0 ? Relation::LE : rel == 1 ? Relation::GE : Relation::EQ,
                               static_cast<double>(static_cast<int>(rng.below(9)) - 4), strict));
        }
        const long scale = rng.bernoulli(0.5) ? static_cast<long>(nv - 1) : -1;
        const auto d = lp_feasible_double(nv, cons, scale);
        const Verdict q = lp_feasible_exact(nv, cons, scale);
        EXPECT_EQ(d.verdict, q) << "system " << t;
        EXPECT_EQ(lp_feasible(nv, cons, scale).verdict, q);
    }
}

TEST(CellConstraints, ZeroThetaUnitRIsInfeasible) {
    const GridConfig g = default_grid(Objective::KMeans);
    const double rp = rho(Objective::KMeans, g.p1, g.deltas);
    const auto cons = cell_constraints(Objective::KMeans, 5.912, {0.0, 0.0, 1.0, 1.0}, g, rp);
    const std::size_t nv = 2 * static_cast<std::size_t>(group_count(Objective::KMeans)) + 1;
    const LpCheck chk = lp_feasible(nv, cons, static_cast<long>(nv - 1));
    EXPECT_EQ(chk.verdict, Verdict::Infeasible);
}

TEST(ClosedForms, OracleSuite) {
    OracleConfig cfg;
    cfg.samples = 100000;
    const OracleReport rep = closed_form_oracles(cfg);
    EXPECT_TRUE(rep.ok);
    EXPECT_GE(rep.results.size(), 8u);
    std::size_t sampled = 0;
    for (const auto& r : rep.results) {
        EXPECT_EQ(r.violations, 0u) << r.name;
        if (r.samples == 1) continue;  // attainment checks evaluate a single point
        EXPECT_GE(r.samples, 100000u) << r.name;
        ++sampled;
    }
    EXPECT_GE(sampled, 6u);
}

TEST(GridCertify, DeterministicAndParented) {
    GridConfig g = default_grid(Objective::KMedian);
    g.r_lo = 2.4;
    g.r_hi = 2.6;
    const CertReport a = grid_certify(Objective::KMedian, 2.406, g);
    const CertReport b = grid_certify(Objective::KMedian, 2.406, g);
    EXPECT_EQ(to_json(a, true).dump(), to_json(b, true).dump());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        const CellVerdict& c = a.cells[i];
        if (c.level == 0) {
            EXPECT_EQ(c.parent, -1);
            continue;
        }
        ASSERT_GE(c.parent, 0);
        ASSERT_LT(static_cast<std::size_t>(c.parent), i);
        const CellVerdict& p = a.cells[static_cast<std::size_t>(c.parent)];
        EXPECT_EQ(p.level + 1, c.level);
        EXPECT_TRUE(p.feasible);
        EXPECT_GE(c.cell.theta0, p.cell.theta0 - 1e-12);
        EXPECT_LE(c.cell.theta1, p.cell.theta1 + 1e-12);
        EXPECT_GE(c.cell.r0, p.cell.r0 - 1e-12);
        EXPECT_LE(c.cell.r1, p.cell.r1 + 1e-12);
    }
    GridConfig t = g;
    t.threads = 3;
    EXPECT_EQ(to_json(grid_certify(Objective::KMedian, 2.406, t), true).dump(), to_json(a, true).dump());
}

TEST(GridCertify, LowTargetYieldsWitness) {
    GridConfig g = default_grid(Objective::KMeans);
    g.r_lo = 3.0;
    g.r_hi = 3.1;
    const CertReport rep = grid_certify(Objective::KMeans, 5.5, g);
    EXPECT_FALSE(rep.success);
    ASSERT_TRUE(rep.witness.has_value());
    EXPECT_TRUE(rep.witness->feasible);
    EXPECT_EQ(rep.witness->level, static_cast<int>(g.refine_factors.size()));
}
