#ifndef KMLMP_CERTIFIER_HPP
#define KMLMP_CERTIFIER_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kmlmp/core_model.hpp"
#include "kmlmp/nqis.hpp"
#include "kmlmp/simplex.hpp"

namespace kmlmp {

class UnknownCase : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class OutOfDomain : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct CaseAux {
    int a = 0;
    int b = 0;
    int c = 0;
    int c1 = 0;
    int c2 = 0;
    int h = 0;
};

struct CaseBound {
    Objective objective = Objective::KMeans;
    std::string case_id;
    CaseAux aux;
    std::string note;  // "exact", or the name of the tail bound used
    double value = 0.0;
};

const std::vector<std::string>& case_ids(Objective objective);

double eval_case_bound(Objective objective, const std::string& case_id, double p,
                       const Deltas& deltas, const CaseAux& aux = {});

// Closed-form helpers used by the envelopes and by the oracles.
double kmedian_F(double p, double delta2, double T);
// golden-section minimiser of kmedian_F over T; informational only
double kmedian_F_inf(double p, double delta2, double* argmin_T = nullptr);
double kmeans_small_zeta_2d(double p, const Deltas& deltas);
// tail bounds for the (a, h) family of the k-means Case 5 bound
double kmeans_5a_tail(double p, const Deltas& deltas, int regime);

struct RhoDomain {
    double lo;
    double hi;
};
RhoDomain rho_domain(Objective objective);

// Every bound that enters rho(p), with the finite aux enumeration.
std::vector<CaseBound> case_table(Objective objective, double p, const Deltas& deltas);
double rho(Objective objective, double p, const Deltas& deltas);
double rho(Objective objective, double p);

int group_count(Objective objective);
double group_rho(Objective objective, int group, double p, const Deltas& deltas);
double group_rho(Objective objective, int group, double p);
// group whose envelope is increasing in p (its value is taken at p1/r0 in the grid)
bool group_increasing(Objective objective, int group);
std::vector<double> group_ratio_caps(Objective objective, const Deltas& deltas);

double default_p1(Objective objective);
double default_p0(Objective objective);

// rho(p1) * (1 + 1 / (4 r (p0 r / p1 - 1)))
double fallback_branch(double rho_p1, double r, double p1, double p0);

struct FinalBound {
    double value = 0.0;
    double argmax_r = 1.0;
    double rho_p1 = 0.0;
};
FinalBound final_ratio_bound(Objective objective, double p1, double p0, const Deltas& deltas,
                             double r_step = 1e-3);
FinalBound final_ratio_bound(Objective objective);

struct LpCheck {
    Verdict verdict = Verdict::Infeasible;
    double slack = 0.0;
    bool exact_recheck = false;  // rational re-solve was used for the verdict
    std::vector<double> point;
};

// Max-slack feasibility with double pivoting; a verdict whose slack lies within
// `recheck_band` of the tolerance is re-derived with rational arithmetic.
LpCheck lp_feasible(std::size_t num_vars, const std::vector<LinearConstraint<double>>& cons,
                    long scale_var, double tol = 1e-9, double recheck_band = 1e-6);
FeasibilityResult<double> lp_feasible_double(std::size_t num_vars,
                                             const std::vector<LinearConstraint<double>>& cons,
                                             long scale_var, double tol = 1e-9);
Verdict lp_feasible_exact(std::size_t num_vars, const std::vector<LinearConstraint<double>>& cons,
                          long scale_var, double tol = 1e-9, double* slack = nullptr);

struct GridConfig {
    double theta_lo = 0.0;
    double theta_hi = 1.0;
    double r_lo = 2.37;
    double r_hi = 4.18;
    double coarse_step = 0.01;
    std::vector<int> refine_factors{10, 10};  // subdivisions per axis at each deeper level
    double tol = 1e-9;
    double p1 = 0.402;
    double p0 = 0.5;
    Deltas deltas;
    double range_check_step = 1e-4;  // sampling step for the small-r justification
    int threads = 1;
};
GridConfig default_grid(Objective objective);

struct CellSpec {
    double theta0, theta1, r0, r1;
};

// Constraint system for one grid cell, variables (Q_1..Q_g, R_1..R_g, D').
std::vector<LinearConstraint<double>> cell_constraints(Objective objective, double rho_target,
                                                       const CellSpec& cell, const GridConfig& grid,
                                                       double rho_p1);

struct CellVerdict {
    int level = 0;
    long parent = -1;  // index into CertReport::cells, -1 for coarse cells
    CellSpec cell{};
    bool feasible = false;
    double slack = 0.0;
    bool exact_recheck = false;
    std::vector<double> point;  // only kept for feasible cells
};

struct RangeCheck {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool ok = false;
    std::string detail;
};

struct CertReport {
    Objective objective = Objective::KMeans;
    double rho_target = 0.0;
    GridConfig grid;
    double rho_lmp = 0.0;  // rho(p1)
    FinalBound rho_final;  // the max-min bound without the grid refinement
    std::vector<double> group_rho_p1;
    double F_at_T = 0.0;       // k-median only
    double F_inf = 0.0;        // k-median only, informational
    double F_inf_T = 0.0;
    std::vector<CellVerdict> cells;
    std::size_t coarse_cells = 0;
    std::size_t feasible_coarse = 0;
    std::size_t refined_cells = 0;
    std::vector<RangeCheck> range_checks;
    bool success = false;
    std::optional<CellVerdict> witness;
    double elapsed_seconds = 0.0;
};

CertReport grid_certify(Objective objective, double rho_target, const GridConfig& grid);

struct OracleConfig {
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    double kmeans_p = 0.402;
    double kmedian_p = 0.068;
    double tol = 1e-9;
};

struct OracleResult {
    std::string name;
    std::size_t samples = 0;
    double closed_form = 0.0;
    double max_observed = 0.0;
    double max_slack = 0.0;  // closed_form - max_observed (largest margin is the smallest slack)
    std::size_t violations = 0;
    std::vector<double> witness;
};

struct OracleReport {
    std::vector<OracleResult> results;
    bool ok = true;
};

OracleReport closed_form_oracles(const OracleConfig& config);

}  // namespace kmlmp

#endif  // KMLMP_CERTIFIER_HPP
