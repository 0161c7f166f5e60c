#ifndef KMLMP_SOLVER_HPP
#define KMLMP_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kmlmp/core_model.hpp"
#include "kmlmp/dual_growth.hpp"
#include "kmlmp/nqis.hpp"

namespace kmlmp {

struct SolverParams {
    Objective objective = Objective::KMeans;
    Deltas deltas;
    double p1 = 0.402;
    int C = 3;
    int lambda_points = 64;   // scan resolution between 0 and the largest useful lambda
    int bisection_depth = 40;
    std::size_t mc_samples = 10000;
    std::uint64_t rng_seed = 0;
    std::uint64_t enumeration_cap = 1u << 20;
    std::size_t random_subsets = 10000;
    int interpolation_trials = 32;
    int threads = 1;
};

SolverParams default_params(Objective objective);

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ClientCase {
    int client = -1;
    int a = 0;
    int b = 0;
    int c = 0;
    int c1 = 0;  // I3 members whose partner is among the client's I2 neighbours
    int c2 = 0;
    std::string tag;
    int group = 0;  // 1-based
    bool q_pair = false;
    double A = 0.0;
    double B = 0.0;
};

struct CaseAccounting {
    Objective objective = Objective::KMeans;
    std::vector<double> Q;
    std::vector<double> R;
    std::vector<ClientCase> clients;
};

CaseAccounting client_case_stats(const Instance& inst, const DualGrowthResult& growth,
                                 const NestedQIS& nqis);
CaseAccounting client_case_stats(const Instance& inst, const CostMatrix& cost,
                                 const DualGrowthResult& growth, const NestedQIS& nqis);

struct ClientOutcome {
    ClientCase kase;
    double mean_cost = 0.0;
    double expected_dual = 0.0;  // A_j - p B_j, exact since every I2/I3 marginal is p
    double ratio = 0.0;          // mean_cost / expected_dual, 0 when the dual is 0
};

struct LmpOutcome {
    double lambda = 0.0;
    double p = 0.0;
    DualGrowthResult growth;
    NestedQIS nqis;
    std::size_t samples = 0;
    double mean_cost = 0.0;
    double stderr_cost = 0.0;
    double mean_size = 0.0;
    double expected_size = 0.0;
    double alpha_sum = 0.0;
    double dual_surrogate = 0.0;  // sum alpha - lambda E|S|
    std::vector<ClientOutcome> per_client;
};

LmpOutcome lmp_solve(const Instance& inst, double lambda, const SolverParams& params);

struct PipelineState {
    double lambda = 0.0;
    DualGrowthResult growth;
    NestedQIS nqis;
    double expected = 0.0;
};

struct Bracket {
    PipelineState lo;                 // expected size >= k
    std::optional<PipelineState> hi;  // expected size < k; absent when no lambda gets below k
    std::vector<double> scanned;      // every lambda evaluated, in order
};

// largest lambda the scan needs: beyond it a single facility absorbs every client
double lambda_ceiling(const CostMatrix& cost);

PipelineState pipeline_at(const Instance& inst, const CostMatrix& cost, double lambda,
                          const SolverParams& params, const std::vector<int>* warm_i1 = nullptr);

Bracket sweep_lambda(const Instance& inst, int k, const SolverParams& params);

struct AssemblyTrace {
    std::string route;  // "probability", "interpolation" or "greedy"
    double probability_cost = -1.0;
    double interpolation_cost = -1.0;
    double greedy_cost = -1.0;
    double p_used = 0.0;
    bool enumerated = false;
};

CenterSet assemble_k_solution(const Instance& inst, const Bracket& bracket, int k,
                              const SolverParams& params, AssemblyTrace* trace = nullptr);

// Delete the center whose removal raises the cost least, until |S| = k.
CenterSet greedy_reduce(const CostMatrix& cost, std::vector<int> centers, int k);

// The single-independent-set LMP step: S = MIS of H(delta) over tight facilities.
struct SingleSetOutcome {
    std::vector<int> centers;
    double cost = 0.0;
    double dual = 0.0;
};
SingleSetOutcome single_set_lmp(const Instance& inst, double lambda, double delta);

}  // namespace kmlmp

#endif  // KMLMP_SOLVER_HPP
