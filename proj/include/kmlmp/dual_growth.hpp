#ifndef KMLMP_DUAL_GROWTH_HPP
#define KMLMP_DUAL_GROWTH_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "kmlmp/core_model.hpp"

namespace kmlmp {

struct DualGrowthResult {
    double lambda = 0.0;
    std::vector<double> alpha;
    std::vector<int> tight;          // ascending facility indices
    std::vector<char> is_tight;      // per facility
    std::vector<double> tight_level; // growth level at which the facility became tight, -1 otherwise
    std::vector<double> t;           // per facility, max alpha over N(i)
    std::vector<int> witness;        // per client
    std::vector<std::vector<int>> client_neighbors;
    std::vector<std::vector<int>> facility_neighbors;
    std::size_t events = 0;
};

struct DualViolation {
    int facility = -1;
    double load = 0.0;
    double lambda = 0.0;
};

// strict neighbourhood test alpha > c with a relative 1e-12 margin
bool strictly_reaches(double alpha, double cost);

DualGrowthResult grow_duals(const Instance& inst, double lambda);
DualGrowthResult grow_duals(const CostMatrix& cost, double lambda);

std::vector<DualViolation> check_dual_feasibility(const Instance& inst,
                                                  const std::vector<double>& alpha,
                                                  double lambda);
std::vector<DualViolation> check_dual_feasibility(const CostMatrix& cost,
                                                  const std::vector<double>& alpha,
                                                  double lambda);

double dual_objective(const std::vector<double>& alpha, double lambda, double k);

}  // namespace kmlmp

#endif  // KMLMP_DUAL_GROWTH_HPP
