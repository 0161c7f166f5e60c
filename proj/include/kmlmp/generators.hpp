#ifndef KMLMP_GENERATORS_HPP
#define KMLMP_GENERATORS_HPP

#include <cstdint>
#include <string>

#include "kmlmp/core_model.hpp"

namespace kmlmp {

enum class InstanceKind { Uniform, Clustered };

InstanceKind kind_from_string(const std::string& s);
std::string to_string(InstanceKind kind);

// Clustered instances plant ceil(sqrt(m)) Gaussian blobs; `separation` is the
// distance scale between blob centres relative to a unit blob radius.
Instance gen_random_instance(std::size_t n, std::size_t m, std::size_t d, InstanceKind kind,
                             std::uint64_t seed, Objective objective = Objective::KMeans,
                             double separation = 10.0);

struct LowerBoundInstance {
    Instance instance;
    double lambda = 0.0;   // the lambda at which both gadgets are tight at once
    double T_prime = 0.0;  // simplex scale
    std::size_t line_facilities = 2;
};

// Collinear gadget (N copies of j, j1, j2 with facilities on j1 and j2, the far
// facility indexed first) plus a regular h-simplex of facilities around one
// client, placed far apart. k-median, dimension max(h, 1).
LowerBoundInstance gen_lower_bound_instance(double T, std::size_t N, std::size_t h, double eps);

double lower_bound_T_prime(std::size_t h, double eps);

struct GadgetValue {
    double cost = 0.0;
    double dual = 0.0;
    std::size_t centers = 0;
    double ratio() const;  // +inf when the dual is not positive
};

// Closed-form run of the single-independent-set algorithm on the lower-bound
// instance at lambda = T: growth levels, tightness, conflict edges and the
// index-order MIS are evaluated per gadget without materialising coordinates.
GadgetValue lower_bound_gadget_value(double T, std::size_t N, std::size_t h, double eps,
                                     double delta);

}  // namespace kmlmp

#endif  // KMLMP_GENERATORS_HPP
