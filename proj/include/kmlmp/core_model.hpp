#ifndef KMLMP_CORE_MODEL_HPP
#define KMLMP_CORE_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kmlmp {

enum class Objective { KMeans, KMedian };

using Point = std::vector<double>;

struct Instance {
    Objective objective = Objective::KMeans;
    std::vector<Point> clients;
    std::vector<Point> facilities;
    std::string label;
    // set by validate_instance
    bool degenerate = false;
    bool range_flag = false;
    double scale = 1.0;

    std::size_t n() const { return clients.size(); }
    std::size_t m() const { return facilities.size(); }
    std::size_t dim() const { return clients.empty() ? 0 : clients.front().size(); }
};

struct CenterSet {
    std::vector<int> indices;
    double cost = 0.0;
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string to_string(Objective obj);
Objective objective_from_string(const std::string& s);

double squared_distance(const Point& a, const Point& b);
double pair_cost(const Point& a, const Point& b, Objective objective);

// Row-major n x m client-facility cost matrix.
class CostMatrix {
public:
    CostMatrix() = default;
    explicit CostMatrix(const Instance& inst);

    double operator()(std::size_t j, std::size_t i) const { return data_[j * m_ + i]; }
    std::size_t n() const { return n_; }
    std::size_t m() const { return m_; }

private:
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    std::vector<double> data_;
};

double assignment_cost(const Instance& inst, const std::vector<int>& centers);
double assignment_cost(const CostMatrix& cost, const std::vector<int>& centers);

double binomial(std::size_t n, std::size_t k);

CenterSet brute_force_opt(const Instance& inst, int k, double budget = 1e6);

void check_instance_shape(const Instance& inst);
Instance validate_instance(const Instance& inst);

}  // namespace kmlmp

#endif  // KMLMP_CORE_MODEL_HPP
