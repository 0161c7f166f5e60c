#ifndef KMLMP_REPORT_HPP
#define KMLMP_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "kmlmp/io.hpp"
#include "kmlmp/solver.hpp"

namespace kmlmp {

struct RunReport {
    std::vector<std::string> command;
    Instance instance;
    bool degenerate = false;
    bool range_flag = false;
    int k = 0;
    SolverParams params;
    CenterSet solution;
    std::optional<CenterSet> optimum;  // present iff the oracle ran
    AssemblyTrace trace;
    double lambda_lo = 0.0;
    std::optional<double> lambda_hi;
    double expected_lo = 0.0;
    std::optional<double> expected_hi;
    std::size_t i1 = 0, i2 = 0, i3 = 0;
    double alpha_sum = 0.0;
    std::size_t lambdas_scanned = 0;
    std::optional<double> wall_seconds;  // only serialised when requested
};

RunReport run_solve(const Instance& inst, int k, const SolverParams& params, bool oracle,
                    const std::vector<std::string>& command = {});

Json to_json(const RunReport& rep);

}  // namespace kmlmp

#endif  // KMLMP_REPORT_HPP
