#include "kmlmp/report.hpp"

#include <chrono>
#include <numeric>

namespace kmlmp {

RunReport run_solve(const Instance& inst, int k, const SolverParams& params, bool oracle,
                    const std::vector<std::string>& command) {
    const auto t0 = std::chrono::steady_clock::now();
    RunReport rep;
    rep.command = command;
    rep.instance = inst;
    const Instance checked = validate_instance(inst);
    rep.degenerate = checked.degenerate;
    rep.range_flag = checked.range_flag;
    rep.k = k;
    rep.params = params;

    const Bracket br = sweep_lambda(inst, k, params);
    rep.solution = assemble_k_solution(inst, br, k, params, &rep.trace);
    rep.lambda_lo = br.lo.lambda;
    rep.expected_lo = br.lo.expected;
    if (br.hi) {
        rep.lambda_hi = br.hi->lambda;
        rep.expected_hi = br.hi->expected;
    }
    rep.i1 = br.lo.nqis.i1.size();
    rep.i2 = br.lo.nqis.i2.size();
    rep.i3 = br.lo.nqis.i3.size();
    rep.alpha_sum = std::accumulate(br.lo.growth.alpha.begin(), br.lo.growth.alpha.end(), 0.0);
    rep.lambdas_scanned = br.scanned.size();
    if (oracle) rep.optimum = brute_force_opt(inst, k);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

Json to_json(const RunReport& rep) {
    Json j;
    j["command"] = rep.command;
    j["instance"] = {{"label", rep.instance.label},
                     {"objective", to_string(rep.instance.objective)},
                     {"n", rep.instance.n()},
                     {"m", rep.instance.m()},
                     {"dim", rep.instance.dim()},
                     {"degenerate", rep.degenerate},
                     {"range_flag", rep.range_flag}};
    j["k"] = rep.k;
    j["params"] = to_json(rep.params);
    j["solution"] = {{"centers", rep.solution.indices}, {"cost", rep.solution.cost}, {"route", rep.trace.route}};
    if (rep.optimum) {
        j["oracle"] = {{"centers", rep.optimum->indices}, {"cost", rep.optimum->cost}};
        j["ratio"] = rep.optimum->cost > 0.0 ? Json(rep.solution.cost / rep.optimum->cost) : Json(1.0);
    }
    Json d;
    d["lambda_lo"] = rep.lambda_lo;
    d["lambda_hi"] = rep.lambda_hi ? Json(*rep.lambda_hi) : Json(nullptr);
    d["expected_size_lo"] = rep.expected_lo;
    d["expected_size_hi"] = rep.expected_hi ? Json(*rep.expected_hi) : Json(nullptr);
    d["i1"] = rep.i1;
    d["i2"] = rep.i2;
    d["i3"] = rep.i3;
    d["alpha_sum"] = rep.alpha_sum;
    d["dual_lower_bound"] = rep.alpha_sum - rep.lambda_lo * rep.k;
    d["lambdas_scanned"] = rep.lambdas_scanned;
    d["route_costs"] = {{"probability", rep.trace.probability_cost},
                        {"interpolation", rep.trace.interpolation_cost},
                        {"greedy", rep.trace.greedy_cost}};
    d["p_used"] = rep.trace.p_used;
    d["enumerated"] = rep.trace.enumerated;
    j["duals"] = d;
    j["seed"] = rep.params.rng_seed;
    return j;
}

}  // namespace kmlmp
