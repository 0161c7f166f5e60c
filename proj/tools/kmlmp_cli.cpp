#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kmlmp/certifier.hpp"
#include "kmlmp/generators.hpp"
#include "kmlmp/io.hpp"
#include "kmlmp/report.hpp"
#include "kmlmp/solver.hpp"

using namespace kmlmp;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct Common {
    std::string out;
    bool pretty = false;
    int threads = 1;
};

void emit(const Json& j, const Common& c, const std::string& text) {
    if (c.pretty) {
        if (!c.out.empty()) save_json(j, c.out);
        std::cout << text;
        return;
    }
    if (c.out.empty()) std::cout << j.dump(2) << '\n';
    else save_json(j, c.out);
}

std::string row(const std::string& k, const std::string& v) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %-22s %s\n", k.c_str(), v.c_str());
    return buf;
}

std::string f(double x, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, x);
    return buf;
}

void apply_objective(SolverParams& p, Objective obj) {
    const SolverParams d = default_params(obj);
    p.objective = obj;
    p.deltas = d.deltas;
    if (p.p1 < 0.0) p.p1 = d.p1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LMP primal-dual k-means / k-median solver and ratio certifier"};
    app.require_subcommand(1);
    std::vector<std::string> command(argv, argv + argc);

    Common common;
    std::string instance_path, objective_name;
    int k = 0;
    std::uint64_t seed = 0;
    double lambda = 0.0, p = -1.0, target = 0.0;
    int C = 3;
    std::size_t mc = 10000;
    bool oracle = false, dump_duals = false, dump_nqis = false, timing = false, all_cells = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", common.out, "write the JSON report here instead of stdout");
        sub->add_flag("--pretty", common.pretty, "print a text summary");
        sub->add_option("--threads", common.threads, "worker threads")->check(CLI::PositiveNumber);
    };

    CLI::App* solve = app.add_subcommand("solve", "sweep lambda and assemble exactly k centers");
    solve->add_option("--instance", instance_path)->required()->check(CLI::ExistingFile);
    solve->add_option("--k", k)->required()->check(CLI::PositiveNumber);
    solve->add_option("--objective", objective_name, "override the instance objective");
    solve->add_option("--seed", seed);
    solve->add_option("--p", p, "sampling probability p1");
    solve->add_option("--C", C)->check(CLI::Range(2, 1000));
    solve->add_option("--mc-samples", mc);
    solve->add_flag("--oracle", oracle, "compare against the brute-force optimum");
    solve->add_flag("--timing", timing, "include wall time in the report");
    add_common(solve);

    CLI::App* certify = app.add_subcommand("certify", "grid certification of the final ratio");
    certify->add_option("--objective", objective_name)->required();
    certify->add_option("--target", target)->required();
    certify->add_flag("--all-cells", all_cells, "include every evaluated cell");
    certify->add_flag("--timing", timing);
    add_common(certify);

    CLI::App* orc = app.add_subcommand("oracle", "closed-form maximisation oracles, or OPT_k with --instance");
    std::size_t samples = 100000;
    orc->add_option("--samples", samples);
    orc->add_option("--seed", seed);
    orc->add_option("--instance", instance_path)->check(CLI::ExistingFile);
    orc->add_option("--k", k)->check(CLI::PositiveNumber);
    add_common(orc);

    CLI::App* gen = app.add_subcommand("gen", "generate an instance");
    std::string kind = "uniform";
    std::size_t gn = 20, gm = 8, gd = 2, gN = 100, gh = 10;
    double sep = 10.0, gT = 1.0, geps = 0.1;
    gen->add_option("--kind", kind)->check(CLI::IsMember({"uniform", "clustered", "lower-bound"}));
    gen->add_option("--n", gn)->check(CLI::PositiveNumber);
    gen->add_option("--m", gm)->check(CLI::PositiveNumber);
    gen->add_option("--d", gd)->check(CLI::PositiveNumber);
    gen->add_option("--separation", sep);
    gen->add_option("--objective", objective_name);
    gen->add_option("--seed", seed);
    gen->add_option("--T", gT);
    gen->add_option("--copies", gN, "number of copies of the line-gadget client (N)");
    gen->add_option("--simplex", gh, "number of simplex facilities (h)");
    gen->add_option("--eps", geps);
    add_common(gen);

    CLI::App* lmp = app.add_subcommand("lmp", "single-lambda LMP run with diagnostics");
    lmp->add_option("--instance", instance_path)->required()->check(CLI::ExistingFile);
    lmp->add_option("--lambda", lambda)->required()->check(CLI::NonNegativeNumber);
    lmp->add_option("--objective", objective_name);
    lmp->add_option("--seed", seed);
    lmp->add_option("--p", p);
    lmp->add_option("--C", C);
    lmp->add_option("--mc-samples", mc);
    lmp->add_flag("--dump-duals", dump_duals);
    lmp->add_flag("--dump-nqis", dump_nqis);
    add_common(lmp);

    CLI::App* stats = app.add_subcommand("stats", "per-client case accounting at one lambda");
    stats->add_option("--instance", instance_path)->required()->check(CLI::ExistingFile);
    stats->add_option("--lambda", lambda)->required()->check(CLI::NonNegativeNumber);
    stats->add_option("--objective", objective_name);
    add_common(stats);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        auto load = [&] {
            Instance inst = load_instance(instance_path);
            if (!objective_name.empty()) inst.objective = objective_from_string(objective_name);
            return inst;
        };
        auto params_for = [&](const Instance& inst) {
            SolverParams sp;
            sp.p1 = p;
            apply_objective(sp, inst.objective);
            sp.C = C;
            sp.mc_samples = mc;
            sp.rng_seed = seed;
            sp.threads = common.threads;
            if (!(sp.p1 >= 0.0 && sp.p1 < 0.5)) throw std::invalid_argument("--p must lie in [0, 0.5)");
            return sp;
        };

        if (solve->parsed()) {
            const Instance inst = load();
            if (static_cast<std::size_t>(k) > inst.m()) throw std::invalid_argument("--k exceeds the number of facilities");
            RunReport rep = run_solve(inst, k, params_for(inst), oracle, command);
            Json j = to_json(rep);
            if (timing && rep.wall_seconds) j["wall_seconds"] = *rep.wall_seconds;
            std::string text = "solve\n" + row("instance", inst.label) + row("k", std::to_string(k)) +
                               row("cost", f(rep.solution.cost)) + row("route", rep.trace.route);
            if (rep.optimum) text += row("OPT_k", f(rep.optimum->cost)) + row("ratio", f(j["ratio"].get<double>(), 4));
            emit(j, common, text);
            return kOk;
        }
        if (certify->parsed()) {
            const Objective obj = objective_from_string(objective_name);
            GridConfig g = default_grid(obj);
            g.threads = common.threads;
            const CertReport rep = grid_certify(obj, target, g);
            Json j = to_json(rep, all_cells);
            if (timing) j["elapsed_seconds"] = rep.elapsed_seconds;
            std::string text = "certify " + to_string(obj) + " at " + f(target, 4) + ": " +
                               (rep.success ? "SUCCESS" : "FAILED") + "\n" + row("rho(p1)", f(rep.rho_lmp)) +
                               row("max-min bound", f(rep.rho_final.value)) +
                               row("coarse cells", std::to_string(rep.coarse_cells)) +
                               row("feasible coarse", std::to_string(rep.feasible_coarse)) +
                               row("refined cells", std::to_string(rep.refined_cells));
            for (const auto& r : rep.range_checks)
                text += row(r.name, f(r.value) + (r.ok ? " < " : " >= ") + f(r.bound, 4));
            if (rep.witness)
                text += row("witness", "theta [" + f(rep.witness->cell.theta0, 4) + ", " + f(rep.witness->cell.theta1, 4) +
                                           "] r [" + f(rep.witness->cell.r0, 4) + ", " + f(rep.witness->cell.r1, 4) + "]");
            emit(j, common, text);
            return rep.success ? kOk : kFailed;
        }
        if (orc->parsed()) {
            if (!instance_path.empty()) {
                const Instance inst = load();
                if (k < 1 || static_cast<std::size_t>(k) > inst.m()) throw std::invalid_argument("--k must lie in [1, m]");
                const CenterSet opt = brute_force_opt(inst, k);
                Json j{{"k", k}, {"centers", opt.indices}, {"cost", opt.cost}};
                emit(j, common, "OPT_" + std::to_string(k) + " = " + f(opt.cost) + "\n");
                return kOk;
            }
            OracleConfig cfg;
            cfg.samples = samples;
            cfg.seed = seed == 0 ? 1 : seed;
            const OracleReport rep = closed_form_oracles(cfg);
            std::string text;
            for (const auto& r : rep.results)
                text += row(r.name, "closed " + f(r.closed_form) + "  max " + f(r.max_observed) + "  violations " +
                                        std::to_string(r.violations));
            emit(to_json(rep), common, text);
            return rep.ok ? kOk : kFailed;
        }
        if (gen->parsed()) {
            Json j;
            if (kind == "lower-bound") {
                const LowerBoundInstance lb = gen_lower_bound_instance(gT, gN, gh, geps);
                j = instance_to_json(lb.instance);
                j["lambda_hint"] = lb.lambda;
            } else {
                const Objective obj = objective_name.empty() ? Objective::KMeans : objective_from_string(objective_name);
                j = instance_to_json(gen_random_instance(gn, gm, gd, kind_from_string(kind), seed, obj, sep));
            }
            emit(j, common, j.dump() + "\n");
            return kOk;
        }
        if (lmp->parsed()) {
            const Instance inst = load();
            const LmpOutcome out = lmp_solve(inst, lambda, params_for(inst));
            const std::string text = "lmp\n" + row("lambda", f(lambda)) + row("mean cost", f(out.mean_cost)) +
                                     row("stderr", f(out.stderr_cost)) + row("dual surrogate", f(out.dual_surrogate)) +
                                     row("E|S|", f(out.expected_size, 4));
            emit(to_json(out, dump_duals, dump_nqis), common, text);
            return kOk;
        }
        if (stats->parsed()) {
            const Instance inst = load();
            const SolverParams sp = default_params(inst.objective);
            const DualGrowthResult g = grow_duals(inst, lambda);
            const NestedQIS q = build_nqis(g, inst, sp.deltas, variant_for(inst.objective));
            const CaseAccounting acc = client_case_stats(inst, g, q);
            std::string text = "stats\n";
            for (std::size_t i = 0; i < acc.Q.size(); ++i)
                text += row("group " + std::to_string(i + 1), "Q " + f(acc.Q[i]) + "  R " + f(acc.R[i]));
            emit(to_json(acc), common, text);
            return kOk;
        }
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailed;
    }
    return kUsage;
}
