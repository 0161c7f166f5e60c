#include "kmlmp/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace kmlmp {

namespace {

// JSON has no infinities; they are written as strings
Json num(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

Json points(const std::vector<Point>& pts) {
    Json a = Json::array();
    for (const auto& p : pts) a.push_back(p);
    return a;
}

std::vector<Point> read_points(const Json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_array())
        throw FormatError(std::string("missing array field '") + field + "'");
    std::vector<Point> out;
    for (const auto& row : j[field]) {
        if (!row.is_array()) throw FormatError(std::string("'") + field + "' must hold coordinate arrays");
        Point p;
        for (const auto& x : row) {
            if (!x.is_number()) throw FormatError("coordinates must be numbers");
            p.push_back(x.get<double>());
        }
        out.push_back(std::move(p));
    }
    return out;
}

Json deltas_json(const Deltas& d) { return Json{{"d1", d.d1}, {"d2", d.d2}, {"d3", d.d3}}; }

}  // namespace

Json instance_to_json(const Instance& inst) {
    Json j;
    j["objective"] = to_string(inst.objective);
    j["clients"] = points(inst.clients);
    j["facilities"] = points(inst.facilities);
    j["label"] = inst.label;
    return j;
}

Instance instance_from_json(const Json& j) {
    if (!j.is_object()) throw FormatError("instance must be a JSON object");
    Instance inst;
    if (!j.contains("objective") || !j["objective"].is_string())
        throw FormatError("missing string field 'objective'");
    try {
        inst.objective = objective_from_string(j["objective"].get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    inst.clients = read_points(j, "clients");
    inst.facilities = read_points(j, "facilities");
    if (j.contains("label") && j["label"].is_string()) inst.label = j["label"].get<std::string>();
    try {
        check_instance_shape(inst);
    } catch (const std::exception& e) {
        throw FormatError(e.what());
    }
    return inst;
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError("'" + path + "': " + e.what());
    }
    return instance_from_json(j);
}

void save_json(const Json& j, const std::string& path, int indent) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << j.dump(indent) << '\n';
}

Json to_json(const DualGrowthResult& g) {
    Json j;
    j["lambda"] = g.lambda;
    j["alpha"] = g.alpha;
    j["tight"] = g.tight;
    j["tight_level"] = g.tight_level;
    j["t"] = g.t;
    j["witness"] = g.witness;
    j["client_neighbors"] = g.client_neighbors;
    j["events"] = g.events;
    return j;
}

Json to_json(const NestedQIS& q) {
    Json j;
    j["variant"] = q.variant == Variant::KMeansAlg1 ? "kmeans" : "kmedian";
    j["deltas"] = deltas_json(q.deltas);
    j["i1"] = q.i1;
    j["i2"] = q.i2;
    j["i3"] = q.i3;
    j["v2"] = q.v2;
    j["v3"] = q.v3;
    Json qm = Json::array();
    for (const auto& [a, b] : q.q) qm.push_back({a, b});
    j["q"] = qm;
    return j;
}

Json to_json(const ClientCase& c) {
    return Json{{"client", c.client}, {"a", c.a},   {"b", c.b},         {"c", c.c},
                {"c1", c.c1},         {"c2", c.c2}, {"case", c.tag},    {"group", c.group},
                {"q_pair", c.q_pair}, {"A", c.A},   {"B", c.B}};
}

Json to_json(const CaseAccounting& acc) {
    Json j;
    j["objective"] = to_string(acc.objective);
    j["Q"] = acc.Q;
    j["R"] = acc.R;
    Json cl = Json::array();
    for (const auto& c : acc.clients) cl.push_back(to_json(c));
    j["clients"] = cl;
    return j;
}

Json to_json(const LmpOutcome& out, bool with_duals, bool with_nqis) {
    Json j;
    j["lambda"] = out.lambda;
    j["p"] = out.p;
    j["samples"] = out.samples;
    j["mean_cost"] = out.mean_cost;
    j["stderr_cost"] = out.stderr_cost;
    j["mean_size"] = out.mean_size;
    j["expected_size"] = out.expected_size;
    j["alpha_sum"] = out.alpha_sum;
    j["dual_surrogate"] = out.dual_surrogate;
    j["ratio"] = out.dual_surrogate > 0.0 ? num(out.mean_cost / out.dual_surrogate) : Json(nullptr);
    j["sizes"] = {{"tight", out.growth.tight.size()},
                  {"i1", out.nqis.i1.size()},
                  {"i2", out.nqis.i2.size()},
                  {"i3", out.nqis.i3.size()}};
    Json pc = Json::array();
    for (const auto& c : out.per_client) {
        Json e = to_json(c.kase);
        e["mean_cost"] = c.mean_cost;
        e["expected_dual"] = c.expected_dual;
        e["ratio"] = c.ratio;
        pc.push_back(e);
    }
    j["per_client"] = pc;
    if (with_duals) j["duals"] = to_json(out.growth);
    if (with_nqis) j["nqis"] = to_json(out.nqis);
    return j;
}

Json to_json(const CellVerdict& v) {
    Json j;
    j["level"] = v.level;
    j["parent"] = v.parent;
    j["theta"] = {v.cell.theta0, v.cell.theta1};
    j["r"] = {v.cell.r0, v.cell.r1};
    j["feasible"] = v.feasible;
    j["slack"] = v.slack;
    j["exact_recheck"] = v.exact_recheck;
    if (!v.point.empty()) j["point"] = v.point;
    return j;
}

Json to_json(const CertReport& rep, bool all_cells) {
    Json j;
    j["objective"] = to_string(rep.objective);
    j["target"] = rep.rho_target;
    j["success"] = rep.success;
    const GridConfig& g = rep.grid;
    j["grid"] = {{"theta", {g.theta_lo, g.theta_hi}},
                 {"r", {g.r_lo, g.r_hi}},
                 {"coarse_step", g.coarse_step},
                 {"refine_factors", g.refine_factors},
                 {"tol", g.tol},
                 {"p1", g.p1},
                 {"p0", g.p0},
                 {"deltas", deltas_json(g.deltas)}};
    j["rho_p1"] = rep.rho_lmp;
    j["final_bound"] = {{"value", rep.rho_final.value}, {"argmax_r", rep.rho_final.argmax_r}};
    j["group_rho_p1"] = rep.group_rho_p1;
    if (rep.objective == Objective::KMedian)
        j["F"] = {{"at_T_1.1", rep.F_at_T}, {"inf", rep.F_inf}, {"argmin_T", rep.F_inf_T}};
    j["coarse_cells"] = rep.coarse_cells;
    j["feasible_coarse_cells"] = rep.feasible_coarse;
    j["refined_cells"] = rep.refined_cells;
    std::size_t exact = 0;
    for (const auto& c : rep.cells) exact += c.exact_recheck ? 1 : 0;
    j["exact_rechecks"] = exact;
    Json rc = Json::array();
    for (const auto& r : rep.range_checks)
        rc.push_back({{"name", r.name}, {"value", r.value}, {"bound", r.bound}, {"ok", r.ok}, {"detail", r.detail}});
    j["range_checks"] = rc;
    if (rep.witness) {
        Json w = to_json(*rep.witness);
        Json chain = Json::array();
        for (long p = rep.witness->parent; p >= 0; p = rep.cells[static_cast<std::size_t>(p)].parent)
            chain.push_back(to_json(rep.cells[static_cast<std::size_t>(p)]));
        w["ancestors"] = chain;
        j["witness"] = w;
    } else {
        j["witness"] = nullptr;
    }
    if (all_cells) {
        Json cells = Json::array();
        for (const auto& c : rep.cells) cells.push_back(to_json(c));
        j["cells"] = cells;
    }
    return j;
}

Json to_json(const OracleReport& rep) {
    Json j;
    j["ok"] = rep.ok;
    Json rs = Json::array();
    for (const auto& r : rep.results)
        rs.push_back({{"name", r.name},
                      {"samples", r.samples},
                      {"closed_form", r.closed_form},
                      {"max_observed", num(r.max_observed)},
                      {"max_slack", num(r.max_slack)},
                      {"violations", r.violations},
                      {"witness", r.witness}});
    j["results"] = rs;
    return j;
}

Json to_json(const SolverParams& p) {
    return Json{{"objective", to_string(p.objective)},
                {"deltas", deltas_json(p.deltas)},
                {"p1", p.p1},
                {"C", p.C},
                {"lambda_points", p.lambda_points},
                {"bisection_depth", p.bisection_depth},
                {"mc_samples", p.mc_samples},
                {"seed", p.rng_seed},
                {"enumeration_cap", p.enumeration_cap},
                {"random_subsets", p.random_subsets},
                {"interpolation_trials", p.interpolation_trials}};
}

}  // namespace kmlmp
