#include "kmlmp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "kmlmp/parallel.hpp"
#include "kmlmp/rng.hpp"

namespace kmlmp {

SolverParams default_params(Objective objective) {
    SolverParams p;
    p.objective = objective;
    p.deltas = default_deltas(objective);
    p.p1 = objective == Objective::KMeans ? 0.402 : 0.068;
    return p;
}

namespace {

enum Role : char { kNone = 0, kI1 = 1, kI2 = 2, kI3 = 3 };

struct Membership {
    std::vector<char> role;
    std::vector<char> in_v2;
    std::vector<char> in_v3;
};

Membership membership(const NestedQIS& nqis, std::size_t m) {
    Membership mb;
    mb.role.assign(m, kNone);
    mb.in_v2.assign(m, 0);
    mb.in_v3.assign(m, 0);
    for (int f : nqis.i1) mb.role[static_cast<std::size_t>(f)] = kI1;
    for (int f : nqis.i2) mb.role[static_cast<std::size_t>(f)] = kI2;
    for (int f : nqis.i3) mb.role[static_cast<std::size_t>(f)] = kI3;
    for (int f : nqis.v2) mb.in_v2[static_cast<std::size_t>(f)] = 1;
    for (int f : nqis.v3) mb.in_v3[static_cast<std::size_t>(f)] = 1;
    return mb;
}

// the I2 members adjacent to facility f in graph g
std::vector<int> i2_neighbours(const ConflictGraph& g, int f, const std::vector<int>& i2) {
    std::vector<int> out;
    for (int x : i2)
        if (x != f && g.has_edge(f, x)) out.push_back(x);
    return out;
}

std::string case_one(const NqisGraphs& graphs, const ConflictGraph& hx, const NestedQIS& nqis,
                     const Membership& mb, int wit, int i2, bool median, int client) {
    const std::string s = median ? "'" : "";
    const std::size_t w = static_cast<std::size_t>(wit);
    if (!mb.in_v2[w]) return "1.a" + s;
    if (mb.in_v3[w]) return "1.b" + s;
    if (wit == i2) return "1.c" + s;
    if (mb.role[w] == kI2) return "1.d" + s;
    const auto nx = i2_neighbours(hx, wit, nqis.i2);
    if (nx.size() > 1) return "1.e" + s;
    if (median && nx.empty()) return "1.f'";
    const auto n3 = i2_neighbours(graphs.h3, wit, nqis.i2);
    if (!n3.empty()) {
        const bool own = std::find(n3.begin(), n3.end(), i2) != n3.end();
        return (own ? "1.g.i" : "1.g.ii") + s;
    }
    throw SolverError("client " + std::to_string(client) + " fits no subcase of the single-I2 case");
}

}  // namespace

CaseAccounting client_case_stats(const Instance& inst, const DualGrowthResult& growth,
                                 const NestedQIS& nqis) {
    return client_case_stats(inst, CostMatrix(inst), growth, nqis);
}

CaseAccounting client_case_stats(const Instance& inst, const CostMatrix& cost,
                                 const DualGrowthResult& growth, const NestedQIS& nqis) {
    const bool median = inst.objective == Objective::KMedian;
    const int groups = median ? 3 : 5;
    const NqisGraphs graphs = build_nqis_graphs(growth, inst, nqis.deltas);
    const ConflictGraph& hx = graphs.inner(nqis.variant);
    const Membership mb = membership(nqis, inst.m());

    CaseAccounting acc;
    acc.objective = inst.objective;
    acc.Q.assign(static_cast<std::size_t>(groups), 0.0);
    acc.R.assign(static_cast<std::size_t>(groups), 0.0);

    for (std::size_t j = 0; j < inst.n(); ++j) {
        const double alpha = growth.alpha[j];
        ClientCase cc;
        cc.client = static_cast<int>(j);
        cc.A = alpha;
        std::vector<int> n2, n3;
        for (int f : growth.client_neighbors[j]) {
            const double gain = alpha - cost(j, static_cast<std::size_t>(f));
            switch (mb.role[static_cast<std::size_t>(f)]) {
                case kI1:
                    ++cc.a;
                    cc.A -= gain;
                    break;
                case kI2:
                    ++cc.b;
                    cc.B += gain;
                    n2.push_back(f);
                    break;
                case kI3:
                    ++cc.c;
                    cc.B += gain;
                    n3.push_back(f);
                    break;
                default:
                    break;
            }
        }
        for (int f : n3) {
            const int partner = nqis.q.at(f);
            if (std::find(n2.begin(), n2.end(), partner) != n2.end()) ++cc.c1;
        }
        cc.c2 = cc.c - cc.c1;
        cc.q_pair = cc.c1 > 0;
        const int wit = growth.witness[j];
        const std::size_t w = static_cast<std::size_t>(wit);

        if (!median) {
            if (cc.a >= 1) {
                cc.tag = "5.a";
                cc.group = cc.q_pair ? 5 : 1;
            } else if (cc.b == 1 && cc.c == 0) {
                cc.tag = case_one(graphs, hx, nqis, mb, wit, n2.front(), false, cc.client);
                if (cc.tag == "1.b" || cc.tag == "1.e") cc.group = 2;
                else if (cc.tag == "1.g.i") cc.group = 3;
                else cc.group = 1;
            } else if (cc.b == 1) {
                if (cc.c1 == 0) {
                    cc.tag = "2.a";
                    cc.group = 1;
                } else if (cc.c1 == 1 && cc.c2 == 0) {
                    cc.tag = "2.d";
                    const double near = cost(j, static_cast<std::size_t>(n2.front())) +
                                        cost(j, static_cast<std::size_t>(n3.front()));
                    cc.group = near >= 0.25 * alpha ? 4 : 5;
                } else if (cc.c2 == 0) {
                    cc.tag = "2.b";
                    cc.group = 5;
                } else {
                    cc.tag = "2.c";
                    cc.group = 5;
                }
            } else if (cc.b >= 2) {
                if (cc.c1 == 0) {
                    cc.tag = "3.a";
                    cc.group = 1;
                } else if (cc.c1 == 1 && cc.c2 == 0) {
                    cc.tag = "3.b";
                    cc.group = 5;
                } else {
                    cc.tag = "3.c";
                    cc.group = 5;
                }
            } else if (cc.c >= 2) {
                cc.tag = "4.c";
                cc.group = 1;
            } else {
                const bool first = mb.role[w] == kI1 || !mb.in_v2[w];
                cc.tag = std::string(cc.c == 0 ? "4.a" : "4.b") + (first ? ".i" : ".ii");
                cc.group = first ? 1 : 2;
            }
        } else {
            const int h = cc.b + cc.c;
            if (cc.a >= 1) {
                cc.group = 3;
                if (h == 0) cc.tag = "4.a'";
                else if (cc.a == 1) cc.tag = h == 1 ? "4.b'" : "4.c'";
                else cc.tag = h == 1 ? "4.d'" : "4.e'";
            } else if (cc.b == 1 && cc.c == 0) {
                cc.tag = case_one(graphs, hx, nqis, mb, wit, n2.front(), true, cc.client);
                cc.group = 1;
            } else if (cc.b == 0 && cc.c <= 1) {
                cc.tag = cc.c == 0 ? "2.a'" : "2.b'";
                cc.group = 1;
            } else {
                cc.group = 2;
                bool far = true;
                for (int f : n2) far = far && cost(j, static_cast<std::size_t>(f)) >= (nqis.deltas.d1 - 1.0) * alpha;
                for (int f : n3) far = far && cost(j, static_cast<std::size_t>(f)) >= (nqis.deltas.d1 - 1.0) * alpha;
                if (far) cc.tag = "3.a'";
                else if (cc.b == 1 && cc.c == 1 && nqis.q.at(n3.front()) == n2.front()) cc.tag = "3.b.i'";
                else cc.tag = "3.b.ii'";
            }
        }
        acc.Q[static_cast<std::size_t>(cc.group - 1)] += cc.A;
        acc.R[static_cast<std::size_t>(cc.group - 1)] += cc.B;
        acc.clients.push_back(std::move(cc));
    }
    return acc;
}

LmpOutcome lmp_solve(const Instance& inst, double lambda, const SolverParams& params) {
    const CostMatrix cost(inst);
    LmpOutcome out;
    out.lambda = lambda;
    out.p = params.p1;
    out.growth = grow_duals(cost, lambda);
    out.nqis = build_nqis(out.growth, inst, params.deltas, variant_for(inst.objective));
    out.expected_size = expected_size(out.nqis, params.p1);
    out.alpha_sum = std::accumulate(out.growth.alpha.begin(), out.growth.alpha.end(), 0.0);
    out.dual_surrogate = out.alpha_sum - lambda * out.expected_size;

    const std::size_t n = inst.n();
    const std::size_t total = params.mc_samples;
    const std::size_t block = 256;
    const std::size_t blocks = (total + block - 1) / block;
    struct Partial {
        double sum = 0.0, sumsq = 0.0, size = 0.0;
        std::vector<double> client;
    };
    std::vector<Partial> parts(blocks);
    const RoundingParams rp{params.p1, params.rng_seed, params.C};
    parallel_for(blocks, params.threads, [&](std::size_t b) {
        Partial& pt = parts[b];
        pt.client.assign(n, 0.0);
        const std::size_t end = std::min(total, (b + 1) * block);
        for (std::size_t s = b * block; s < end; ++s) {
            const std::vector<int> S = sample_solution(out.nqis, rp, s);
            double c = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double best = std::numeric_limits<double>::infinity();
                for (int f : S) best = std::min(best, cost(j, static_cast<std::size_t>(f)));
                pt.client[j] += best;
                c += best;
            }
            pt.sum += c;
            pt.sumsq += c * c;
            pt.size += static_cast<double>(S.size());
        }
    });
    double sum = 0.0, sumsq = 0.0, size = 0.0;
    std::vector<double> client(n, 0.0);
    for (const Partial& pt : parts) {
        sum += pt.sum;
        sumsq += pt.sumsq;
        size += pt.size;
        for (std::size_t j = 0; j < n; ++j) client[j] += pt.client[j];
    }
    out.samples = total;
    if (total > 0) {
        const double N = static_cast<double>(total);
        out.mean_cost = sum / N;
        out.mean_size = size / N;
        const double var = total > 1 ? std::max(0.0, (sumsq - N * out.mean_cost * out.mean_cost) / (N - 1.0)) : 0.0;
        out.stderr_cost = std::sqrt(var / N);
    }

    const CaseAccounting acc = client_case_stats(inst, cost, out.growth, out.nqis);
    for (std::size_t j = 0; j < n; ++j) {
        ClientOutcome co;
        co.kase = acc.clients[j];
        co.mean_cost = total > 0 ? client[j] / static_cast<double>(total) : 0.0;
        co.expected_dual = co.kase.A - params.p1 * co.kase.B;
        co.ratio = co.expected_dual > 0.0 ? co.mean_cost / co.expected_dual : 0.0;
        out.per_client.push_back(std::move(co));
    }
    return out;
}

double lambda_ceiling(const CostMatrix& cost) {
    double mx = 0.0;
    for (std::size_t j = 0; j < cost.n(); ++j)
        for (std::size_t i = 0; i < cost.m(); ++i) mx = std::max(mx, cost(j, i));
    return std::max(1.0, static_cast<double>(cost.n()) * mx * 1.01);
}

PipelineState pipeline_at(const Instance& inst, const CostMatrix& cost, double lambda,
                          const SolverParams& params, const std::vector<int>* warm_i1) {
    PipelineState st;
    st.lambda = lambda;
    st.growth = grow_duals(cost, lambda);
    const NqisGraphs graphs = build_nqis_graphs(st.growth, inst, params.deltas);
    st.nqis = build_nqis(graphs, params.deltas, variant_for(inst.objective), warm_i1);
    st.expected = expected_size(st.nqis, params.p1);
    return st;
}

Bracket sweep_lambda(const Instance& inst, int k, const SolverParams& params) {
    if (k < 1 || static_cast<std::size_t>(k) > inst.m())
        throw std::invalid_argument("k must lie in [1, number of facilities]");
    if (params.lambda_points < 1) throw std::invalid_argument("lambda_points must be positive");
    const CostMatrix cost(inst);
    const double top = lambda_ceiling(cost);
    const double K = static_cast<double>(k);

    Bracket br;
    PipelineState prev = pipeline_at(inst, cost, 0.0, params);
    br.scanned.push_back(0.0);
    if (prev.expected < K) throw SolverError("expected size is below k already at lambda = 0");
    std::optional<PipelineState> hi;
    for (int s = 1; s <= params.lambda_points && prev.expected >= K + 1.0; ++s) {
        const double lam = top * static_cast<double>(s) / params.lambda_points;
        PipelineState cur = pipeline_at(inst, cost, lam, params, &prev.nqis.i1);
        br.scanned.push_back(lam);
        if (cur.expected < K) {
            hi = std::move(cur);
            break;
        }
        prev = std::move(cur);
    }
    br.lo = std::move(prev);
    if (!hi) return br;
    br.hi = std::move(hi);
    for (int d = 0; d < params.bisection_depth && br.lo.expected >= K + 1.0; ++d) {
        const double mid = 0.5 * (br.lo.lambda + br.hi->lambda);
        if (!(mid > br.lo.lambda && mid < br.hi->lambda)) break;
        PipelineState cur = pipeline_at(inst, cost, mid, params, &br.lo.nqis.i1);
        br.scanned.push_back(mid);
        if (cur.expected >= K) br.lo = std::move(cur);
        else br.hi = std::move(cur);
    }
    return br;
}

CenterSet greedy_reduce(const CostMatrix& cost, std::vector<int> centers, int k) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    while (static_cast<int>(centers.size()) > k) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t drop = 0;
        for (std::size_t x = 0; x < centers.size(); ++x) {
            std::vector<int> trial;
            trial.reserve(centers.size() - 1);
            for (std::size_t y = 0; y < centers.size(); ++y)
                if (y != x) trial.push_back(centers[y]);
            const double c = assignment_cost(cost, trial);
            if (c < best) {
                best = c;
                drop = x;
            }
        }
        centers.erase(centers.begin() + static_cast<long>(drop));
    }
    return {centers, assignment_cost(cost, centers)};
}

namespace {

struct Best {
    std::vector<int> centers;
    double cost = std::numeric_limits<double>::infinity();
    bool consider(std::vector<int> s, double c) {
        if (c < cost) {
            cost = c;
            centers = std::move(s);
            return true;
        }
        return false;
    }
};

std::vector<int> merged(std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

// r-subsets of pool appended to base, all of them or a random sample
void search_subsets(const CostMatrix& cost, const std::vector<int>& base, const std::vector<int>& pool,
                    std::size_t r, const SolverParams& params, Best& best, bool& enumerated) {
    const double count = binomial(pool.size(), r);
    if (count <= static_cast<double>(params.enumeration_cap)) {
        enumerated = true;
        std::vector<std::size_t> idx(r);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            std::vector<int> s = base;
            for (std::size_t x : idx) s.push_back(pool[x]);
            std::sort(s.begin(), s.end());
            best.consider(s, assignment_cost(cost, s));
            long pos = static_cast<long>(r) - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == pool.size() - r + static_cast<std::size_t>(pos)) --pos;
            if (pos < 0) break;
            ++idx[static_cast<std::size_t>(pos)];
            for (std::size_t x = static_cast<std::size_t>(pos) + 1; x < r; ++x) idx[x] = idx[x - 1] + 1;
        }
        return;
    }
    Rng rng(params.rng_seed, 0x5eed0001ULL);
    std::vector<int> shuffled = pool;
    for (std::size_t t = 0; t < params.random_subsets; ++t) {
        for (std::size_t x = 0; x < r; ++x) {
            const std::size_t y = x + static_cast<std::size_t>(rng.below(shuffled.size() - x));
            std::swap(shuffled[x], shuffled[y]);
        }
        std::vector<int> s = base;
        s.insert(s.end(), shuffled.begin(), shuffled.begin() + static_cast<long>(r));
        std::sort(s.begin(), s.end());
        best.consider(s, assignment_cost(cost, s));
    }
}

}  // namespace

CenterSet assemble_k_solution(const Instance& inst, const Bracket& bracket, int k,
                              const SolverParams& params, AssemblyTrace* trace) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    const CostMatrix cost(inst);
    const NestedQIS& lo = bracket.lo.nqis;
    const std::size_t K = static_cast<std::size_t>(k);
    AssemblyTrace tr;
    Best fit;      // |S| <= k
    Best over;     // |S| > k
    std::string route;
    auto offer = [&](std::vector<int> s, const char* name) {
        if (s.empty()) return;
        const double c = assignment_cost(cost, s);
        if (s.size() <= K) {
            if (fit.consider(std::move(s), c)) route = name;
        } else {
            over.consider(std::move(s), c);
        }
    };

    // probability adjustment on the lower end of the bracket
    const std::vector<int> U = merged(lo.i2, lo.i3);
    if (lo.i1.size() <= K) {
        const std::size_t slots = K - lo.i1.size();
        Best local;
        if (slots == 0 || U.empty()) {
            local.consider(lo.i1, assignment_cost(cost, lo.i1));
        } else if (slots >= U.size()) {
            std::vector<int> s = merged(lo.i1, U);
            local.consider(s, assignment_cost(cost, s));
            tr.enumerated = true;
        } else {
            tr.p_used = std::min(params.p1, static_cast<double>(slots) / static_cast<double>(U.size()));
            const double c4 = std::pow(static_cast<double>(params.C), 4);
            if (static_cast<double>(U.size()) >= 100.0 * c4) {
                try {
                    std::vector<int> s = round_to_at_most_k(lo, k, {tr.p_used, params.rng_seed, params.C});
                    local.consider(s, assignment_cost(cost, s));
                } catch (const RoundingFailure& f) {
                    offer(f.best, "greedy");
                }
            } else {
                search_subsets(cost, lo.i1, U, slots, params, local, tr.enumerated);
            }
        }
        if (!local.centers.empty()) {
            tr.probability_cost = local.cost;
            offer(local.centers, "probability");
        }
    } else {
        offer(lo.i1, "greedy");
    }
    offer(merged(lo.i1, U), "greedy");

    // interpolation between the two ends
    if (bracket.hi) {
        const NestedQIS& hi = bracket.hi->nqis;
        Best local;
        for (int t = 0; t < params.interpolation_trials; ++t) {
            const std::vector<int> S = sample_solution(lo, {params.p1, params.rng_seed, params.C},
                                                       2 * static_cast<std::uint64_t>(t));
            const std::vector<int> Sp = sample_solution(hi, {params.p1, params.rng_seed, params.C},
                                                        2 * static_cast<std::uint64_t>(t) + 1);
            offer(S, "interpolation");
            if (Sp.size() > K) {
                offer(Sp, "interpolation");
                continue;
            }
            std::vector<int> pool;
            std::set_difference(S.begin(), S.end(), Sp.begin(), Sp.end(), std::back_inserter(pool));
            std::vector<int> s = Sp;
            const std::size_t need = K - Sp.size();
            if (pool.size() <= need) {
                s = merged(Sp, pool);
            } else {
                Rng rng(params.rng_seed ^ 0x17e4ULL, static_cast<std::uint64_t>(t));
                for (std::size_t x = 0; x < need; ++x) {
                    const std::size_t y = x + static_cast<std::size_t>(rng.below(pool.size() - x));
                    std::swap(pool[x], pool[y]);
                    s.push_back(pool[x]);
                }
                std::sort(s.begin(), s.end());
            }
            if (!s.empty()) local.consider(s, assignment_cost(cost, s));
        }
        if (!local.centers.empty()) {
            tr.interpolation_cost = local.cost;
            offer(local.centers, "interpolation");
        }
        if (hi.i1.size() > K) throw SolverError("upper bracket end opens more than k centers in I1");
    }

    // greedy deletion from the cheapest oversized candidate
    if (!over.centers.empty()) {
        CenterSet g = greedy_reduce(cost, over.centers, k);
        tr.greedy_cost = g.cost;
        offer(g.indices, "greedy");
    }
    if (fit.centers.empty()) throw SolverError("no route produced at most k centers");
    tr.route = route;
    if (trace) *trace = tr;
    return {fit.centers, fit.cost};
}

SingleSetOutcome single_set_lmp(const Instance& inst, double lambda, double delta) {
    const CostMatrix cost(inst);
    const DualGrowthResult g = grow_duals(cost, lambda);
    std::vector<double> tv;
    for (int i : g.tight) tv.push_back(g.t[static_cast<std::size_t>(i)]);
    const ConflictGraph h = build_conflict_graph(inst.facilities, g.tight, tv, delta, inst.objective);
    SingleSetOutcome out;
    out.centers = maximal_independent_set(h);
    out.cost = assignment_cost(cost, out.centers);
    out.dual = std::accumulate(g.alpha.begin(), g.alpha.end(), 0.0) -
               lambda * static_cast<double>(out.centers.size());
    return out;
}

}  // namespace kmlmp
