#ifndef KMLMP_SIMPLEX_HPP
#define KMLMP_SIMPLEX_HPP

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace kmlmp {

template <class T>
struct SimplexTraits {
    static T eps() { return T(1e-12); }
    static bool exact() { return false; }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class T>
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    T value{};
    std::vector<T> x;
};

class CyclingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dense tableau simplex for: maximize c.x subject to A x <= b, x >= 0.
// b may be negative; an auxiliary variable drives phase one.
// Dantzig pricing with a switch to Bland's rule after `bland_after` pivots.
template <class T>
class DenseSimplex {
public:
    DenseSimplex(const std::vector<std::vector<T>>& A, const std::vector<T>& b,
                 const std::vector<T>& c)
        : m_(b.size()), n_(c.size()), N_(n_ + 1), B_(m_), D_(m_ + 2, std::vector<T>(n_ + 2)) {
        for (std::size_t i = 0; i < m_; ++i) {
            if (A[i].size() != n_) throw std::invalid_argument("row width mismatch");
            for (std::size_t j = 0; j < n_; ++j) D_[i][j] = A[i][j];
            B_[i] = static_cast<long>(n_ + i);
            D_[i][n_] = T(-1);
            D_[i][n_ + 1] = b[i];
        }
        for (std::size_t j = 0; j < n_; ++j) {
            N_[j] = static_cast<long>(j);
            D_[m_][j] = -c[j];
        }
        N_[n_] = -1;
        D_[m_ + 1][n_] = T(1);
        bland_after_ = SimplexTraits<T>::exact() ? 0 : 50 * (m_ + n_ + 2);
    }

    LpSolution<T> solve() {
        LpSolution<T> out;
        const T eps = SimplexTraits<T>::eps();
        std::size_t r = 0;
        for (std::size_t i = 1; i < m_; ++i)
            if (D_[i][n_ + 1] < D_[r][n_ + 1]) r = i;
        if (m_ > 0 && D_[r][n_ + 1] < -eps) {
            pivot(r, n_);
            if (!run(1) || D_[m_ + 1][n_ + 1] < -eps) {
                out.status = LpStatus::Infeasible;
                return out;
            }
            for (std::size_t i = 0; i < m_; ++i)
                if (B_[i] == -1) {
                    std::size_t s = 0;
                    for (std::size_t j = 1; j <= n_; ++j)
                        if (D_[i][j] < D_[i][s] || (D_[i][j] == D_[i][s] && N_[j] < N_[s])) s = j;
                    pivot(i, s);
                }
        }
        if (!run(2)) {
            out.status = LpStatus::Unbounded;
            return out;
        }
        out.status = LpStatus::Optimal;
        out.x.assign(n_, T(0));
        for (std::size_t i = 0; i < m_; ++i)
            if (B_[i] >= 0 && static_cast<std::size_t>(B_[i]) < n_)
                out.x[static_cast<std::size_t>(B_[i])] = D_[i][n_ + 1];
        out.value = D_[m_][n_ + 1];
        return out;
    }

    std::size_t pivots() const { return pivots_; }

private:
    void pivot(std::size_t r, std::size_t s) {
        T inv = T(1) / D_[r][s];
        for (std::size_t i = 0; i < m_ + 2; ++i) {
            if (i == r) continue;
            T f = D_[i][s] * inv;
            if (f == T(0)) continue;
            for (std::size_t j = 0; j < n_ + 2; ++j)
                if (j != s) D_[i][j] -= D_[r][j] * f;
        }
        for (std::size_t j = 0; j < n_ + 2; ++j)
            if (j != s) D_[r][j] *= inv;
        for (std::size_t i = 0; i < m_ + 2; ++i)
            if (i != r) D_[i][s] *= -inv;
        D_[r][s] = inv;
        std::swap(B_[r], N_[s]);
        ++pivots_;
    }

    bool run(int phase) {
        const T eps = SimplexTraits<T>::eps();
        const std::size_t x = phase == 1 ? m_ + 1 : m_;
        const std::size_t limit = 200 * (m_ + n_ + 2) + bland_after_;
        std::size_t iter = 0;
        while (true) {
            if (++iter > limit) throw CyclingError("simplex failed to terminate under Bland's rule");
            const bool bland = iter > bland_after_;
            long s = -1;
            for (std::size_t j = 0; j <= n_; ++j) {
                if (phase == 2 && N_[j] == -1) continue;
                if (!(D_[x][j] < -eps)) continue;
                if (s < 0) {
                    s = static_cast<long>(j);
                    continue;
                }
                const std::size_t cur = static_cast<std::size_t>(s);
                if (bland ? N_[j] < N_[cur]
                          : (D_[x][j] < D_[x][cur] || (D_[x][j] == D_[x][cur] && N_[j] < N_[cur])))
                    s = static_cast<long>(j);
            }
            if (s < 0) return true;
            const std::size_t sc = static_cast<std::size_t>(s);
            long r = -1;
            for (std::size_t i = 0; i < m_; ++i) {
                if (!(D_[i][sc] > eps)) continue;
                if (r < 0) {
                    r = static_cast<long>(i);
                    continue;
                }
                const std::size_t rc = static_cast<std::size_t>(r);
                T lhs = D_[i][n_ + 1] / D_[i][sc];
                T rhs = D_[rc][n_ + 1] / D_[rc][sc];
                if (lhs < rhs || (lhs == rhs && B_[i] < B_[rc])) r = static_cast<long>(i);
            }
            if (r < 0) return false;
            pivot(static_cast<std::size_t>(r), sc);
        }
    }

    std::size_t m_, n_;
    std::vector<long> N_, B_;
    std::vector<std::vector<T>> D_;
    std::size_t bland_after_ = 0;
    std::size_t pivots_ = 0;
};

enum class Relation { LE, GE, EQ };

template <class T>
struct LinearConstraint {
    std::vector<T> coeffs;
    Relation rel = Relation::LE;
    T rhs{};
    bool strict = false;
};

enum class Verdict { Feasible, Infeasible };

template <class T>
struct FeasibilityResult {
    Verdict verdict = Verdict::Infeasible;
    T slack{};
    bool slack_unbounded = false;
    std::vector<T> point;
};

// Decides feasibility of a system over nonnegative variables. Strict rows are
// relaxed by a common slack s which is maximised (capped at 1); the system is
// feasible iff the optimum exceeds `tol`. With no strict rows, plain
// feasibility is reported. If scale_var >= 0 that variable is fixed to 1.
template <class T>
FeasibilityResult<T> solve_feasibility(std::size_t num_vars,
                                       const std::vector<LinearConstraint<T>>& cons,
                                       long scale_var, const T& tol) {
    bool any_strict = false;
    for (const auto& c : cons) {
        if (c.coeffs.size() != num_vars) throw std::invalid_argument("constraint width mismatch");
        if (c.strict && c.rel == Relation::EQ) throw std::invalid_argument("strict equality");
        any_strict = any_strict || c.strict;
    }
    const std::size_t nv = num_vars + (any_strict ? 1 : 0);
    const std::size_t s_idx = num_vars;
    std::vector<std::vector<T>> A;
    std::vector<T> b;
    auto push_le = [&](std::vector<T> row, T rhs) {
        A.push_back(std::move(row));
        b.push_back(rhs);
    };
    for (const auto& c : cons) {
        std::vector<T> row(nv, T(0));
        for (std::size_t j = 0; j < num_vars; ++j) row[j] = c.coeffs[j];
        if (c.rel == Relation::LE || c.rel == Relation::EQ) {
            std::vector<T> le = row;
            if (c.strict) le[s_idx] = T(1);
            push_le(le, c.rhs);
        }
        if (c.rel == Relation::GE || c.rel == Relation::EQ) {
            std::vector<T> ge(nv, T(0));
            for (std::size_t j = 0; j < num_vars; ++j) ge[j] = -row[j];
            if (c.strict) ge[s_idx] = T(1);
            push_le(ge, -c.rhs);
        }
    }
    if (scale_var >= 0) {
        std::vector<T> row(nv, T(0));
        row[static_cast<std::size_t>(scale_var)] = T(1);
        push_le(row, T(1));
        std::vector<T> neg(nv, T(0));
        neg[static_cast<std::size_t>(scale_var)] = T(-1);
        push_le(neg, T(-1));
    }
    std::vector<T> obj(nv, T(0));
    if (any_strict) {
        std::vector<T> cap(nv, T(0));
        cap[s_idx] = T(1);
        push_le(cap, T(1));
        obj[s_idx] = T(1);
    }
    if (A.size() > 40 || nv > 13) throw std::invalid_argument("system exceeds the dense solver limits");

    DenseSimplex<T> lp(A, b, obj);
    LpSolution<T> sol = lp.solve();
    FeasibilityResult<T> out;
    if (sol.status == LpStatus::Infeasible) {
        out.verdict = Verdict::Infeasible;
        return out;
    }
    out.point.assign(sol.x.begin(), sol.x.begin() + static_cast<long>(num_vars));
    if (!any_strict) {
        out.verdict = Verdict::Feasible;
        return out;
    }
    out.slack = sol.x[s_idx];
    out.slack_unbounded = !(sol.x[s_idx] < T(1));
    out.verdict = out.slack > tol ? Verdict::Feasible : Verdict::Infeasible;
    return out;
}

}  // namespace kmlmp

#endif  // KMLMP_SIMPLEX_HPP
