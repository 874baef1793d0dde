#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "model.hpp"

namespace csdp {

struct SolverOptions {
    double tol_primal = 1e-7;  // ||X - Y||_F, bounds every constraint violation of Z
    double tol_dual = 1e-7;    // rho ||Y - Y_prev||_F / (1 + ||rho U||_F)
    double tol_gap = 1e-7;     // (dual bound - objective) / (1 + |objective|)
    int max_iter = 50000;
    double penalty = 0.0;      // 0 selects ||C||_F / (reference ||Z||_F) per program
    double relaxation = 1.6;
    bool adaptive_penalty = true;
    int check_every = 10;
};

enum class SolveStatus { Optimal, MaxIter, Infeasible };

inline std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::MaxIter: return "max_iter";
        case SolveStatus::Infeasible: return "infeasible";
    }
    return "?";
}

// Iterate state for warm starts.
struct AdmmState {
    Matrix Y;
    Matrix U;
    double rho = 1.0;
};

struct SolveResult {
    Matrix Z;  // exactly satisfies the polyhedral constraints
    double objective = 0.0;
    double dual_bound = 0.0;
    double gap = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;
    SolveStatus status = SolveStatus::MaxIter;
    AdmmState state;
};

// Entries of one group (diagonal or strict upper triangle) lie in [lo, hi]
// and, if has_target, sum to target. weight is the objective multiplicity.
struct BoxSumGroup {
    double lo = 0.0;
    double hi = 1.0;
    bool has_target = false;
    double target = 0.0;
    double weight = 1.0;
};

struct PolySet {
    BoxSumGroup diag;
    BoxSumGroup off;
};

namespace detail {

// Shift mu with sum(clip(v + mu, lo, hi)) == target; writes the clipped values.
inline void project_box_sum(std::vector<double>& v, const BoxSumGroup& g) {
    const std::size_t N = v.size();
    if (N == 0) return;
    if (!g.has_target) {
        for (double& x : v) x = std::clamp(x, g.lo, g.hi);
        return;
    }
    const double T = g.target;
    if (T < N * g.lo - 1e-9 * (1 + std::abs(T)) || T > N * g.hi + 1e-9 * (1 + std::abs(T)))
        throw ContractError("box-sum group is empty");
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    double a = g.lo - *mx, b = g.hi - *mn;
    double mu = (T - std::accumulate(v.begin(), v.end(), 0.0)) / double(N);
    mu = std::clamp(mu, a, b);
    for (int it = 0; it < 200; ++it) {
        double s = 0.0;
        std::size_t free = 0;
        for (double x : v) {
            const double y = x + mu;
            if (y <= g.lo) s += g.lo;
            else if (y >= g.hi) s += g.hi;
            else { s += y; ++free; }
        }
        const double f = s - T;
        if (std::abs(f) <= 1e-15 * (std::abs(T) + double(N) * std::max(std::abs(g.lo), std::abs(g.hi))))
            break;
        if (f < 0) a = mu; else b = mu;
        double next = free > 0 ? mu - f / double(free) : 0.5 * (a + b);
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        if (next == mu || b - a <= 4 * std::numeric_limits<double>::epsilon() * (1 + std::abs(mu)))
            break;
        mu = next;
    }
    double s = 0.0;
    std::size_t free = 0;
    for (double& x : v) {
        x = std::clamp(x + mu, g.lo, g.hi);
        s += x;
        if (x > g.lo && x < g.hi) ++free;
    }
    // Spread the rounding remainder over interior entries.
    if (free > 0) {
        const double fix = (T - s) / double(free);
        for (double& x : v)
            if (x > g.lo && x < g.hi) x = std::clamp(x + fix, g.lo, g.hi);
    }
}

// max sum(w * c_k z_k) over the group; greedy fractional knapsack.
inline double support_box_sum(std::vector<double>& c, const BoxSumGroup& g) {
    const std::size_t N = c.size();
    if (N == 0) return 0.0;
    double val = 0.0;
    if (!g.has_target) {
        for (double x : c) val += std::max(x * g.lo, x * g.hi);
        return g.weight * val;
    }
    for (double x : c) val += x * g.lo;
    const double cap = g.hi - g.lo;
    if (cap <= 0) return g.weight * val;
    double budget = std::max(0.0, g.target - double(N) * g.lo);
    std::size_t full = std::min<std::size_t>(N, std::size_t(std::floor(budget / cap)));
    const std::size_t take = std::min(N, full + 1);
    std::nth_element(c.begin(), c.begin() + (take - 1), c.end(), std::greater<double>());
    std::sort(c.begin(), c.begin() + take, std::greater<double>());
    for (std::size_t k = 0; k < take && budget > 0; ++k) {
        const double amt = std::min(cap, budget);
        val += amt * c[k];
        budget -= amt;
    }
    return g.weight * val;
}

inline void gather(const Matrix& W, std::vector<double>& d, std::vector<double>& off) {
    const Index n = W.rows();
    d.resize(n);
    off.resize(std::size_t(n) * (n - 1) / 2);
    std::size_t k = 0;
    for (Index j = 0; j < n; ++j) {
        d[j] = W(j, j);
        for (Index i = 0; i < j; ++i) off[k++] = 0.5 * (W(i, j) + W(j, i));
    }
}

inline void scatter(Matrix& W, const std::vector<double>& d, const std::vector<double>& off) {
    const Index n = W.rows();
    std::size_t k = 0;
    for (Index j = 0; j < n; ++j) {
        W(j, j) = d[j];
        for (Index i = 0; i < j; ++i) W(i, j) = off[k++];
    }
    W.triangularView<Eigen::StrictlyLower>() = W.transpose().triangularView<Eigen::StrictlyLower>();
}

inline void project_poly(Matrix& W, const PolySet& P, std::vector<double>& d, std::vector<double>& off) {
    gather(W, d, off);
    project_box_sum(d, P.diag);
    project_box_sum(off, P.off);
    scatter(W, d, off);
}

inline double support_poly(const Matrix& G, const PolySet& P) {
    std::vector<double> d, off;
    gather(G, d, off);
    return support_box_sum(d, P.diag) + support_box_sum(off, P.off);
}

}  // namespace detail

// max <C, Z> over Z PSD intersected with PolySet, by two-block ADMM:
// X in the PSD cone, Y in the polyhedron, consensus X = Y.
inline SolveResult admm_solve(const Matrix& C, const PolySet& P, const Matrix& start,
                              const SolverOptions& opt, const AdmmState* warm = nullptr,
                              double reference_norm = 1.0) {
    const Index n = C.rows();
    SolveResult res;
    double rho = opt.penalty > 0 ? opt.penalty : std::max(1e-3, C.norm() / reference_norm);
    if (warm) rho = warm->rho;
    Matrix Y = warm ? warm->Y : start;
    Matrix U = warm ? warm->U : Matrix::Zero(n, n);
    Matrix X(n, n), V(n, n), W(n, n), Yold(n, n);
    std::vector<double> dbuf, obuf;
    PsdProjector proj;
    const double alpha = opt.relaxation;
    double dual_bound = std::numeric_limits<double>::infinity();

    int it = 0;
    for (it = 1; it <= opt.max_iter; ++it) {
        V = Y - U + C / rho;
        proj.project(V, X);
        const bool check = it % opt.check_every == 0 || it == opt.max_iter;
        if (check) {
            // C + rho (X - V) = rho (X - Y + U); rho (X - V) is PSD.
            W = rho * (X - Y + U);
            dual_bound = detail::support_poly(W, P);
        }
        Yold = Y;
        W = alpha * X + (1.0 - alpha) * Yold + U;
        Y = W;
        detail::project_poly(Y, P, dbuf, obuf);
        U = W - Y;

        const double rp = (X - Y).norm();
        const double rd = rho * (Y - Yold).norm();
        const double rp_rel = rp / (1.0 + std::max(X.norm(), Y.norm()));
        const double rd_rel = rd / (1.0 + rho * U.norm());
        res.primal_residual = rp;
        res.dual_residual = rd_rel;
        if (check) {
            const double obj = (C.cwiseProduct(Y)).sum();
            const double gap = dual_bound - obj;
            res.objective = obj;
            res.dual_bound = dual_bound;
            res.gap = gap;
            if (rp <= opt.tol_primal && rd_rel <= opt.tol_dual &&
                std::abs(gap) <= opt.tol_gap * (1.0 + std::abs(obj))) {
                res.status = SolveStatus::Optimal;
                break;
            }
            if (opt.adaptive_penalty && it % (5 * opt.check_every) == 0) {
                if (rp_rel > 10.0 * rd_rel) {
                    rho *= 2.0;
                    U /= 2.0;
                } else if (rd_rel > 10.0 * rp_rel) {
                    rho /= 2.0;
                    U *= 2.0;
                }
            }
        }
    }
    res.iterations = std::min(it, opt.max_iter);
    res.objective = (C.cwiseProduct(Y)).sum();
    res.gap = res.dual_bound - res.objective;
    res.Z = Y;
    res.state = {Y, U, rho};
    return res;
}

inline PolySet community_poly(int n, int K) {
    PolySet P;
    P.diag = {0.0, 1.0, true, double(K), 1.0};
    // Z_ij <= 1 is implied by PSD and Z_ii <= 1; kept so the set is bounded.
    P.off = {0.0, 1.0, true, 0.5 * (double(K) * K - K), 2.0};
    (void)n;
    return P;
}

// Strictly feasible point of the community program.
inline Matrix community_slater(int n, int K) {
    const double den = double(n) * (n - 1);
    Matrix Z = Matrix::Constant(n, n, double(K) * (K - 1) / den);
    Z.diagonal().array() += double(K) * (n - K) / den;
    return Z;
}

inline SolveResult solve_community_sdp(const Matrix& L, int K, const SolverOptions& opt = {},
                                       const AdmmState* warm = nullptr) {
    require_sym_zero_diag(L, "score matrix");
    const int n = int(L.rows());
    if (K < 1 || K > n) throw ParameterError("K must lie in [1, n]");
    return admm_solve(L, community_poly(n, K), community_slater(n, K), opt, warm, double(K));
}

inline PolySet vm_poly(int m, double a) {
    PolySet P;
    P.diag = {0.0, 1.0, true, 1.0, 1.0};
    // |Z_ij| <= (Z_ii + Z_jj)/2 <= 1/2 under PSD and unit trace.
    P.off = {0.0, 0.5, true, 0.5 * (a - 1.0), 2.0};
    (void)m;
    return P;
}

inline Matrix vm_slater(int m, double a) {
    const double den = double(m) * (m - 1);
    Matrix Z = Matrix::Constant(m, m, (a - 1.0) / den);
    Z.diagonal().array() += (m - a) / den;
    return Z;
}

// Exact feasibility restoration: sY + xI + yJ with x = s * (PSD deficit),
// y >= 0, trace 1 and sum a held exactly.
inline Matrix vm_restore(const Matrix& Y, double a) {
    const int m = int(Y.rows());
    Matrix Ys = 0.5 * (Y + Y.transpose());
    Ys = Ys.cwiseMax(0.0);
    const double tr = Ys.trace(), sum = Ys.sum();
    // Rescale the polyhedral part first, so trace and sum are exact.
    const double off = sum - tr;
    Matrix D = Matrix::Zero(m, m);
    D.diagonal() = Ys.diagonal() / (tr > 0 ? tr : 1.0);
    Matrix O = Ys;
    O.diagonal().setZero();
    if (off > 0) O *= (a - 1.0) / off;
    Ys = D + O;
    if (tr <= 0) Ys.diagonal().setConstant(1.0 / m);
    const double deficit = std::max(0.0, -lambda_min(Ys));
    if (deficit == 0.0) return Ys;
    const double s = (m - a) / ((m - a) + deficit * double(m) * (m - 1));
    const double x = s * deficit;
    const double y = (1.0 - s * (1.0 + deficit * m)) / m;
    Matrix Z = s * Ys;
    Z.array() += std::max(0.0, y);
    Z.diagonal().array() += x;
    return Z;
}

struct VmResult {
    double value = -std::numeric_limits<double>::infinity();
    Matrix Z;  // feasible maximizer estimate (restored)
    SolveResult solve;
    bool feasible = false;
};

// V_m(a) = max <M, Z> over PSD, nonnegative Z with trace 1 and sum a.
inline VmResult solve_vm(const Matrix& M, double a, const SolverOptions& opt = {},
                         const AdmmState* warm = nullptr) {
    require_sym_zero_diag(M, "V_m matrix");
    const int m = int(M.rows());
    VmResult out;
    if (m < 1) throw ParameterError("empty matrix");
    if (!(a >= 1.0) || a > double(m)) {
        out.solve.status = SolveStatus::Infeasible;
        return out;
    }
    // The endpoints are singletons: a = 1 forces a nonnegative diagonal Z,
    // a = m forces Z = J/m.
    if (m == 1 || a == 1.0 || a == double(m)) {
        out.Z = a == 1.0 ? Matrix(Matrix::Identity(m, m) / m) : Matrix(Matrix::Ones(m, m) / m);
        out.value = (M.cwiseProduct(out.Z)).sum();
        out.feasible = true;
        out.solve.Z = out.Z;
        out.solve.objective = out.solve.dual_bound = out.value;
        out.solve.status = SolveStatus::Optimal;
        return out;
    }
    out.solve = admm_solve(M, vm_poly(m, a), vm_slater(m, a), opt, warm, 1.0);
    out.Z = vm_restore(out.solve.Z, a);
    out.value = (M.cwiseProduct(out.Z)).sum();
    out.feasible = true;
    return out;
}

inline PolySet sbm_poly(int n, int r) {
    PolySet P;
    P.diag = {1.0, 1.0, false, 0.0, 1.0};
    P.off = {-1.0 / (r - 1), 1.0, true, -0.5 * n, 2.0};
    return P;
}

inline SolveResult solve_sbm_sdp(const Matrix& A, int r, const SolverOptions& opt = {},
                                 const AdmmState* warm = nullptr) {
    require_sym_zero_diag(A, "adjacency matrix");
    const int n = int(A.rows());
    if (r < 2 || n % r != 0) throw ParameterError("need r >= 2 dividing n");
    Matrix Y0 = Matrix::Constant(n, n, -1.0 / (n - 1));
    Y0.diagonal().setOnes();
    return admm_solve(A, sbm_poly(n, r), Y0, opt, warm, n / std::sqrt(double(r)));
}

enum class Program { Community, Vm, Sbm };

struct FeasReport {
    double psd = 0.0;        // max(0, -lambda_min)
    double nonneg = 0.0;     // entrywise lower bound deficit
    double diag = 0.0;       // diagonal bound or equality violation
    double trace = 0.0;      // |tr Z - target|
    double sum = 0.0;        // |<J, Z> - target|
    double symmetry = 0.0;   // max |Z - Z^T|
    double max_violation() const { return std::max({psd, nonneg, diag, trace, sum, symmetry}); }
    bool ok(double tol) const { return max_violation() <= tol; }
};

// param: K (community), a (V_m), r (SBM).
inline FeasReport check_feasibility(const Matrix& Z, Program prog, double param) {
    if (Z.rows() != Z.cols()) throw ContractError("Z must be square");
    const Index n = Z.rows();
    FeasReport f;
    f.symmetry = (Z - Z.transpose()).cwiseAbs().maxCoeff();
    const Matrix Zs = 0.5 * (Z + Z.transpose());
    f.psd = std::max(0.0, -lambda_min(Zs));
    switch (prog) {
        case Program::Community:
            f.nonneg = std::max(0.0, -Zs.minCoeff());
            f.diag = std::max(0.0, Zs.diagonal().maxCoeff() - 1.0);
            f.trace = std::abs(Zs.trace() - param);
            f.sum = std::abs(Zs.sum() - param * param);
            break;
        case Program::Vm:
            f.nonneg = std::max(0.0, -Zs.minCoeff());
            f.trace = std::abs(Zs.trace() - 1.0);
            f.sum = std::abs(Zs.sum() - param);
            break;
        case Program::Sbm: {
            const double lb = -1.0 / (param - 1.0);
            double mn = std::numeric_limits<double>::infinity();
            for (Index j = 0; j < n; ++j)
                for (Index i = 0; i < n; ++i)
                    if (i != j) mn = std::min(mn, Zs(i, j));
            f.nonneg = n > 1 ? std::max(0.0, lb - mn) : 0.0;
            f.diag = (Zs.diagonal().array() - 1.0).abs().maxCoeff();
            f.sum = std::abs(Zs.sum());
            break;
        }
    }
    return f;
}

// Top-K entries of the leading eigenvector (sign chosen so its sum is
// non-negative); exact ties broken by larger row sum, then smaller index.
inline std::vector<int> round_solution(const Matrix& Z, int K) {
    const int n = int(Z.rows());
    if (K < 1 || K > n) throw ParameterError("K must lie in [1, n]");
    Vector v = leading_eigenpair(0.5 * (Z + Z.transpose())).second;
    if (v.sum() < 0) v = -v;
    const Vector rows = Z.rowwise().sum();
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
        if (v(i) != v(j)) return v(i) > v(j);
        if (rows(i) != rows(j)) return rows(i) > rows(j);
        return i < j;
    });
    idx.resize(K);
    std::sort(idx.begin(), idx.end());
    return idx;
}

// Partition from an SBM solution: repeatedly seed with the smallest
// unassigned index and take the K unassigned vertices most correlated with it.
inline std::vector<int> round_sbm_solution(const Matrix& Y, int r) {
    const int n = int(Y.rows());
    if (r < 1 || n % r != 0) throw ParameterError("need r dividing n");
    const int K = n / r;
    std::vector<int> labels(n, -1);
    for (int b = 0; b < r; ++b) {
        int seed = 0;
        while (labels[seed] >= 0) ++seed;
        std::vector<int> pool;
        for (int i = 0; i < n; ++i)
            if (labels[i] < 0) pool.push_back(i);
        std::stable_sort(pool.begin(), pool.end(), [&](int i, int j) {
            const double yi = i == seed ? std::numeric_limits<double>::infinity() : Y(seed, i);
            const double yj = j == seed ? std::numeric_limits<double>::infinity() : Y(seed, j);
            return yi > yj;
        });
        for (int k = 0; k < K; ++k) labels[pool[k]] = b;
    }
    return labels;
}

// Same partition up to block relabeling.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::map<int, int> fwd, bwd;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (fwd.emplace(a[i], b[i]).first->second != b[i]) return false;
        if (bwd.emplace(b[i], a[i]).first->second != a[i]) return false;
    }
    return true;
}

inline double max_abs_diff(const Matrix& A, const Matrix& B) { return (A - B).cwiseAbs().maxCoeff(); }

struct RecoveryVerdict {
    double distance = 0.0;  // ||Z - Z*||_max
    bool exact = false;     // distance <= 1e-4
    bool nonunique = false; // optimal value matches <L, Z*> yet distance > 1e-2
};

inline RecoveryVerdict classify_recovery(const SolveResult& res, const Matrix& L, const Matrix& Zstar,
                                         double gap_tol) {
    RecoveryVerdict v;
    v.distance = max_abs_diff(res.Z, Zstar);
    v.exact = v.distance <= 1e-4;
    const double target = (L.cwiseProduct(Zstar)).sum();
    v.nonunique = v.distance > 1e-2 && std::abs(res.objective - target) <= gap_tol * (1.0 + std::abs(target));
    return v;
}

}  // namespace csdp
