#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "info.hpp"
#include "linalg.hpp"
#include "model.hpp"
#include "sdp.hpp"

namespace csdp {

// Multipliers for the community program at Z* = xi xi^T:
// S = D - B - L + eta I + lambda J.
struct DualCertificate {
    std::vector<int> truth;
    double lambda = 0.0;
    double eta = 0.0;
    double beta_mean = 0.0;
    Vector e;  // e(i, truth) for all i
    Vector d;  // diagonal-cap multipliers
    Matrix B;  // nonnegativity multipliers
    Matrix S;  // PSD multiplier
};

// Builds D, B, S from given lambda and eta (no clamping).
inline DualCertificate assemble_certificate(const Matrix& L, const std::vector<int>& truth, double lambda,
                                            double eta, double beta_mean) {
    require_sym_zero_diag(L, "score matrix");
    const int n = int(L.rows());
    const int K = int(truth.size());
    if (K < 1 || K > n) throw ParameterError("community size must lie in [1, n]");
    DualCertificate c;
    c.truth = truth;
    c.lambda = lambda;
    c.eta = eta;
    c.beta_mean = beta_mean;
    c.e = e_stat(L, truth);
    const auto in = membership(n, truth);
    c.d = Vector::Zero(n);
    c.B = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        if (in[i]) {
            c.d(i) = c.e(i) - eta - lambda * K;
        } else {
            const double b = lambda - c.e(i) / K;
            for (int j : truth) {
                c.B(i, j) = b;
                c.B(j, i) = b;
            }
        }
    }
    c.S = -L - c.B;
    c.S.diagonal() += c.d;
    c.S.diagonal().array() += eta;
    c.S.array() += lambda;
    return c;
}

inline DualCertificate build_dual_certificate(const Matrix& L, const std::vector<int>& truth,
                                              double beta_mean) {
    const int n = int(L.rows());
    const int K = int(truth.size());
    const Vector e = e_stat(L, truth);
    const auto in = membership(n, truth);
    double max_out = -std::numeric_limits<double>::infinity();
    double min_in = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        if (in[i]) min_in = std::min(min_in, e(i));
        else max_out = std::max(max_out, e(i));
    }
    const double lambda = std::max(max_out / K, beta_mean);
    const double eta = min_in - lambda * K;
    return assemble_certificate(L, truth, lambda, eta, beta_mean);
}

struct KktReport {
    bool accepted = false;
    bool unique = false;
    bool unique_by_lambda2 = false;
    bool unique_by_strict = false;
    double identity_residual = 0.0;  // ||S - (D - B - L + eta I + lambda J)||_max
    double min_eig_S = 0.0;
    double lambda2 = 0.0;            // on the complement of xi
    double stationarity = 0.0;       // max(||S xi||_inf, |<S, Z>|)
    double min_d = 0.0;
    double min_B = 0.0;
    double slack_d = 0.0;            // max |d_i (1 - Z_ii)|
    double slack_B = 0.0;            // max |B_ij Z_ij|
    std::vector<std::string> failures;
};

// Checks the certificate against a candidate optimum Z. Tolerances are
// scaled by 1 + K max|L|.
inline KktReport verify_kkt(const Matrix& L, const Matrix& Z, const DualCertificate& c, double tol = 1e-8) {
    require_sym_zero_diag(L, "score matrix");
    const int n = int(L.rows());
    if (Z.rows() != n || Z.cols() != n || c.S.rows() != n) throw ContractError("dimension mismatch");
    const int K = int(c.truth.size());
    const double scale = 1.0 + K * L.cwiseAbs().maxCoeff();
    const double t = tol * scale;
    KktReport r;

    Matrix rebuilt = -L - c.B;
    rebuilt.diagonal() += c.d;
    rebuilt.diagonal().array() += c.eta;
    rebuilt.array() += c.lambda;
    r.identity_residual = (c.S - rebuilt).cwiseAbs().maxCoeff();
    if (r.identity_residual > t) r.failures.push_back("identity");

    const Matrix Ss = 0.5 * (c.S + c.S.transpose());
    r.min_eig_S = lambda_min(Ss);
    if (r.min_eig_S < -t) r.failures.push_back("psd");

    const Vector xi = indicator(n, c.truth);
    r.stationarity = std::max((Ss * xi).cwiseAbs().maxCoeff(), std::abs((Ss.cwiseProduct(Z)).sum()));
    if (r.stationarity > t) r.failures.push_back("stationarity");

    r.min_d = c.d.minCoeff();
    if (r.min_d < -t) r.failures.push_back("positivityD");
    r.min_B = c.B.minCoeff();
    if (r.min_B < -t) r.failures.push_back("positivityB");

    r.slack_d = (c.d.array() * (1.0 - Z.diagonal().array())).abs().maxCoeff();
    r.slack_B = (c.B.cwiseProduct(Z)).cwiseAbs().maxCoeff();
    if (r.slack_d > t || r.slack_B > t) r.failures.push_back("complementary_slackness");

    r.accepted = r.failures.empty();

    r.lambda2 = n >= 2 ? lambda2_orth(Ss, xi) : 0.0;
    r.unique_by_lambda2 = r.lambda2 > t;
    const auto in = membership(n, c.truth);
    double min_d_in = std::numeric_limits<double>::infinity();
    double min_B_off = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        if (in[i]) min_d_in = std::min(min_d_in, c.d(i));
        for (int j = 0; j < n; ++j)
            if (i != j && !(in[i] && in[j])) min_B_off = std::min(min_B_off, c.B(i, j));
    }
    r.unique_by_strict = min_d_in > t && min_B_off > t;
    r.unique = r.accepted && (r.unique_by_lambda2 || r.unique_by_strict);
    return r;
}

// Mean of the score matrix: alpha inside the community, beta elsewhere.
struct MeanModel {
    double alpha = 0.0;
    double beta = 0.0;
};

inline MeanModel model_means(const ModelSpec& spec, ScoreKind kind) {
    if (spec.kind == ModelKind::Gaussian) {
        if (kind == ScoreKind::Adjacency) return {spec.mu, 0.0};
        return {spec.mu * spec.mu / 2.0, -spec.mu * spec.mu / 2.0};
    }
    if (kind == ScoreKind::Adjacency) return {spec.p, spec.q};
    if (spec.p >= 1.0 || spec.q <= 0.0) throw DegenerateLikelihood("log-likelihood ratio is infinite");
    const double slope = std::log(spec.p * (1 - spec.q) / (spec.q * (1 - spec.p)));
    const double shift = std::log((1 - spec.p) / (1 - spec.q));
    return {slope * spec.p + shift, slope * spec.q + shift};
}

// Plug-in means for a score matrix of unknown provenance.
inline MeanModel empirical_means(const Matrix& L, const std::vector<int>& truth) {
    const int n = int(L.rows());
    const int K = int(truth.size());
    const auto in = membership(n, truth);
    double s_in = 0.0, s_out = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) (in[i] && in[j] ? s_in : s_out) += L(i, j);
    const double n_in = 0.5 * double(K) * (K - 1);
    const double n_out = 0.5 * double(n) * (n - 1) - n_in;
    return {n_in > 0 ? s_in / n_in : 0.0, n_out > 0 ? s_out / n_out : 0.0};
}

struct SuffCheck {
    double margin = 0.0;
    double min_in = 0.0;
    double max_out = 0.0;
    double noise_norm = 0.0;  // ||L - E L||
    bool holds = false;
};

inline Matrix mean_matrix(int n, const std::vector<int>& truth, const MeanModel& mm) {
    Matrix M = Matrix::Constant(n, n, mm.beta);
    for (int i : truth)
        for (int j : truth) M(i, j) = mm.alpha;
    M.diagonal().setZero();
    return M;
}

// min_in e - max{max_out e, K beta} - ||L - E L|| + beta > 0 guarantees the
// certificate is accepted with lambda2 >= margin.
inline SuffCheck suff_check(const Matrix& L, const std::vector<int>& truth, const MeanModel& mm) {
    require_sym_zero_diag(L, "score matrix");
    const int n = int(L.rows());
    const int K = int(truth.size());
    const Vector e = e_stat(L, truth);
    const auto in = membership(n, truth);
    SuffCheck s;
    s.min_in = std::numeric_limits<double>::infinity();
    s.max_out = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        if (in[i]) s.min_in = std::min(s.min_in, e(i));
        else s.max_out = std::max(s.max_out, e(i));
    }
    s.noise_norm = spectral_norm(L - mean_matrix(n, truth, mm));
    s.margin = s.min_in - std::max(s.max_out, K * mm.beta) - s.noise_norm + mm.beta;
    s.holds = s.margin > 0.0;
    return s;
}

// Geometric grid on [1, a_max] plus named points, sorted and deduplicated.
inline std::vector<double> default_a_grid(double a_max, int points, const std::vector<double>& extra = {}) {
    std::vector<double> g;
    if (a_max < 1.0) return g;
    g.push_back(1.0);
    for (int k = 1; k < points; ++k) g.push_back(std::pow(a_max, double(k) / (points - 1)));
    for (double x : extra)
        if (x >= 1.0 && x <= a_max) g.push_back(x);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end(), [](double x, double y) { return std::abs(x - y) <= 1e-12 * y; }),
            g.end());
    return g;
}

// 32 geometric points on [1, min(K, n-K)] with the named choices
// sqrt(K)(n-K)^(1/4) and, for Bernoulli, sqrt(nq/(1-q))/kappa + 1.
inline std::vector<double> nec_default_grid(const ModelSpec& s, double kappa_value) {
    const double m = s.n - s.K;
    std::vector<double> extra{std::sqrt(double(s.K)) * std::pow(m, 0.25)};
    if (s.kind == ModelKind::Bernoulli && s.q > 0.0 && kappa_value > 0.0)
        extra.push_back(std::sqrt(s.n * s.q / (1 - s.q)) / kappa_value + 1.0);
    return default_a_grid(std::min<double>(s.K, m), 32, extra);
}

struct NecReport {
    double lhs = 0.0;  // min_in e - max_out e
    double rhs = 0.0;  // sup_a V(a) - (a / K) max_out e
    double worst_margin = 0.0;  // lhs - rhs
    bool consistent = true;
    double argmax_a = 1.0;
    double min_in = 0.0;
    double max_out = 0.0;
    std::vector<double> grid;
    std::vector<double> values;  // V(a), feasible lower estimates
    Matrix U_argmax;             // V-program point at argmax_a (complement indexing)
};

// The necessary optimality test on a grid of a; V values are those of the
// restored feasible points, so an inconsistency verdict is never spurious.
inline NecReport nec_check(const Matrix& L, const std::vector<int>& truth, std::vector<double> grid = {},
                           const SolverOptions& opt = {}) {
    require_sym_zero_diag(L, "score matrix");
    const int n = int(L.rows());
    const int K = int(truth.size());
    const std::vector<int> comp = complement(n, truth);
    const int m = int(comp.size());
    NecReport r;
    if (m == 0) return r;
    const Vector e = e_stat(L, truth);
    r.min_in = std::numeric_limits<double>::infinity();
    r.max_out = -std::numeric_limits<double>::infinity();
    for (int i : truth) r.min_in = std::min(r.min_in, e(i));
    for (int j : comp) r.max_out = std::max(r.max_out, e(j));
    r.lhs = r.min_in - r.max_out;

    const double a_max = std::min<double>(K, m);
    if (grid.empty()) grid = default_a_grid(a_max, 32, {std::sqrt(double(K)) * std::pow(double(m), 0.25)});
    std::sort(grid.begin(), grid.end());
    const Matrix M = principal_submatrix(L, comp);
    r.rhs = -std::numeric_limits<double>::infinity();
    AdmmState state;
    bool warm = false;
    for (double a : grid) {
        if (a < 1.0 || a > a_max) throw ParameterError("grid point outside [1, min(K, n-K)]");
        const VmResult v = solve_vm(M, a, opt, warm ? &state : nullptr);
        if (v.solve.state.Y.size() > 0) {
            state = v.solve.state;
            warm = true;
        }
        r.grid.push_back(a);
        r.values.push_back(v.value);
        const double term = v.value - a / K * r.max_out;
        if (term > r.rhs) {
            r.rhs = term;
            r.argmax_a = a;
            r.U_argmax = v.Z;
        }
    }
    r.worst_margin = r.lhs - r.rhs;
    r.consistent = r.worst_margin >= 0.0;
    return r;
}

struct PerturbResult {
    Matrix Z;
    double eps = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double objective = 0.0;       // <L, Z>
    double base_objective = 0.0;  // <L, Z*>
    double predicted_slope = 0.0; // first-order (<L,Z> - <L,Z*>) / (2 eps)
    FeasReport feasibility;
    bool improves = false;
};

namespace detail {

// beta solving (K-2e)(K-(1-b)e)^2 = (K^2-2ea)(K-2e+(1+b^2)e^2), the
// elimination of alpha from the trace and sum equalities, divided by e.
inline double perturbation_beta(double K, double a, double eps) {
    const double a2 = eps * (K - K * K + 2 * eps * (a - 1));
    const double a1 = 2 * (K - 2 * eps) * (K - eps);
    const double a0 = -2 * K * (K - a) + (5 * K - K * K - 4 * a) * eps + 2 * (a - 1) * eps * eps;
    const double target = 1.0 - a / K;
    if (a2 == 0.0) return -a0 / a1;
    const double disc = a1 * a1 - 4 * a2 * a0;
    if (disc < 0) throw WitnessFailed("perturbation quadratic has no real root");
    const double sq = std::sqrt(disc);
    // Stable pair of roots.
    const double qv = -0.5 * (a1 + (a1 >= 0 ? sq : -sq));
    const double r1 = qv / a2;
    const double r2 = qv != 0.0 ? a0 / qv : r1;
    return std::abs(r1 - target) <= std::abs(r2 - target) ? r1 : r2;
}

}  // namespace detail

// Feasible Z with <L, Z> above <L, Z*> when the necessary test fails at a.
// U is a V-program point for the complement block, in complement order.
inline PerturbResult perturbation_solution(const Matrix& L, const std::vector<int>& truth, const Matrix& U,
                                           double a, double eps0 = 1e-2) {
    require_sym_zero_diag(L, "score matrix");
    const int n = int(L.rows());
    const int K = int(truth.size());
    const std::vector<int> comp = complement(n, truth);
    const int m = int(comp.size());
    if (m == 0) throw ParameterError("community covers every vertex");
    if (U.rows() != m || U.cols() != m) throw ContractError("U must be (n-K) x (n-K)");
    if (a < 1.0 || a > std::min<double>(K, m)) throw ParameterError("a outside [1, min(K, n-K)]");
    const Vector e = e_stat(L, truth);
    int i_min = truth.front(), j_max = comp.front();
    for (int i : truth)
        if (e(i) < e(i_min)) i_min = i;
    for (int j : comp)
        if (e(j) > e(j_max)) j_max = j;

    Matrix Ufull = Matrix::Zero(n, n);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) Ufull(comp[x], comp[y]) = U(x, y);
    const Matrix Mout = principal_submatrix(L, comp);
    const double vm = (Mout.cwiseProduct(U)).sum();

    PerturbResult res;
    res.base_objective = (L.cwiseProduct(cluster_matrix(n, truth))).sum();
    res.predicted_slope = (1.0 - a / K) * e(j_max) + vm - e(i_min);
    for (double eps = eps0; eps >= 1e-8; eps /= 2) {
        const double beta = detail::perturbation_beta(K, a, eps);
        const double alpha = (K - 2 * eps) / (K - 2 * eps + (1 + beta * beta) * eps * eps);
        Vector xi = indicator(n, truth);
        xi(i_min) = 1.0 - eps;
        xi(j_max) = beta * eps;
        Matrix Z = alpha * xi * xi.transpose() + 2 * eps * Ufull;
        FeasReport f = check_feasibility(Z, Program::Community, K);
        res = PerturbResult{Z, eps, alpha, beta, (L.cwiseProduct(Z)).sum(), res.base_objective,
                            res.predicted_slope, f, false};
        if (f.psd <= 1e-9 && f.nonneg <= 1e-12 && f.diag <= 1e-12 && f.trace <= 1e-9 &&
            f.sum <= 1e-9 * K) {
            res.improves = res.objective > res.base_objective;
            return res;
        }
    }
    throw WitnessFailed("perturbation stayed infeasible down to eps = 1e-8");
}

enum class TiltBranch { Auto, LargeA, MidA, SmallA };

inline std::string to_string(TiltBranch b) {
    switch (b) {
        case TiltBranch::Auto: return "auto";
        case TiltBranch::LargeA: return "large_a";
        case TiltBranch::MidA: return "mid_a";
        case TiltBranch::SmallA: return "small_a";
    }
    return "?";
}

struct WitnessOptions {
    TiltBranch branch = TiltBranch::Auto;
    double c_lo = 0.2;  // a <= c_lo sqrt(m): small-a tilt
    double c_hi = 5.0;  // a >= c_hi sqrt(m): large-a tilt
};

struct VmWitness {
    Matrix Z;
    double objective = 0.0;
    double lower_target = std::numeric_limits<double>::quiet_NaN();  // analytic lower bound, if any
    double min_eig = 0.0;
    double trace_error = 0.0;
    double sum_error = 0.0;
    double min_entry = 0.0;
    TiltBranch branch = TiltBranch::Auto;
    double tilt = 0.0;    // Gaussian exponential tilt
    double gamma = 0.0;   // Bernoulli level
    double eps = 0.0;     // Bernoulli slack
    double alpha = 0.0;
    double beta = 0.0;
};

namespace detail {

inline void finish_witness(VmWitness& w, const Matrix& M, double a) {
    w.objective = (M.cwiseProduct(w.Z)).sum();
    w.min_eig = lambda_min(w.Z);
    w.trace_error = std::abs(w.Z.trace() - 1.0);
    w.sum_error = std::abs(w.Z.sum() - a);
    w.min_entry = w.Z.minCoeff();
}

}  // namespace detail

// Exponentially tilted witness for V_m(a) with Gaussian noise W.
inline VmWitness vm_witness_gaussian(const Matrix& W, double a, const WitnessOptions& opt = {}) {
    require_sym_zero_diag(W, "noise matrix");
    const int m = int(W.rows());
    if (m < 2) throw ParameterError("need m >= 2");
    if (a < 1.0 || a > m) throw ParameterError("a outside [1, m]");
    VmWitness w;
    const double sm = std::sqrt(double(m));
    TiltBranch br = opt.branch;
    if (br == TiltBranch::Auto)
        br = a >= opt.c_hi * sm ? TiltBranch::LargeA : (a <= opt.c_lo * sm ? TiltBranch::SmallA : TiltBranch::MidA);
    w.branch = br;
    if (a == 1.0) {
        w.Z = Matrix::Identity(m, m) / m;
        detail::finish_witness(w, W, a);
        return w;
    }
    double tau = 0.0;
    switch (br) {
        case TiltBranch::LargeA:
            tau = sm / (2 * (a - 1)) - std::pow(m, 0.75) / (2 * std::sqrt(2.0) * std::pow(a - 1, 1.5)) - 1 / sm;
            w.lower_target = sm / 2 - (std::pow(m, 0.75) / std::sqrt(8 * (a - 1)) + 2 * a / sm);
            break;
        case TiltBranch::SmallA: {
            const double x = std::log(m / (a * a));
            if (!(x > 0)) throw WitnessFailed("small-a tilt needs m > a^2");
            tau = std::sqrt((x - std::log(x)) / 3);
            break;
        }
        case TiltBranch::MidA:
            tau = 0.9 * std::sqrt(std::log(1 + m / (4 * a * a)));
            break;
        case TiltBranch::Auto: break;
    }
    if (!(tau > 0) || !std::isfinite(tau)) throw WitnessFailed("tilt parameter is not positive");
    w.tilt = tau;
    Matrix G = ((tau * W).array() - tau * tau / 2).exp().matrix();
    G.diagonal().setZero();
    const double mean = G.sum() / (double(m) * (m - 1));
    w.alpha = mean;
    w.Z = G * ((a - 1) / (mean * m * (m - 1)));
    w.Z.diagonal().setConstant(1.0 / m);
    detail::finish_witness(w, W, a);
    return w;
}

// Affine witness alpha M + beta on the off-diagonal for 0/1 data M.
inline VmWitness vm_witness_bernoulli(const Matrix& M, double a, double q, double kappa_value) {
    require_sym_zero_diag(M, "adjacency matrix");
    const int m = int(M.rows());
    if (m < 2) throw ParameterError("need m >= 2");
    if (a < 1.0 || a > m) throw ParameterError("a outside [1, m]");
    if (!(q > 0 && q < 1) || !(kappa_value > 0)) throw ParameterError("need 0 < q < 1, kappa > 0");
    VmWitness w;
    const double pairs = double(m) * (m - 1);
    const double R = M.sum() / pairs;
    if (R <= 0.0 || R >= 1.0) throw WitnessFailed("edge density is 0 or 1");
    if (a == 1.0) {
        w.Z = Matrix::Identity(m, m) / m;
        detail::finish_witness(w, M, a);
        return w;
    }
    const double eps = 2.0 / std::log(m * std::min(std::sqrt(q), 1.0 / a));
    if (!(eps > 0) || !std::isfinite(eps)) throw WitnessFailed("slack parameter is not positive");
    const double gamma = std::min(q + (1 - eps) * std::sqrt(m * q * (1 - q)) / (kappa_value * (a - 1)), 1.0);
    w.eps = eps;
    w.gamma = gamma;
    w.alpha = (gamma - R) / (R * (1 - R)) * (a - 1) / pairs;
    w.beta = (1 - gamma) / (1 - R) * (a - 1) / pairs;
    w.Z = (w.alpha * M.array() + w.beta).matrix();
    w.Z.diagonal().setConstant(1.0 / m);
    w.lower_target = (a - 1) * gamma;
    detail::finish_witness(w, M, a);
    return w;
}

struct SbmWitness {
    Matrix Y;
    double s = 0.0, t = 0.0, w = 0.0;
    double objective = 0.0;        // <A, Y>
    double target = 0.0;           // (1 + eps) <A, Y*>
    double min_eig = 0.0;
    double diag_error = 0.0;
    double row_sum_error = 0.0;    // ||Y 1||_inf
    double min_offdiag = 0.0;
    double lower_bound = 0.0;      // -1/(r-1)
    double degree_condition = 0.0; // t + 2 w d_max, compared with lower_bound
    FeasReport feasibility;
};

// Y = s A + t (J - I) + w (d 1^T + 1 d^T - 2 diag d) + I with Y 1 = 0 and
// <A, Y> = (1 + eps) <A, Y*>.
inline SbmWitness sbm_witness(const Matrix& A, int r, double eps, const std::vector<int>& labels) {
    require_sym_zero_diag(A, "adjacency matrix");
    const int n = int(A.rows());
    if (r < 2 || n % r != 0 || int(labels.size()) != n) throw ParameterError("bad SBM witness arguments");
    const Vector d = A.rowwise().sum();
    const double z = d.sum();
    const double dd = d.squaredNorm();
    const Matrix Ystar = sbm_cluster_matrix(labels, r);
    SbmWitness out;
    out.target = (1 + eps) * (A.cwiseProduct(Ystar)).sum();
    // Unknowns (s, t, w).
    Eigen::Matrix3d sys;
    Eigen::Vector3d rhs;
    sys << 1, 0, n - 2,
           0, n - 1, z,
           z, z, 2 * dd;
    rhs << 0, -1, out.target;
    Eigen::FullPivLU<Eigen::Matrix3d> lu(sys);
    if (!lu.isInvertible()) throw WitnessFailed("witness linear system is singular");
    const Eigen::Vector3d sol = lu.solve(rhs);
    out.s = sol(0);
    out.t = sol(1);
    out.w = sol(2);
    Matrix Y = out.s * A;
    Y.array() += out.t;
    Y.colwise() += out.w * d;
    Y.rowwise() += out.w * d.transpose();
    Y.diagonal().setOnes();
    out.Y = Y;
    out.objective = (A.cwiseProduct(Y)).sum();
    out.min_eig = lambda_min(0.5 * (Y + Y.transpose()));
    out.diag_error = (Y.diagonal().array() - 1.0).abs().maxCoeff();
    out.row_sum_error = Y.rowwise().sum().cwiseAbs().maxCoeff();
    Matrix off = Y;
    off.diagonal().setConstant(std::numeric_limits<double>::infinity());
    out.min_offdiag = off.minCoeff();
    out.lower_bound = -1.0 / (r - 1);
    out.degree_condition = out.t + 2 * out.w * d.maxCoeff();
    out.feasibility = check_feasibility(Y, Program::Sbm, r);
    return out;
}

}  // namespace csdp
