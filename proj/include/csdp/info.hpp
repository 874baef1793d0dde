#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "model.hpp"

namespace csdp {

// Binary relative entropy d(p||q) in nats with 0 log 0 = 0. Returns +inf
// when q is 0 or 1 and p differs from q.
inline double kl_bern(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0))
        throw ParameterError("kl_bern arguments must lie in [0, 1]");
    const double inf = std::numeric_limits<double>::infinity();
    double t1 = 0.0, t2 = 0.0;
    if (p > 0.0) t1 = q == 0.0 ? inf : p * std::log(p / q);
    if (p < 1.0) t2 = q == 1.0 ? inf : (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
    return t1 + t2;
}

// Root of a monotone function on [lo, hi] by bisection down to adjacent
// doubles (at most 200 halvings). Throws if the bracket does not straddle 0
// in the stated direction or if midpoint values break monotonicity.
inline double monotone_root(const std::function<double(double)>& f, double lo, double hi,
                            bool increasing, int* iterations = nullptr) {
    double flo = f(lo), fhi = f(hi);
    const double sgn = increasing ? 1.0 : -1.0;
    if (!(sgn * flo <= 0.0 && sgn * fhi >= 0.0))
        throw ContractError("bracket does not contain a sign change in the stated direction");
    // Rounding noise near the root is not a monotonicity violation.
    const double noise = 1e-12 * std::max({1.0, std::abs(flo), std::abs(fhi)});
    int it = 0;
    for (; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (sgn * (fm - flo) < -noise || sgn * (fhi - fm) < -noise)
            throw ContractError("function is not monotone on the bracket");
        if (fm == 0.0) { lo = hi = mid; flo = fhi = 0.0; break; }
        if (sgn * fm < 0.0) { lo = mid; flo = fm; }
        else { hi = mid; fhi = fm; }
    }
    if (iterations) *iterations = it;
    return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

struct TauStar {
    double value = 0.0;
    bool in_range = false;  // q <= value <= p
};

// Balance point of the two Bernoulli tails used by the MLE analysis. For
// p = 1 the limit value 1 is returned.
inline TauStar tau_star(int n, int K, double p, double q) {
    if (!(q > 0.0 && q < p && p <= 1.0)) throw ParameterError("need 0 < q < p <= 1");
    if (K < 1 || K > n) throw ParameterError("K must lie in [1, n]");
    TauStar t;
    if (p == 1.0) {
        t.value = 1.0;
    } else {
        const double den = std::log(p * (1.0 - q) / (q * (1.0 - p)));
        if (!(den > 1e-300)) throw WellDefinednessError("log-likelihood slope vanishes");
        t.value = (std::log((1.0 - q) / (1.0 - p)) + std::log(double(n) / K) / K) / den;
    }
    t.in_range = t.value >= q && t.value <= p;
    return t;
}

struct Tau12 {
    double tau1 = 0.0;
    double tau2 = 0.0;
    double residual1 = 0.0;  // K d(tau1||p) - log K
    double residual2 = 0.0;  // K d(tau2||q) - log(n - K)
};

// tau1 in (0, p): K d(tau1||p) = log K. tau2 in (q, 1): K d(tau2||q) = log(n-K).
// Point-mass limits: tau1 = p when p = 1 or K = 1, tau2 = q when q = 0 or n-K = 1.
inline Tau12 solve_tau12(int n, int K, double p, double q) {
    if (!(q >= 0.0 && q < p && p <= 1.0)) throw ParameterError("need 0 <= q < p <= 1");
    if (K < 1 || K >= n) throw ParameterError("need 1 <= K < n");
    Tau12 t;
    const double lk = std::log(double(K)), lnk = std::log(double(n - K));
    if (K == 1 || p == 1.0) {
        t.tau1 = p;
    } else {
        auto f = [&](double x) { return K * kl_bern(x, p) - lk; };
        if (f(0.0) < 0.0) throw WellDefinednessError("K d(0||p) < log K: tau1 has no root");
        t.tau1 = monotone_root(f, 0.0, p, false);
        t.residual1 = f(t.tau1);
    }
    if (n - K == 1 || q == 0.0) {
        t.tau2 = q;
    } else {
        auto g = [&](double x) { return K * kl_bern(x, q) - lnk; };
        if (g(1.0) < 0.0) throw WellDefinednessError("K d(1||q) < log(n-K): tau2 has no root");
        t.tau2 = monotone_root(g, q, 1.0, true);
        t.residual2 = g(t.tau2);
    }
    return t;
}

struct KappaConfig {
    double c1 = 5.0;  // nq >= c1 log n selects 4
    double c0 = 8.0;  // sparse fallback
};

struct KappaResult {
    double value = 0.0;
    bool sparse_warning = false;  // nq < log n
};

inline KappaResult kappa(int n, double q, const KappaConfig& cfg = {}) {
    if (n < 2 || !(q >= 0.0 && q <= 1.0)) throw ParameterError("bad kappa arguments");
    const double nq = n * q, ln = std::log(double(n));
    KappaResult k;
    if (nq >= std::pow(ln, 4)) k.value = 2.0;
    else if (nq >= cfg.c1 * ln) k.value = 4.0;
    else k.value = cfg.c0;
    k.sparse_warning = nq < ln;
    return k;
}

// x - y log(e x / y)
inline double rate_fn(double x, double y) { return x - y - y * std::log(x / y); }

// gamma1 < a and gamma2 > b with rho * rate_fn(., gamma) = 1.
inline std::pair<double, double> gamma_pair(double rho, double a, double b) {
    if (!(rho > 0.0 && a > 0.0 && b > 0.0)) throw ParameterError("need rho, a, b > 0");
    if (!(rho * a > 1.0)) throw WellDefinednessError("rho * a <= 1: gamma1 has no root");
    auto f1 = [&](double y) { return y <= 0.0 ? rho * a - 1.0 : rho * rate_fn(a, y) - 1.0; };
    const double g1 = monotone_root(f1, 0.0, a, false);
    auto f2 = [&](double y) { return rho * rate_fn(b, y) - 1.0; };
    double hi = 2.0 * b + 1.0;
    while (f2(hi) < 0.0) hi *= 2.0;
    const double g2 = monotone_root(f2, b, hi, true);
    return {g1, g2};
}

enum class Side { Sufficient, Necessary, ItPossible, ItImpossible };

inline std::string to_string(Side s) {
    switch (s) {
        case Side::Sufficient: return "sufficient";
        case Side::Necessary: return "necessary";
        case Side::ItPossible: return "it_possible";
        case Side::ItImpossible: return "it_impossible";
    }
    return "?";
}

struct Condition {
    std::string id;
    Side side = Side::Sufficient;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;     // lhs - rhs
    bool satisfied = false;  // margin > 0
    bool applicable = true;
    std::string regime;      // "finite-n" or an asymptotic regime label
    std::string note;
};

struct InfoConfig {
    KappaConfig kappa;
    double c_lo = 0.2;  // K <= c_lo sqrt(n): small-K regime
    double c_hi = 5.0;  // K >= c_hi sqrt(n): large-K regime
};

struct ThresholdReport {
    ModelSpec spec;
    double kappa = 0.0;
    std::vector<Condition> entries;

    const Condition* find(const std::string& id) const {
        for (const auto& c : entries)
            if (c.id == id) return &c;
        return nullptr;
    }
};

namespace detail {

inline Condition make_condition(std::string id, Side side, double lhs, double rhs, std::string regime,
                                bool applicable = true, std::string note = {}) {
    Condition c;
    c.id = std::move(id);
    c.side = side;
    c.lhs = lhs;
    c.rhs = rhs;
    c.margin = lhs - rhs;
    c.applicable = applicable && std::isfinite(c.margin);
    c.satisfied = c.applicable && c.margin > 0.0;
    c.regime = std::move(regime);
    c.note = std::move(note);
    return c;
}

inline Condition unavailable(std::string id, Side side, std::string regime, std::string note) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    Condition c = make_condition(std::move(id), side, nan, nan, std::move(regime), false, std::move(note));
    return c;
}

inline void gaussian_conditions(const ModelSpec& s, const InfoConfig& cfg, ThresholdReport& rep) {
    const double n = s.n, K = s.K, mu = s.mu;
    const double sn = std::sqrt(n);
    const double lK = std::log(K), ln = std::log(n), lnK = std::log(n - K);
    const std::string fin = "finite-n";
    auto& E = rep.entries;

    const double tails = (std::sqrt(2 * lK) + std::sqrt(2 * lnK)) / std::sqrt(K);
    E.push_back(make_condition("gauss.sdp_sufficient", Side::Sufficient, mu, tails + 2 * sn / K, fin,
                               s.K < s.n));
    E.push_back(make_condition("gauss.sdp_sufficient_entrywise", Side::Sufficient, mu,
                               2 * std::sqrt(lK) + 2 * std::sqrt(ln), fin));

    const std::string large = "K >= c_hi sqrt(n)", mid = "c_lo sqrt(n) < K < c_hi sqrt(n)",
                      small = "K <= c_lo sqrt(n)";
    const bool is_large = K >= cfg.c_hi * sn, is_small = K <= cfg.c_lo * sn;
    E.push_back(make_condition("gauss.sdp_necessary.large_K", Side::Necessary, mu, tails + sn / (2 * K),
                               large, is_large && s.K < s.n));
    E.push_back(make_condition("gauss.sdp_necessary.mid_K", Side::Necessary, mu,
                               std::sqrt(std::log(1 + n / (4 * K * K))), mid, !is_large && !is_small));
    E.push_back(make_condition("gauss.sdp_necessary.small_K", Side::Necessary, mu,
                               n > K * K ? std::sqrt(std::log(n / (K * K)) / 3) : 0.0, small,
                               is_small && n > K * K));

    const double it = std::max(std::sqrt(2 * lK) + std::sqrt(2 * ln), 2 * std::sqrt(std::log(n / K))) /
                      std::sqrt(K);
    E.push_back(make_condition("gauss.mle_possible", Side::ItPossible, mu, it, fin));
    E.push_back(make_condition("gauss.mle_impossible", Side::ItImpossible, it, mu, fin));

    // K = rho n / log n, mu = mu0 log n / sqrt n.
    const double rho = K * ln / n, mu0 = mu * sn / ln;
    const std::string reg = "K = rho n/log n, mu = mu0 log n/sqrt n";
    E.push_back(make_condition("regime.mle_possible", Side::ItPossible, rho * mu0 * mu0, 8.0, reg));
    E.push_back(make_condition("regime.mle_possible_alt", Side::ItPossible, rho * mu0 * mu0, 1.0, reg, true,
                               "constant 1 variant of the same curve"));
    E.push_back(make_condition("regime.sdp_sufficient", Side::Sufficient, rho * mu0,
                               2 * std::sqrt(2 * rho) + 2, reg));
    E.push_back(make_condition("regime.sdp_necessary", Side::Necessary, rho * mu0,
                               2 * std::sqrt(2 * rho) + 0.5, reg));
}

inline void bernoulli_conditions(const ModelSpec& s, const InfoConfig& cfg, ThresholdReport& rep) {
    const double n = s.n, K = s.K, p = s.p, q = s.q;
    const std::string fin = "finite-n";
    auto& E = rep.entries;
    const double kap = rep.kappa;

    bool have_tau = false;
    Tau12 t;
    std::string tau_note;
    try {
        t = solve_tau12(s.n, s.K, p, q);
        have_tau = true;
    } catch (const Error& e) {
        tau_note = e.what();
    }
    const double sdp_rhs = kap * (std::sqrt(n * q * (1 - q)) + std::sqrt(K * p * (1 - p)));
    if (have_tau)
        E.push_back(make_condition("bern.sdp_sufficient", Side::Sufficient, K * (t.tau1 - t.tau2), sdp_rhs, fin));
    else
        E.push_back(unavailable("bern.sdp_sufficient", Side::Sufficient, fin, tau_note));

    E.push_back(make_condition("bern.sdp_necessary.degree", Side::Necessary, K,
                               q < 1 ? std::sqrt(n * q / (1 - q)) / kap + 1 : 0.0, fin, q < 1));
    if (have_tau && s.K >= 2) {
        const double lK = std::log(K);
        const double rhs = std::sqrt(n * q / (1 - q)) * (1 - t.tau2) / kap - 6 * std::sqrt(K * p / lK) -
                           K * (p - q) * (2 * std::log(lK) + 1) / lK;
        E.push_back(make_condition("bern.sdp_necessary", Side::Necessary, K * (t.tau1 - t.tau2), rhs, fin));
    } else {
        E.push_back(unavailable("bern.sdp_necessary", Side::Necessary, fin,
                                have_tau ? "needs K >= 2" : tau_note));
    }

    const TauStar ts = q > 0.0 ? tau_star(s.n, s.K, p, q) : TauStar{};
    if (q > 0.0 && ts.value >= 0.0 && ts.value <= 1.0) {
        const double ra = K * kl_bern(ts.value, q) / std::log(n);
        const double rb = s.K < s.n ? K * kl_bern(p, q) / std::log(n / K) : std::numeric_limits<double>::quiet_NaN();
        E.push_back(make_condition("bern.mle_possible.tail", Side::ItPossible, ra, 1.0, fin));
        E.push_back(make_condition("bern.mle_possible.mean", Side::ItPossible, rb, 2.0, fin));
        E.push_back(make_condition("bern.mle_impossible.tail", Side::ItImpossible, 1.0, ra, fin));
        E.push_back(make_condition("bern.mle_impossible.mean", Side::ItImpossible, 2.0, rb, fin));
    } else {
        for (auto [id, side] : {std::pair{"bern.mle_possible.tail", Side::ItPossible},
                                std::pair{"bern.mle_possible.mean", Side::ItPossible},
                                std::pair{"bern.mle_impossible.tail", Side::ItImpossible},
                                std::pair{"bern.mle_impossible.mean", Side::ItImpossible}})
            E.push_back(unavailable(id, side, fin, q > 0.0 ? "tau* outside [0, 1]" : "q = 0"));
    }

    // K = rho n / log n, p = a log^2 n / n, q = b log^2 n / n.
    const double ln = std::log(n);
    const double rho = K * ln / n, a = p * n / (ln * ln), b = q * n / (ln * ln);
    const std::string reg = "K = rho n/log n, p = a log^2 n/n, q = b log^2 n/n";
    try {
        const auto [g1, g2] = gamma_pair(rho, a, b);
        E.push_back(make_condition("regime.bern_mle_possible", Side::ItPossible, g1, g2, reg));
        E.push_back(make_condition("regime.bern_sdp_sufficient", Side::Sufficient, rho * (g1 - g2),
                                   4 * std::sqrt(b), reg));
        E.push_back(make_condition("regime.bern_sdp_necessary", Side::Necessary, rho * (g1 - g2),
                                   std::sqrt(b) / 4, reg));
    } catch (const Error& e) {
        E.push_back(unavailable("regime.bern_mle_possible", Side::ItPossible, reg, e.what()));
        E.push_back(unavailable("regime.bern_sdp_sufficient", Side::Sufficient, reg, e.what()));
        E.push_back(unavailable("regime.bern_sdp_necessary", Side::Necessary, reg, e.what()));
    }
    (void)cfg;
}

inline void sbm_conditions(const ModelSpec& s, ThresholdReport& rep) {
    const double n = s.n, K = s.K, p = s.p, q = s.q, r = s.r;
    const double kap = rep.kappa;
    auto& E = rep.entries;
    const std::string fin = "finite-n";
    E.push_back(make_condition("sbm.sdp_necessary", Side::Necessary, K * (p - q) * (p - q),
                               r * q * q / (p * kap * kap), fin));
    E.push_back(make_condition("sbm.sdp_necessary_scaled", Side::Necessary,
                               q > 0 ? (p - q) * std::sqrt(n * p) / (r * q) : std::numeric_limits<double>::infinity(),
                               1.0 / kap, fin, q > 0));
    E.push_back(make_condition("sbm.mle_order", Side::ItPossible, K * (p - q) * (p - q), q * std::log(n),
                               "order-wise", true, "constants unspecified"));
}

}  // namespace detail

inline ThresholdReport evaluate_conditions(const ModelSpec& spec, const InfoConfig& cfg = {}) {
    spec.validate();
    ThresholdReport rep;
    rep.spec = spec;
    if (spec.kind != ModelKind::Gaussian) {
        const KappaResult k = kappa(spec.n, spec.q, cfg.kappa);
        rep.kappa = k.value;
    }
    switch (spec.kind) {
        case ModelKind::Gaussian: detail::gaussian_conditions(spec, cfg, rep); break;
        case ModelKind::Bernoulli: detail::bernoulli_conditions(spec, cfg, rep); break;
        case ModelKind::Sbm: detail::sbm_conditions(spec, rep); break;
    }
    return rep;
}

}  // namespace csdp
