#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace csdp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ModelKind { Gaussian, Bernoulli, Sbm };

inline std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::Gaussian: return "gaussian";
        case ModelKind::Bernoulli: return "bernoulli";
        case ModelKind::Sbm: return "sbm";
    }
    return "?";
}

inline ModelKind model_kind_from_string(const std::string& s) {
    if (s == "gaussian") return ModelKind::Gaussian;
    if (s == "bernoulli") return ModelKind::Bernoulli;
    if (s == "sbm") return ModelKind::Sbm;
    throw ParameterError("unknown model kind '" + s + "'");
}

struct ModelSpec {
    ModelKind kind = ModelKind::Gaussian;
    int n = 0;
    int K = 0;
    double mu = 0.0;  // Gaussian mean shift
    double p = 0.0;   // Bernoulli/SBM within-community edge probability
    double q = 0.0;   // Bernoulli/SBM background edge probability
    int r = 0;        // SBM number of blocks

    void validate() const {
        if (n < 2) throw ParameterError("n must be at least 2");
        if (K < 1 || K > n) throw ParameterError("K must lie in [1, n]");
        switch (kind) {
            case ModelKind::Gaussian:
                if (!(mu > 0.0) || !std::isfinite(mu)) throw ParameterError("mu must be positive and finite");
                break;
            case ModelKind::Sbm:
                if (r < 2) throw ParameterError("SBM needs r >= 2 blocks");
                if (std::int64_t(r) * K != n) throw ParameterError("SBM needs n = r*K");
                // p = q is a valid null model here.
                if (!(q >= 0.0 && p <= 1.0 && q <= p)) throw ParameterError("need 0 <= q <= p <= 1");
                break;
            case ModelKind::Bernoulli:
                if (!(q >= 0.0 && p <= 1.0 && q < p))
                    throw ParameterError("need 0 <= q < p <= 1");
                break;
        }
    }
};

struct Instance {
    ModelSpec spec;
    std::uint64_t seed = 0;
    Matrix A;                 // symmetric, zero diagonal
    std::vector<int> truth;   // sorted planted community (block 0 for SBM)
    std::vector<int> labels;  // SBM block of each vertex; empty otherwise
};

namespace detail {

// Partial Fisher-Yates: first k entries of a uniform random permutation.
inline std::vector<int> partial_shuffle(Stream& rng, int n, int k) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = 0; i < k; ++i) {
        const int j = i + int(rng.below(std::uint64_t(n - i)));
        std::swap(perm[i], perm[j]);
    }
    perm.resize(k);
    return perm;
}

}  // namespace detail

// Draws the planted community first, then the upper triangle row by row.
inline Instance gen_instance(const ModelSpec& spec, std::uint64_t seed) {
    spec.validate();
    Stream rng(seed);
    Instance inst;
    inst.spec = spec;
    inst.seed = seed;
    const int n = spec.n;
    std::vector<int> group(n, -1);

    if (spec.kind == ModelKind::Sbm) {
        const std::vector<int> perm = detail::partial_shuffle(rng, n, n);
        inst.labels.assign(n, 0);
        for (int pos = 0; pos < n; ++pos) inst.labels[perm[pos]] = pos / spec.K;
        group = inst.labels;
        for (int i = 0; i < n; ++i)
            if (group[i] == 0) inst.truth.push_back(i);
    } else {
        inst.truth = detail::partial_shuffle(rng, n, spec.K);
        std::sort(inst.truth.begin(), inst.truth.end());
        for (int i : inst.truth) group[i] = 0;
    }

    inst.A = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const bool planted = spec.kind == ModelKind::Sbm
                                     ? group[i] == group[j]
                                     : (group[i] == 0 && group[j] == 0);
            double x;
            if (spec.kind == ModelKind::Gaussian)
                x = rng.normal() + (planted ? spec.mu : 0.0);
            else
                x = rng.bernoulli(planted ? spec.p : spec.q) ? 1.0 : 0.0;
            inst.A(i, j) = x;
            inst.A(j, i) = x;
        }
    }
    return inst;
}

inline Instance gen_sbm(const ModelSpec& spec, std::uint64_t seed) {
    if (spec.kind != ModelKind::Sbm) throw ParameterError("gen_sbm needs kind sbm");
    return gen_instance(spec, seed);
}

enum class ScoreKind { Adjacency, Llr };

// Log-likelihood-ratio affine transform of A, or A itself.
inline Matrix score_matrix(const Matrix& A, const ModelSpec& spec, ScoreKind kind) {
    if (kind == ScoreKind::Adjacency) return A;
    Matrix L(A.rows(), A.cols());
    if (spec.kind == ModelKind::Gaussian) {
        L = spec.mu * (A.array() - spec.mu / 2.0).matrix();
    } else {
        if (spec.p >= 1.0 || spec.q <= 0.0)
            throw DegenerateLikelihood("log-likelihood ratio is infinite for p = 1 or q = 0");
        const double slope = std::log(spec.p * (1.0 - spec.q) / (spec.q * (1.0 - spec.p)));
        const double shift = std::log((1.0 - spec.p) / (1.0 - spec.q));
        L = (slope * A.array() + shift).matrix();
    }
    L.diagonal().setZero();
    return L;
}

// Row sums of L restricted to the columns in S: e(i, S) for every i.
inline Vector e_stat(const Matrix& L, const std::vector<int>& S) {
    Vector e = Vector::Zero(L.rows());
    for (int j : S) e += L.col(j);
    return e;
}

inline double e_stat(const Matrix& L, int i, const std::vector<int>& S) {
    double s = 0.0;
    for (int j : S) s += L(i, j);
    return s;
}

inline Vector indicator(int n, const std::vector<int>& S) {
    Vector x = Vector::Zero(n);
    for (int i : S) x(i) = 1.0;
    return x;
}

inline std::vector<bool> membership(int n, const std::vector<int>& S) {
    std::vector<bool> in(n, false);
    for (int i : S) in[i] = true;
    return in;
}

inline std::vector<int> complement(int n, const std::vector<int>& S) {
    const auto in = membership(n, S);
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (!in[i]) out.push_back(i);
    return out;
}

// xi xi^T for the indicator of the community.
inline Matrix cluster_matrix(int n, const std::vector<int>& truth) {
    const Vector x = indicator(n, truth);
    return x * x.transpose();
}

// +1 within a block (diagonal included), -1/(r-1) across blocks.
inline Matrix sbm_cluster_matrix(const std::vector<int>& labels, int r) {
    const int n = int(labels.size());
    Matrix Y(n, n);
    const double cross = -1.0 / (r - 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Y(i, j) = labels[i] == labels[j] ? 1.0 : cross;
    return Y;
}

// Sub-matrix on an index set.
inline Matrix principal_submatrix(const Matrix& M, const std::vector<int>& idx) {
    const Index m = Index(idx.size());
    Matrix out(m, m);
    for (Index a = 0; a < m; ++a)
        for (Index b = 0; b < m; ++b) out(a, b) = M(idx[a], idx[b]);
    return out;
}

inline void require_sym_zero_diag(const Matrix& M, const char* what) {
    if (M.rows() != M.cols()) throw ContractError(std::string(what) + " must be square");
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw ContractError(std::string(what) + " must be symmetric");
    if (M.diagonal().cwiseAbs().maxCoeff() > 0.0)
        throw ContractError(std::string(what) + " must have zero diagonal");
}

}  // namespace csdp
