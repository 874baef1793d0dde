#pragma once

#include <Eigen/Dense>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace csdp {

struct EigResult {
    Vector values;   // ascending
    Matrix vectors;  // columns, unit norm
};

namespace detail {

inline void require_symmetric(const Matrix& M) {
    if (M.rows() != M.cols()) throw ContractError("matrix must be square");
    if (M.size() == 0) return;
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw ContractError("matrix must be symmetric to 1e-12");
}

// dsyevr on the lower triangle of a copy. range: 'A' all, 'V' in (vl, vu],
// 'I' indices il..iu (1-based). Returns number of eigenpairs found.
inline int syevr(const Matrix& M, char jobz, char range, double vl, double vu, int il, int iu,
                 Vector& w, Matrix* Zout) {
    const int n = int(M.rows());
    Matrix work = M;
    w.resize(n);
    std::vector<lapack_int> isuppz(2 * std::size_t(std::max(n, 1)));
    lapack_int found = 0;
    Matrix Ztmp;
    double* zptr = nullptr;
    if (jobz == 'V') {
        const int cols = range == 'I' ? (iu - il + 1) : n;
        Ztmp.resize(n, std::max(cols, 1));
        zptr = Ztmp.data();
    }
    const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, jobz, range, 'L', n, work.data(), n,
                                           vl, vu, il, iu, LAPACKE_dlamch('S'), &found, w.data(),
                                           zptr, n, isuppz.data());
    if (info != 0) throw Error("linalg", "dsyevr failed with info " + std::to_string(info));
    w.conservativeResize(found);
    if (Zout) *Zout = Ztmp.leftCols(found);
    return int(found);
}

}  // namespace detail

// Flip each eigenvector so its first entry of non-negligible size is positive.
inline void canonical_signs(Matrix& V) {
    for (Index c = 0; c < V.cols(); ++c) {
        const double tol = 1e-12 * V.col(c).cwiseAbs().maxCoeff();
        for (Index r = 0; r < V.rows(); ++r) {
            if (std::abs(V(r, c)) > tol) {
                if (V(r, c) < 0) V.col(c) *= -1.0;
                break;
            }
        }
    }
}

inline EigResult sym_eig(const Matrix& M) {
    detail::require_symmetric(M);
    EigResult out;
    if (M.rows() == 0) return out;
    detail::syevr(M, 'V', 'A', 0, 0, 0, 0, out.values, &out.vectors);
    canonical_signs(out.vectors);
    return out;
}

inline Vector sym_eigenvalues(const Matrix& M) {
    detail::require_symmetric(M);
    Vector w;
    if (M.rows() > 0) detail::syevr(M, 'N', 'A', 0, 0, 0, 0, w, nullptr);
    return w;
}

// Smallest and largest eigenvalues.
inline std::pair<double, double> extreme_eigenvalues(const Matrix& M) {
    detail::require_symmetric(M);
    const int n = int(M.rows());
    if (n == 0) throw ContractError("empty matrix");
    // One tridiagonalization; the values-only sweep after it is O(n^2).
    Vector w;
    detail::syevr(M, 'N', 'A', 0, 0, 0, 0, w, nullptr);
    return {w(0), w(n - 1)};
}

inline double lambda_min(const Matrix& M) { return extreme_eigenvalues(M).first; }
inline double lambda_max(const Matrix& M) { return extreme_eigenvalues(M).second; }

// Leading eigenpair of a symmetric matrix.
inline std::pair<double, Vector> leading_eigenpair(const Matrix& M) {
    detail::require_symmetric(M);
    const int n = int(M.rows());
    Vector w;
    Matrix Z;
    detail::syevr(M, 'V', 'I', 0, 0, n, n, w, &Z);
    canonical_signs(Z);
    return {w(0), Z.col(0)};
}

struct LanczosResult {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    int steps = 0;
    bool converged = false;
};

// Lanczos with full reorthogonalization; both extreme Ritz values.
inline LanczosResult lanczos_extremes(const Matrix& M, double rel_tol = 1e-10, int max_steps = 300,
                                      std::uint64_t seed = 0x1a2c05ull) {
    const int n = int(M.rows());
    const int kmax = std::min(n, max_steps);
    Stream rng(seed);
    Vector q(n);
    for (int i = 0; i < n; ++i) q(i) = rng.normal();
    q.normalize();
    Matrix Q(n, kmax);
    std::vector<double> alpha, beta;
    LanczosResult res;
    Vector r;
    for (int k = 0; k < kmax; ++k) {
        Q.col(k) = q;
        r.noalias() = M * q;
        const double a = q.dot(r);
        alpha.push_back(a);
        r -= a * q;
        if (k > 0) r -= beta.back() * Q.col(k - 1);
        for (int pass = 0; pass < 2; ++pass)
            r -= Q.leftCols(k + 1) * (Q.leftCols(k + 1).transpose() * r);
        const double b = r.norm();

        const int m = k + 1;
        Matrix T = Matrix::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            T(i, i) = alpha[i];
            if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(T);
        const double tmin = es.eigenvalues()(0), tmax = es.eigenvalues()(m - 1);
        const double scale = std::max(std::abs(tmin), std::abs(tmax));
        const double err_min = std::abs(b * es.eigenvectors()(m - 1, 0));
        const double err_max = std::abs(b * es.eigenvectors()(m - 1, m - 1));
        res.lambda_min = tmin;
        res.lambda_max = tmax;
        res.steps = m;
        if ((err_min <= rel_tol * scale && err_max <= rel_tol * scale) || b <= 1e-14 * scale ||
            m == n) {
            res.converged = true;
            break;
        }
        beta.push_back(b);
        q = r / b;
    }
    return res;
}

// Operator norm: exact extreme eigenvalues for n <= 2000, Lanczos above.
inline double spectral_norm(const Matrix& M) {
    detail::require_symmetric(M);
    if (M.rows() == 0) return 0.0;
    if (M.rows() <= 2000) {
        const auto [lo, hi] = extreme_eigenvalues(M);
        return std::max(std::abs(lo), std::abs(hi));
    }
    const LanczosResult lr = lanczos_extremes(M);
    if (!lr.converged) throw Error("linalg", "Lanczos did not converge");
    return std::max(std::abs(lr.lambda_min), std::abs(lr.lambda_max));
}

// Projection onto the PSD cone. Remembers how many eigenvalues were positive
// last time: a partial spectrum of the smaller side when it is small, the
// full spectrum otherwise.
class PsdProjector {
public:
    // Returns the number of positive eigenvalues of V.
    int project(const Matrix& V, Matrix& out) {
        const int n = int(V.rows());
        Vector w;
        Matrix Q;
        const int small = std::min(positive_hint_, n - positive_hint_);
        if (small > n / 8) {
            detail::syevr(V, 'V', 'A', 0, 0, 0, 0, w, &Q);
            int k = 0;
            while (k < n && w(k) <= 0.0) ++k;
            positive_hint_ = n - k;
            if (positive_hint_ <= n / 2) {
                low_rank(Q.rightCols(n - k), w.tail(n - k), out);
            } else {
                low_rank(Q.leftCols(k), w.head(k), out);
                out = V - out;
            }
        } else if (positive_hint_ <= n / 2) {
            const int k = detail::syevr(V, 'V', 'V', 0.0, huge(V), 0, 0, w, &Q);
            low_rank(Q, w, out);
            positive_hint_ = k;
        } else {
            const int k = detail::syevr(V, 'V', 'V', -huge(V), 0.0, 0, 0, w, &Q);
            low_rank(Q, w, out);
            out = V - out;
            positive_hint_ = n - k;
        }
        out = 0.5 * (out + out.transpose()).eval();
        return positive_hint_;
    }

private:
    template <class Q, class W>
    static void low_rank(const Q& q, const W& w, Matrix& out) {
        out.noalias() = q * w.asDiagonal() * q.transpose();
    }
    static double huge(const Matrix& V) { return 2.0 * V.cwiseAbs().rowwise().sum().maxCoeff() + 1.0; }
    int positive_hint_ = 0;
};

inline Matrix psd_project(const Matrix& M) {
    detail::require_symmetric(M);
    if (M.rows() == 0) return M;
    const EigResult e = sym_eig(M);
    const Vector pos = e.values.cwiseMax(0.0);
    Matrix out = e.vectors * pos.asDiagonal() * e.vectors.transpose();
    return 0.5 * (out + out.transpose());
}

// Smallest eigenvalue of S restricted to the orthogonal complement of v.
inline double lambda2_orth(const Matrix& S, const Vector& v) {
    detail::require_symmetric(S);
    const Index n = S.rows();
    if (n < 2) throw ContractError("need n >= 2");
    const double nv = v.norm();
    if (!(nv > 0)) throw ContractError("direction must be nonzero");
    // Householder reflector H with H v proportional to e_0.
    Vector u = v / nv;
    const double s = u(0) >= 0 ? 1.0 : -1.0;
    u(0) += s;
    const double un = u.norm();
    Matrix H = Matrix::Identity(n, n);
    if (un > 0) {
        u /= un;
        H -= 2.0 * u * u.transpose();
    }
    const Matrix B = H.rightCols(n - 1);
    Matrix R = B.transpose() * S * B;
    R = 0.5 * (R + R.transpose()).eval();
    Vector w;
    detail::syevr(R, 'N', 'I', 0, 0, 1, 1, w, nullptr);
    return w(0);
}

}  // namespace csdp
