#include <gtest/gtest.h>

#include <cmath>

#include "csdp/certify.hpp"
#include "csdp/model.hpp"
#include "csdp/oracle.hpp"
#include "csdp/sdp.hpp"

using namespace csdp;

namespace {

ModelSpec gaussian(int n, int K, double mu) {
    ModelSpec s;
    s.kind = ModelKind::Gaussian;
    s.n = n;
    s.K = K;
    s.mu = mu;
    return s;
}

ModelSpec bernoulli(int n, int K, double p, double q) {
    ModelSpec s;
    s.kind = ModelKind::Bernoulli;
    s.n = n;
    s.K = K;
    s.p = p;
    s.q = q;
    return s;
}

ModelSpec sbm(int n, int r, double p, double q) {
    ModelSpec s;
    s.kind = ModelKind::Sbm;
    s.n = n;
    s.r = r;
    s.K = n / r;
    s.p = p;
    s.q = q;
    return s;
}

double inner(const Matrix& A, const Matrix& B) { return (A.cwiseProduct(B)).sum(); }

// Random point of {Z PSD, Z >= 0, tr Z = 1, <J, Z> = a}: a trace-one
// nonnegative PSD matrix mixed with I/m or J/m to hit the sum exactly.
Matrix random_vm_point(int m, double a, Stream& rng) {
    const int rank = 1 + int(rng.below(std::uint64_t(m)));
    Matrix G(m, rank);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < rank; ++k) G(i, k) = rng.uniform() < 0.5 ? 0.0 : rng.uniform();
    Matrix W = G * G.transpose();
    W.diagonal().array() += 1e-3;
    W /= W.trace();
    const double w = W.sum();
    if (w >= a) {
        const double t = (a - 1) / (w - 1);
        return t * W + (1 - t) * Matrix::Identity(m, m) / m;
    }
    const double t = (m - a) / (m - w);
    return t * W + (1 - t) * Matrix::Ones(m, m) / m;
}

}  // namespace

TEST(CommunitySdp, AllOnesWhenCommunityIsEverything) {
    const int n = 6;
    const Matrix L = Matrix::Ones(n, n) - Matrix::Identity(n, n);
    const SolveResult r = solve_community_sdp(L, n);
    EXPECT_EQ(r.status, SolveStatus::Optimal);
    EXPECT_LE(max_abs_diff(r.Z, Matrix::Ones(n, n)), 1e-6);
    EXPECT_NEAR(r.objective, n * (n - 1), 1e-5);
}

TEST(CommunitySdp, NoiselessCliqueIsRecovered) {
    const Instance inst = gen_instance(bernoulli(6, 3, 1.0, 0.0), 3);
    const SolveResult r = solve_community_sdp(inst.A, 3);
    EXPECT_EQ(r.status, SolveStatus::Optimal);
    EXPECT_NEAR(r.objective, 6.0, 1e-6);
    EXPECT_LE(max_abs_diff(r.Z, cluster_matrix(6, inst.truth)), 1e-4);
}

// The constructed certificate is sufficient only; where it is accepted the
// solver must land on Z*.
TEST(CommunitySdp, StrongGaussianMatchesEnumerationAndCertificate) {
    const ModelSpec s = gaussian(10, 3, 5.0);
    int certified = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Instance inst = gen_instance(s, seed);
        const Matrix& L = inst.A;
        const MleResult mle = mle_exhaustive(L, 3);
        const SolveResult r = solve_community_sdp(L, 3);
        EXPECT_EQ(r.status, SolveStatus::Optimal);
        EXPECT_NEAR(r.objective, 2 * mle.value, 1e-5 * (1 + std::abs(r.objective)));
        ASSERT_EQ(mle.maximizers.size(), 1u);
        EXPECT_EQ(mle.maximizers.front(), inst.truth);
        const Matrix Zs = cluster_matrix(10, inst.truth);
        const DualCertificate c = build_dual_certificate(L, inst.truth, 0.0);
        const KktReport k = verify_kkt(L, Zs, c);
        if (k.accepted) {
            ++certified;
            EXPECT_LE(max_abs_diff(r.Z, Zs), 1e-4);
        }
    }
    EXPECT_GT(certified, 0);
}

TEST(CommunitySdp, OptimalOutputIsFeasibleToTolerance) {
    const SolverOptions opt;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Instance inst = gen_instance(gaussian(40, 8, 1.0 + seed), seed);
        const SolveResult r = solve_community_sdp(inst.A, 8, opt);
        ASSERT_EQ(r.status, SolveStatus::Optimal);
        const FeasReport f = check_feasibility(r.Z, Program::Community, 8);
        EXPECT_LE(f.max_violation(), opt.tol_primal);
        EXPECT_LE(std::abs(r.gap), opt.tol_gap * (1 + std::abs(r.objective)));
    }
}

TEST(CommunitySdp, WeakDualityAgainstSampledFeasiblePoints) {
    const int n = 30, K = 6;
    const Instance inst = gen_instance(gaussian(n, K, 1.2), 5);
    const SolveResult r = solve_community_sdp(inst.A, K);
    ASSERT_EQ(r.status, SolveStatus::Optimal);
    const Matrix Zs = cluster_matrix(n, inst.truth), S0 = community_slater(n, K);
    Stream rng(8);
    const double tol = 1e-6 * (1 + std::abs(r.objective));
    for (int t = 0; t < 1000; ++t) {
        const double w = rng.uniform();
        const Matrix Z = w * Zs + (1 - w) * S0;
        EXPECT_GE(r.objective, inner(inst.A, Z) - tol);
    }
}

TEST(CommunitySdp, DeterministicAndRejectsBadK) {
    const Instance inst = gen_instance(gaussian(20, 4, 2.0), 2);
    const SolveResult a = solve_community_sdp(inst.A, 4), b = solve_community_sdp(inst.A, 4);
    EXPECT_EQ(a.Z, b.Z);
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_THROW(solve_community_sdp(inst.A, 0), ParameterError);
    EXPECT_THROW(solve_community_sdp(inst.A, 21), ParameterError);
}

TEST(CommunitySdp, MaxIterReportsBestIterate) {
    const Instance inst = gen_instance(gaussian(30, 6, 0.5), 2);
    SolverOptions opt;
    opt.max_iter = 5;
    const SolveResult r = solve_community_sdp(inst.A, 6, opt);
    EXPECT_EQ(r.status, SolveStatus::MaxIter);
    EXPECT_EQ(r.iterations, 5);
    EXPECT_GT(r.primal_residual, 0.0);
}

TEST(Vm, EndpointValues) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const Matrix M = gen_instance(gaussian(12, 2, 1.0), seed).A;
        const VmResult one = solve_vm(M, 1.0);
        EXPECT_NEAR(one.value, 0.0, 1e-7);
        const VmResult full = solve_vm(M, 12.0);
        EXPECT_NEAR(full.value, M.sum() / 12.0, 1e-7);
        EXPECT_LE(check_feasibility(full.Z, Program::Vm, 12.0).max_violation(), 1e-9);
    }
}

TEST(Vm, OutsideRangeIsInfeasible) {
    const Matrix M = gen_instance(gaussian(8, 2, 1.0), 1).A;
    EXPECT_EQ(solve_vm(M, 0.5).solve.status, SolveStatus::Infeasible);
    EXPECT_EQ(solve_vm(M, 8.5).solve.status, SolveStatus::Infeasible);
    EXPECT_TRUE(std::isinf(solve_vm(M, 9.0).value));
    EXPECT_LT(solve_vm(M, 9.0).value, 0.0);
}

TEST(Vm, DominatesRandomFeasiblePointsAndBoundedByTopEigenvalue) {
    const Matrix M = gen_instance(bernoulli(5, 2, 0.8, 0.4), 11).A;
    const double a = 2.5;
    const VmResult v = solve_vm(M, a);
    EXPECT_LE(check_feasibility(v.Z, Program::Vm, a).max_violation(), 1e-9);
    EXPECT_LE(v.value, lambda_max(M) + 1e-7);
    Stream rng(12);
    double best = -1e300;
    for (int t = 0; t < 10000; ++t) {
        const Matrix Z = random_vm_point(5, a, rng);
        ASSERT_LE(check_feasibility(Z, Program::Vm, a).max_violation(), 1e-9);
        best = std::max(best, inner(M, Z));
    }
    EXPECT_GE(v.value, best - 1e-7);
}

TEST(Vm, MonotoneInNonnegativePerturbation) {
    Stream rng(4);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Matrix M = gen_instance(gaussian(15, 2, 1.0), seed).A;
        Matrix P = Matrix::Zero(15, 15);
        for (int i = 0; i < 15; ++i)
            for (int j = 0; j < i; ++j) P(i, j) = P(j, i) = rng.uniform() < 0.3 ? rng.uniform() : 0.0;
        for (double a : {2.0, 4.0}) EXPECT_GE(solve_vm(M + P, a).value, solve_vm(M, a).value - 1e-6);
    }
}

TEST(Vm, ConcaveInA) {
    const int m = 20;
    const Matrix M = gen_instance(gaussian(m, 2, 1.0), 6).A;
    std::vector<double> v;
    for (int k = 0; k <= 8; ++k) v.push_back(solve_vm(M, 1.0 + (m - 1.0) * k / 8.0).value);
    for (std::size_t k = 1; k + 1 < v.size(); ++k) EXPECT_GE(v[k], 0.5 * (v[k - 1] + v[k + 1]) - 1e-5);
}

TEST(SbmSdp, TwoDisjointEdges) {
    const Instance inst = gen_sbm(sbm(4, 2, 1.0, 0.0), 1);
    const SolveResult r = solve_sbm_sdp(inst.A, 2);
    EXPECT_EQ(r.status, SolveStatus::Optimal);
    EXPECT_NEAR(r.objective, 4.0, 1e-6);
    EXPECT_LE(max_abs_diff(r.Z, sbm_cluster_matrix(inst.labels, 2)), 1e-4);
}

TEST(SbmSdp, ZeroMatrixGivesZeroObjective) {
    const SolveResult r = solve_sbm_sdp(Matrix::Zero(6, 6), 3);
    EXPECT_LE(std::abs(r.objective), 1e-7);
    EXPECT_LE(check_feasibility(r.Z, Program::Sbm, 3).max_violation(), 1e-6);
}

TEST(SbmSdp, RecoversWellSeparatedBlocks) {
    int hits = 0;
    for (std::uint64_t seed = 2; seed < 22; ++seed) {
        const Instance inst = gen_sbm(sbm(60, 3, 0.9, 0.05), seed);
        const SolveResult r = solve_sbm_sdp(inst.A, 3);
        hits += same_partition(round_sbm_solution(r.Z, 3), inst.labels);
    }
    EXPECT_GE(hits, 18);
}

TEST(Feasibility, ClusterMatrixAndKnownDeficit) {
    const Matrix Zs = cluster_matrix(8, {1, 3, 4});
    EXPECT_LE(check_feasibility(Zs, Program::Community, 3).max_violation(), 1e-12);
    Matrix Z = Matrix::Identity(8, 8) * (3.0 / 8.0);
    Z.array() += 0.01;
    const FeasReport f = check_feasibility(Z, Program::Community, 3);
    EXPECT_NEAR(f.trace, 0.08, 1e-12);
    EXPECT_NEAR(f.sum, 9.0 - (3.0 + 0.64), 1e-12);
    EXPECT_EQ(f.nonneg, 0.0);
    const Instance s = gen_sbm(sbm(9, 3, 0.5, 0.1), 1);
    EXPECT_LE(check_feasibility(sbm_cluster_matrix(s.labels, 3), Program::Sbm, 3).max_violation(), 1e-12);
}

TEST(Rounding, ExactAndPerturbedClusterMatrix) {
    const std::vector<int> truth{0, 4, 5, 9};
    const Matrix Zs = cluster_matrix(12, truth);
    EXPECT_EQ(round_solution(Zs, 4), truth);
    Stream rng(1);
    Matrix N(12, 12);
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j <= i; ++j) N(i, j) = N(j, i) = rng.normal();
    EXPECT_EQ(round_solution(Zs + 1e-6 * N, 4), truth);
}

TEST(Rounding, FractionalSolutionStillGivesAKSet) {
    const Instance inst = gen_instance(gaussian(30, 5, 0.3), 4);
    const SolveResult r = solve_community_sdp(inst.A, 5);
    const std::vector<int> S = round_solution(r.Z, 5);
    EXPECT_EQ(S.size(), 5u);
    EXPECT_TRUE(std::is_sorted(S.begin(), S.end()));
    const RecoveryVerdict v = classify_recovery(r, inst.A, cluster_matrix(30, inst.truth), 1e-6);
    EXPECT_EQ(v.exact, v.distance <= 1e-4);
}
