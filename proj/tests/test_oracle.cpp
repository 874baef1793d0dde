#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "csdp/certify.hpp"
#include "csdp/model.hpp"
#include "csdp/oracle.hpp"
#include "csdp/rng.hpp"

using namespace csdp;

namespace {

Matrix random_score(int n, std::uint64_t seed) {
    Stream rng(seed);
    Matrix L = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) L(i, j) = L(j, i) = rng.normal();
    return L;
}

int symmetric_difference(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return int(out.size());
}

}  // namespace

TEST(RevolvingDoor, VisitsEverySubsetOnceBySingleSwaps) {
    for (int n = 1; n <= 9; ++n) {
        for (int t = 0; t <= n; ++t) {
            std::set<std::vector<int>> seen;
            std::vector<int> prev;
            std::uint64_t count = 0;
            revolving_door(n, t, [&](const std::vector<int>& S, int out, int in) {
                ++count;
                ASSERT_EQ(int(S.size()), t);
                ASSERT_TRUE(std::is_sorted(S.begin(), S.end()));
                for (int x : S) ASSERT_TRUE(x >= 0 && x < n);
                ASSERT_TRUE(seen.insert(S).second);
                if (count == 1) {
                    EXPECT_EQ(out, -1);
                    EXPECT_EQ(in, -1);
                } else {
                    ASSERT_EQ(symmetric_difference(prev, S), 2);
                    EXPECT_TRUE(std::binary_search(prev.begin(), prev.end(), out));
                    EXPECT_FALSE(std::binary_search(S.begin(), S.end(), out));
                    EXPECT_TRUE(std::binary_search(S.begin(), S.end(), in));
                    EXPECT_FALSE(std::binary_search(prev.begin(), prev.end(), in));
                }
                prev = S;
            });
            EXPECT_EQ(double(count), binomial(n, t)) << "n=" << n << " t=" << t;
        }
    }
    EXPECT_THROW(revolving_door(3, 4, [](const std::vector<int>&, int, int) {}), ParameterError);
}

TEST(Binomial, SmallValues) {
    EXPECT_EQ(binomial(10, 3), 120.0);
    EXPECT_EQ(binomial(12, 4), 495.0);
    EXPECT_EQ(binomial(5, 0), 1.0);
    EXPECT_EQ(binomial(5, 5), 1.0);
    EXPECT_EQ(binomial(40, 20), 137846528820.0);
}

TEST(MleExhaustive, AllTiesOnCompleteGraph) {
    const Matrix L = Matrix::Ones(6, 6) - Matrix::Identity(6, 6);
    const MleResult r = mle_exhaustive(L, 3);
    EXPECT_EQ(r.value, 3.0);
    EXPECT_EQ(r.maximizers.size(), 20u);
    EXPECT_EQ(r.visited, 20u);
}

TEST(MleExhaustive, NoiselessCliqueIsTheUniqueMaximizer) {
    ModelSpec s;
    s.kind = ModelKind::Bernoulli;
    s.n = 10;
    s.K = 3;
    s.p = 1.0;
    s.q = 0.0;
    const Instance inst = gen_instance(s, 21);
    const MleResult r = mle_exhaustive(inst.A, 3);
    EXPECT_EQ(r.value, 3.0);
    ASSERT_EQ(r.maximizers.size(), 1u);
    EXPECT_EQ(r.maximizers[0], inst.truth);
    EXPECT_TRUE(r.contains(inst.truth));
    // Objective of the lifted program is twice the pair sum.
    EXPECT_EQ(2 * r.value, 6.0);
}

TEST(MleExhaustive, IncrementalScreeningMatchesBruteForce) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const int n = 6 + int(s % 7);
        const int K = 1 + int(s % std::uint64_t(n));
        const Matrix L = random_score(n, 500 + s);
        double best = -std::numeric_limits<double>::infinity();
        revolving_door(n, K, [&](const std::vector<int>& S, int, int) { best = std::max(best, subset_value(L, S)); });
        const MleResult r = mle_exhaustive(L, K);
        EXPECT_NEAR(r.value, best, 1e-12 * (1 + std::abs(best)));
        ASSERT_FALSE(r.maximizers.empty());
        for (const auto& m : r.maximizers) EXPECT_EQ(subset_value(L, m), r.value);
    }
}

TEST(MleExhaustive, GuardAndArguments) {
    const Matrix L = random_score(30, 1);
    EXPECT_THROW(mle_exhaustive(L, 15, 1e6), GuardError);
    EXPECT_THROW(mle_exhaustive(L, 0), ParameterError);
    EXPECT_THROW(mle_exhaustive(L, 31), ParameterError);
    EXPECT_EQ(mle_exhaustive(L, 1).value, 0.0);
}

TEST(SwapCheck, NoiselessGap) {
    const int n = 12, K = 4;
    const std::vector<int> truth{2, 5, 8, 11};
    const double alpha = 1.3, beta = -0.4;
    const SwapReport r = swap_check(mean_matrix(n, truth, {alpha, beta}), truth);
    EXPECT_NEAR(r.gap, (K - 1) * alpha - K * beta, 1e-13);
    EXPECT_TRUE(r.holds);
    // Trading i for j loses (K-1)(alpha - beta).
    EXPECT_NEAR(r.max_swap_delta, -(K - 1) * (alpha - beta), 1e-13);
}

TEST(SwapCheck, MaximizingTruthHasNoImprovingSwap) {
    int checked = 0;
    for (std::uint64_t s = 0; s < 60; ++s) {
        const int n = 8 + int(s % 5);
        const Matrix L = random_score(n, 900 + s);
        const MleResult r = mle_exhaustive(L, 3);
        const SwapReport sw = swap_check(L, r.maximizers.front());
        EXPECT_LE(sw.max_swap_delta, 1e-12);
        ++checked;
        // Delta of the reported swap equals the change of the pair sum.
        std::vector<int> swapped;
        for (int i : r.maximizers.front())
            if (i != sw.worst_in) swapped.push_back(i);
        swapped.push_back(sw.worst_out);
        std::sort(swapped.begin(), swapped.end());
        EXPECT_NEAR(subset_value(L, swapped) - r.value, sw.max_swap_delta, 1e-12);
    }
    EXPECT_EQ(checked, 60);
}

TEST(SwapCheck, FullCommunityHasInfiniteGap) {
    const Matrix L = random_score(5, 3);
    const SwapReport r = swap_check(L, {0, 1, 2, 3, 4});
    EXPECT_TRUE(std::isinf(r.gap) && r.gap > 0);
    EXPECT_TRUE(r.holds);
}
