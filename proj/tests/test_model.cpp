#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "csdp/io.hpp"
#include "csdp/model.hpp"
#include "csdp/rng.hpp"

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

}  // namespace

// Reference outputs of Philox4x32-10 from the Random123 known-answer file.
TEST(Philox, KnownAnswers) {
    using A4 = std::array<std::uint32_t, 4>;
    EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Stream, DeterministicAndStreamSeparated) {
    Stream a(42), b(42), c(42, 1), d(43);
    bool differs_c = false, differs_d = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        EXPECT_EQ(x, b.next_u64());
        differs_c |= x != c.next_u64();
        differs_d |= x != d.next_u64();
    }
    EXPECT_TRUE(differs_c);
    EXPECT_TRUE(differs_d);
}

TEST(Stream, UniformAndNormalMoments) {
    Stream s(7);
    const int N = 200000;
    double su = 0, sn = 0, sn2 = 0;
    for (int i = 0; i < N; ++i) {
        const double u = s.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        su += u;
        const double z = s.normal();
        sn += z;
        sn2 += z * z;
    }
    EXPECT_NEAR(su / N, 0.5, 5 * std::sqrt(1.0 / 12 / N));
    EXPECT_NEAR(sn / N, 0.0, 5 / std::sqrt(double(N)));
    EXPECT_NEAR(sn2 / N, 1.0, 5 * std::sqrt(2.0 / N));
}

TEST(Stream, BelowIsInRangeAndCoversIt) {
    Stream s(3);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) {
        const auto x = s.below(7);
        ASSERT_LT(x, 7u);
        ++hits[x];
    }
    for (int h : hits) EXPECT_GT(h, 800);
}

TEST(TrialSeed, DistinctAcrossCellsAndTrials) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t c = 0; c < 50; ++c)
        for (std::uint64_t t = 0; t < 50; ++t) seen.insert(trial_seed(1, c, t));
    EXPECT_EQ(seen.size(), 2500u);
    EXPECT_EQ(trial_seed(9, 3, 4), trial_seed(9, 3, 4));
}

TEST(GenInstance, CompleteGraphWhenCommunityIsEverything) {
    const Instance inst = gen_instance(bernoulli(4, 4, 1.0, 0.0), 11);
    const Matrix expect = Matrix::Ones(4, 4) - Matrix::Identity(4, 4);
    EXPECT_EQ(inst.A, expect);
}

TEST(GenInstance, SingleEdgeOnTruth) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Instance inst = gen_instance(bernoulli(4, 2, 1.0, 0.0), seed);
        ASSERT_EQ(inst.truth.size(), 2u);
        EXPECT_EQ(inst.A.sum(), 2.0);
        EXPECT_EQ(inst.A(inst.truth[0], inst.truth[1]), 1.0);
    }
}

TEST(GenInstance, SymmetricZeroDiagonalAndReproducible) {
    for (const ModelSpec& s : {gaussian(30, 5, 1.5), bernoulli(30, 5, 0.7, 0.2), sbm(30, 3, 0.6, 0.1)}) {
        const Instance a = gen_instance(s, 99), b = gen_instance(s, 99), c = gen_instance(s, 100);
        EXPECT_EQ(a.A, a.A.transpose());
        EXPECT_EQ(a.A.diagonal(), Vector::Zero(30));
        EXPECT_EQ(a.A, b.A);
        EXPECT_EQ(a.truth, b.truth);
        EXPECT_NE(a.A, c.A);
        EXPECT_EQ(int(a.truth.size()), s.K);
        EXPECT_TRUE(std::is_sorted(a.truth.begin(), a.truth.end()));
    }
}

TEST(GenInstance, GaussianBlockMeans) {
    const ModelSpec s = gaussian(100, 10, 2.0);
    double in_sum = 0, out_sum = 0;
    long in_cnt = 0, out_cnt = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Instance inst = gen_instance(s, seed);
        const auto mem = membership(100, inst.truth);
        double si = 0, so = 0;
        for (int i = 0; i < 100; ++i)
            for (int j = i + 1; j < 100; ++j) (mem[i] && mem[j] ? si : so) += inst.A(i, j);
        if (seed == 7) {
            EXPECT_NEAR(si / 45, 2.0, 4 / std::sqrt(45.0));
            EXPECT_NEAR(so / 4905, 0.0, 4 / std::sqrt(4905.0));
        }
        in_sum += si;
        out_sum += so;
        in_cnt += 45;
        out_cnt += 4905;
    }
    EXPECT_NEAR(in_sum / in_cnt, 2.0, 4 / std::sqrt(double(in_cnt)));
    EXPECT_NEAR(out_sum / out_cnt, 0.0, 4 / std::sqrt(double(out_cnt)));
}

TEST(GenInstance, CommunityIsUniformOverSubsets) {
    std::map<std::vector<int>, int> counts;
    const int draws = 6000;
    for (int s = 0; s < draws; ++s) counts[gen_instance(bernoulli(6, 2, 0.9, 0.1), std::uint64_t(s)).truth]++;
    ASSERT_EQ(counts.size(), 15u);
    const double expect = draws / 15.0;
    double chi2 = 0;
    for (const auto& [k, c] : counts) chi2 += (c - expect) * (c - expect) / expect;
    EXPECT_LT(chi2, 36.12327368039813);  // 0.999 quantile, 14 degrees of freedom
}

TEST(GenInstance, RejectsInvalidSpecs) {
    EXPECT_THROW(gen_instance(gaussian(5, 6, 1.0), 1), ParameterError);
    EXPECT_THROW(gen_instance(gaussian(5, 2, 0.0), 1), ParameterError);
    EXPECT_THROW(gen_instance(gaussian(5, 2, -1.0), 1), ParameterError);
    EXPECT_THROW(gen_instance(bernoulli(5, 2, 0.3, 0.3), 1), ParameterError);
    EXPECT_THROW(gen_instance(bernoulli(5, 2, 0.2, 0.3), 1), ParameterError);
    ModelSpec s = sbm(10, 3, 0.5, 0.1);
    s.K = 3;
    EXPECT_THROW(gen_sbm(s, 1), ParameterError);
}

TEST(GenSbm, TwoDisjointEdges) {
    const Instance inst = gen_sbm(sbm(4, 2, 1.0, 0.0), 5);
    EXPECT_EQ(inst.A.sum(), 4.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            EXPECT_EQ(inst.A(i, j), (i != j && inst.labels[i] == inst.labels[j]) ? 1.0 : 0.0);
}

TEST(GenSbm, FullGraphWhenBothProbabilitiesAreOne) {
    const Instance inst = gen_sbm(sbm(6, 3, 1.0, 1.0), 5);
    EXPECT_EQ(inst.A, Matrix::Ones(6, 6) - Matrix::Identity(6, 6));
    std::vector<int> sizes(3, 0);
    for (int l : inst.labels) sizes[l]++;
    EXPECT_EQ(sizes, (std::vector<int>{2, 2, 2}));
}

TEST(GenSbm, BlockDensities) {
    double win = 0, cross = 0;
    long nw = 0, nc = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Instance inst = gen_sbm(sbm(200, 4, 0.5, 0.1), seed + 3);
        for (int i = 0; i < 200; ++i)
            for (int j = i + 1; j < 200; ++j) {
                if (inst.labels[i] == inst.labels[j]) {
                    win += inst.A(i, j);
                    ++nw;
                } else {
                    cross += inst.A(i, j);
                    ++nc;
                }
            }
    }
    EXPECT_NEAR(win / nw, 0.5, 0.03);
    EXPECT_NEAR(cross / nc, 0.1, 0.01);
}

TEST(ScoreMatrix, GaussianLlrZeroCrossing) {
    Matrix A = Matrix::Zero(2, 2);
    A(0, 1) = A(1, 0) = 1.0;
    const Matrix L = score_matrix(A, gaussian(2, 1, 2.0), ScoreKind::Llr);
    EXPECT_EQ(L(0, 1), 0.0);
    EXPECT_EQ(L(0, 0), 0.0);
}

TEST(ScoreMatrix, BernoulliLlrValues) {
    Matrix A = Matrix::Zero(3, 3);
    A(0, 1) = A(1, 0) = 1.0;
    const Matrix L = score_matrix(A, bernoulli(3, 2, 0.6, 0.3), ScoreKind::Llr);
    // slope log 3.5 plus shift log(0.4 / 0.7): log(p / q) = log 2
    EXPECT_NEAR(L(0, 1), 0.69314718055994530942, 1e-14);
    EXPECT_NEAR(L(0, 2), -0.55961578793542268627, 1e-14);  // log(0.4 / 0.7)
    EXPECT_EQ(L.diagonal(), Vector::Zero(3));
    EXPECT_EQ(score_matrix(A, bernoulli(3, 2, 0.6, 0.3), ScoreKind::Adjacency), A);
}

TEST(ScoreMatrix, DegenerateLikelihoodIsRefused) {
    const Matrix A = Matrix::Zero(3, 3);
    EXPECT_THROW(score_matrix(A, bernoulli(3, 2, 1.0, 0.3), ScoreKind::Llr), DegenerateLikelihood);
    EXPECT_THROW(score_matrix(A, bernoulli(3, 2, 0.6, 0.0), ScoreKind::Llr), DegenerateLikelihood);
}

TEST(ScoreMatrix, LlrMeanOrdering) {
    const ModelSpec s = bernoulli(2, 1, 0.35, 0.2);
    Stream rng(5);
    const int N = 100000;
    Matrix A = Matrix::Zero(2, 2);
    double in = 0, out = 0;
    for (int i = 0; i < N; ++i) {
        A(0, 1) = A(1, 0) = rng.bernoulli(s.p);
        in += score_matrix(A, s, ScoreKind::Llr)(0, 1);
        A(0, 1) = A(1, 0) = rng.bernoulli(s.q);
        out += score_matrix(A, s, ScoreKind::Llr)(0, 1);
    }
    EXPECT_GE(in / N, out / N);
}

TEST(EStat, Examples) {
    const Matrix L = Matrix::Ones(6, 6) - Matrix::Identity(6, 6);
    const std::vector<int> S{0, 1, 2};
    EXPECT_EQ(e_stat(L, 1, S), 2.0);
    EXPECT_EQ(e_stat(L, 4, S), 3.0);
    Stream rng(1);
    Matrix R(5, 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j <= i; ++j) R(i, j) = R(j, i) = i == j ? 0.0 : rng.normal();
    EXPECT_DOUBLE_EQ(e_stat(R, 0, {1, 3, 4}), R(0, 1) + R(0, 3) + R(0, 4));
    EXPECT_DOUBLE_EQ(e_stat(R, {1, 3, 4})(0), R(0, 1) + R(0, 3) + R(0, 4));
}

TEST(ClusterMatrix, Examples) {
    EXPECT_EQ(cluster_matrix(4, {0, 1, 2, 3}), Matrix::Ones(4, 4));
    const Matrix one = cluster_matrix(3, {0});
    EXPECT_EQ(one.sum(), 1.0);
    EXPECT_EQ(one(0, 0), 1.0);
    const Matrix Z = cluster_matrix(5, {1, 4});
    EXPECT_EQ(Z.sum(), 4.0);
    EXPECT_EQ(Z(1, 4), 1.0);
    EXPECT_EQ(Z(4, 4), 1.0);
    EXPECT_EQ(Z.trace(), 2.0);
}

TEST(MatrixMarket, CoordinateRoundTripIsExact) {
    const Instance inst = gen_instance(gaussian(12, 3, 1.3), 4);
    std::stringstream ss;
    write_matrix_market(ss, inst.A);
    EXPECT_NE(ss.str().find("coordinate real symmetric"), std::string::npos);
    EXPECT_EQ(read_matrix_market(ss), inst.A);
}

TEST(MatrixMarket, ArrayRoundTripIsExact) {
    const Matrix Z = 0.1 * cluster_matrix(5, {0, 2}) + Matrix::Identity(5, 5) / 3.0;
    std::stringstream ss;
    write_matrix_market(ss, Z);
    EXPECT_NE(ss.str().find("array real symmetric"), std::string::npos);
    EXPECT_EQ(read_matrix_market(ss), Z);
}

TEST(MatrixMarket, ReadsGeneralAndPattern) {
    std::istringstream general("%%MatrixMarket matrix coordinate real general\n% c\n2 2 2\n1 2 0.5\n2 1 0.5\n");
    Matrix G = read_matrix_market(general);
    EXPECT_EQ(G(0, 1), 0.5);
    EXPECT_EQ(G(1, 0), 0.5);
    std::istringstream pattern("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 1\n3 1\n");
    Matrix P = read_matrix_market(pattern);
    EXPECT_EQ(P(2, 0), 1.0);
    EXPECT_EQ(P(0, 2), 1.0);
    std::istringstream bad("%%NotMatrixMarket\n");
    EXPECT_THROW(read_matrix_market(bad), IoError);
    std::istringstream truncated("%%MatrixMarket matrix coordinate real symmetric\n3 3 2\n2 1 1\n");
    EXPECT_THROW(read_matrix_market(truncated), IoError);
}

TEST(InstanceRecord, JsonRoundTrip) {
    const Instance inst = gen_sbm(sbm(12, 3, 0.8, 0.1), 17);
    const Json j = instance_record(inst);
    const InstanceRecord r = instance_record_from_json(Json::parse(j.dump()));
    EXPECT_EQ(r.seed, 17u);
    EXPECT_EQ(r.truth, inst.truth);
    EXPECT_EQ(r.labels, inst.labels);
    EXPECT_EQ(r.spec.r, 3);
    EXPECT_EQ(gen_instance(r.spec, r.seed).A, inst.A);
    Json bad = j;
    bad["schema"] = 99;
    EXPECT_THROW(instance_record_from_json(bad), IoError);
}
