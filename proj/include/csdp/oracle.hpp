#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "model.hpp"

namespace csdp {

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return std::round(c);
}

// Visits every K-subset of {0..n-1} in revolving-door order: consecutive
// subsets differ by one element out and one in. visit(c, out, in) receives
// the ascending subset; out/in are -1 on the first visit.
template <class Visit>
void revolving_door(int n, int t, Visit&& visit) {
    if (t < 0 || t > n) throw ParameterError("need 0 <= K <= n");
    std::vector<int> c(t + 3);
    for (int j = 1; j <= t; ++j) c[j] = j - 1;
    c[t + 1] = n;
    c[t + 2] = std::numeric_limits<int>::max();
    auto emit = [&](int out, int in) {
        visit(std::vector<int>(c.begin() + 1, c.begin() + 1 + t), out, in);
    };
    emit(-1, -1);
    if (t == 0 || t == n) return;
    if (t == 1) {
        for (int x = 1; x < n; ++x) {
            c[1] = x;
            emit(x - 1, x);
        }
        return;
    }
    for (;;) {
        int j;
        bool to_r5;
        if (t % 2 == 1) {
            if (c[1] + 1 < c[2]) {
                ++c[1];
                emit(c[1] - 1, c[1]);
                continue;
            }
            j = 2;
            to_r5 = false;
        } else {
            if (c[1] > 0) {
                --c[1];
                emit(c[1] + 1, c[1]);
                continue;
            }
            j = 2;
            to_r5 = true;
        }
        bool done = false;
        for (;;) {
            if (!to_r5) {
                if (c[j] >= j) {
                    const int out = c[j], in = j - 2;
                    c[j] = c[j - 1];
                    c[j - 1] = j - 2;
                    emit(out, in);
                    break;
                }
                ++j;
            }
            to_r5 = false;
            if (c[j] + 1 < c[j + 1]) {
                const int out = c[j - 1], in = c[j] + 1;
                c[j - 1] = c[j];
                ++c[j];
                emit(out, in);
                break;
            }
            ++j;
            if (j > t) {
                done = true;
                break;
            }
        }
        if (done) return;
    }
}

// Sum of L_ij over pairs i < j in S, in index-ascending order.
inline double subset_value(const Matrix& L, const std::vector<int>& S) {
    double v = 0.0;
    for (std::size_t a = 0; a < S.size(); ++a)
        for (std::size_t b = a + 1; b < S.size(); ++b) v += L(S[a], S[b]);
    return v;
}

struct MleResult {
    double value = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<int>> maximizers;  // every exact tie, ascending subsets
    std::uint64_t visited = 0;

    bool contains(const std::vector<int>& S) const {
        for (const auto& m : maximizers)
            if (m == S) return true;
        return false;
    }
};

// Exhaustive maximum likelihood over K-subsets. Incremental O(K) updates
// screen candidates; ties are decided on values recomputed in fixed order.
inline MleResult mle_exhaustive(const Matrix& L, int K, double max_subsets = 1e7) {
    require_sym_zero_diag(L, "score matrix");
    const int n = int(L.rows());
    if (K < 1 || K > n) throw ParameterError("K must lie in [1, n]");
    if (binomial(n, K) > max_subsets) throw GuardError("C(n, K) exceeds the enumeration guard");
    const double scale = std::max(1.0, L.cwiseAbs().maxCoeff()) * double(K) * K;
    const double slack = 1e-9 * scale;
    MleResult res;
    double running = 0.0;
    std::vector<int> members;
    revolving_door(n, K, [&](const std::vector<int>& S, int out, int in) {
        ++res.visited;
        if (out < 0 || res.visited % 4096 == 0) {
            running = subset_value(L, S);
        } else {
            double delta = 0.0;
            for (int k : S)
                if (k != in) delta += L(in, k) - L(out, k);
            running += delta;
        }
        if (running >= res.value - slack) {
            const double exact = subset_value(L, S);
            if (exact > res.value) {
                res.value = exact;
                res.maximizers.assign(1, S);
            } else if (exact == res.value) {
                res.maximizers.push_back(S);
            }
        }
    });
    return res;
}

struct SwapReport {
    double gap = 0.0;             // min_in e - max_out e
    double max_swap_delta = 0.0;  // max over swaps of e(j, C\i) - e(i, C\i)
    int worst_in = -1;
    int worst_out = -1;
    bool holds = true;            // gap >= 0
};

inline SwapReport swap_check(const Matrix& L, const std::vector<int>& truth) {
    require_sym_zero_diag(L, "score matrix");
    const int n = int(L.rows());
    const std::vector<int> comp = complement(n, truth);
    SwapReport r;
    if (comp.empty()) {
        r.gap = std::numeric_limits<double>::infinity();
        r.max_swap_delta = -std::numeric_limits<double>::infinity();
        return r;
    }
    const Vector e = e_stat(L, truth);
    double min_in = std::numeric_limits<double>::infinity();
    double max_out = -std::numeric_limits<double>::infinity();
    for (int i : truth) min_in = std::min(min_in, e(i));
    for (int j : comp) max_out = std::max(max_out, e(j));
    r.gap = min_in - max_out;
    r.holds = r.gap >= 0.0;
    r.max_swap_delta = -std::numeric_limits<double>::infinity();
    for (int i : truth)
        for (int j : comp) {
            const double delta = (e(j) - L(j, i)) - e(i);
            if (delta > r.max_swap_delta) {
                r.max_swap_delta = delta;
                r.worst_in = i;
                r.worst_out = j;
            }
        }
    return r;
}

}  // namespace csdp
