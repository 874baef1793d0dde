#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "certify.hpp"
#include "errors.hpp"
#include "info.hpp"
#include "io.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "rng.hpp"
#include "sdp.hpp"

namespace csdp {

struct Axis {
    std::string param;  // n, K, mu, p, q, r, rho, mu0
    std::vector<double> values;
};

struct SweepConfig {
    ModelSpec base;
    std::vector<Axis> axes;
    int trials = 10;
    std::uint64_t seed = 1;
    std::vector<std::string> algorithms{"sdp"};  // sdp, mle, certify, nec
    ScoreKind score = ScoreKind::Adjacency;
    SolverOptions solver;
    std::vector<double> nec_grid;  // empty: nec_default_grid
    bool timing = false;           // wall-clock columns break byte-identical reruns
    int threads = 0;               // 0: COMMUNITY_SDP_THREADS or hardware concurrency
    double mle_guard = 1e7;
};

inline SweepConfig sweep_config_from_json(const Json& j) {
    try {
        SweepConfig c;
        c.base = model_spec_from_json(j.at("model"));
        for (const auto& a : j.value("axes", Json::array()))
            c.axes.push_back({a.at("param").get<std::string>(), a.at("values").get<std::vector<double>>()});
        c.trials = j.value("trials", 10);
        c.seed = j.value("seed0", j.value("seed", std::uint64_t(1)));
        if (j.contains("algorithms")) c.algorithms = j.at("algorithms").get<std::vector<std::string>>();
        for (auto& alg : c.algorithms)
            if (alg == "certify-only") alg = "certify";
        const std::string score = j.value("score", std::string("adjacency"));
        if (score == "adjacency") c.score = ScoreKind::Adjacency;
        else if (score == "llr") c.score = ScoreKind::Llr;
        else throw ParameterError("score must be adjacency or llr");
        if (j.contains("solver")) {
            const Json& s = j.at("solver");
            c.solver.tol_primal = s.value("tol_primal", c.solver.tol_primal);
            c.solver.tol_dual = s.value("tol_dual", c.solver.tol_dual);
            c.solver.tol_gap = s.value("tol_gap", c.solver.tol_gap);
            c.solver.max_iter = s.value("max_iters", s.value("max_iter", c.solver.max_iter));
            c.solver.relaxation = s.value("over_relaxation", c.solver.relaxation);
            c.solver.penalty = s.value("penalty", c.solver.penalty);
        }
        if (j.contains("nec_grid")) c.nec_grid = j.at("nec_grid").get<std::vector<double>>();
        c.timing = j.value("timing", false);
        c.threads = j.value("threads", 0);
        c.mle_guard = j.value("mle_guard", 1e7);
        if (c.trials < 1) throw ParameterError("trials must be positive");
        static const std::vector<std::string> known{"n", "K", "mu", "p", "q", "r", "rho", "mu0"};
        for (const auto& ax : c.axes)
            if (std::find(known.begin(), known.end(), ax.param) == known.end())
                throw ParameterError("unknown axis parameter '" + ax.param + "'");
        for (const auto& alg : c.algorithms)
            if (alg != "sdp" && alg != "mle" && alg != "certify" && alg != "nec")
                throw ParameterError("unknown algorithm '" + alg + "'");
        return c;
    } catch (const Json::exception& e) {
        throw IoError(std::string("bad sweep config: ") + e.what());
    }
}

// Cartesian product of the axes, last axis fastest.
inline std::vector<ModelSpec> expand_grid(const SweepConfig& c) {
    std::vector<std::vector<std::pair<std::string, double>>> cells{{}};
    for (const auto& ax : c.axes) {
        std::vector<std::vector<std::pair<std::string, double>>> next;
        for (const auto& cell : cells)
            for (double v : ax.values) {
                auto x = cell;
                x.emplace_back(ax.param, v);
                next.push_back(std::move(x));
            }
        cells = std::move(next);
    }
    std::vector<ModelSpec> specs;
    for (const auto& cell : cells) {
        ModelSpec s = c.base;
        double rho = -1, mu0 = -1;
        for (const auto& [k, v] : cell) {
            if (k == "n") s.n = int(std::lround(v));
            else if (k == "K") s.K = int(std::lround(v));
            else if (k == "mu") s.mu = v;
            else if (k == "p") s.p = v;
            else if (k == "q") s.q = v;
            else if (k == "r") s.r = int(std::lround(v));
            else if (k == "rho") rho = v;
            else if (k == "mu0") mu0 = v;
        }
        // K = rho n / log n and mu = mu0 log n / sqrt n.
        if (rho > 0) s.K = std::max(1, int(std::lround(rho * s.n / std::log(double(s.n)))));
        if (mu0 >= 0) s.mu = mu0 * std::log(double(s.n)) / std::sqrt(double(s.n));
        if (s.kind == ModelKind::Sbm && s.r > 0 && s.n % s.r == 0) s.K = s.n / s.r;
        s.validate();
        specs.push_back(s);
    }
    return specs;
}

// One CSV row: ordered (column, value) pairs; empty string for "not run".
struct TrialRow {
    std::vector<std::pair<std::string, std::string>> cols;
    void put(const std::string& k, const std::string& v) { cols.emplace_back(k, v); }
    void put(const std::string& k, double v) { put(k, format_double(v)); }
    void put_int(const std::string& k, long long v) { put(k, std::to_string(v)); }
    void put_bool(const std::string& k, bool v) { put(k, std::string(v ? "1" : "0")); }
};

inline bool has_algorithm(const SweepConfig& c, const std::string& a) {
    return std::find(c.algorithms.begin(), c.algorithms.end(), a) != c.algorithms.end();
}

inline std::vector<double> named_a_points(int n, int K) {
    const double m = n - K;
    const double a_max = std::min<double>(K, m);
    std::vector<double> g{1.0, std::min(a_max, std::max(1.0, std::sqrt(double(K)) * std::pow(m, 0.25))), a_max};
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

inline TrialRow run_trial(const SweepConfig& c, const ModelSpec& spec, int cell, int trial,
                          const ThresholdReport& rep) {
    using clock = std::chrono::steady_clock;
    const std::uint64_t seed = trial_seed(c.seed, std::uint64_t(cell), std::uint64_t(trial));
    const Instance inst = gen_instance(spec, seed);
    TrialRow row;
    row.put_int("cell", cell);
    row.put_int("trial", trial);
    row.put("seed", std::to_string(seed));
    row.put("kind", to_string(spec.kind));
    row.put_int("n", spec.n);
    row.put_int("K", spec.K);
    row.put("mu", spec.mu);
    row.put("p", spec.p);
    row.put("q", spec.q);
    row.put_int("r", spec.r);
    const bool sbm = spec.kind == ModelKind::Sbm;
    const Matrix L = sbm ? inst.A : score_matrix(inst.A, spec, c.score);
    auto seconds = [](clock::time_point t0) { return std::chrono::duration<double>(clock::now() - t0).count(); };

    if (has_algorithm(c, "sdp")) {
        const auto t0 = clock::now();
        const SolveResult res = sbm ? solve_sbm_sdp(L, spec.r, c.solver) : solve_community_sdp(L, spec.K, c.solver);
        const double t = seconds(t0);
        const Matrix Zstar = sbm ? sbm_cluster_matrix(inst.labels, spec.r) : cluster_matrix(spec.n, inst.truth);
        const RecoveryVerdict v = classify_recovery(res, L, Zstar, c.solver.tol_gap);
        row.put("sdp_status", to_string(res.status));
        row.put_int("sdp_iterations", res.iterations);
        row.put("sdp_objective", res.objective);
        row.put("sdp_gap", res.gap);
        row.put("sdp_distance", v.distance);
        row.put_bool("sdp_exact", v.exact);
        row.put_bool("sdp_nonunique", v.nonunique);
        if (!sbm) row.put_bool("sdp_rounded_exact", round_solution(res.Z, spec.K) == inst.truth);
        if (c.timing) row.put("sdp_seconds", t);
    }
    if (has_algorithm(c, "mle") && !sbm) {
        const auto t0 = clock::now();
        const MleResult m = mle_exhaustive(L, spec.K, c.mle_guard);
        const double t = seconds(t0);
        row.put("mle_value", m.value);
        row.put_int("mle_ties", (long long)m.maximizers.size());
        row.put_bool("mle_truth_is_max", m.contains(inst.truth));
        row.put_bool("mle_exact", m.maximizers.size() == 1 && m.maximizers.front() == inst.truth);
        if (c.timing) row.put("mle_seconds", t);
    }
    if (has_algorithm(c, "certify") && !sbm) {
        const auto t0 = clock::now();
        const MeanModel mm = model_means(spec, c.score);
        const DualCertificate cert = build_dual_certificate(L, inst.truth, mm.beta);
        const KktReport k = verify_kkt(L, cluster_matrix(spec.n, inst.truth), cert);
        const SuffCheck s = suff_check(L, inst.truth, mm);
        const SwapReport sw = swap_check(L, inst.truth);
        const double t = seconds(t0);
        row.put_bool("cert_accepted", k.accepted);
        row.put_bool("cert_unique", k.unique);
        row.put("cert_lambda2", k.lambda2);
        row.put("suff_margin", s.margin);
        row.put("swap_gap", sw.gap);
        if (c.timing) row.put("certify_seconds", t);
    }
    if (has_algorithm(c, "nec") && !sbm && spec.K < spec.n) {
        const auto t0 = clock::now();
        const NecReport nr = nec_check(L, inst.truth, c.nec_grid.empty() ? nec_default_grid(spec, rep.kappa) : c.nec_grid,
                                       c.solver);
        const double t = seconds(t0);
        row.put_bool("nec_consistent", nr.consistent);
        row.put("nec_margin", nr.worst_margin);
        row.put("nec_argmax_a", nr.argmax_a);
        if (c.timing) row.put("nec_seconds", t);
    }
    for (const auto& [k, v] : csv_margins(rep)) row.put(k, std::isfinite(v) ? format_double(v) : std::string());
    return row;
}

// A failed trial keeps its provenance columns and the message.
inline TrialRow error_row(const SweepConfig& c, const ModelSpec& spec, int cell, int trial, std::string what) {
    TrialRow row;
    row.put_int("cell", cell);
    row.put_int("trial", trial);
    row.put("seed", std::to_string(trial_seed(c.seed, std::uint64_t(cell), std::uint64_t(trial))));
    row.put("kind", to_string(spec.kind));
    row.put_int("n", spec.n);
    row.put_int("K", spec.K);
    row.put("mu", spec.mu);
    row.put("p", spec.p);
    row.put("q", spec.q);
    row.put_int("r", spec.r);
    for (char& ch : what)
        if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ' ';
    row.put("error", what);
    return row;
}

inline int worker_count(const SweepConfig& c) {
    if (c.threads > 0) return c.threads;
    if (const char* env = std::getenv("COMMUNITY_SDP_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) return t;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Rows in (cell, trial) order regardless of the worker count.
inline std::vector<TrialRow> run_sweep(const SweepConfig& c) {
    const std::vector<ModelSpec> specs = expand_grid(c);
    std::vector<ThresholdReport> reps;
    for (const auto& s : specs) reps.push_back(evaluate_conditions(s));
    const std::size_t total = specs.size() * std::size_t(c.trials);
    std::vector<TrialRow> rows(total);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < total; k = next++) {
            const int cell = int(k / c.trials), trial = int(k % c.trials);
            try {
                rows[k] = run_trial(c, specs[cell], cell, trial, reps[cell]);
            } catch (const std::exception& e) {
                rows[k] = error_row(c, specs[cell], cell, trial, e.what());
            }
        }
    };
    const int nw = std::min<int>(worker_count(c), int(std::max<std::size_t>(total, 1)));
    std::vector<std::thread> pool;
    for (int w = 1; w < nw; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return rows;
}

inline std::string csv_schema_line() { return "# community-sdp-lab v" + std::to_string(kSchemaVersion); }

inline std::string timestamp_line() {
    const std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return std::string("# generated ") + buf;
}

// Header is the union of columns in first-seen order.
inline void write_sweep_csv(std::ostream& os, const std::vector<TrialRow>& rows) {
    std::vector<std::string> header;
    for (const auto& r : rows)
        for (const auto& [k, v] : r.cols)
            if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
    os << csv_schema_line() << '\n' << timestamp_line() << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& r : rows) {
        std::map<std::string, std::string> m(r.cols.begin(), r.cols.end());
        for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << m[header[i]];
        os << '\n';
    }
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return int(i);
        return -1;
    }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

inline CsvTable read_sweep_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    bool schema_ok = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# community-sdp-lab v", 0) == 0) {
                if (line != csv_schema_line()) throw IoError("unsupported CSV schema: " + line);
                schema_ok = true;
            }
            continue;
        }
        if (t.header.empty()) t.header = split_csv_line(line);
        else t.rows.push_back(split_csv_line(line));
    }
    if (!schema_ok) throw IoError("missing '# community-sdp-lab v' header");
    for (const auto& r : t.rows)
        if (r.size() != t.header.size()) throw IoError("ragged CSV row");
    return t;
}

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

// Wilson score interval; z = 1.959964 gives 95%.
inline Interval wilson_interval(long successes, long trials, double z = 1.959963984540054) {
    if (trials <= 0) return {0.0, 1.0};
    const double n = double(trials), ph = successes / n, z2 = z * z;
    const double denom = 1 + z2 / n;
    const double center = (ph + z2 / (2 * n)) / denom;
    const double half = z / denom * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

// Success rates per cell for every 0/1 outcome column present.
inline void write_report_csv(std::ostream& os, const CsvTable& t) {
    static const std::vector<std::string> metrics{"sdp_exact",    "sdp_nonunique",  "sdp_rounded_exact",
                                                  "mle_exact",    "mle_truth_is_max", "cert_accepted",
                                                  "cert_unique",  "nec_consistent"};
    const int cell_col = t.column("cell");
    if (cell_col < 0) throw IoError("sweep CSV lacks a cell column");
    static const std::vector<std::string> keys{"kind", "n", "K", "mu", "p", "q", "r"};
    os << csv_schema_line() << '\n';
    os << "cell";
    for (const auto& k : keys) os << ',' << k;
    os << ",metric,trials,successes,rate,wilson_lo,wilson_hi\n";
    std::map<long, std::vector<std::size_t>> by_cell;
    for (std::size_t i = 0; i < t.rows.size(); ++i) by_cell[std::stol(t.rows[i][cell_col])].push_back(i);
    for (const auto& [cell, idx] : by_cell) {
        for (const auto& m : metrics) {
            const int col = t.column(m);
            if (col < 0) continue;
            long trials = 0, succ = 0;
            for (std::size_t i : idx) {
                const std::string& v = t.rows[i][col];
                if (v.empty()) continue;
                ++trials;
                succ += v == "1";
            }
            if (trials == 0) continue;
            const Interval w = wilson_interval(succ, trials);
            os << cell;
            for (const auto& k : keys) {
                const int kc = t.column(k);
                os << ',' << (kc >= 0 ? t.rows[idx.front()][kc] : std::string());
            }
            os << ',' << m << ',' << trials << ',' << succ << ',' << format_double(double(succ) / trials) << ','
               << format_double(w.lo) << ',' << format_double(w.hi) << '\n';
        }
    }
}

}  // namespace csdp
