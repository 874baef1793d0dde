// community-sdp-lab command line: generate, solve, certify, vm, sweep, report.
// Exit status 0 on success, 1 on runtime failure, 2 on usage errors.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "csdp/certify.hpp"
#include "csdp/info.hpp"
#include "csdp/io.hpp"
#include "csdp/lab.hpp"
#include "csdp/model.hpp"
#include "csdp/oracle.hpp"
#include "csdp/sdp.hpp"

using namespace csdp;

namespace {

struct SolverFlags {
    double tol_primal = 1e-7, tol_dual = 1e-7, tol_gap = 1e-6, penalty = 0.0;
    int max_iter = 20000;

    void attach(CLI::App* app) {
        app->add_option("--tol-primal", tol_primal, "primal residual tolerance");
        app->add_option("--tol-dual", tol_dual, "relative dual residual tolerance");
        app->add_option("--tol-gap", tol_gap, "relative duality gap tolerance");
        app->add_option("--max-iter", max_iter, "iteration cap");
        app->add_option("--penalty", penalty, "ADMM penalty (0 = scaled automatically)");
    }
    SolverOptions options() const {
        SolverOptions o;
        o.tol_primal = tol_primal;
        o.tol_dual = tol_dual;
        o.tol_gap = tol_gap;
        o.max_iter = max_iter;
        o.penalty = penalty;
        return o;
    }
};

ScoreKind parse_score(const std::string& s) {
    if (s == "adjacency") return ScoreKind::Adjacency;
    if (s == "llr") return ScoreKind::Llr;
    throw ParameterError("score must be adjacency or llr");
}

Json feas_json(const FeasReport& f) {
    return {{"psd", f.psd},     {"nonneg", f.nonneg}, {"diag", f.diag},
            {"trace", f.trace}, {"sum", f.sum},       {"symmetry", f.symmetry}};
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Planted-community SDP laboratory"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "draw an instance; writes PREFIX.mtx and PREFIX.json");
    std::string kind = "gaussian", out_prefix, score = "adjacency";
    ModelSpec spec;
    std::uint64_t seed = 1;
    gen->add_option("--kind", kind, "gaussian | bernoulli | sbm");
    gen->add_option("--n", spec.n, "number of vertices")->required();
    gen->add_option("--k,--K", spec.K, "community size (derived as n/r for sbm)");
    gen->add_option("--mu", spec.mu, "Gaussian mean shift");
    gen->add_option("--p", spec.p, "within-community edge probability");
    gen->add_option("--q", spec.q, "background edge probability");
    gen->add_option("--r", spec.r, "SBM block count");
    gen->add_option("--seed", seed, "64-bit seed");
    gen->add_option("--out", out_prefix, "output prefix")->required();
    gen->add_option("--score", score, "also write PREFIX.score.mtx: adjacency | llr");

    // solve
    auto* sol = app.add_subcommand("solve", "solve the community or SBM program");
    std::string matrix_path, program = "community", instance_path, z_out;
    int K = 0, r = 0;
    SolverFlags sf;
    sol->add_option("--in,--matrix", matrix_path, "score matrix (Matrix Market)")->required();
    sol->add_option("--program", program, "community | sbm");
    sol->add_option("--k,--K", K, "community size");
    sol->add_option("--r", r, "SBM block count");
    sol->add_option("--instance", instance_path, "instance JSON, to score against the truth");
    sol->add_option("--out", z_out, "write the solution matrix here");
    sf.attach(sol);

    // certify
    auto* cer = app.add_subcommand("certify", "dual certificate, sufficient/necessary tests, witnesses");
    std::string cert_matrix, cert_instance, cert_out, cert_score = "adjacency";
    bool run_nec = false;
    std::vector<double> grid;
    double sbm_eps = 0.05;
    SolverFlags cf;
    cer->add_option("--in,--matrix", cert_matrix, "score matrix (Matrix Market)")->required();
    cer->add_option("--instance", cert_instance, "instance JSON with the planted community")->required();
    cer->add_option("--score", cert_score, "how the matrix was scored: adjacency | llr");
    cer->add_flag("--nec", run_nec, "run the necessary test and, if it fails, the perturbation witness");
    cer->add_option("--grid", grid, "a values for the necessary test");
    cer->add_option("--eps", sbm_eps, "SBM witness objective gain");
    cer->add_option("--out", cert_out, "prefix for S/B/witness matrices");
    cf.attach(cer);

    // vm
    auto* vm = app.add_subcommand("vm", "V_m(a) values and explicit witnesses");
    std::string vm_matrix, witness = "none", branch = "auto", vm_out;
    std::vector<double> a_values;
    double wq = 0.0;
    SolverFlags vf;
    vm->add_option("--in,--matrix", vm_matrix, "matrix M (Matrix Market)")->required();
    vm->add_option("--a", a_values, "a values")->required();
    vm->add_option("--witness", witness, "none | gaussian | bernoulli");
    vm->add_option("--branch", branch, "gaussian tilt: auto | large_a | mid_a | small_a");
    vm->add_option("--q", wq, "background probability for the bernoulli witness");
    vm->add_option("--out", vm_out, "prefix for solution matrices");
    vf.attach(vm);

    // sweep
    auto* sw = app.add_subcommand("sweep", "Monte Carlo sweep over a parameter grid");
    std::string config_path, sweep_out;
    sw->add_option("--config", config_path, "sweep configuration JSON")->required();
    sw->add_option("--out", sweep_out, "CSV output path (default stdout)");

    // report
    auto* rep = app.add_subcommand("report", "success rates with Wilson intervals");
    std::string report_in, report_out;
    rep->add_option("--in", report_in, "sweep CSV")->required();
    rep->add_option("--out", report_out, "CSV output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << Json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
        return 2;
    }

    try {
        if (*gen) {
            spec.kind = model_kind_from_string(kind);
            if (spec.kind == ModelKind::Sbm && spec.r > 0) spec.K = spec.n / spec.r;
            const Instance inst = gen_instance(spec, seed);
            save_matrix_market(out_prefix + ".mtx", inst.A);
            save_json(out_prefix + ".json", instance_record(inst));
            save_json(out_prefix + ".thresholds.json", to_json(evaluate_conditions(spec)));
            if (spec.kind != ModelKind::Sbm && score == "llr")
                save_matrix_market(out_prefix + ".score.mtx", score_matrix(inst.A, spec, ScoreKind::Llr));
            std::cout << instance_record(inst).dump() << '\n';
        } else if (*sol) {
            const Matrix L = load_matrix_market(matrix_path);
            const SolverOptions o = sf.options();
            SolveResult res;
            Json out;
            if (program == "community") {
                res = solve_community_sdp(L, K, o);
            } else if (program == "sbm") {
                res = solve_sbm_sdp(L, r, o);
            } else {
                std::cerr << Json{{"error", "usage"}, {"message", "program must be community or sbm"}}.dump() << '\n';
                return 2;
            }
            out = {{"status", to_string(res.status)}, {"objective", res.objective},
                   {"dual_bound", res.dual_bound},    {"gap", res.gap},
                   {"primal_residual", res.primal_residual}, {"dual_residual", res.dual_residual},
                   {"iterations", res.iterations}};
            if (program == "community") out["rounded"] = round_solution(res.Z, K);
            if (!instance_path.empty()) {
                const InstanceRecord rec = instance_record_from_json(load_json(instance_path));
                const Matrix Zs = program == "sbm" ? sbm_cluster_matrix(rec.labels, r)
                                                   : cluster_matrix(int(L.rows()), rec.truth);
                const RecoveryVerdict v = classify_recovery(res, L, Zs, o.tol_gap);
                out["distance"] = v.distance;
                out["exact"] = v.exact;
                out["nonunique"] = v.nonunique;
            }
            if (!z_out.empty()) save_matrix_market(z_out, res.Z);
            std::cout << out.dump(2) << '\n';
        } else if (*cer) {
            const Matrix L = load_matrix_market(cert_matrix);
            const InstanceRecord rec = instance_record_from_json(load_json(cert_instance));
            Json out;
            if (rec.spec.kind == ModelKind::Sbm) {
                const SbmWitness w = sbm_witness(L, rec.spec.r, sbm_eps, rec.labels);
                out["sbm_witness"] = {{"s", w.s}, {"t", w.t}, {"w", w.w}, {"objective", w.objective},
                                      {"target", w.target}, {"min_eig", w.min_eig},
                                      {"row_sum_error", w.row_sum_error}, {"min_offdiag", w.min_offdiag},
                                      {"lower_bound", w.lower_bound}, {"degree_condition", w.degree_condition},
                                      {"feasibility", feas_json(w.feasibility)}};
                if (!cert_out.empty()) save_matrix_market(cert_out + ".witness.mtx", w.Y);
            } else {
                const MeanModel mm = model_means(rec.spec, parse_score(cert_score));
                const DualCertificate c = build_dual_certificate(L, rec.truth, mm.beta);
                const KktReport k = verify_kkt(L, cluster_matrix(int(L.rows()), rec.truth), c);
                const SuffCheck s = suff_check(L, rec.truth, mm);
                const SwapReport sw2 = swap_check(L, rec.truth);
                out["certificate"] = {{"lambda", c.lambda}, {"eta", c.eta}, {"beta_mean", c.beta_mean},
                                      {"accepted", k.accepted}, {"unique", k.unique},
                                      {"unique_by_lambda2", k.unique_by_lambda2},
                                      {"unique_by_strict", k.unique_by_strict}, {"lambda2", k.lambda2},
                                      {"min_eig_S", k.min_eig_S}, {"min_d", k.min_d}, {"min_B", k.min_B},
                                      {"identity_residual", k.identity_residual},
                                      {"stationarity", k.stationarity}, {"failures", k.failures}};
                out["sufficient"] = {{"margin", s.margin}, {"holds", s.holds}, {"min_in", s.min_in},
                                     {"max_out", s.max_out}, {"noise_norm", s.noise_norm}};
                out["swap"] = {{"gap", num_or_null(sw2.gap)}, {"max_swap_delta", num_or_null(sw2.max_swap_delta)},
                               {"holds", sw2.holds}};
                if (!cert_out.empty()) {
                    save_matrix_market(cert_out + ".S.mtx", c.S);
                    save_matrix_market(cert_out + ".B.mtx", c.B);
                }
                if (run_nec && int(rec.truth.size()) < L.rows()) {
                    const NecReport nr =
                        nec_check(L, rec.truth, grid.empty() ? nec_default_grid(rec.spec, evaluate_conditions(rec.spec).kappa) : grid, cf.options());
                    out["necessary"] = {{"lhs", nr.lhs}, {"rhs", nr.rhs}, {"margin", nr.worst_margin},
                                        {"consistent", nr.consistent}, {"argmax_a", nr.argmax_a},
                                        {"grid", nr.grid}, {"values", nr.values}};
                    if (!nr.consistent) {
                        const PerturbResult p = perturbation_solution(L, rec.truth, nr.U_argmax, nr.argmax_a);
                        out["perturbation"] = {{"eps", p.eps}, {"alpha", p.alpha}, {"beta", p.beta},
                                               {"objective", p.objective}, {"base_objective", p.base_objective},
                                               {"improves", p.improves}, {"predicted_slope", p.predicted_slope},
                                               {"feasibility", feas_json(p.feasibility)}};
                        if (!cert_out.empty()) save_matrix_market(cert_out + ".witness.mtx", p.Z);
                    }
                }
            }
            std::cout << out.dump(2) << '\n';
        } else if (*vm) {
            const Matrix M = load_matrix_market(vm_matrix);
            Json arr = Json::array();
            for (std::size_t i = 0; i < a_values.size(); ++i) {
                const double a = a_values[i];
                Json e{{"a", a}};
                if (witness == "none") {
                    const VmResult v = solve_vm(M, a, vf.options());
                    e["value"] = num_or_null(v.value);
                    e["status"] = to_string(v.solve.status);
                    e["dual_bound"] = v.solve.dual_bound;
                    e["iterations"] = v.solve.iterations;
                    if (!vm_out.empty() && v.feasible)
                        save_matrix_market(vm_out + "." + std::to_string(i) + ".mtx", v.Z);
                } else {
                    VmWitness w;
                    if (witness == "gaussian") {
                        WitnessOptions wo;
                        if (branch == "auto") wo.branch = TiltBranch::Auto;
                        else if (branch == "large_a") wo.branch = TiltBranch::LargeA;
                        else if (branch == "mid_a") wo.branch = TiltBranch::MidA;
                        else if (branch == "small_a") wo.branch = TiltBranch::SmallA;
                        else throw ParameterError("unknown branch " + branch);
                        w = vm_witness_gaussian(M, a, wo);
                    } else if (witness == "bernoulli") {
                        w = vm_witness_bernoulli(M, a, wq, kappa(int(M.rows()), wq).value);
                    } else {
                        throw ParameterError("witness must be none, gaussian or bernoulli");
                    }
                    e["objective"] = w.objective;
                    e["lower_target"] = num_or_null(w.lower_target);
                    e["min_eig"] = w.min_eig;
                    e["trace_error"] = w.trace_error;
                    e["sum_error"] = w.sum_error;
                    e["branch"] = to_string(w.branch);
                    if (!vm_out.empty()) save_matrix_market(vm_out + "." + std::to_string(i) + ".mtx", w.Z);
                }
                arr.push_back(e);
            }
            std::cout << arr.dump(2) << '\n';
        } else if (*sw) {
            const SweepConfig c = sweep_config_from_json(load_json(config_path));
            const auto rows = run_sweep(c);
            if (sweep_out.empty()) {
                write_sweep_csv(std::cout, rows);
            } else {
                std::ostringstream os;
                write_sweep_csv(os, rows);
                write_text(sweep_out, os.str());
            }
        } else if (*rep) {
            std::ifstream f(report_in);
            if (!f) throw IoError("cannot open " + report_in);
            const CsvTable t = read_sweep_csv(f);
            if (report_out.empty()) {
                write_report_csv(std::cout, t);
            } else {
                std::ostringstream os;
                write_report_csv(os, t);
                write_text(report_out, os.str());
            }
        }
    } catch (const ParameterError& e) {
        std::cerr << Json{{"error", e.kind()}, {"message", e.what()}}.dump() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << Json{{"error", e.kind()}, {"message", e.what()}}.dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << Json{{"error", "runtime"}, {"message", e.what()}}.dump() << '\n';
        return 1;
    }
    return 0;
}
