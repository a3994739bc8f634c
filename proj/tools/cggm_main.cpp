// Command-line front end: generate synthetic instances, solve them with the
// two-phase algorithm (or sGS-ADMM alone), evaluate estimates against a
// ground truth, export detected graphs, and run seed sweeps.
//
// Exit codes: 0 success, 1 usage error, 2 nonconvergence, 3 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cggm/cggm.hpp"
#include "cggm/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cggm;

namespace {

std::string hms(double seconds) {
    const long total = static_cast<long>(seconds);
    std::ostringstream os;
    os << std::setfill('0') << std::setw(2) << total / 3600 << ":" << std::setw(2)
       << (total % 3600) / 60 << ":" << std::setw(2) << total % 60;
    return os.str();
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// ------------------------------------------------------------- gen command

struct GenParams {
    std::string kind;
    Index n = 100;
    int ng = 5;
    int t = 8;
    double pbig = 0.8, psmall = 0.2, pmid = 0.5;
    double p1 = 0.01, p2 = 0.3;
    std::uint64_t seed = 1;
    int sample_mult = 10;
    bool jset = false;
    std::string out;
};

GroundTruth generate(const GenParams& g) {
    if (g.kind == "covselect")
        return gen_covselect(g.n, g.ng, g.pbig, g.psmall, g.pmid, g.seed);
    if (g.kind == "grid") return gen_grid(g.t, g.seed);
    return gen_modular(g.n, g.ng, g.p1, g.p2, g.seed);
}

struct GeneratedFiles {
    GroundTruth truth;
    SymMat C;
    std::optional<EntrySelector> constraints;
};

GeneratedFiles build_instance(const GenParams& g) {
    GeneratedFiles files{generate(g), SymMat(1), {}};
    const Index n = files.truth.conc.n();
    const SampleMode mode =
        g.kind == "covselect" ? SampleMode::inverse : SampleMode::pseudo;
    const Matrix samples =
        sample_gaussian(files.truth, n * g.sample_mult, g.seed, mode);
    files.C = sample_cov(samples);
    if (g.jset) files.constraints = build_jset(files.truth);
    return files;
}

int cmd_gen(const GenParams& g) {
    fs::create_directories(g.out);
    const GroundTruth truth = generate(g);
    const Index n = truth.conc.n();
    const SampleMode mode =
        g.kind == "covselect" ? SampleMode::inverse : SampleMode::pseudo;
    const Matrix samples = sample_gaussian(truth, n * g.sample_mult, g.seed, mode);
    const SymMat c = sample_cov(samples);

    const fs::path dir(g.out);
    write_matrix_market((dir / "conc.mtx").string(), truth.conc);
    write_truth_json((dir / "truth.json").string(), truth, "conc.mtx");
    write_csv_matrix((dir / "samples.csv").string(), samples);
    write_matrix_market((dir / "C.mtx").string(), c);
    if (g.jset) {
        const EntrySelector sel = build_jset(truth);
        write_constraints((dir / "constraints.txt").string(), sel);
        std::cout << "constraints: m = " << sel.m() << "\n";
    }
    std::cout << g.kind << " instance: n = " << n << ", samples = "
              << samples.rows() << ", edges = " << truth.edges.size() << ", seed = "
              << g.seed << "\n"
              << "wrote " << (dir / "truth.json").string() << ", conc.mtx, "
              << "samples.csv, C.mtx" << (g.jset ? ", constraints.txt" : "") << "\n";
    return 0;
}

// ----------------------------------------------------------- solve command

struct SolveParams {
    std::string c_file;
    std::string constraints_file;
    std::string truth_file;
    std::string config_file;
    std::string mode = "two-phase";
    double rho = 0.01;
    double k = 1.0;
    double mu = 1.0;
    double tol = 1e-6;
    int max_admm = 50000;
    int warm_iters = 200;
    int max_palm = 200;
    double admm_tau = 1.618;
    double sigma0 = 1.0;
    double palm_tau = 1.0;
    std::string out = ".";
};

// Config-file values take precedence over flags.
void apply_config(SolveParams& p) {
    if (p.config_file.empty()) return;
    std::ifstream in(p.config_file);
    if (!in) throw IoError("cannot open config: " + p.config_file);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(p.config_file + ": " + e.what());
    }
    auto str = [&](const char* key, std::string& slot) {
        if (j.contains(key)) slot = j[key].get<std::string>();
    };
    auto num = [&](const char* key, auto& slot) {
        if (j.contains(key)) slot = j[key].get<std::decay_t<decltype(slot)>>();
    };
    str("mode", p.mode);
    num("rho", p.rho);
    num("k", p.k);
    num("mu", p.mu);
    num("tol", p.tol);
    num("max_admm", p.max_admm);
    num("warm_iters", p.warm_iters);
    num("max_palm", p.max_palm);
    num("admm_tau", p.admm_tau);
    num("sigma0", p.sigma0);
    num("palm_tau", p.palm_tau);
    str("constraints", p.constraints_file);
    str("truth", p.truth_file);
}

struct SolveOutcome {
    SymMat X, Z, S;
    Vector y;
    ResidualReport report;
    bool converged = false;
    int admm_iters = 0;
    int palm_outer = 0;
    long ssn_total = 0;
    long cg_total = 0;
    double admm_seconds = 0.0;
    double palm_seconds = 0.0;
    bool a_met_all = true;
    bool b_met_all = true;
    bool cg_all_met = true;
    json palm_rows = json::array();
    AdmmStats admm_stats;
    PalmStats palm_stats;
    bool ran_palm = false;
};

SolveOutcome run_solver(const ProblemSpec& pb, const SolveParams& p) {
    SolveOutcome out{SymMat(pb.n()), SymMat(pb.n()), SymMat(pb.n()),
                     Vector::Zero(pb.m())};
    AdmmOptions aopts;
    aopts.tau = p.admm_tau;
    aopts.sigma0 = p.sigma0;
    aopts.tol = p.tol;
    aopts.max_iter = p.mode == "two-phase" ? p.warm_iters : p.max_admm;

    auto [ast, astats] = admm_run(pb, aopts);
    out.admm_iters = astats.iters;
    out.admm_seconds = astats.seconds;
    out.admm_stats = astats;
    out.X = ast.X;
    out.Z = ast.Z;
    out.S = ast.S;
    out.y = ast.y;
    out.report = astats.final_report;
    out.converged = astats.converged;

    if (p.mode == "two-phase" && !astats.converged) {
        PalmOptions popts;
        popts.tau = p.palm_tau;
        popts.sigma0 = ast.sigma;
        popts.tol = p.tol;
        popts.max_outer = p.max_palm;
        auto [pst, pstats] = palm_run(pb, popts, palm_init_from_admm(ast));
        out.ran_palm = true;
        out.palm_stats = pstats;
        out.palm_outer = pstats.outer;
        out.ssn_total = pstats.total_ssn;
        out.cg_total = pstats.total_cg;
        out.palm_seconds = pstats.seconds;
        out.X = pst.X;
        out.S = pst.S;
        out.y = pst.y;
        out.Z = reconstruct_Z(pb, pst.y, pst.S, pst.X, pst.sigma);
        out.report = pstats.final_report;
        out.converged = pstats.converged;
        for (const auto& row : pstats.rows) {
            out.a_met_all = out.a_met_all && row.met_a;
            out.b_met_all = out.b_met_all && row.met_b;
            out.palm_rows.push_back({{"outer", row.outer},
                                     {"ssn_iters", row.ssn_iters},
                                     {"cg_iters", row.cg_iters},
                                     {"grad_norm", row.grad_norm},
                                     {"thr_a", row.thr_a},
                                     {"met_a", row.met_a},
                                     {"met_b", row.met_b},
                                     {"sigma", row.sigma}});
        }
        for (const auto& rec : pstats.cg)
            out.cg_all_met = out.cg_all_met && rec.met;
    }
    return out;
}

void write_admm_log(const std::string& path, const AdmmStats& stats) {
    std::ofstream out(path);
    out << std::setprecision(12);
    out << "iter,r_p,r_d,r_c,r_g,sigma,seconds\n";
    for (const auto& r : stats.history)
        out << r.iter << "," << r.r_p << "," << r.r_d << "," << r.r_c << ","
            << r.r_g << "," << r.sigma << "," << r.seconds << "\n";
}

void write_palm_log(const std::string& path, const PalmStats& stats) {
    std::ofstream out(path);
    out << std::setprecision(12);
    out << "outer,ssn_iters,cg_iters,grad_norm,r_p,r_d,r_c,r_g,sigma,seconds\n";
    for (const auto& r : stats.rows)
        out << r.outer << "," << r.ssn_iters << "," << r.cg_iters << ","
            << r.grad_norm << "," << r.r_p << "," << r.r_d << "," << r.r_c << ","
            << r.r_g << "," << r.sigma << "," << r.seconds << "\n";
}

json record_json(const SolveParams& p, const ProblemSpec& pb,
                 const SolveOutcome& out) {
    const double nbar = static_cast<double>(UpperVec::length(pb.n()));
    json rec;
    rec["config"] = {
        {"mode", p.mode},
        {"rho", p.rho},
        {"k", p.k},
        {"lambda", pb.penalty.lambda},
        {"mu", p.mu},
        {"tol", p.tol},
        {"max_admm", p.max_admm},
        {"warm_iters", p.warm_iters},
        {"max_palm", p.max_palm},
        {"admm_tau", p.admm_tau},
        {"sigma0", p.sigma0},
        {"palm_tau", p.palm_tau},
        {"nbar", nbar},
        {"n", pb.n()},
        {"m", pb.m()},
        {"C", p.c_file},
        {"constraints", p.constraints_file.empty() ? json(nullptr)
                                                   : json(p.constraints_file)},
    };
    rec["residuals"] = {{"r_p", out.report.r_p},   {"r_d", out.report.r_d},
                        {"r_c", out.report.r_c},   {"r_g", out.report.r_g},
                        {"pobj", out.report.pobj}, {"dobj", out.report.dobj},
                        {"gap_valid", out.report.gap_valid}};
    rec["iterations"] = {{"admm", out.admm_iters},
                         {"palm_outer", out.palm_outer},
                         {"ssn_total", out.ssn_total},
                         {"cg_total", out.cg_total}};
    const double total = out.admm_seconds + out.palm_seconds;
    rec["time"] = {{"admm_seconds", out.admm_seconds},
                   {"palm_seconds", out.palm_seconds},
                   {"total_seconds", total},
                   {"total_hms", hms(total)}};
    rec["converged"] = out.converged;
    rec["criterion_audit"] = {{"a_met_all", out.a_met_all},
                              {"b_met_all", out.b_met_all},
                              {"cg_all_met", out.cg_all_met},
                              {"outer_rows", out.palm_rows}};
    return rec;
}

int cmd_solve(SolveParams p) {
    apply_config(p);
    const SymMat c = read_sym_auto(p.c_file);
    std::shared_ptr<const LinearConstraints> sel;
    if (!p.constraints_file.empty())
        sel = std::make_shared<EntrySelector>(
            read_constraints(p.constraints_file, c.n()));
    const double nbar = static_cast<double>(UpperVec::length(c.n()));
    const double lambda = nbar > 0 ? p.k * p.rho / nbar : 0.0;
    const ProblemSpec pb =
        make_problem(c, p.mu, ClusteredLassoParams(p.rho, lambda), sel);

    if (p.mode != "two-phase" && p.mode != "admm-only")
        throw ParameterError("solve: mode must be two-phase or admm-only");

    const SolveOutcome out = run_solver(pb, p);

    fs::create_directories(p.out);
    const fs::path dir(p.out);
    write_matrix_market((dir / "X.mtx").string(), out.X);
    write_matrix_market((dir / "Z.mtx").string(), out.Z);
    write_matrix_market((dir / "S.mtx").string(), out.S);
    write_csv_vector((dir / "y.csv").string(), out.y);
    write_admm_log((dir / "admm_log.csv").string(), out.admm_stats);
    if (out.ran_palm) write_palm_log((dir / "palm_log.csv").string(), out.palm_stats);

    json rec = record_json(p, pb, out);
    if (!p.truth_file.empty()) {
        const GroundTruth truth = read_truth_json(p.truth_file);
        const double thr = default_edge_threshold(out.X);
        const EdgeJudgement jd = judge_edges(out.X, truth.edges, thr);
        rec["metrics"] = {{"re", rel_error(out.X, truth.conc)},
                          {"fs", fscore(jd)},
                          {"threshold", thr},
                          {"tp", jd.tp},
                          {"fp", jd.fp},
                          {"fn", jd.fn}};
    }
    {
        std::ofstream rout(dir / "record.json");
        rout << rec.dump(2) << "\n";
    }

    std::cout << "mode = " << p.mode << ", n = " << pb.n() << ", m = " << pb.m()
              << ", rho = " << p.rho << ", lambda = " << pb.penalty.lambda << "\n"
              << "iterations: admm = " << out.admm_iters << ", palm = "
              << out.palm_outer << " (" << out.ssn_total << " ssn, " << out.cg_total
              << " cg)\n"
              << std::scientific << std::setprecision(3)
              << "residuals: R_P = " << out.report.r_p << ", R_D = " << out.report.r_d
              << ", R_C = " << out.report.r_c << ", R_G = " << out.report.r_g << "\n"
              << "objectives: pobj = " << out.report.pobj
              << ", dobj = " << out.report.dobj << "\n"
              << "time: " << hms(out.admm_seconds + out.palm_seconds) << " ("
              << (out.admm_seconds + out.palm_seconds) << " s)\n"
              << "record: " << (dir / "record.json").string() << "\n";
    return out.converged ? 0 : 2;
}

// ------------------------------------------------------------ eval command

int cmd_eval(const std::string& estimate, const std::string& truth_file,
             double threshold, const std::string& out_file) {
    const SymMat x = read_sym_auto(estimate);
    const GroundTruth truth = read_truth_json(truth_file);
    if (x.n() != truth.conc.n())
        throw DimensionError("eval: estimate is " + std::to_string(x.n()) +
                             "-dimensional but the truth has n = " +
                             std::to_string(truth.conc.n()));
    const double thr = threshold > 0 ? threshold : default_edge_threshold(x);
    const EdgeJudgement jd = judge_edges(x, truth.edges, thr);
    json j = {{"re", rel_error(x, truth.conc)},
              {"fs", fscore(jd)},
              {"threshold", thr},
              {"tp", jd.tp},
              {"fp", jd.fp},
              {"fn", jd.fn},
              {"true_edges", truth.edges.size()}};
    std::cout << "RE = " << j["re"].get<double>() << ", FS = " << j["fs"].get<double>()
              << " (tp " << jd.tp << ", fp " << jd.fp << ", fn " << jd.fn
              << ", threshold " << thr << ")\n";
    if (!out_file.empty()) {
        std::ofstream out(out_file);
        if (!out) throw IoError("cannot open for writing: " + out_file);
        out << j.dump(2) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------- export command

int cmd_export(const std::string& estimate, double threshold,
               const std::string& dot_file, const std::string& csv_file) {
    const SymMat x = read_sym_auto(estimate);
    const double thr = threshold > 0 ? threshold : default_edge_threshold(x);
    const auto edges = detected_edges(x, thr);
    if (!dot_file.empty()) write_edges_dot(dot_file, edges, x.n());
    if (!csv_file.empty()) write_edges_csv(csv_file, edges);
    std::cout << edges.size() << " edges above threshold " << thr << "\n";
    return 0;
}

// ----------------------------------------------------------- bench command

int cmd_bench(GenParams g, SolveParams sp, const std::vector<std::uint64_t>& seeds,
              const std::string& out_dir) {
    fs::create_directories(out_dir);
    json per_seed = json::array();
    std::vector<double> res, fss, times;
    bool all_converged = true;
    for (const std::uint64_t seed : seeds) {
        g.seed = seed;
        const GeneratedFiles inst = build_instance(g);
        std::shared_ptr<const LinearConstraints> sel;
        if (inst.constraints)
            sel = std::make_shared<EntrySelector>(*inst.constraints);
        const Index n = inst.C.n();
        const double nbar = static_cast<double>(UpperVec::length(n));
        const ProblemSpec pb = make_problem(
            inst.C, sp.mu, ClusteredLassoParams(sp.rho, sp.k * sp.rho / nbar), sel);
        const SolveOutcome out = run_solver(pb, sp);
        all_converged = all_converged && out.converged;
        const double thr = default_edge_threshold(out.X);
        const double re = rel_error(out.X, inst.truth.conc);
        const double fs_val = fscore(out.X, inst.truth, thr);
        const double secs = out.admm_seconds + out.palm_seconds;
        res.push_back(re);
        fss.push_back(fs_val);
        times.push_back(secs);
        per_seed.push_back({{"seed", seed},
                            {"re", re},
                            {"fs", fs_val},
                            {"converged", out.converged},
                            {"admm_iters", out.admm_iters},
                            {"palm_outer", out.palm_outer},
                            {"ssn_total", out.ssn_total},
                            {"cg_total", out.cg_total},
                            {"max_residual", out.report.max_res()},
                            {"seconds", secs}});
        std::cout << "seed " << seed << ": RE = " << re << ", FS = " << fs_val
                  << ", iters = " << out.admm_iters << "+" << out.palm_outer << "("
                  << out.ssn_total << "), " << secs << " s"
                  << (out.converged ? "" : "  [NOT CONVERGED]") << "\n";
    }
    json summary = {{"kind", g.kind},
                    {"seeds", seeds},
                    {"rho", sp.rho},
                    {"k", sp.k},
                    {"mode", sp.mode},
                    {"jset", g.jset},
                    {"median_re", median(res)},
                    {"median_fs", median(fss)},
                    {"median_seconds", median(times)},
                    {"all_converged", all_converged},
                    {"runs", per_seed}};
    {
        std::ofstream out(fs::path(out_dir) / "summary.json");
        out << summary.dump(2) << "\n";
    }
    std::cout << "median RE = " << median(res) << ", median FS = " << median(fss)
              << " over " << seeds.size() << " seeds\n";
    return all_converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse Gaussian graphical model estimation with hidden "
                 "clustering structure"};
    app.require_subcommand(1);

    // gen
    GenParams gen;
    auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic instance");
    gen_cmd->require_subcommand(1);
    auto add_common_gen = [&](CLI::App* c) {
        c->add_option("--seed", gen.seed, "random seed");
        c->add_option("--sample-mult", gen.sample_mult,
                      "samples per coordinate (p = mult * n)");
        c->add_flag("--jset", gen.jset, "emit pattern constraints from true zeros");
        c->add_option("--out", gen.out, "output directory")->required();
    };
    auto* gc = gen_cmd->add_subcommand("covselect", "clustered covariance selection");
    gc->add_option("--n", gen.n, "dimension")->required();
    gc->add_option("--ng", gen.ng, "number of clusters")->required();
    gc->add_option("--pbig", gen.pbig, "within-cluster entry probability");
    gc->add_option("--psmall", gen.psmall, "cluster-pair linkage probability");
    gc->add_option("--pmid", gen.pmid, "entry probability in a linked pair");
    add_common_gen(gc);
    auto* gg = gen_cmd->add_subcommand("grid", "grid graph Laplacian");
    gg->add_option("--t", gen.t, "side length (n = t^2)")->required();
    add_common_gen(gg);
    auto* gm = gen_cmd->add_subcommand("modular", "stochastic block graph Laplacian");
    gm->add_option("--n", gen.n, "number of vertices")->required();
    gm->add_option("--ng", gen.ng, "number of modules")->required();
    gm->add_option("--p1", gen.p1, "cross-module edge probability");
    gm->add_option("--p2", gen.p2, "within-module edge probability");
    add_common_gen(gm);

    // solve
    SolveParams sp;
    auto* solve_cmd = app.add_subcommand("solve", "solve an instance from files");
    solve_cmd->add_option("C", sp.c_file, "sample covariance (.mtx or .csv)")
        ->required();
    solve_cmd->add_option("--constraints", sp.constraints_file,
                          "constraint file (i j value, 1-based)");
    solve_cmd->add_option("--truth", sp.truth_file,
                          "truth JSON for metrics in the record");
    solve_cmd->add_option("--config", sp.config_file,
                          "JSON config; its values override flags");
    solve_cmd->add_option("--mode", sp.mode, "two-phase | admm-only");
    solve_cmd->add_option("--rho", sp.rho, "l1 weight");
    solve_cmd->add_option("--k", sp.k, "lambda = k rho / nbar");
    solve_cmd->add_option("--mu", sp.mu, "log-det weight");
    solve_cmd->add_option("--tol", sp.tol, "KKT tolerance");
    solve_cmd->add_option("--max-admm", sp.max_admm, "ADMM iteration cap");
    solve_cmd->add_option("--warm-iters", sp.warm_iters,
                          "phase-one iterations in two-phase mode");
    solve_cmd->add_option("--max-palm", sp.max_palm, "pALM outer iteration cap");
    solve_cmd->add_option("--admm-tau", sp.admm_tau, "ADMM step length");
    solve_cmd->add_option("--sigma0", sp.sigma0, "initial penalty");
    solve_cmd->add_option("--palm-tau", sp.palm_tau, "pALM proximal weight");
    solve_cmd->add_option("--out", sp.out, "output directory");

    // eval
    std::string eval_estimate, eval_truth, eval_out;
    double eval_threshold = 0.0;
    auto* eval_cmd = app.add_subcommand("eval", "score an estimate against a truth");
    eval_cmd->add_option("--estimate", eval_estimate, "estimate matrix file")
        ->required();
    eval_cmd->add_option("--truth", eval_truth, "truth JSON")->required();
    eval_cmd->add_option("--threshold", eval_threshold,
                         "edge magnitude cutoff (default 1e-5 max(1, |X|_inf))");
    eval_cmd->add_option("--out", eval_out, "metrics JSON output path");

    // export
    std::string exp_estimate, exp_dot, exp_csv;
    double exp_threshold = 0.0;
    auto* export_cmd = app.add_subcommand("export", "emit the detected graph");
    export_cmd->add_option("--estimate", exp_estimate, "estimate matrix file")
        ->required();
    export_cmd->add_option("--threshold", exp_threshold, "edge magnitude cutoff");
    export_cmd->add_option("--dot", exp_dot, "DOT output path");
    export_cmd->add_option("--csv", exp_csv, "CSV edge-list output path");

    // bench
    GenParams bg;
    SolveParams bs;
    std::vector<std::uint64_t> bench_seeds{1, 2, 3, 4, 5};
    std::string bench_out = "bench";
    auto* bench_cmd = app.add_subcommand("bench", "gen+solve+eval over seeds");
    bench_cmd->add_option("--kind", bg.kind, "covselect | grid | modular")
        ->required()
        ->check(CLI::IsMember({"covselect", "grid", "modular"}));
    bench_cmd->add_option("--n", bg.n, "dimension / vertices");
    bench_cmd->add_option("--ng", bg.ng, "clusters / modules");
    bench_cmd->add_option("--t", bg.t, "grid side length");
    bench_cmd->add_option("--pbig", bg.pbig, "covselect p_big");
    bench_cmd->add_option("--psmall", bg.psmall, "covselect p_small");
    bench_cmd->add_option("--pmid", bg.pmid, "covselect p_mid");
    bench_cmd->add_option("--p1", bg.p1, "modular cross probability");
    bench_cmd->add_option("--p2", bg.p2, "modular within probability");
    bench_cmd->add_option("--sample-mult", bg.sample_mult, "p = mult * n");
    bench_cmd->add_flag("--jset", bg.jset, "use pattern constraints");
    bench_cmd->add_option("--seeds", bench_seeds, "seeds to run");
    bench_cmd->add_option("--mode", bs.mode, "two-phase | admm-only");
    bench_cmd->add_option("--rho", bs.rho, "l1 weight");
    bench_cmd->add_option("--k", bs.k, "lambda = k rho / nbar");
    bench_cmd->add_option("--mu", bs.mu, "log-det weight");
    bench_cmd->add_option("--tol", bs.tol, "KKT tolerance");
    bench_cmd->add_option("--max-admm", bs.max_admm, "ADMM iteration cap");
    bench_cmd->add_option("--warm-iters", bs.warm_iters, "phase-one iterations");
    bench_cmd->add_option("--out", bench_out, "output directory");

    try {
        app.parse(argc, argv);
        if (gc->parsed()) gen.kind = "covselect";
        if (gg->parsed()) gen.kind = "grid";
        if (gm->parsed()) gen.kind = "modular";
        if (gen_cmd->parsed()) return cmd_gen(gen);
        if (solve_cmd->parsed()) return cmd_solve(sp);
        if (eval_cmd->parsed())
            return cmd_eval(eval_estimate, eval_truth, eval_threshold, eval_out);
        if (export_cmd->parsed())
            return cmd_export(exp_estimate, exp_threshold, exp_dot, exp_csv);
        if (bench_cmd->parsed()) return cmd_bench(bg, bs, bench_seeds, bench_out);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage errors map to 1, --help to 0
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
