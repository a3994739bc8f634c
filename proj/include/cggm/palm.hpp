#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "cggm/admm.hpp"
#include "cggm/diagnostics.hpp"
#include "cggm/logdet_prox.hpp"
#include "cggm/penalty_q.hpp"
#include "cggm/problem.hpp"

namespace cggm {

// Phase II: proximal augmented Lagrangian method on the unconstrained dual,
// one strongly convex subproblem in (y, S) per outer iteration, solved by a
// semismooth Newton method with matrix-free CG. Each SSN iterate builds one
// eigendecomposition cache and one prox_Q pattern; every CG matvec reuses
// them.

struct SsnOptions {
    double beta = 0.5;      // CG residual exponent, in (0, 1]
    double eta = 1e-2;      // CG residual cap, in (0, 1)
    double zeta = 1e-4;     // Armijo slope fraction, in (0, 1/2)
    double delta_ls = 0.5;  // backtracking factor, in (0, 1)
    int max_ssn = 200;
    int max_cg = 500;
};

struct PalmOptions {
    double tau = 1.0;  // proximal weight, > 0
    double sigma0 = 1.0;
    double sigma_inf = 1e5;
    double sigma_growth = 2.0;
    double eps0 = 1e-2;  // criterion (A): eps_k = eps0 * eps_decay^k
    double eps_decay = 0.95;
    double delta_cap = 0.5;  // criterion (B): delta_k = min(cap, delta_decay^k) < 1
    double delta_decay = 0.9;
    int max_outer = 200;
    double tol = 1e-6;
    SsnOptions ssn;

    void validate() const {
        if (tau <= 0.0) throw ParameterError("PalmOptions: tau must be > 0");
        if (sigma0 <= 0.0 || sigma_inf < sigma0 || sigma_growth < 1.0)
            throw ParameterError("PalmOptions: invalid sigma schedule");
        if (eps_decay <= 0.0 || eps_decay >= 1.0 || delta_decay <= 0.0 ||
            delta_decay >= 1.0 || delta_cap >= 1.0)
            throw ParameterError("PalmOptions: schedules must be summable, delta < 1");
        if (ssn.beta <= 0.0 || ssn.beta > 1.0 || ssn.eta <= 0.0 || ssn.eta >= 1.0 ||
            ssn.zeta <= 0.0 || ssn.zeta >= 0.5 || ssn.delta_ls <= 0.0 ||
            ssn.delta_ls >= 1.0)
            throw ParameterError("PalmOptions: ssn parameters out of range");
    }
};

struct PalmState {
    Vector y;
    SymMat S, X, U;
    double sigma = 1.0;
    int outer = 0;
};

// Element of R^m x S^n, the space the subproblem lives in.
struct DualVec {
    Vector y;
    SymMat S;

    double squared_norm() const { return y.squaredNorm() + S.squared_norm(); }
    double norm() const { return std::sqrt(squared_norm()); }

    DualVec& operator+=(const DualVec& o) { y += o.y; S += o.S; return *this; }
    DualVec& operator-=(const DualVec& o) { y -= o.y; S -= o.S; return *this; }
    DualVec& operator*=(double a) { y *= a; S *= a; return *this; }
    friend DualVec operator+(DualVec a, const DualVec& b) { a += b; return a; }
    friend DualVec operator-(DualVec a, const DualVec& b) { a -= b; return a; }
    friend DualVec operator*(double a, DualVec v) { v *= a; return v; }
};

inline double dot(const DualVec& a, const DualVec& b) {
    return a.y.dot(b.y) + dot(a.S, b.S);
}

// Anchor data of one pALM subproblem: minimize over (y, S)
//   Psi(y,S) = Ltilde_sigma(y,S; X~, U~) + tau/(2 sigma) (||y-y~||^2 + ||S-S~||^2).
struct Subproblem {
    const ProblemSpec* pb = nullptr;
    Vector y_t;
    SymMat S_t, X_t, U_t;
    double sigma = 1.0;
    double tau = 1.0;
};

// Everything evaluated at one (y, S): the prox caches shared by Psi, its
// gradient and the generalized Hessian, plus the Psi value itself. Psi is
// assembled in O(1)-scaled form,
//   Psi = -<b,y> + <Z, M/sigma> - ||Z||^2/(2 sigma) + mu log det Z
//         + <Xhat, V/sigma> - ||Xhat||^2/(2 sigma) - Q(Xhat)
//         - (||X~||^2 + ||U~||^2)/(2 sigma) + tau/(2 sigma)(...),
// which is the Moreau-envelope expression with the large ||M||^2-sized
// cancellations removed (Z = Prox_{mu sigma r}(M), Xhat = Prox_{sigma Q}(V)).
struct PointEval {
    Vector y;
    SymMat S;
    SymMat M;        // X~ - sigma (C - A* y - S)
    EigCache rc;     // eig cache of M at barrier mu*sigma
    SymMat prox_r;   // Prox_{mu sigma r}(M)
    SymMat prox_qm;  // Prox_{sigma Q}(U~ - sigma S)
    ProxQMatInfo qinfo;
    double psi = 0.0;
};

inline PointEval eval_point(const Subproblem& sp, Vector y, SymMat S) {
    const ProblemSpec& pb = *sp.pb;
    const double sigma = sp.sigma;
    PointEval e;
    const SymMat m_over_sigma =
        (1.0 / sigma) * sp.X_t - (pb.C - pb.A().adjoint(y) - S);
    e.M = sigma * m_over_sigma;
    e.rc = make_eig_cache(eigh(e.M), pb.mu * sigma);
    e.prox_r = prox_from_cache(e.rc);

    const SymMat v_over_sigma = (1.0 / sigma) * sp.U_t - S;
    auto [xhat, qinfo] = prox_Q_mat(sigma * v_over_sigma, pb.penalty, sigma);
    e.prox_qm = std::move(xhat);
    e.qinfo = std::move(qinfo);

    const double a_r = dot(e.prox_r, m_over_sigma) -
                       e.prox_r.squared_norm() / (2.0 * sigma) +
                       pb.mu * e.rc.logdet_prox();
    const double a_q = dot(e.prox_qm, v_over_sigma) -
                       e.prox_qm.squared_norm() / (2.0 * sigma) -
                       eval_Q(e.prox_qm, pb.penalty);
    e.psi = -pb.b().dot(y) + a_r + a_q -
            (sp.X_t.squared_norm() + sp.U_t.squared_norm()) / (2.0 * sigma) +
            sp.tau / (2.0 * sigma) *
                ((y - sp.y_t).squaredNorm() + (S - sp.S_t).squared_norm());
    e.y = std::move(y);
    e.S = std::move(S);
    return e;
}

inline double eval_psi(const Subproblem& sp, const Vector& y, const SymMat& S) {
    return eval_point(sp, y, S).psi;
}

inline DualVec grad_psi_cached(const Subproblem& sp, const PointEval& e) {
    const ProblemSpec& pb = *sp.pb;
    const double ts = sp.tau / sp.sigma;
    DualVec g;
    g.y = -pb.b() + pb.A().apply(e.prox_r) + ts * (e.y - sp.y_t);
    g.S = e.prox_r - e.prox_qm + ts * (e.S - sp.S_t);
    return g;
}

inline DualVec grad_psi(const Subproblem& sp, const Vector& y, const SymMat& S) {
    return grad_psi_cached(sp, eval_point(sp, y, S));
}

// Generalized Hessian application at the cached point:
//   sigma (A; I) dphi(A* d_y + d_S) + sigma (0; W_Q d_S) + tau/sigma (d_y; d_S).
// Self-adjoint and positive definite (the proximal term bounds it below).
inline DualVec hess_apply(const Subproblem& sp, const PointEval& e, const DualVec& d) {
    const ProblemSpec& pb = *sp.pb;
    if (d.S.n() != pb.n() || d.y.size() != pb.m())
        throw DimensionError("hess_apply: direction dimension mismatch");
    const double sigma = sp.sigma;
    const double ts = sp.tau / sigma;
    const SymMat t = pb.A().adjoint(d.y) + d.S;
    const SymMat g = dphi_apply(e.rc, t);
    DualVec out;
    out.y = sigma * pb.A().apply(g) + ts * d.y;
    out.S = sigma * g + sigma * jac_prox_Q_apply(e.qinfo, d.S) + ts * d.S;
    return out;
}

struct CgRecord {
    double target = 0.0;    // absolute residual bound min{eta, ||g||^{1+beta}}
    double achieved = 0.0;  // true residual ||H d + g|| at exit
    int iters = 0;
    bool met = false;
};

// CG for H d = rhs, started at d = 0, stopping on the absolute residual.
// Candidate exits recompute the true residual before accepting it.
template <class HOp>
DualVec cg_solve(HOp&& hop, const DualVec& rhs, double target, int max_iter,
                 CgRecord& rec) {
    DualVec x{Vector::Zero(rhs.y.size()), SymMat(rhs.S.n())};
    DualVec r = rhs;
    DualVec p = r;
    double rs = dot(r, r);
    rec = CgRecord{};
    rec.target = target;
    const double target2 = target * target;
    auto true_residual = [&] { return rhs - hop(x); };
    if (rs <= target2) {
        rec.achieved = std::sqrt(rs);
        rec.met = true;
        return x;
    }
    for (int k = 0; k < max_iter; ++k) {
        const DualVec hp = hop(p);
        const double php = dot(p, hp);
        if (php <= 0.0) break;  // not reachable for a PD operator
        const double alpha = rs / php;
        x += alpha * p;
        r -= alpha * hp;
        ++rec.iters;
        double rs_new = dot(r, r);
        if (rs_new <= target2) {
            r = true_residual();
            rs_new = dot(r, r);
            if (rs_new <= target2) {
                rec.achieved = std::sqrt(rs_new);
                rec.met = true;
                return x;
            }
            p = r;  // residual replacement; restart direction
            rs = rs_new;
            continue;
        }
        const double beta = rs_new / rs;
        rs = rs_new;
        p = r + beta * p;
    }
    rec.achieved = true_residual().norm();
    rec.met = rec.achieved <= target;
    return x;
}

struct SsnThresholds {
    double thr_a = 0.0;        // criterion (A) bound on ||grad Psi||
    double thr_b_factor = 0.0; // criterion (B): bound = factor * ||step||_Lambda
};

struct LsRecord {
    double psi_before = 0.0;
    double slope = 0.0;  // <grad Psi, d>, negative
    double alpha = 0.0;
    double psi_after = 0.0;
};

struct SsnStats {
    int iters = 0;
    int cg_total = 0;
    int evals = 0;      // PointEval constructions (one eigendecomposition each)
    int ls_trials = 0;  // line search trials across all iterations
    std::vector<CgRecord> cg;
    std::vector<LsRecord> steps;  // one per accepted step
    double grad_norm = 0.0;
    double thr_a = 0.0;
    bool met_a = false;
    bool met_b = false;
};

struct SsnResult {
    PointEval eval;
    SsnStats stats;
};

// ||.||_Lambda step norm used by criterion (B): Lambda = Diag(tau I, tau I, I, I)
// over (y, S, X, U); the candidate multiplier updates come for free from the
// caches at the current point.
inline double step_norm_lambda(const Subproblem& sp, const PointEval& e) {
    const double ny = (e.y - sp.y_t).squaredNorm();
    const double ns = (e.S - sp.S_t).squared_norm();
    const double nx = (e.prox_r - sp.X_t).squared_norm();
    const double nu = (e.prox_qm - sp.U_t).squared_norm();
    return std::sqrt(sp.tau * (ny + ns) + nx + nu);
}

inline SsnResult ssn_solve(const Subproblem& sp, const SsnOptions& opts,
                           const SsnThresholds& thr, Vector y0, SymMat S0) {
    SsnResult res{eval_point(sp, std::move(y0), std::move(S0)), SsnStats{}};
    SsnStats& st = res.stats;
    st.evals = 1;
    st.thr_a = thr.thr_a;

    for (int j = 0;; ++j) {
        const DualVec g = grad_psi_cached(sp, res.eval);
        const double gn = g.norm();
        st.grad_norm = gn;
        st.met_a = gn <= thr.thr_a;
        st.met_b = gn <= thr.thr_b_factor * step_norm_lambda(sp, res.eval);
        if ((st.met_a && st.met_b) || j >= opts.max_ssn) return res;

        const double target = std::min(opts.eta, std::pow(gn, 1.0 + opts.beta));
        CgRecord rec;
        const DualVec d = cg_solve(
            [&](const DualVec& v) { return hess_apply(sp, res.eval, v); },
            DualVec{-g.y, -g.S}, target, opts.max_cg, rec);
        st.cg.push_back(rec);
        st.cg_total += rec.iters;

        const double gd = dot(g, d);
        if (!(gd < 0.0))
            throw NumericError("ssn_solve: CG returned a non-descent direction");

        double alpha = 1.0;
        bool accepted = false;
        for (int t = 0; t < 50; ++t) {
            PointEval trial =
                eval_point(sp, res.eval.y + alpha * d.y, res.eval.S + alpha * d.S);
            ++st.evals;
            ++st.ls_trials;
            if (trial.psi <= res.eval.psi + opts.zeta * alpha * gd) {
                st.steps.push_back({res.eval.psi, gd, alpha, trial.psi});
                res.eval = std::move(trial);
                accepted = true;
                break;
            }
            alpha *= opts.delta_ls;
        }
        if (!accepted) {
            std::ostringstream os;
            os << "ssn_solve: line search stagnated after 50 backtracks at "
               << "iteration " << j << " (||grad Psi|| = " << gn
               << ", sigma = " << sp.sigma << ", psi = " << res.eval.psi << ")";
            throw NumericError(os.str());
        }
        ++st.iters;
    }
}

// Z consistent with the augmented Lagrangian at (X, y, S):
//   Z = (phi_{mu sigma}(M) - M)/sigma, M = X - sigma (C - A* y - S).
inline SymMat reconstruct_Z(const ProblemSpec& pb, const Vector& y, const SymMat& S,
                            const SymMat& X, double sigma) {
    const SymMat M = X - sigma * (pb.C - pb.A().adjoint(y) - S);
    auto [phiM, cache] = prox_logdet(M, pb.mu * sigma);
    return (1.0 / sigma) * (phiM - M);
}

struct OuterRow {
    int outer = 0;
    int ssn_iters = 0;
    int cg_iters = 0;
    double grad_norm = 0.0;
    double thr_a = 0.0;
    bool met_a = false;
    bool met_b = false;
    double r_p = 0.0, r_d = 0.0, r_c = 0.0, r_g = 0.0;
    double sigma = 0.0;
    double seconds = 0.0;
};

struct PalmStats {
    ResidualReport initial_report;
    ResidualReport final_report;
    std::vector<OuterRow> rows;
    std::vector<CgRecord> cg;
    int outer = 0;
    long total_ssn = 0;
    long total_cg = 0;
    long total_evals = 0;
    bool converged = false;
    double seconds = 0.0;
};

inline PalmState palm_init(const ProblemSpec& pb, const PalmOptions& opts) {
    return PalmState{Vector::Zero(pb.m()), SymMat(pb.n()), SymMat::identity(pb.n()),
                     SymMat::identity(pb.n()), opts.sigma0, 0};
}

inline PalmState palm_init_from_admm(const AdmmState& st) {
    return PalmState{st.y, st.S, st.X, st.X, st.sigma, 0};
}

inline std::pair<PalmState, PalmStats> palm_run(const ProblemSpec& pb,
                                                const PalmOptions& opts,
                                                std::optional<PalmState> init = {}) {
    opts.validate();
    const auto t0 = std::chrono::steady_clock::now();
    auto seconds = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    };
    PalmState st = init ? std::move(*init) : palm_init(pb, opts);
    PalmStats stats;

    SymMat Z = reconstruct_Z(pb, st.y, st.S, st.X, st.sigma);
    ResidualReport rep = residuals(st.X, st.y, st.S, Z, pb);
    stats.initial_report = rep;
    stats.final_report = rep;
    if (rep.max_res() < opts.tol) {
        stats.converged = true;
        stats.seconds = seconds();
        return {std::move(st), std::move(stats)};
    }

    const double c_tau = std::min(std::sqrt(opts.tau), 1.0);
    double eps_k = opts.eps0;
    double delta_pow = 1.0;
    for (int k = 0; k < opts.max_outer; ++k) {
        const double delta_k = std::min(opts.delta_cap, delta_pow);
        Subproblem sp{&pb, st.y, st.S, st.X, st.U, st.sigma, opts.tau};
        SsnResult res = ssn_solve(sp, opts.ssn,
                                  SsnThresholds{c_tau / st.sigma * eps_k,
                                                c_tau / st.sigma * delta_k},
                                  st.y, st.S);
        st.y = res.eval.y;
        st.S = res.eval.S;
        st.X = res.eval.prox_r;
        st.U = res.eval.prox_qm;
        Z = (1.0 / st.sigma) * (st.X - res.eval.M);
        st.outer = k + 1;

        rep = residuals(st.X, st.y, st.S, Z, pb);
        stats.rows.push_back({k + 1, res.stats.iters, res.stats.cg_total,
                              res.stats.grad_norm, res.stats.thr_a, res.stats.met_a,
                              res.stats.met_b, rep.r_p, rep.r_d, rep.r_c, rep.r_g,
                              st.sigma, seconds()});
        for (const auto& rec : res.stats.cg) stats.cg.push_back(rec);
        stats.total_ssn += res.stats.iters;
        stats.total_cg += res.stats.cg_total;
        stats.total_evals += res.stats.evals;
        const double prev_max = stats.rows.size() > 1
                                    ? std::max(stats.rows[stats.rows.size() - 2].r_p,
                                               std::max(stats.rows[stats.rows.size() - 2].r_d,
                                                        stats.rows[stats.rows.size() - 2].r_c))
                                    : stats.initial_report.max_res();
        stats.final_report = rep;
        if (rep.max_res() < opts.tol) {
            stats.converged = true;
            break;
        }
        // sigma_k is nondecreasing; grow it only while the KKT residual is
        // not already contracting well at the current level.
        if (rep.max_res() > 0.2 * prev_max)
            st.sigma = std::min(opts.sigma_inf, opts.sigma_growth * st.sigma);
        eps_k *= opts.eps_decay;
        delta_pow *= opts.delta_decay;
    }
    stats.outer = static_cast<int>(stats.rows.size());
    stats.seconds = seconds();
    return {std::move(st), std::move(stats)};
}

}  // namespace cggm
