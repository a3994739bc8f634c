#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "cggm/diagnostics.hpp"
#include "cggm/logdet_prox.hpp"
#include "cggm/penalty_q.hpp"
#include "cggm/problem.hpp"

namespace cggm {

// Phase I: symmetric Gauss-Seidel ADMM on the dual. One iteration updates
// Z in closed form through the log-det prox, sweeps ybar -> S -> y through
// the Gram solve and Prox_Q, then takes the multiplier step on X.

struct AdmmOptions {
    double sigma0 = 1.0;
    double tau = 1.618;  // step length in (0, (1+sqrt(5))/2)
    double tol = 1e-6;
    int max_iter = 50000;
    int sigma_update_period = 20;
    double sigma_update_factor = 1.5;

    void validate() const {
        if (sigma0 <= 0.0) throw ParameterError("AdmmOptions: sigma0 must be > 0");
        if (tau <= 0.0 || tau >= 1.6180339887498949)
            throw ParameterError("AdmmOptions: tau must lie in (0, (1+sqrt(5))/2)");
        if (sigma_update_factor <= 1.0)
            throw ParameterError("AdmmOptions: sigma_update_factor must be > 1");
    }
};

struct IterRow {
    int iter = 0;
    double r_p = 0.0, r_d = 0.0, r_c = 0.0, r_g = 0.0;
    double sigma = 0.0;
    double seconds = 0.0;
};

struct AdmmState {
    SymMat X, Z, S;
    Vector y;
    double sigma = 1.0;
    int iter = 0;
    // residuals of the ADMM splitting itself, used for penalty balancing:
    // constraint violation ||C - A*y - Z - S|| and the cross-block dual
    // residual sigma ||A*(dy) + dS||
    double cons_res = 0.0;
    double mult_res = 0.0;
};

struct AdmmStats {
    std::vector<IterRow> history;
    ResidualReport final_report;
    int iters = 0;
    double seconds = 0.0;
    bool converged = false;
};

inline AdmmState admm_init(const ProblemSpec& pb, const AdmmOptions& opts) {
    AdmmState st{SymMat::identity(pb.n()), SymMat::identity(pb.n()),
                 SymMat(pb.n()), Vector::Zero(pb.m()), opts.sigma0, 0};
    return st;
}

inline void admm_step(AdmmState& st, const ProblemSpec& pb, const AdmmOptions& opts) {
    const double sigma = st.sigma;
    const double gamma = pb.mu * sigma;
    const auto& A = pb.A();

    const SymMat M = st.X - sigma * (pb.C - A.adjoint(st.y) - st.S);
    auto [phiM, cache] = prox_logdet(M, gamma);
    st.Z = (1.0 / sigma) * (phiM - M);

    const SymMat base = pb.C - st.Z - (1.0 / sigma) * st.X;
    const Vector ybar = A.solve_gram(A.apply(base - st.S) + pb.b() / sigma);

    const Vector y_old = st.y;
    const SymMat s_old = st.S;
    const SymMat V = -(base - A.adjoint(ybar));
    auto [pqV, info] = prox_Q_mat(V, pb.penalty, 1.0);
    st.S = pqV - V;

    st.y = A.solve_gram(A.apply(base - st.S) + pb.b() / sigma);

    const SymMat viol = pb.C - A.adjoint(st.y) - st.S - st.Z;
    st.cons_res = viol.norm();
    st.mult_res = sigma * (A.adjoint(st.y - y_old) + (st.S - s_old)).norm();
    st.X -= (opts.tau * sigma) * viol;
    ++st.iter;
}

inline std::pair<AdmmState, AdmmStats> admm_run(const ProblemSpec& pb,
                                                const AdmmOptions& opts,
                                                std::optional<AdmmState> init = {}) {
    opts.validate();
    const auto t0 = std::chrono::steady_clock::now();
    AdmmState st = init ? std::move(*init) : admm_init(pb, opts);
    AdmmStats stats;
    stats.final_report = residuals(st.X, st.y, st.S, st.Z, pb);
    auto seconds = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    while (st.iter < opts.max_iter) {
        admm_step(st, pb, opts);
        const ResidualReport rep = residuals(st.X, st.y, st.S, st.Z, pb);
        stats.history.push_back(
            {st.iter, rep.r_p, rep.r_d, rep.r_c, rep.r_g, st.sigma, seconds()});
        stats.final_report = rep;
        if (rep.max_res() > 1e8) {
            std::ostringstream os;
            os << "admm_run: divergence detected at iteration " << st.iter
               << " (R_P=" << rep.r_p << ", R_D=" << rep.r_d << ", R_C=" << rep.r_c
               << ", sigma=" << st.sigma << ")";
            throw NumericError(os.str());
        }
        if (rep.max_res() < opts.tol) {
            stats.converged = true;
            break;
        }
        // Penalty balancing; the paper leaves the sigma schedule open. A
        // lagging splitting-constraint residual calls for a larger penalty,
        // a lagging cross-block dual residual for a smaller one.
        if (opts.sigma_update_period > 0 && st.iter % opts.sigma_update_period == 0) {
            if (st.cons_res > 10.0 * st.mult_res)
                st.sigma *= opts.sigma_update_factor;
            else if (st.mult_res > 10.0 * st.cons_res)
                st.sigma /= opts.sigma_update_factor;
        }
    }
    stats.iters = st.iter;
    stats.seconds = seconds();
    return {std::move(st), std::move(stats)};
}

}  // namespace cggm
