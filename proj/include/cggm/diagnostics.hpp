#pragma once

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>

#include "cggm/penalty_q.hpp"
#include "cggm/problem.hpp"
#include "cggm/sym_mat.hpp"

namespace cggm {

// KKT residuals and objective values; the single stopping authority for
// both solver phases. dobj omits Q*(-S), which is 0 at any dual-feasible S
// (Q is positively homogeneous); dual infeasibility surfaces through
// R_D/R_C instead.
struct ResidualReport {
    double r_p = 0.0;
    double r_d = 0.0;
    double r_c = 0.0;
    double r_g = 0.0;
    double pobj = 0.0;
    double dobj = 0.0;
    bool gap_valid = true;

    double max_res() const { return std::max(r_p, std::max(r_d, r_c)); }
};

// log det of a PD matrix via Cholesky; ok = false if the factorization
// detects an indefinite input.
inline double logdet_psd(const SymMat& a, bool& ok) {
    Eigen::LLT<Matrix> llt(a.mat());
    if (llt.info() != Eigen::Success) {
        ok = false;
        return 0.0;
    }
    ok = true;
    return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

inline ResidualReport residuals(const SymMat& x, const Vector& y, const SymMat& s,
                                const SymMat& z, const ProblemSpec& pb) {
    const double inf = std::numeric_limits<double>::infinity();
    ResidualReport r;
    const Index n = pb.n();
    const double mu = pb.mu;

    const Vector ax = pb.A().apply(x);
    r.r_p = (ax - pb.b()).norm() / (1.0 + pb.b().norm());

    const SymMat d = pb.C - pb.A().adjoint(y) - s - z;
    r.r_d = d.norm() / (1.0 + pb.C.norm());

    const Matrix xz = x.mat() * z.mat();
    const double comp1 = (xz - mu * Matrix::Identity(n, n)).norm() /
                         (1.0 + x.norm() + z.norm());
    auto [pq, info] = prox_Q_mat(x - s, pb.penalty, 1.0);
    const double comp2 = (x - pq).norm() / (1.0 + x.norm() + s.norm());
    r.r_c = std::max(comp1, comp2);

    bool okx = false, okz = false;
    const double ldx = logdet_psd(x, okx);
    const double ldz = logdet_psd(z, okz);
    r.pobj = okx ? dot(pb.C, x) - mu * ldx + eval_Q(x, pb.penalty) : inf;
    r.dobj = okz ? pb.b().dot(y) + mu * ldz + n * mu - n * mu * std::log(mu) : -inf;

    if (std::isfinite(r.pobj) && std::isfinite(r.dobj)) {
        r.r_g = std::abs(r.pobj - r.dobj) / (1.0 + std::abs(r.pobj) + std::abs(r.dobj));
        r.gap_valid = true;
    } else {
        r.r_g = 1.0;
        r.gap_valid = false;
    }
    return r;
}

}  // namespace cggm
