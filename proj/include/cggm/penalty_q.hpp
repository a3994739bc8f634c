#pragma once

#include <utility>

#include "cggm/clustered_lasso.hpp"
#include "cggm/sym_mat.hpp"

namespace cggm {

// Lift of the clustered lasso to S^n: Q(X) = q(bmap(X)). The penalty only
// sees the strictly upper triangle; diagonals pass through every prox
// unchanged. Prox_{sigma Q} is realized by scaling (rho, lambda) by sigma
// inside q (Q is positively homogeneous).

inline double eval_Q(const SymMat& x, const ClusteredLassoParams& params) {
    const UpperVec u = bmap(x);
    return eval_q(u.v, params);
}

struct ProxQMatInfo {
    ProxQInfo inner;  // pattern of prox_q at 2*bmap(Y) with sigma-scaled params
    double sigma = 1.0;
    Index n = 1;
};

inline std::pair<SymMat, ProxQMatInfo> prox_Q_mat(const SymMat& y,
                                                  const ClusteredLassoParams& params,
                                                  double sigma) {
    if (sigma <= 0.0) throw ParameterError("prox_Q_mat: sigma must be > 0");
    UpperVec u = bmap(y);
    u.v *= 2.0;
    auto [x, inner] = prox_q(u.v, params.scaled(sigma));
    SymMat out = bstar(y.n(), x);
    const Vector d = y.diag();
    for (Index i = 0; i < y.n(); ++i) out.set(i, i, d[i]);
    ProxQMatInfo info;
    info.inner = std::move(inner);
    info.sigma = sigma;
    info.n = y.n();
    return {std::move(out), std::move(info)};
}

// Jacobian element: H -> Diag(diag(H)) + 2 bstar( W [bmap(H)] ).
inline SymMat jac_prox_Q_apply(const ProxQMatInfo& info, const SymMat& h) {
    if (h.n() != info.n)
        throw DimensionError("jac_prox_Q_apply: dimension mismatch with info");
    const UpperVec u = bmap(h);
    const Vector w = jac_prox_q_apply(info.inner, u.v);
    SymMat out = bstar(info.n, 2.0 * w);
    const Vector d = h.diag();
    for (Index i = 0; i < info.n; ++i) out.set(i, i, d[i]);
    return out;
}

// Moreau envelope of sigma*Q at V: 0.5||Xhat - V||^2 + sigma Q(Xhat).
inline double moreau_env_Q(const SymMat& v, const ClusteredLassoParams& params,
                           double sigma) {
    auto [xhat, info] = prox_Q_mat(v, params, sigma);
    return 0.5 * (xhat - v).squared_norm() + sigma * eval_Q(xhat, params);
}

}  // namespace cggm
