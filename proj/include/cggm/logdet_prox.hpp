#pragma once

#include <cmath>
#include <utility>

#include "cggm/errors.hpp"
#include "cggm/sym_mat.hpp"

namespace cggm {

// Proximal machinery for r(X) = -log det(X). The scalar map
// phi_mu(x) = (sqrt(x^2 + 4 mu) + x)/2, applied spectrally, is Prox_{mu r};
// its Frechet derivative is a Hadamard multiplier in the eigenbasis.

// Positive root of z^2 - x z - mu = 0. Evaluated as 2mu/(sqrt(x^2+4mu)-x)
// for x < 0 to avoid cancellation when |x| >> mu.
inline double phi_plus(double x, double mu) {
    if (mu <= 0.0) throw ParameterError("phi_plus: mu must be > 0");
    const double s = std::sqrt(x * x + 4.0 * mu);
    if (x >= 0.0) return 0.5 * (s + x);
    return 2.0 * mu / (s - x);
}

// Eigendecomposition of the prox input plus everything the semismooth
// Newton inner loop needs to apply the derivative matrix-free: the phi
// values and the dense coefficient matrix Omega, all entries in (0,1).
struct EigCache {
    EigDecomp decomp;
    double mu = 1.0;
    Vector phid;
    Matrix omega;

    Index n() const { return decomp.d.size(); }

    // log det Prox_{mu r}(M), free from the cached phi values.
    double logdet_prox() const {
        double acc = 0.0;
        for (Index i = 0; i < phid.size(); ++i) acc += std::log(phid[i]);
        return acc;
    }
};

inline EigCache make_eig_cache(EigDecomp decomp, double mu) {
    if (mu <= 0.0) throw ParameterError("prox_logdet: mu must be > 0");
    EigCache c;
    c.decomp = std::move(decomp);
    c.mu = mu;
    const Index n = c.decomp.d.size();
    c.phid.resize(n);
    Vector root(n);
    for (Index i = 0; i < n; ++i) {
        const double x = c.decomp.d[i];
        root[i] = std::sqrt(x * x + 4.0 * mu);
        c.phid[i] = (x >= 0.0) ? 0.5 * (root[i] + x) : 2.0 * mu / (root[i] - x);
    }
    c.omega.resize(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i)
            c.omega(i, j) = (c.phid[i] + c.phid[j]) / (root[i] + root[j]);
    return c;
}

inline SymMat prox_from_cache(const EigCache& c) {
    const Matrix z = c.decomp.P * c.phid.asDiagonal() * c.decomp.P.transpose();
    return SymMat::symmetrized(z);
}

// Prox_{mu r}(M) = P Diag(phi_mu(d)) P^T, M = P Diag(d) P^T. The result Z
// is positive definite and satisfies Z(Z - M) = mu I.
inline std::pair<SymMat, EigCache> prox_logdet(const SymMat& m, double mu) {
    EigCache c = make_eig_cache(eigh(m), mu);
    return {prox_from_cache(c), std::move(c)};
}

// Derivative of the prox at the cached point: H -> P(Omega o (P^T H P))P^T.
inline SymMat dphi_apply(const EigCache& c, const SymMat& h) {
    if (h.n() != c.n())
        throw DimensionError("dphi_apply: dimension mismatch with cache");
    const Matrix& p = c.decomp.P;
    const Matrix b = p.transpose() * h.mat() * p;
    const Matrix out = p * c.omega.cwiseProduct(b) * p.transpose();
    return SymMat::symmetrized(out);
}

// Moreau envelope of g*r at M: 0.5||Z-M||^2 - g log det Z, Z = Prox_{g r}(M).
inline double moreau_env_logdet(const SymMat& m, double g) {
    auto [z, cache] = prox_logdet(m, g);
    return 0.5 * (z - m).squared_norm() - g * cache.logdet_prox();
}

}  // namespace cggm
