#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "cggm/errors.hpp"
#include "cggm/sym_mat.hpp"

namespace cggm {

// Clustered lasso on R^d:  q(x) = rho*||x||_1 + lambda*p(x)  with
// p(x) = sum_{k<l} |x_k - x_l|.  Evaluation uses the sorted inner-product
// identity p(x) = <w, x_sorted_desc>, w_k = d - 2k + 1, in O(d log d).
// The proximal map factors through a sort, an isotonic projection (PAV)
// and a soft threshold; the pattern of that computation gives an O(d)
// generalized-Jacobian-vector product.

struct ClusteredLassoParams {
    double rho = 0.0;
    double lambda = 0.0;

    ClusteredLassoParams() = default;
    ClusteredLassoParams(double rho_, double lambda_) : rho(rho_), lambda(lambda_) {
        if (rho < 0.0 || lambda < 0.0)
            throw ParameterError("ClusteredLassoParams: weights must be >= 0");
    }

    ClusteredLassoParams scaled(double sigma) const {
        return ClusteredLassoParams(sigma * rho, sigma * lambda);
    }
};

inline double eval_p(const Vector& x) {
    const Index d = x.size();
    if (d < 2) return 0.0;
    std::vector<double> s(x.data(), x.data() + d);
    std::sort(s.begin(), s.end(), std::greater<double>());
    double acc = 0.0;
    for (Index k = 0; k < d; ++k)
        acc += static_cast<double>(d - 2 * k - 1) * s[static_cast<size_t>(k)];
    return acc;
}

// Euclidean projection onto the non-increasing cone {x : x_1 >= ... >= x_d}.
// Single left-to-right pass with weighted pool merging.
inline Vector project_isotonic(const Vector& y) {
    const Index d = y.size();
    Vector out(d);
    if (d == 0) return out;
    std::vector<double> sum(static_cast<size_t>(d));
    std::vector<Index> cnt(static_cast<size_t>(d));
    size_t top = 0;
    for (Index i = 0; i < d; ++i) {
        sum[top] = y[i];
        cnt[top] = 1;
        ++top;
        while (top >= 2 &&
               sum[top - 2] * static_cast<double>(cnt[top - 1]) <
                   sum[top - 1] * static_cast<double>(cnt[top - 2])) {
            sum[top - 2] += sum[top - 1];
            cnt[top - 2] += cnt[top - 1];
            --top;
        }
    }
    Index pos = 0;
    for (size_t b = 0; b < top; ++b) {
        const double mean = sum[b] / static_cast<double>(cnt[b]);
        for (Index r = 0; r < cnt[b]; ++r) out[pos++] = mean;
    }
    return out;
}

// Pattern data from a prox_q evaluation. perm is the stable non-increasing
// sorting permutation of the input (perm[k] = original index of the k-th
// sorted entry); active[i] marks equal consecutive entries of the projected
// sorted vector; thresh[i] marks entries (original order) surviving the
// soft threshold; blocks are the maximal runs of sorted positions linked by
// active (singletons included), partitioning {0..d-1}.
struct ProxQInfo {
    std::vector<Index> perm;
    std::vector<std::uint8_t> active;
    std::vector<std::uint8_t> thresh;
    std::vector<std::pair<Index, Index>> blocks;  // [begin, end) sorted positions

    Index dim() const { return static_cast<Index>(perm.size()); }
};

struct ProxLambdaPResult {
    Vector value;
    std::vector<Index> perm;
    std::vector<std::uint8_t> active;
};

namespace detail {

inline std::vector<Index> stable_sort_desc(const Vector& y) {
    std::vector<Index> perm(static_cast<size_t>(y.size()));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::stable_sort(perm.begin(), perm.end(),
                     [&](Index a, Index b) { return y[a] > y[b]; });
    return perm;
}

inline std::vector<std::pair<Index, Index>> runs_from_active(
    const std::vector<std::uint8_t>& active, Index d) {
    std::vector<std::pair<Index, Index>> blocks;
    Index begin = 0;
    for (Index i = 0; i + 1 < d; ++i) {
        if (!active[static_cast<size_t>(i)]) {
            blocks.emplace_back(begin, i + 1);
            begin = i + 1;
        }
    }
    if (d > 0) blocks.emplace_back(begin, d);
    return blocks;
}

}  // namespace detail

// Prox_{lambda p}(y) = P_y^T Pi_D(P_y y - lambda w).
inline ProxLambdaPResult prox_lambda_p(const Vector& y, double lambda) {
    if (lambda < 0.0) throw ParameterError("prox_lambda_p: lambda must be >= 0");
    const Index d = y.size();
    ProxLambdaPResult r;
    r.perm = detail::stable_sort_desc(y);
    Vector z(d);
    for (Index k = 0; k < d; ++k)
        z[k] = y[r.perm[static_cast<size_t>(k)]] -
               lambda * static_cast<double>(d - 2 * k - 1);
    const Vector proj = project_isotonic(z);
    r.value.resize(d);
    for (Index k = 0; k < d; ++k) r.value[r.perm[static_cast<size_t>(k)]] = proj[k];
    r.active.assign(d > 0 ? static_cast<size_t>(d - 1) : 0, 0);
    for (Index i = 0; i + 1 < d; ++i)
        r.active[static_cast<size_t>(i)] = (proj[i] == proj[i + 1]) ? 1 : 0;
    return r;
}

inline double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

// Prox_q(y) = Prox_{rho||.||_1}(Prox_{lambda p}(y)).
inline std::pair<Vector, ProxQInfo> prox_q(const Vector& y,
                                           const ClusteredLassoParams& params) {
    ProxLambdaPResult pl = prox_lambda_p(y, params.lambda);
    const Index d = y.size();
    Vector x(d);
    ProxQInfo info;
    info.thresh.assign(static_cast<size_t>(d), 0);
    for (Index i = 0; i < d; ++i) {
        x[i] = soft_threshold(pl.value[i], params.rho);
        info.thresh[static_cast<size_t>(i)] =
            (std::abs(pl.value[i]) > params.rho) ? 1 : 0;
    }
    info.perm = std::move(pl.perm);
    info.active = std::move(pl.active);
    info.blocks = detail::runs_from_active(info.active, d);
    return {std::move(x), std::move(info)};
}

inline double eval_q(const Vector& x, const ClusteredLassoParams& params) {
    return params.rho * x.lpNorm<1>() + params.lambda * eval_p(x);
}

// W*h for the generalized Jacobian element
//   W = Theta P_y^T (I - B^T (Sigma B B^T Sigma)^+ B) P_y.
// The middle projector acts on the permuted vector by replacing every
// active-linked block with its mean; the pseudoinverse is never formed.
inline Vector jac_prox_q_apply(const ProxQInfo& info, const Vector& h) {
    const Index d = info.dim();
    if (h.size() != d)
        throw DimensionError("jac_prox_q_apply: direction length mismatch");
    Vector hs(d);
    for (Index k = 0; k < d; ++k) hs[k] = h[info.perm[static_cast<size_t>(k)]];
    for (const auto& [a, b] : info.blocks) {
        if (b - a <= 1) continue;
        double mean = 0.0;
        for (Index k = a; k < b; ++k) mean += hs[k];
        mean /= static_cast<double>(b - a);
        for (Index k = a; k < b; ++k) hs[k] = mean;
    }
    Vector out(d);
    for (Index k = 0; k < d; ++k) out[info.perm[static_cast<size_t>(k)]] = hs[k];
    for (Index i = 0; i < d; ++i)
        if (!info.thresh[static_cast<size_t>(i)]) out[i] = 0.0;
    return out;
}

}  // namespace cggm
