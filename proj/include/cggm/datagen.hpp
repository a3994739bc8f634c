#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cggm/constraints.hpp"
#include "cggm/errors.hpp"
#include "cggm/rng.hpp"
#include "cggm/sym_mat.hpp"

namespace cggm {

// Synthetic instance generators and data ingestion. Every generator is
// deterministic per seed; independent parts draw from separate streams
// derived via (seed, purpose tag), see rng.hpp.

struct GroundTruth {
    SymMat conc;  // true concentration matrix or graph Laplacian
    std::vector<int> labels;  // per-coordinate cluster id; empty when none
    std::vector<std::tuple<Index, Index, double>> edges;  // i < j, edge weight
    std::string kind;
};

enum class SampleMode { inverse, pseudo };

namespace detail {

// Uniform composition of n into k parts, each >= 1: k-1 distinct cut points
// drawn from {1..n-1}.
inline std::vector<Index> random_composition(Index n, int k, RngStream& rng) {
    std::vector<Index> cuts;
    std::vector<Index> pool(static_cast<size_t>(n - 1));
    std::iota(pool.begin(), pool.end(), Index{1});
    for (int i = 0; i < k - 1; ++i) {
        const auto j = static_cast<size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1));
        cuts.push_back(pool[j]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
    }
    cuts.push_back(0);
    cuts.push_back(n);
    std::sort(cuts.begin(), cuts.end());
    std::vector<Index> sizes;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) sizes.push_back(cuts[i + 1] - cuts[i]);
    return sizes;
}

inline GroundTruth laplacian_from_edges(
    Index n, std::vector<std::tuple<Index, Index, double>> edges,
    std::vector<int> labels, std::string kind) {
    GroundTruth t;
    t.conc = SymMat(n);
    Vector deg = Vector::Zero(n);
    for (const auto& [i, j, w] : edges) {
        t.conc.set(i, j, -w);
        deg[i] += w;
        deg[j] += w;
    }
    for (Index i = 0; i < n; ++i) t.conc.set(i, i, deg[i]);
    t.edges = std::move(edges);
    t.labels = std::move(labels);
    t.kind = std::move(kind);
    return t;
}

}  // namespace detail

// Covariance-selection truth: clustered sparsity pattern with uniform
// [-1,1] entries, then shifted to positive definiteness by
//   S += I;  S += max(-1.2 lambda_min(S), 0.001) I.
// p_big: within-cluster entry probability; p_small: probability a cluster
// pair is linked; p_mid: entry probability inside a linked pair.
inline GroundTruth gen_covselect(Index n, int n_g, double p_big, double p_small,
                                 double p_mid, std::uint64_t seed) {
    if (n_g < 1 || static_cast<Index>(n_g) > n)
        throw ParameterError("gen_covselect: need 1 <= n_G <= n");
    for (double p : {p_big, p_small, p_mid})
        if (p < 0.0 || p > 1.0)
            throw ParameterError("gen_covselect: probabilities must be in [0,1]");

    RngStream size_rng = make_stream(seed, "covselect.sizes");
    RngStream pat_rng = make_stream(seed, "covselect.pattern");
    RngStream val_rng = make_stream(seed, "covselect.values");

    const std::vector<Index> sizes = detail::random_composition(n, n_g, size_rng);
    std::vector<int> labels(static_cast<size_t>(n));
    std::vector<Index> offset(static_cast<size_t>(n_g) + 1, 0);
    {
        Index pos = 0;
        for (int g = 0; g < n_g; ++g) {
            offset[static_cast<size_t>(g)] = pos;
            for (Index r = 0; r < sizes[static_cast<size_t>(g)]; ++r)
                labels[static_cast<size_t>(pos + r)] = g;
            pos += sizes[static_cast<size_t>(g)];
        }
        offset[static_cast<size_t>(n_g)] = pos;
    }

    // Linked cluster pairs, drawn in a fixed (g, h) order.
    std::vector<std::uint8_t> linked(static_cast<size_t>(n_g) * static_cast<size_t>(n_g), 0);
    for (int g = 0; g < n_g; ++g)
        for (int h = g + 1; h < n_g; ++h)
            linked[static_cast<size_t>(g) * static_cast<size_t>(n_g) +
                   static_cast<size_t>(h)] = pat_rng.bernoulli(p_small) ? 1 : 0;

    GroundTruth t;
    t.conc = SymMat(n);
    t.labels = std::move(labels);
    t.kind = "covselect";
    for (Index i = 0; i < n; ++i) t.conc.set(i, i, val_rng.uniform(-1.0, 1.0));
    for (Index j = 1; j < n; ++j) {
        for (Index i = 0; i < j; ++i) {
            const int gi = t.labels[static_cast<size_t>(i)];
            const int gj = t.labels[static_cast<size_t>(j)];
            bool present;
            if (gi == gj) {
                present = pat_rng.bernoulli(p_big);
            } else {
                const bool pair_linked =
                    linked[static_cast<size_t>(gi) * static_cast<size_t>(n_g) +
                           static_cast<size_t>(gj)] != 0;
                present = pair_linked && pat_rng.bernoulli(p_mid);
            }
            if (present) {
                const double v = val_rng.uniform(-1.0, 1.0);
                t.conc.set(i, j, v);
                t.edges.emplace_back(i, j, v);
            }
        }
    }

    Matrix shifted = t.conc.mat() + Matrix::Identity(n, n);
    const double lmin =
        Eigen::SelfAdjointEigenSolver<Matrix>(shifted).eigenvalues().minCoeff();
    shifted += std::max(-1.2 * lmin, 0.001) * Matrix::Identity(n, n);
    t.conc = SymMat::symmetrized(shifted);
    return t;
}

// t x t grid graph Laplacian, four nearest neighbours, weights uniform
// [0.1, 3]. Nodes are row-major.
inline GroundTruth gen_grid(int t, std::uint64_t seed) {
    if (t < 2) throw ParameterError("gen_grid: t must be >= 2");
    RngStream w_rng = make_stream(seed, "grid.weights");
    const Index n = static_cast<Index>(t) * t;
    std::vector<std::tuple<Index, Index, double>> edges;
    auto id = [t](int r, int c) { return static_cast<Index>(r) * t + c; };
    for (int r = 0; r < t; ++r) {
        for (int c = 0; c < t; ++c) {
            if (c + 1 < t)
                edges.emplace_back(id(r, c), id(r, c + 1), w_rng.uniform(0.1, 3.0));
            if (r + 1 < t)
                edges.emplace_back(id(r, c), id(r + 1, c), w_rng.uniform(0.1, 3.0));
        }
    }
    for (auto& e : edges)
        if (std::get<0>(e) > std::get<1>(e)) std::swap(std::get<0>(e), std::get<1>(e));
    std::sort(edges.begin(), edges.end());
    return detail::laplacian_from_edges(n, std::move(edges), {}, "grid");
}

// Modular (stochastic block) graph Laplacian: within-module edge
// probability p2, cross-module p1, weights uniform [0.1, 3]. Module sizes
// as equal as possible.
inline GroundTruth gen_modular(Index n, int n_g, double p1, double p2,
                               std::uint64_t seed) {
    if (n_g < 1 || static_cast<Index>(n_g) > n)
        throw ParameterError("gen_modular: need 1 <= n_G <= n");
    RngStream e_rng = make_stream(seed, "modular.edges");
    RngStream w_rng = make_stream(seed, "modular.weights");
    std::vector<int> labels(static_cast<size_t>(n));
    const Index q = n / n_g, r = n % n_g;
    Index pos = 0;
    for (int g = 0; g < n_g; ++g) {
        const Index size = q + (g < static_cast<int>(r) ? 1 : 0);
        for (Index i = 0; i < size; ++i) labels[static_cast<size_t>(pos++)] = g;
    }
    std::vector<std::tuple<Index, Index, double>> edges;
    for (Index j = 1; j < n; ++j)
        for (Index i = 0; i < j; ++i) {
            const double p =
                labels[static_cast<size_t>(i)] == labels[static_cast<size_t>(j)] ? p2
                                                                                 : p1;
            if (e_rng.bernoulli(p)) edges.emplace_back(i, j, w_rng.uniform(0.1, 3.0));
        }
    return detail::laplacian_from_edges(n, std::move(edges), std::move(labels),
                                        "modular");
}

// p samples from N(0, conc^{-1}) (mode inverse) or N(0, conc^dagger)
// (mode pseudo): z = sum_{lambda_i > tol} P_i g_i / sqrt(lambda_i), with
// tol = 1e-10 relative to lambda_max. Returns p x n, one sample per row.
inline Matrix sample_gaussian(const GroundTruth& truth, Index p, std::uint64_t seed,
                              SampleMode mode) {
    (void)mode;  // both modes share the thresholded factor
    const Index n = truth.conc.n();
    const EigDecomp e = eigh(truth.conc);
    if (e.d.minCoeff() < -1e-8)
        throw NumericError("sample_gaussian: concentration matrix has a negative "
                           "eigenvalue below -1e-8");
    const double lmax = std::max(e.d.maxCoeff(), 0.0);
    const double tol = 1e-10 * std::max(lmax, 1e-300);
    Matrix factor(n, n);  // columns P_i / sqrt(lambda_i) for retained modes
    Index kept = 0;
    for (Index i = 0; i < n; ++i) {
        if (e.d[i] > tol) factor.col(kept++) = e.P.col(i) / std::sqrt(e.d[i]);
    }
    RngStream rng = make_stream(seed, "samples");
    Matrix out(p, n);
    Vector g(kept);
    for (Index s = 0; s < p; ++s) {
        for (Index i = 0; i < kept; ++i) g[i] = rng.normal();
        out.row(s) = (factor.leftCols(kept) * g).transpose();
    }
    return out;
}

// C = (1/p) sum (z_i - zbar)(z_i - zbar)^T, divisor p.
inline SymMat sample_cov(const Matrix& samples) {
    const Index p = samples.rows();
    if (p < 2) throw ParameterError("sample_cov: need at least 2 samples");
    const Vector mean = samples.colwise().mean();
    const Matrix centered = samples.rowwise() - mean.transpose();
    return SymMat::symmetrized(centered.transpose() * centered / static_cast<double>(p));
}

// Pattern constraints from known zeros: strictly upper pairs with a true
// zero and index gap >= 5, right-hand side 0.
inline EntrySelector build_jset(const GroundTruth& truth) {
    const Index n = truth.conc.n();
    std::vector<std::pair<Index, Index>> pairs;
    for (Index j = 1; j < n; ++j)
        for (Index i = 0; i < j; ++i)
            if (truth.conc(i, j) == 0.0 && j - i >= 5) pairs.emplace_back(i, j);
    Vector b = Vector::Zero(static_cast<Index>(pairs.size()));
    return EntrySelector(n, std::move(pairs), std::move(b));
}

// Input matrix for categorical (non-Gaussian) observations:
// sample covariance plus I/3.
inline SymMat categorical_cov(const Matrix& table) {
    SymMat c = sample_cov(table);
    Matrix shifted =
        c.mat() + Matrix::Identity(c.n(), c.n()) / 3.0;
    return SymMat::symmetrized(shifted);
}

}  // namespace cggm
