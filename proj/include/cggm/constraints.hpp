#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cggm/errors.hpp"
#include "cggm/sym_mat.hpp"

namespace cggm {

// Linear map A: S^n -> R^m together with its adjoint and a solve with the
// Gram operator A A*. The solvers only see this interface.
class LinearConstraints {
public:
    virtual ~LinearConstraints() = default;

    virtual Index m() const = 0;
    virtual Index n() const = 0;
    virtual Vector apply(const SymMat& x) const = 0;
    virtual SymMat adjoint(const Vector& y) const = 0;
    // z with A A* z = v, residual <= 1e-12 (1 + ||v||).
    virtual Vector solve_gram(const Vector& v) const = 0;
    virtual const Vector& rhs() const = 0;
};

// Entry-selection constraints: (A X)_k = X_{i_k j_k} over strictly upper
// pairs. Covers pattern constraints X_ij = 0 (b = 0) and, with m = 0, the
// unconstrained model. For this family A A* = I/2 exactly, so the Gram
// solve is closed-form.
class EntrySelector final : public LinearConstraints {
public:
    // pairs are 0-based with i < j; duplicates and diagonal pairs rejected
    // (a diagonal of a positive definite matrix cannot be pinned to zero,
    // and uniqueness keeps A surjective).
    EntrySelector(Index n, std::vector<std::pair<Index, Index>> pairs, Vector b)
        : n_(n), pairs_(std::move(pairs)), b_(std::move(b)) {
        if (n_ < 1) throw DimensionError("EntrySelector: n must be >= 1");
        if (b_.size() != static_cast<Index>(pairs_.size()))
            throw DimensionError("EntrySelector: b length must equal the pair count");
        for (const auto& [i, j] : pairs_) {
            if (i == j)
                throw ParameterError(
                    "EntrySelector: diagonal pair (" + std::to_string(i + 1) + "," +
                    std::to_string(j + 1) + ") is not allowed");
            if (i < 0 || j < 0 || i >= j || j >= n_)
                throw ParameterError(
                    "EntrySelector: pair (" + std::to_string(i + 1) + "," +
                    std::to_string(j + 1) + ") must satisfy 1 <= i < j <= n");
        }
        auto sorted = pairs_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ParameterError("EntrySelector: duplicate constraint pair");
    }

    static EntrySelector none(Index n) { return EntrySelector(n, {}, Vector(0)); }

    Index m() const override { return static_cast<Index>(pairs_.size()); }
    Index n() const override { return n_; }

    Vector apply(const SymMat& x) const override {
        if (x.n() != n_) throw DimensionError("EntrySelector::apply: dimension mismatch");
        Vector out(m());
        for (Index k = 0; k < m(); ++k)
            out[k] = x(pairs_[static_cast<size_t>(k)].first,
                       pairs_[static_cast<size_t>(k)].second);
        return out;
    }

    SymMat adjoint(const Vector& y) const override {
        if (y.size() != m())
            throw DimensionError("EntrySelector::adjoint: vector length mismatch");
        SymMat out(n_);
        for (Index k = 0; k < m(); ++k)
            out.set(pairs_[static_cast<size_t>(k)].first,
                    pairs_[static_cast<size_t>(k)].second, 0.5 * y[k]);
        return out;
    }

    Vector solve_gram(const Vector& v) const override {
        if (v.size() != m())
            throw DimensionError("EntrySelector::solve_gram: vector length mismatch");
        return 2.0 * v;
    }

    const Vector& rhs() const override { return b_; }

    const std::vector<std::pair<Index, Index>>& pairs() const { return pairs_; }

private:
    Index n_;
    std::vector<std::pair<Index, Index>> pairs_;
    Vector b_;
};

}  // namespace cggm
