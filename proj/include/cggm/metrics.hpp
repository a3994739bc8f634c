#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "cggm/datagen.hpp"
#include "cggm/sym_mat.hpp"

namespace cggm {

// Estimation-quality metrics against a known ground truth.

// ||X - T||_F / ||T||_F; NaN flags a zero truth.
inline double rel_error(const SymMat& x, const SymMat& truth) {
    if (x.n() != truth.n())
        throw DimensionError("rel_error: dimension mismatch");
    const double tn = truth.norm();
    if (tn == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (x - truth).norm() / tn;
}

// Default magnitude cutoff declaring an estimated entry an edge.
inline double default_edge_threshold(const SymMat& x) {
    return 1e-5 * std::max(1.0, x.max_abs());
}

struct EdgeJudgement {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    double threshold = 0.0;
};

inline EdgeJudgement judge_edges(const SymMat& x,
                                 const std::vector<std::tuple<Index, Index, double>>& true_edges,
                                 double threshold) {
    if (threshold <= 0.0) throw ParameterError("judge_edges: threshold must be > 0");
    std::set<std::pair<Index, Index>> truth;
    for (const auto& [i, j, w] : true_edges) truth.emplace(i, j);
    EdgeJudgement jd;
    jd.threshold = threshold;
    for (Index j = 1; j < x.n(); ++j) {
        for (Index i = 0; i < j; ++i) {
            const bool est = std::abs(x(i, j)) > threshold;
            const bool tru = truth.count({i, j}) > 0;
            if (est && tru) ++jd.tp;
            else if (est && !tru) ++jd.fp;
            else if (!est && tru) ++jd.fn;
        }
    }
    return jd;
}

// FS = 2tp / (2tp + fn + fp); 1 iff the sparsity patterns match exactly.
inline double fscore(const EdgeJudgement& jd) {
    const long denom = 2 * jd.tp + jd.fn + jd.fp;
    if (denom == 0) return 1.0;  // both patterns empty
    return 2.0 * static_cast<double>(jd.tp) / static_cast<double>(denom);
}

inline double fscore(const SymMat& x, const GroundTruth& truth, double threshold) {
    return fscore(judge_edges(x, truth.edges, threshold));
}

}  // namespace cggm
