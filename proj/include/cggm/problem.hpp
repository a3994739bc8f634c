#pragma once

#include <memory>
#include <utility>

#include "cggm/clustered_lasso.hpp"
#include "cggm/constraints.hpp"
#include "cggm/sym_mat.hpp"

namespace cggm {

// One solver input: minimize <C,X> - mu log det X + Q(X) over X >= 0 with
// A X = b, where Q carries the (rho, lambda) clustered-lasso weights.
struct ProblemSpec {
    SymMat C;
    double mu = 1.0;
    ClusteredLassoParams penalty;
    std::shared_ptr<const LinearConstraints> constraints;

    Index n() const { return C.n(); }
    Index m() const { return constraints->m(); }
    const Vector& b() const { return constraints->rhs(); }
    const LinearConstraints& A() const { return *constraints; }
};

inline ProblemSpec make_problem(SymMat c, double mu, ClusteredLassoParams penalty,
                                std::shared_ptr<const LinearConstraints> a = nullptr) {
    if (mu <= 0.0) throw ParameterError("make_problem: mu must be > 0");
    ProblemSpec pb;
    pb.mu = mu;
    pb.penalty = penalty;
    if (!a) a = std::make_shared<EntrySelector>(EntrySelector::none(c.n()));
    if (a->n() != c.n())
        throw DimensionError("make_problem: constraint map dimension differs from C");
    pb.constraints = std::move(a);
    pb.C = std::move(c);
    return pb;
}

}  // namespace cggm
