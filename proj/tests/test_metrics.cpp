#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "cggm/metrics.hpp"
#include "oracles.hpp"

using namespace cggm;

TEST_CASE("rel_error worked examples") {
    auto rng = make_stream(91, "test.metrics.re");
    const SymMat t = oracles::random_spd(rng, 6);
    CHECK(rel_error(t, t) == 0.0);
    CHECK(rel_error(2.0 * t, t) == Catch::Approx(1.0));
    CHECK(std::isnan(rel_error(SymMat(3), SymMat(3))));
    REQUIRE_THROWS_AS(rel_error(SymMat(3), SymMat(4)), DimensionError);
}

TEST_CASE("fscore worked examples") {
    const EdgeJudgement perfect{5, 0, 0, 1e-5};
    CHECK(fscore(perfect) == 1.0);
    const EdgeJudgement mixed{2, 1, 1, 1e-5};
    CHECK(fscore(mixed) == Catch::Approx(2.0 / 3.0));
    const EdgeJudgement empty{0, 0, 0, 1e-5};
    CHECK(fscore(empty) == 1.0);
}

TEST_CASE("judge_edges counts against the truth edge set") {
    GroundTruth t;
    t.conc = SymMat(4);
    t.edges = {{0, 1, 1.0}, {2, 3, -0.5}};
    SymMat x(4);
    x.set(0, 1, 0.8);   // tp
    x.set(0, 2, 0.4);   // fp
    // (2,3) missed -> fn
    const EdgeJudgement jd = judge_edges(x, t.edges, 1e-3);
    CHECK(jd.tp == 1);
    CHECK(jd.fp == 1);
    CHECK(jd.fn == 1);
    CHECK(fscore(x, t, 1e-3) == Catch::Approx(0.5));
    REQUIRE_THROWS_AS(judge_edges(x, t.edges, 0.0), ParameterError);
}

TEST_CASE("metrics are invariant under simultaneous permutation") {
    auto rng = make_stream(92, "test.metrics.perm");
    const Index n = 7;
    const SymMat truth = oracles::random_spd(rng, n);
    SymMat est = truth;
    est.set(0, 3, est(0, 3) + 0.2);
    est.set(2, 5, est(2, 5) - 0.1);

    std::vector<Index> perm{3, 1, 4, 0, 6, 2, 5};
    Matrix p = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) p(perm[static_cast<size_t>(i)], i) = 1.0;
    const SymMat truth_p = SymMat::symmetrized(p.transpose() * truth.mat() * p);
    const SymMat est_p = SymMat::symmetrized(p.transpose() * est.mat() * p);

    REQUIRE(rel_error(est, truth) ==
            Catch::Approx(rel_error(est_p, truth_p)).epsilon(1e-12));

    auto edges_of = [&](const SymMat& m) {
        std::vector<std::tuple<Index, Index, double>> e;
        for (Index j = 1; j < n; ++j)
            for (Index i = 0; i < j; ++i)
                if (std::abs(m(i, j)) > 1e-9) e.emplace_back(i, j, m(i, j));
        return e;
    };
    const double f1 = fscore(judge_edges(est, edges_of(truth), 1e-6));
    const double f2 = fscore(judge_edges(est_p, edges_of(truth_p), 1e-6));
    REQUIRE(f1 == Catch::Approx(f2).epsilon(1e-12));
    REQUIRE(f1 >= 0.0);
    REQUIRE(f1 <= 1.0);
}

TEST_CASE("default threshold scales with the estimate") {
    SymMat small(3);
    small.set(0, 1, 0.5);
    CHECK(default_edge_threshold(small) == Catch::Approx(1e-5));
    SymMat big(3);
    big.set(0, 1, 400.0);
    CHECK(default_edge_threshold(big) == Catch::Approx(4e-3));
}
