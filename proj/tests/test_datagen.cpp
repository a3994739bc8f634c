#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <set>

#include "cggm/datagen.hpp"
#include "oracles.hpp"

using namespace cggm;

TEST_CASE("gen_covselect output is PD, deterministic, and respects limits") {
    const GroundTruth t1 = gen_covselect(30, 5, 0.8, 0.2, 0.5, 42);
    const GroundTruth t2 = gen_covselect(30, 5, 0.8, 0.2, 0.5, 42);
    REQUIRE((t1.conc.mat() - t2.conc.mat()).norm() == 0.0);
    REQUIRE(t1.labels == t2.labels);

    const Vector ev =
        Eigen::SelfAdjointEigenSolver<Matrix>(t1.conc.mat()).eigenvalues();
    REQUIRE(ev.minCoeff() > 0.0);

    const GroundTruth t3 = gen_covselect(30, 5, 0.8, 0.2, 0.5, 43);
    REQUIRE((t1.conc.mat() - t3.conc.mat()).norm() > 0.0);

    REQUIRE_THROWS_AS(gen_covselect(4, 9, 0.8, 0.2, 0.5, 1), ParameterError);
    REQUIRE_THROWS_AS(gen_covselect(4, 2, 1.5, 0.2, 0.5, 1), ParameterError);
}

TEST_CASE("gen_covselect PD shift arithmetic") {
    // the shift leaves lambda_min at either ~0.001 or 0.2|lambda_min before|
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const GroundTruth t = gen_covselect(25, 4, 0.8, 0.2, 0.5, seed);
        const Vector ev =
            Eigen::SelfAdjointEigenSolver<Matrix>(t.conc.mat()).eigenvalues();
        REQUIRE(ev.minCoeff() >= 0.001 * (1.0 - 1e-6));
    }
}

TEST_CASE("gen_covselect degenerate probabilities give a dense pattern") {
    const GroundTruth t = gen_covselect(10, 1, 1.0, 0.0, 0.0, 7);
    REQUIRE(t.edges.size() == 45);  // every strictly-upper pair present
    for (int lab : t.labels) REQUIRE(lab == 0);
}

TEST_CASE("gen_grid shapes and Laplacian structure") {
    const GroundTruth t2 = gen_grid(2, 1);
    REQUIRE(t2.conc.n() == 4);
    REQUIRE(t2.edges.size() == 4);

    const GroundTruth t8 = gen_grid(8, 1);
    REQUIRE(t8.conc.n() == 64);
    REQUIRE(t8.edges.size() == 112);  // 2 t (t-1)

    // row sums vanish; rank n-1 for a connected graph
    const Vector rowsum = t8.conc.mat().rowwise().sum();
    REQUIRE(rowsum.cwiseAbs().maxCoeff() <= 1e-12);
    const Vector ev =
        Eigen::SelfAdjointEigenSolver<Matrix>(t8.conc.mat()).eigenvalues();
    REQUIRE(std::abs(ev.minCoeff()) <= 1e-10);
    Index zero_count = 0;
    for (Index i = 0; i < ev.size(); ++i)
        if (std::abs(ev[i]) <= 1e-8) ++zero_count;
    REQUIRE(zero_count == 1);

    REQUIRE_THROWS_AS(gen_grid(1, 1), ParameterError);
}

TEST_CASE("gen_modular cliques and expected edge counts") {
    const GroundTruth cliques = gen_modular(12, 3, 0.0, 1.0, 5);
    REQUIRE(cliques.edges.size() == 3 * 6);  // three K4 blocks
    for (const auto& [i, j, w] : cliques.edges)
        REQUIRE(cliques.labels[static_cast<size_t>(i)] ==
                cliques.labels[static_cast<size_t>(j)]);

    // (64, 4): within-module pair count 4*C(16,2) = 480, expectation 144 at
    // p2 = 0.3; the mean over 20 seeds should sit within 4 standard errors
    double total = 0.0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        const GroundTruth t = gen_modular(64, 4, 0.0, 0.3, 100 + s);
        total += static_cast<double>(t.edges.size());
    }
    const double mean = total / seeds;
    const double se = std::sqrt(480.0 * 0.3 * 0.7 / seeds);
    REQUIRE(std::abs(mean - 144.0) <= 4.0 * se);

    const GroundTruth t = gen_modular(20, 4, 0.05, 0.4, 9);
    const Vector ev =
        Eigen::SelfAdjointEigenSolver<Matrix>(t.conc.mat()).eigenvalues();
    REQUIRE(ev.minCoeff() >= -1e-10);
    REQUIRE(std::abs(ev.minCoeff()) <= 1e-10);
}

TEST_CASE("sample_gaussian: law of large numbers for conc = I") {
    GroundTruth t;
    t.conc = SymMat::identity(5);
    t.kind = "test";
    const Matrix z = sample_gaussian(t, 10000, 11, SampleMode::inverse);
    REQUIRE(z.rows() == 10000);
    REQUIRE(z.cols() == 5);
    const SymMat c = sample_cov(z);
    REQUIRE((c.mat() - Matrix::Identity(5, 5)).norm() <= 0.1);
}

TEST_CASE("sample_gaussian annihilates the Laplacian null space") {
    const GroundTruth t = gen_grid(3, 2);
    const Matrix z = sample_gaussian(t, 50, 2, SampleMode::pseudo);
    for (Index s = 0; s < z.rows(); ++s)
        REQUIRE(std::abs(z.row(s).sum()) <= 1e-8);
}

TEST_CASE("sample_gaussian is deterministic and validates input") {
    const GroundTruth t = gen_grid(3, 2);
    const Matrix z1 = sample_gaussian(t, 30, 7, SampleMode::pseudo);
    const Matrix z2 = sample_gaussian(t, 30, 7, SampleMode::pseudo);
    REQUIRE((z1 - z2).norm() == 0.0);

    GroundTruth bad;
    bad.conc = SymMat(2);
    bad.conc.set(0, 0, 1.0);
    bad.conc.set(1, 1, -1.0);
    REQUIRE_THROWS_AS(sample_gaussian(bad, 10, 1, SampleMode::pseudo), NumericError);
}

TEST_CASE("sample_cov worked examples") {
    Matrix z(2, 2);
    z << 1.0, 0.0, -1.0, 0.0;
    const SymMat c = sample_cov(z);
    CHECK(c(0, 0) == Catch::Approx(1.0));
    CHECK(c(0, 1) == 0.0);
    CHECK(c(1, 1) == 0.0);

    Matrix same(3, 2);
    same << 2.0, 3.0, 2.0, 3.0, 2.0, 3.0;
    CHECK(sample_cov(same).norm() == 0.0);

    REQUIRE_THROWS_AS(sample_cov(Matrix::Zero(1, 3)), ParameterError);

    auto rng = make_stream(81, "test.samplecov.psd");
    Matrix r(20, 6);
    for (Index i = 0; i < r.rows(); ++i)
        for (Index j = 0; j < r.cols(); ++j) r(i, j) = rng.normal();
    const Vector ev =
        Eigen::SelfAdjointEigenSolver<Matrix>(sample_cov(r).mat()).eigenvalues();
    REQUIRE(ev.minCoeff() >= -1e-12);
}

TEST_CASE("build_jset worked examples") {
    GroundTruth dense;
    dense.conc = SymMat(8);
    for (Index j = 0; j < 8; ++j)
        for (Index i = 0; i <= j; ++i) dense.conc.set(i, j, 1.0);
    REQUIRE(build_jset(dense).m() == 0);

    GroundTruth diag;
    diag.conc = SymMat::identity(10);
    REQUIRE(build_jset(diag).m() == 15);  // gaps 5..9: 5+4+3+2+1

    GroundTruth banded;
    banded.conc = SymMat::identity(10);
    for (Index i = 0; i + 2 < 10; ++i) {
        banded.conc.set(i, i + 1, 0.5);
        banded.conc.set(i, i + 2, 0.25);
    }
    REQUIRE(build_jset(banded).m() == 15);
}

TEST_CASE("categorical_cov shifts by I/3") {
    Matrix constant(5, 3);
    constant.setOnes();
    const SymMat c = categorical_cov(constant);
    REQUIRE((c.mat() - Matrix::Identity(3, 3) / 3.0).norm() <= 1e-15);

    auto rng = make_stream(82, "test.categorical");
    Matrix table(40, 6);
    for (Index i = 0; i < table.rows(); ++i)
        for (Index j = 0; j < table.cols(); ++j)
            table(i, j) = rng.bernoulli(0.5) ? 1.0 : 0.0;
    const Vector ev =
        Eigen::SelfAdjointEigenSolver<Matrix>(categorical_cov(table).mat())
            .eigenvalues();
    REQUIRE(ev.minCoeff() >= 1.0 / 3.0 - 1e-12);
}
