#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cggm/io.hpp"
#include "oracles.hpp"

using namespace cggm;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("cggm_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

}  // namespace

TEST_CASE("matrix market round trip (array symmetric)") {
    TempDir tmp;
    auto rng = make_stream(101, "test.io.mm");
    const SymMat x = oracles::random_sym(rng, 7, 3.0);
    write_matrix_market(tmp.file("x.mtx"), x);
    const SymMat back = read_sym_matrix_market(tmp.file("x.mtx"));
    REQUIRE((back - x).norm() <= 1e-14 * (1.0 + x.norm()));
}

TEST_CASE("matrix market coordinate formats") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("coord_sym.mtx"));
        out << "%%MatrixMarket matrix coordinate real symmetric\n"
            << "% a comment line\n"
            << "3 3 3\n"
            << "1 1 2.0\n"
            << "2 1 0.5\n"
            << "3 3 -1.0\n";
    }
    const SymMat a = read_sym_matrix_market(tmp.file("coord_sym.mtx"));
    CHECK(a(0, 0) == 2.0);
    CHECK(a(0, 1) == 0.5);
    CHECK(a(1, 0) == 0.5);
    CHECK(a(2, 2) == -1.0);

    {
        std::ofstream out(tmp.file("coord_gen.mtx"));
        out << "%%MatrixMarket matrix coordinate real general\n"
            << "2 2 3\n"
            << "1 2 0.25\n"
            << "2 1 0.25\n"
            << "1 1 1.0\n";
    }
    const SymMat b = read_sym_matrix_market(tmp.file("coord_gen.mtx"));
    CHECK(b(0, 1) == 0.25);

    {
        std::ofstream out(tmp.file("asym.mtx"));
        out << "%%MatrixMarket matrix coordinate real general\n"
            << "2 2 2\n"
            << "1 2 1.0\n"
            << "2 1 2.0\n";
    }
    REQUIRE_THROWS_AS(read_sym_matrix_market(tmp.file("asym.mtx")), ParseError);
}

TEST_CASE("symmetry tolerance: small asymmetry is averaged away") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("near.mtx"));
        out << std::setprecision(17);
        out << "%%MatrixMarket matrix coordinate real general\n"
            << "2 2 3\n"
            << "1 1 1.0\n"
            << "1 2 " << 0.5 + 4e-9 << "\n"
            << "2 1 " << 0.5 - 4e-9 << "\n";
    }
    const SymMat a = read_sym_matrix_market(tmp.file("near.mtx"));
    CHECK(a(0, 1) == Catch::Approx(0.5).margin(1e-12));
    CHECK(a(0, 1) == a(1, 0));
}

TEST_CASE("csv matrix round trip and parse errors") {
    TempDir tmp;
    auto rng = make_stream(102, "test.io.csv");
    Matrix m(4, 3);
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 3; ++j) m(i, j) = rng.normal();
    write_csv_matrix(tmp.file("m.csv"), m);
    const Matrix back = read_csv_matrix(tmp.file("m.csv"));
    REQUIRE((back - m).norm() <= 1e-14 * (1.0 + m.norm()));

    {
        std::ofstream out(tmp.file("bad.csv"));
        out << "1.0,2.0\n1.0,zebra\n";
    }
    try {
        read_csv_matrix(tmp.file("bad.csv"));
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find(":2") != std::string::npos);  // row of the bad cell
        CHECK(msg.find("zebra") != std::string::npos);
    }

    REQUIRE_THROWS_AS(read_csv_matrix(tmp.file("missing.csv")), IoError);
}

TEST_CASE("symmetric csv applies the symmetry check") {
    TempDir tmp;
    {
        std::ofstream out(tmp.file("sym.csv"));
        out << "1.0,0.25\n0.25,2.0\n";
    }
    const SymMat a = read_sym_csv(tmp.file("sym.csv"));
    CHECK(a(0, 1) == 0.25);
    {
        std::ofstream out(tmp.file("asym.csv"));
        out << "1.0,0.3\n0.1,2.0\n";
    }
    REQUIRE_THROWS_AS(read_sym_csv(tmp.file("asym.csv")), ParseError);
}

TEST_CASE("constraint file round trip and validation") {
    TempDir tmp;
    EntrySelector sel(5, {{0, 1}, {1, 4}}, (Vector(2) << 0.0, 0.25).finished());
    write_constraints(tmp.file("cons.txt"), sel);
    const EntrySelector back = read_constraints(tmp.file("cons.txt"), 5);
    REQUIRE(back.m() == 2);
    CHECK(back.pairs()[0] == std::make_pair(Index{0}, Index{1}));
    CHECK(back.pairs()[1] == std::make_pair(Index{1}, Index{4}));
    CHECK(back.rhs()[1] == 0.25);

    {
        std::ofstream out(tmp.file("diag.txt"));
        out << "2 2 0.0\n";
    }
    REQUIRE_THROWS_AS(read_constraints(tmp.file("diag.txt"), 5), ParseError);
    {
        std::ofstream out(tmp.file("rev.txt"));
        out << "3 2 0.0\n";
    }
    REQUIRE_THROWS_AS(read_constraints(tmp.file("rev.txt"), 5), ParseError);
}

TEST_CASE("ground truth json round trip") {
    TempDir tmp;
    const GroundTruth t = gen_modular(12, 3, 0.05, 0.6, 4);
    write_matrix_market(tmp.file("conc.mtx"), t.conc);
    write_truth_json(tmp.file("truth.json"), t, "conc.mtx");
    const GroundTruth back = read_truth_json(tmp.file("truth.json"));
    REQUIRE(back.kind == "modular");
    REQUIRE(back.labels == t.labels);
    REQUIRE(back.edges == t.edges);
    REQUIRE((back.conc - t.conc).norm() <= 1e-12 * (1.0 + t.conc.norm()));
}

TEST_CASE("edge export conventions") {
    TempDir tmp;
    SymMat x(3);
    x.set(0, 1, -0.5);
    const auto edges = detected_edges(x, 1e-5);
    REQUIRE(edges.size() == 1);
    CHECK(std::get<0>(edges[0]) == 0);
    CHECK(std::get<1>(edges[0]) == 1);
    CHECK(std::get<2>(edges[0]) == 0.5);

    const SymMat diag = SymMat::identity(4);
    REQUIRE(detected_edges(diag, 1e-5).empty());

    write_edges_dot(tmp.file("g.dot"), edges, 3);
    write_edges_csv(tmp.file("g.csv"), edges);
    std::ifstream dot(tmp.file("g.dot"));
    std::string all((std::istreambuf_iterator<char>(dot)),
                    std::istreambuf_iterator<char>());
    CHECK(all.find("graph estimate {") != std::string::npos);
    CHECK(all.find("1 -- 2 [weight=0.5]") != std::string::npos);
    CHECK(all.rfind("}") != std::string::npos);
}
