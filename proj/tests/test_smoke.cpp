#include <catch2/catch_amalgamated.hpp>

#include "cggm/cggm.hpp"
#include "cggm/io.hpp"

TEST_CASE("headers compile and basic types work") {
    cggm::SymMat x = cggm::SymMat::identity(3);
    REQUIRE(x.n() == 3);
    REQUIRE(cggm::bmap(x).v.norm() == 0.0);
}
