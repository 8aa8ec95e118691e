#include "doctest.h"
#include "surflab/error.hpp"
#include "surflab/grid.hpp"

using namespace surflab;

TEST_CASE("grid sizes") {
  CHECK(build_grid(1, 1, 2, 1, 2).size() == 4);
  const GridSpec g = build_grid(1, 1, 8, 2, 16);
  CHECK(g.size() == 256);
  CHECK(g.h() == 0.5);
  CHECK(build_grid(2, 1, 4, 1, 8).size() == 128);
}

TEST_CASE("grid validation") {
  auto code = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ConfigInvalid;
  };
  CHECK(code([] { build_grid(1, 1, 2, 1, 3); }) == ErrorCode::InvalidParam);
  CHECK(code([] { build_grid(3, 1, 2, 1, 2); }) == ErrorCode::InvalidParam);
  CHECK(code([] { build_grid(1, 0, 2, 1, 2); }) == ErrorCode::InvalidParam);
  CHECK(code([] { build_grid(2, 2, 4096, 1, 64); }) == ErrorCode::CapExceeded);
}

TEST_CASE("index maps round-trip and x2 is centered") {
  for (const GridSpec& g : {build_grid(1, 1, 3, 2, 4), build_grid(2, 2, 2, 2, 4), build_grid(2, 1, 3, 1, 6)}) {
    for (std::int64_t s = 0; s < g.size(); ++s) CHECK(g.index(g.coords(s)) == s);
    CHECK(g.x2_coord(0) == doctest::Approx(-g.M() * g.h() / 2 + g.h() / 2));
    CHECK(g.x2_coord(g.M() / 2 - 1) == doctest::Approx(-g.h() / 2));
    CHECK(g.x2_coord(g.M() / 2) == doctest::Approx(g.h() / 2));
  }
}

TEST_CASE("neighbors: counts and bond symmetry") {
  for (const GridSpec& g : {build_grid(1, 1, 2, 1, 2), build_grid(2, 1, 3, 2, 4), build_grid(2, 2, 2, 1, 4)}) {
    std::int64_t interior = 0;
    for (std::int64_t s = 0; s < g.size(); ++s) {
      const auto arms = g.neighbors(s);
      REQUIRE(arms.size() == static_cast<std::size_t>(2 * g.dims()));
      int tags = 0;
      for (const Arm& a : arms) {
        if (a.interior()) {
          ++interior;
          bool back = false;
          for (const Arm& b : g.neighbors(a.neighbor))
            if (b.neighbor == s && b.axis == a.axis && b.dir == -a.dir) back = true;
          CHECK(back);
        } else {
          ++tags;
        }
      }
      CHECK(tags == 2 * g.dims() - static_cast<int>(std::count_if(arms.begin(), arms.end(),
                                                                  [](const Arm& a) { return a.interior(); })));
    }
    CHECK(interior % 2 == 0);
  }
}

TEST_CASE("neighbors: corner and interior sites") {
  const GridSpec g = build_grid(1, 1, 2, 1, 2);
  int tags = 0;
  for (const Arm& a : g.neighbors(0)) tags += !a.interior();
  CHECK(tags == 2);
  const GridSpec big = build_grid(1, 1, 5, 1, 6);
  const std::int64_t mid = big.index({{2, 0}, {3, 0}});
  for (const Arm& a : big.neighbors(mid)) CHECK(a.interior());
  // Top layer: only the x2-positive arm leaves the domain.
  const std::int64_t top = big.index({{2, 0}, {5, 0}});
  for (const Arm& a : big.neighbors(top)) CHECK(a.interior() == !(a.axis == 1 && a.dir == 1));
}
