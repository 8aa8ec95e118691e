#include "doctest.h"
#include "surflab/seed.hpp"

using namespace surflab;

TEST_CASE("seed test vectors") {
  CHECK(seed::finalize(0x9E3779B97F4A7C15ULL) == 0xE220A8397B1DCDAFULL);
  CHECK(seed::mix(std::uint64_t{0}, std::uint64_t{0}) == 0x48218226FF3CD4BFULL);
  CHECK(seed::mix(std::uint64_t{42}, 7) == 0xD56FD4491D82A4DDULL);
  CHECK(seed::mix(std::uint64_t{42}, -1) == 0x0DCAA9F26429308EULL);
  CHECK(seed::unit(0xD56FD4491D82A4DDULL) == doctest::Approx(0.8337376287941063).epsilon(1e-15));
}

TEST_CASE("unit maps into [0,1)") {
  CHECK(seed::unit(0) == 0.0);
  CHECK(seed::unit(~std::uint64_t{0}) < 1.0);
}

TEST_CASE("mix is not symmetric") {
  CHECK(seed::mix(std::uint64_t{3}, 5) != seed::mix(std::uint64_t{5}, 3));
}
