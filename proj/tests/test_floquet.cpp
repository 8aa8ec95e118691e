#include <cmath>
#include <numbers>

#include "checks/instances.hpp"
#include "checks/oracles.hpp"
#include "doctest.h"
#include "surflab/error.hpp"
#include "surflab/floquet.hpp"
#include "surflab/potential.hpp"
#include "surflab/spectral.hpp"

using namespace surflab;

namespace {

ErrorCode code_of(auto f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ConfigInvalid;
}

const PeriodicPotential kZero = [](const GridSpec& g) { return std::vector<double>(g.size(), 0.0); };

PeriodicPotential default_periodic() {
  const PotentialModel m = default_model();
  return [m](const GridSpec& g) { return m.periodic(g); };
}

double E0_of(const Hamiltonian& H) { return oracle::eigenvalues(H.dense_complex())[0]; }

}  // namespace

TEST_CASE("reduced operator on a single-site cell") {
  const GridSpec cell = build_grid(1, 1, 1, 1, 8);
  const double e0 = E0_of(reduced_operator(cell, kZero, {0.0, 0.0}));
  for (double t : {0.3, -1.1, 2.0, std::numbers::pi}) {
    const double et = E0_of(reduced_operator(cell, kZero, {t, 0.0}));
    CHECK(std::abs(et - e0 - 2.0 * (1.0 - std::cos(t))) <= 1e-12);
  }
  const Hamiltonian h0 = reduced_operator(cell, kZero, {0.0, 0.0});
  CHECK_FALSE(h0.is_complex());
  const GridSpec wide = build_grid(1, 1, 1, 3, 4);
  const PeriodicPotential U = checks::random_periodic(3, 11, 2);
  const auto p = oracle::eigenvalues(reduced_operator(wide, U, {0.7, 0.0}).dense_complex());
  const auto m = oracle::eigenvalues(reduced_operator(wide, U, {-0.7, 0.0}).dense_complex());
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(p[i] - m[i]) <= 1e-12);
  CHECK(code_of([&] { reduced_operator(wide.with_L(2), U, {0.0, 0.0}); }) == ErrorCode::InvalidParam);
}

TEST_CASE("ground state of the free cell and constant shifts") {
  const GridSpec cell = build_grid(1, 1, 1, 1, 8);
  const GroundStateRef ref = ground_state_cell(cell, kZero, 12);
  CHECK(std::abs(ref.E0 - 2.0 * (1.0 - std::cos(std::numbers::pi / 13))) <= 1e-12);
  for (double v : ref.psi0) CHECK(v > 0.0);
  CHECK(ref.residual <= 1e-10 * std::abs(ref.E0) + 1e-12);
  const PeriodicPotential c = [](const GridSpec& g) { return std::vector<double>(g.size(), 0.75); };
  const GroundStateRef shifted = ground_state_cell(cell, c, 12);
  CHECK(std::abs(shifted.E0 - ref.E0 - 0.75) <= 1e-12);
  for (std::size_t i = 0; i < ref.psi0.size(); ++i) CHECK(std::abs(shifted.psi0[i] - ref.psi0[i]) <= 1e-10);
  CHECK(code_of([&] { ground_state_cell(cell, kZero, 9); }) == ErrorCode::InvalidParam);
}

TEST_CASE("default instance has a surface state below the bulk") {
  const GridSpec cell = build_grid(1, 1, 1, 1, 16);
  const GroundStateRef ref = ground_state_cell(cell, default_periodic(), 18);
  CHECK(ref.E0 < 0.0);
  CHECK(ref.E1 - ref.E0 > 0.1);
}

TEST_CASE("averaged reduction identity") {
  const GridSpec cell = build_grid(1, 1, 1, 1, 16);
  const GroundStateRef ref = ground_state_cell(cell, default_periodic(), 18);
  const AveragedModel avg = averaged_reduction(ref, default_periodic());
  CHECK(avg.identity_residual <= 1e-10 * (1.0 + std::abs(avg.E0)));

  const GridSpec c48 = build_grid(1, 1, 1, 4, 8);
  for (std::uint64_t s = 1; s <= 5; ++s) {
    const PeriodicPotential U = checks::random_periodic(4, s, 2);
    const GroundStateRef r = ground_state_on(c48, U);
    const AveragedModel m = averaged_reduction(r, U);
    CHECK(m.identity_residual <= 1e-10 * (1.0 + std::abs(m.E0)));
    const HarnackConstants h = harnack_constants(r, m);
    CHECK(h.C1 > 0.0);
    CHECK(h.C1 <= h.C2);
  }

  const GridSpec c2 = build_grid(1, 1, 1, 2, 10);
  const PeriodicPotential sep = checks::separable([](int j) { return j == 0 || j == -1 ? -3.0 : 0.0; });
  const GroundStateRef r = ground_state_on(c2, sep);
  const AveragedModel m = averaged_reduction(r, sep);
  const std::vector<double> u = sep(c2);
  for (int j = 0; j < c2.M(); ++j) {
    CHECK(std::abs(m.U_bar[j] - u[j]) <= 1e-12);
    CHECK(std::abs(m.psi_bar[j] - 2.0 * r.psi0[j]) <= 1e-12);
  }
  const HarnackConstants h = harnack_constants(r, m);
  CHECK(std::abs(h.C1 - h.C2) <= 1e-12);
}

TEST_CASE("Harnack constants stabilize with depth") {
  const GridSpec cell = build_grid(1, 1, 1, 3, 12);
  const PeriodicPotential U = checks::random_periodic(3, 5, 3);
  auto H = [&](int M) {
    const GroundStateRef r = ground_state_on(cell.with_M(M), U);
    return harnack_constants(r, averaged_reduction(r, U));
  };
  const HarnackConstants a = H(24), b = H(48);
  CHECK(std::abs(a.C1 - b.C1) <= 0.01 * b.C1);
  CHECK(std::abs(a.C2 - b.C2) <= 0.01 * b.C2);
}

TEST_CASE("theta grid") {
  const auto g = theta_grid(1, 33);
  REQUIRE(g.size() == 33);
  CHECK(g[0][0] == -std::numbers::pi);
  CHECK(g[16][0] == 0.0);
  CHECK(g[32][0] == std::numbers::pi);
  CHECK(theta_grid(2, 5).size() == 25);
}

TEST_CASE("band curve") {
  SUBCASE("separable cells follow the free band exactly") {
    const GridSpec cell = build_grid(1, 1, 1, 2, 10);
    const PeriodicPotential sep = checks::separable([](int j) { return j == 0 ? -2.0 : 0.0; });
    const BandCurve b = band_curve(cell, sep, theta_grid(1, 17));
    for (std::size_t i = 0; i < b.E.size(); ++i) {
      CHECK(std::abs(b.dE[i] - b.kdisc[i]) <= 1e-9);
      CHECK(b.upper_margin[i] >= -1e-9);
    }
    CHECK(b.min_offset() >= -1e-9);
  }
  SUBCASE("default instance sandwich") {
    const GridSpec cell = build_grid(1, 1, 1, 1, 16);
    const BandCurve b = band_curve(cell, default_periodic(), theta_grid(1, 33));
    const double tol = 1e-9 * (1.0 + std::abs(b.E0));
    for (std::size_t i = 0; i < b.E.size(); ++i) {
      CHECK(b.lower_margin[i] >= -tol);
      CHECK(b.upper_margin_disc[i] >= -tol);
      CHECK(b.upper_margin[i] >= -tol);
    }
    CHECK(b.min_offset() >= -1e-9);
  }
  SUBCASE("random periodic 2D cell, parallel equals serial") {
    const GridSpec cell = build_grid(2, 1, 1, 2, 6);
    const PeriodicPotential U = checks::random_periodic(2, 3, 2);
    const BandCurve s = band_curve(cell, U, theta_grid(2, 5), 1);
    const BandCurve p = band_curve(cell, U, theta_grid(2, 5), 4);
    CHECK(s.E == p.E);
    const double tol = 1e-9 * (1.0 + std::abs(s.E0));
    for (std::size_t i = 0; i < s.E.size(); ++i) {
      CHECK(s.lower_margin[i] >= -tol);
      CHECK(s.upper_margin_disc[i] >= -tol);
    }
  }
  CHECK(code_of([] { band_curve(build_grid(1, 1, 1, 1, 4), kZero, {{0.5, 0.0}}); }) == ErrorCode::InvalidParam);
}

TEST_CASE("gap certificate") {
  SUBCASE("separable closed form") {
    const GridSpec cell = build_grid(1, 1, 1, 1, 16);
    const GroundStateRef ref = ground_state_cell(cell, default_periodic(), 18);
    const GapCertificate c = gap_certificate(default_periodic(), {8, 64}, ref);
    CHECK(std::abs(c.reports[0].gap - 2.0 * (1.0 - std::cos(std::numbers::pi / 8))) <= 1e-10);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    CHECK(std::abs(c.reports[1].gap * 64 * 64 - pi2) <= 0.05 * pi2);
    CHECK(std::abs(c.harnack.C1 - c.harnack.C2) <= 1e-12);
    for (const GapReport& r : c.reports) CHECK(r.certified());
  }
  SUBCASE("default instance and random cells") {
    const GridSpec cell = build_grid(1, 1, 1, 1, 16);
    const GroundStateRef ref = ground_state_cell(cell, default_periodic(), 18);
    for (const GapReport& r : gap_certificate(default_periodic(), {4, 8, 16}, ref).reports) {
      CHECK(r.margin >= -r.tol);
      CHECK(r.e0_error <= 10.0 * ref.residual);
    }
    const GridSpec c3 = build_grid(1, 1, 1, 3, 8);
    const PeriodicPotential U = checks::random_periodic(3, 9, 2);
    const GroundStateRef r3 = ground_state_cell(c3, U, 10);
    for (const GapReport& r : gap_certificate(U, {2, 4, 8}, r3).reports) {
      CHECK(r.margin >= 0.0);
      CHECK(r.e0_ok);
    }
  }
  SUBCASE("Dirichlet-x2 truncation error shrinks with depth") {
    const GridSpec cell = build_grid(1, 1, 1, 2, 40);
    const PeriodicPotential U = checks::random_periodic(2, 4, 1, -3.0, -1.0);
    const GroundStateRef ref = ground_state_on(cell, U);
    double prev = 0.0;
    for (int M : {4, 8, 16}) {
      const double err = lowest_k(chi_strip(U, ref, 4, M, BcKind::Dirichlet), 1, 1e-11).eigenvalues[0] - ref.E0;
      CHECK(err >= -1e-12);
      if (prev > 0.0) CHECK(err * 3.0 <= prev);
      prev = err;
    }
  }
  CHECK(code_of([] {
          const GridSpec cell = build_grid(1, 1, 1, 1, 4);
          gap_certificate(kZero, {1}, ground_state_cell(cell, kZero, 6));
        }) == ErrorCode::InvalidParam);
}
