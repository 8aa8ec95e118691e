#include <cmath>
#include <numbers>

#include "doctest.h"
#include "surflab/error.hpp"
#include "surflab/potential.hpp"
#include "surflab/seed.hpp"

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

}  // namespace

TEST_CASE("periodic_bulk extends one cell") {
  const GridSpec g = build_grid(1, 1, 4, 3, 4);
  const GridSpec cell = g.cell(4);
  CHECK(periodic_bulk(g, std::vector<double>(cell.size(), 0.0)).values == std::vector<double>(g.size(), 0.0));
  CHECK(periodic_bulk(g, std::vector<double>(cell.size(), 2.5)).values == std::vector<double>(g.size(), 2.5));

  std::vector<double> cosine(cell.size());
  for (std::int64_t s = 0; s < cell.size(); ++s)
    cosine[s] = std::cos(2 * std::numbers::pi * cell.x1_coord(cell.coords(s).x1[0]));
  const auto f = periodic_bulk(g, cosine);
  // Shift by one cell (a sites along x1) reproduces the field exactly.
  for (std::int64_t s = 0; s < g.size(); ++s) {
    SiteCoords c = g.coords(s);
    if (c.x1[0] + g.a() >= g.n1()) continue;
    c.x1[0] += g.a();
    CHECK(f.values[s] == f.values[g.index(c)]);
  }
  CHECK(code_of([&] { periodic_bulk(g, std::vector<double>(3, 0.0)); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("surface_floor: compact single column") {
  const GridSpec g = build_grid(1, 1, 4, 1, 6);
  const auto f = surface_floor(g, SingleSiteProfile::compact(0.0, 0.5), -2.0);
  for (std::int64_t s = 0; s < g.size(); ++s) {
    const int j = g.coords(s).x2[0];
    CHECK(f.values[s] == ((j == 2 || j == 3) ? -2.0 : 0.0));
  }
  const auto z = surface_floor(g, SingleSiteProfile::compact(0.0, 0.5), 0.0);
  for (double v : z.values) CHECK(v == 0.0);
}

TEST_CASE("surface_floor: compact profile on a refined lattice hits one column per cell") {
  const GridSpec g = build_grid(1, 1, 3, 2, 4);
  const auto f = surface_floor(g, SingleSiteProfile::compact(0.0, 0.5), -1.0);
  for (std::int64_t s = 0; s < g.size(); ++s) {
    const SiteCoords c = g.coords(s);
    const bool col = c.x1[0] % 2 == 0;
    const bool layer = std::abs(g.x2_coord(c.x2[0])) <= 0.5;
    CHECK(f.values[s] == ((col && layer) ? -1.0 : 0.0));
  }
}

TEST_CASE("surface_floor: power-law truncation against a doubled radius") {
  const GridSpec g = build_grid(1, 1, 4, 1, 4);
  const double tol = 1e-6;
  const auto p1 = SingleSiteProfile::power_law(3.0, 0.5, 1500, 1.0, 1.0, tol);
  auto p2 = p1;
  p2.R = 3000;
  const auto f1 = surface_floor(g, p1, -2.0);
  const auto f2 = surface_floor(g, p2, -2.0);
  CHECK(f1.provenance.tail_bound <= tol * 2.0);
  for (std::int64_t s = 0; s < g.size(); ++s) {
    CHECK(std::abs(f1.values[s] - f2.values[s]) <= f1.provenance.tail_bound);
    if (f1.values[s] != 0.0) CHECK(std::abs(f1.values[s] - f2.values[s]) / std::abs(f2.values[s]) <= tol);
  }
  // Exact periodicity under the pinned coupling.
  for (std::int64_t s = 0; s + g.layer_size() < g.size(); ++s) CHECK(f1.values[s] == f1.values[s + g.layer_size()]);
}

TEST_CASE("surface_floor: tail bound enforced") {
  const GridSpec g = build_grid(1, 1, 4, 1, 4);
  CHECK(code_of([&] { surface_floor(g, SingleSiteProfile::power_law(1.5, 0.5, 64), -2.0); }) ==
        ErrorCode::TailTooLarge);
  CHECK(code_of([&] { SingleSiteProfile::power_law(0.9, 0.5, 64).validate(1); }) == ErrorCode::InvalidParam);
  CHECK(code_of([&] { SingleSiteProfile::power_law(3.5, 0.5, 64).validate(1); }) == ErrorCode::InvalidParam);
}

TEST_CASE("power-law tail bound dominates the true tail (d1 = 2)") {
  const auto p = SingleSiteProfile::power_law(3.0, 0.5, 6, 1.0, 1.0, 10.0);
  double tail = 0.0;
  for (int i = -400; i <= 400; ++i)
    for (int j = -400; j <= 400; ++j)
      if (std::max(std::abs(i), std::abs(j)) > p.R) tail += std::pow(std::hypot(i, j), -p.alpha);
  CHECK(tail <= p.tail_bound(2));
}

TEST_CASE("sample_surface: pinned couplings reproduce the floor bit-exactly") {
  const GridSpec g = build_grid(1, 1, 5, 2, 6);
  const auto prof = SingleSiteProfile::power_law(2.5, 0.5, 300, 1.0, 1.0, 1e-3);
  const auto floor = surface_floor(g, prof, -2.0);
  const auto pinned = surface_from_couplings(g, prof, [](const int*) { return -2.0; });
  CHECK(floor.values == pinned.values);
}

TEST_CASE("sample_surface: ordering, determinism and nesting") {
  const PotentialModel m = default_model();
  const GridSpec g = build_grid(1, 1, 8, 1, 8);
  const auto a = sample_surface(g, m.profile, m.dist, 1234);
  const auto b = sample_surface(g, m.profile, m.dist, 1234);
  CHECK(a.field.values == b.field.values);
  CHECK(a.couplings == b.couplings);
  const auto floor = surface_floor(g, m.profile, m.dist.q_min);
  for (std::int64_t s = 0; s < g.size(); ++s) {
    CHECK(floor.values[s] <= a.field.values[s]);
    CHECK(a.field.values[s] <= 0.0);
  }
  // A shorter strip sees the same impurities on its cells.
  const auto small = sample_surface(g.with_L(4), m.profile, m.dist, 1234);
  for (std::int64_t s = 0; s < g.with_L(4).size(); ++s) CHECK(small.field.values[s] == a.field.values[s]);
  for (int c = 0; c < 4; ++c) CHECK(small.couplings[c] == a.couplings[c]);
  // A deeper strip agrees on the shared middle layers.
  const GridSpec deep = g.with_M(12);
  const auto d = sample_surface(deep, m.profile, m.dist, 1234);
  for (std::int64_t s = 0; s < g.size(); ++s) {
    SiteCoords c = g.coords(s);
    c.x2[0] += 2;
    CHECK(d.field.values[deep.index(c)] == a.field.values[s]);
  }
}

TEST_CASE("coupling law of large numbers") {
  const auto dist = CouplingDistribution::uniform(-2.0, -1.0);
  const int n = 10000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const int cell[2] = {0, 0};
    const double q = coupling_at(seed::mix(std::uint64_t{99}, i), cell, 1, dist);
    CHECK(q >= -2.0);
    CHECK(q <= -1.0);
    sum += q;
    sum2 += q * q;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  CHECK(std::abs(mean + 1.5) <= 3 * se);

  const auto tp = CouplingDistribution::two_point(-2.0, -1.0, 0.7);
  CHECK(tp.quantile(0.69) == -2.0);
  CHECK(tp.quantile(0.71) == -1.0);
  CHECK(tp.mean() == doctest::Approx(-1.7));
  CHECK(code_of([] { CouplingDistribution::uniform(-1.0, 0.5).validate(); }) == ErrorCode::InvalidParam);
  CHECK(code_of([] { CouplingDistribution::uniform(-1.0, -1.0).validate(); }) == ErrorCode::InvalidParam);
}

TEST_CASE("sample_bulk") {
  const GridSpec g = build_grid(1, 1, 50, 1, 200);
  const auto none = sample_bulk(g, {}, 5);
  for (double v : none.values) CHECK(v == 0.0);
  const auto f = sample_bulk(g, {BulkRandomSpec::Kind::IidUniform, 1.0}, 5);
  double sum = 0.0, sum2 = 0.0;
  for (double v : f.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(f.values.size());
  const double mean = sum / n;
  CHECK(std::abs(mean - 0.5) <= 3 * std::sqrt((sum2 / n - mean * mean) / n));
  CHECK(sample_bulk(g, {BulkRandomSpec::Kind::IidUniform, 1.0}, 5).values == f.values);
}

TEST_CASE("realization total and CSV") {
  PotentialModel m = default_model();
  m.bulk = {BulkRandomSpec::Kind::IidUniform, 0.5};
  const GridSpec g = build_grid(1, 1, 3, 1, 4);
  const Realization r = m.realize(g, 77);
  const auto t = r.total();
  for (std::int64_t s = 0; s < g.size(); ++s) {
    CHECK(t[s] == (r.ub.values[s] + r.vb.values[s]) + r.vs.values[s]);
    CHECK(t[s] >= m.floor(g).total()[s]);
  }
  const std::string csv = realization_csv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == g.size() + 1);
  CHECK(csv.rfind("site,x1_0,x2_0,U_b,V_b,V_s\n", 0) == 0);
}

TEST_CASE("estimate_bulk_bottom") {
  const GridSpec cell = build_grid(1, 1, 1, 1, 4);
  const auto zero = estimate_bulk_bottom(cell, std::vector<double>(cell.size(), 0.0), 8);
  CHECK(std::abs(zero.lower) <= 1e-12);
  CHECK(zero.upper > 0.0);
  const auto c = estimate_bulk_bottom(cell, std::vector<double>(cell.size(), 0.75), 8);
  CHECK(c.lower <= 0.75 + 1e-12);
  CHECK(c.upper >= 0.75);

  const GridSpec cell2 = build_grid(1, 1, 1, 4, 4);
  std::vector<double> cosine(cell2.size());
  for (std::int64_t s = 0; s < cell2.size(); ++s)
    cosine[s] = 1.0 + std::cos(2 * std::numbers::pi * cell2.x1_coord(cell2.coords(s).x1[0]));
  const auto w1 = estimate_bulk_bottom(cell2, cosine, 8);
  const auto w2 = estimate_bulk_bottom(cell2, cosine, 16);
  CHECK(w2.upper - w2.lower < w1.upper - w1.lower);
}
