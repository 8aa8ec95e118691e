#include "checks/instances.hpp"

#include <cmath>
#include <numbers>

#include "surflab/seed.hpp"

namespace surflab::checks {

PeriodicPotential random_periodic(int a, std::uint64_t seed, int depth, double lo, double hi) {
  return [=](const GridSpec& g) {
    std::vector<double> v(g.size(), 0.0);
    for (std::int64_t s = 0; s < g.size(); ++s) {
      const SiteCoords c = g.coords(s);
      std::uint64_t z = seed;
      bool inside = true;
      for (int k = 0; k < g.d1(); ++k) z = seed::mix(z, c.x1[k] % a);
      for (int k = 0; k < g.d2(); ++k) {
        const int off = c.x2[k] - g.M() / 2;
        inside = inside && off >= -depth && off < depth;
        z = seed::mix(z, off);
      }
      if (inside) v[s] = lo + (hi - lo) * seed::unit(z);
    }
    return v;
  };
}

PeriodicPotential separable(std::function<double(int offset)> value) {
  return [value](const GridSpec& g) {
    std::vector<double> v(g.size(), 0.0);
    for (std::int64_t s = 0; s < g.size(); ++s) {
      const SiteCoords c = g.coords(s);
      for (int k = 0; k < g.d2(); ++k) v[s] += value(c.x2[k] - g.M() / 2);
    }
    return v;
  };
}

RandomInstance random_instance(std::uint64_t seed, std::int64_t max_sites, bool allow_bloch) {
  std::uint64_t ctr = 0;
  auto next = [&] { return seed::unit(seed::mix(seed, ctr++)); };
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(next() * (hi - lo + 1)); };
  for (;;) {
    const int d1 = pick(1, 2), d2 = pick(1, 2), a = pick(1, 3), L = pick(1, 8), M = 2 * pick(1, 6);
    double n = 1;
    for (int k = 0; k < d1; ++k) n *= a * L;
    for (int k = 0; k < d2; ++k) n *= M;
    if (n > static_cast<double>(max_sites) || n < 4) continue;
    RandomInstance r;
    r.grid = build_grid(d1, d2, L, a, M);
    r.potential.resize(r.grid.size());
    const double amp = 4.0 * next();
    for (double& v : r.potential) v = amp * (next() - 0.7);
    const int kind = pick(0, allow_bloch ? 3 : 2);
    if (kind == 0) r.bcs = BoundarySpec::dirichlet();
    if (kind == 1) r.bcs = BoundarySpec::neumann();
    if (kind == 2) r.bcs = BoundarySpec::make(pick(0, 1) ? BcKind::Neumann : BcKind::Dirichlet,
                                              pick(0, 1) ? BcKind::Neumann : BcKind::Dirichlet);
    if (kind == 3)
      r.bcs = BoundarySpec::bloch({std::numbers::pi * (2 * next() - 1), std::numbers::pi * (2 * next() - 1)},
                                  pick(0, 1) ? BcKind::Neumann : BcKind::Dirichlet);
    return r;
  }
}

}  // namespace surflab::checks
