#pragma once

// Randomized and closed-form problem instances shared by the unit tests, the
// acceptance binary and the CLI self-test.

#include <cstdint>
#include <functional>
#include <vector>

#include "surflab/floquet.hpp"
#include "surflab/hamiltonian.hpp"

namespace surflab::checks {

/// Periodic potential with values uniform in [lo, hi] on layers within `depth`
/// of the surface (0 elsewhere), hashed from (x1 mod a, layer offset).
PeriodicPotential random_periodic(int a, std::uint64_t seed, int depth, double lo = -2.0, double hi = 0.5);

/// x1-independent potential: value(offset) at layer offset j - M/2 (per x2 axis, summed).
PeriodicPotential separable(std::function<double(int offset)> value);

/// A random assembled Hamiltonian with at most max_sites sites: random grid,
/// random potential, random boundary conditions (Bloch included).
struct RandomInstance {
  GridSpec grid;
  std::vector<double> potential;
  BoundarySpec bcs;
};
RandomInstance random_instance(std::uint64_t seed, std::int64_t max_sites, bool allow_bloch = true);

}  // namespace surflab::checks
