#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "surflab/grid.hpp"

namespace surflab {

/// Single-site alloy profile f(x1, x2) = f0 * g(x1) * 1{|x2|_inf <= w2}.
/// Compact: g = 1{|x1|_inf <= w1}. PowerLaw: g = max(1, |x1|)^-alpha, summed
/// over impurities with |x1 - i|_inf <= R.
struct SingleSiteProfile {
  enum class Kind { Compact, PowerLaw };
  Kind kind = Kind::Compact;
  double f0 = 1.0;
  double w1 = 0.0;   ///< Compact x1 half-width
  double w2 = 0.5;   ///< x2 half-width of the support box F2
  double alpha = 1.5;
  double f_u = 1.0;  ///< PowerLaw lower amplitude, 0 < f_u <= f0
  int R = 64;        ///< PowerLaw truncation radius in cells
  double tol = 1e-8; ///< admissible truncated tail, relative to |q_min|

  static SingleSiteProfile compact(double w1, double w2, double f0 = 1.0);
  static SingleSiteProfile power_law(double alpha, double w2, int R, double f0 = 1.0,
                                     double f_u = 1.0, double tol = 1e-8);

  /// Throws InvalidParam unless the profile satisfies its class bounds for d1.
  void validate(int d1) const;
  /// Value at continuum offset (x1 - i, x2).
  double operator()(const double* dx1, int d1, double x2_inf) const;
  /// Impurities i with |x1 - i|_inf <= radius() contribute at x1.
  double radius() const;
  /// Upper bound on f0 * sum of g over the impurities outside the window.
  double tail_bound(int d1) const;
};

/// Law of one coupling q_i. Support lies in [q_min, q_max] with q_max < 0.
struct CouplingDistribution {
  enum class Kind { Uniform, TwoPoint };
  Kind kind = Kind::Uniform;
  double q_min = -2.0;
  double q_max = -1.0;
  double p = 0.5;  ///< TwoPoint: probability of q_min; p = 1 is the point mass at q_min

  static CouplingDistribution uniform(double q_min, double q_max);
  static CouplingDistribution two_point(double q_min, double q_max, double p);

  void validate() const;
  /// Maps u in [0,1) to a coupling.
  double quantile(double u) const;
  double mean() const;
  double variance() const;
};

/// Per-site i.i.d. nonnegative bulk disorder.
struct BulkRandomSpec {
  enum class Kind { None, IidUniform };
  Kind kind = Kind::None;
  double v_max = 0.0;

  void validate() const;
};

/// Record of how a field was produced. Hashes are FNV-1a over the value bytes.
struct Provenance {
  std::string source;
  std::uint64_t seed = 0;
  std::uint64_t hash = 0;
  double tail_bound = 0.0;
};

struct PotentialField {
  GridSpec grid;
  std::vector<double> values;
  Provenance provenance;

  static PotentialField zeros(const GridSpec& grid, std::string source = "zero");
};

/// A realized potential V = U_b + V_b + V_s, kept by component.
struct Realization {
  PotentialField ub;
  PotentialField vb;
  PotentialField vs;
  std::vector<double> couplings;  ///< one per cell of the grid, x1 axis 0 fastest

  /// (U_b + V_b) + V_s, summed in this order at every site.
  std::vector<double> total() const;
  std::uint64_t hash() const;
};

std::uint64_t fnv1a(const std::vector<double>& values);

/// Extends a one-cell function (cell grid with the same M) periodically in x1.
/// Throws ShapeMismatch on a size mismatch.
PotentialField periodic_bulk(const GridSpec& grid, const std::vector<double>& cell_function);

/// Deterministic floor U_s = sum_i q_min f(x1 - i, x2). Throws TailTooLarge.
PotentialField surface_floor(const GridSpec& grid, const SingleSiteProfile& profile, double q_min);

/// Coupling of impurity i (d1 integer coordinates) for a realization seed.
double coupling_at(std::uint64_t seed, const int* cell, int d1, const CouplingDistribution& dist);

struct SurfaceSample {
  std::vector<double> couplings;
  PotentialField field;
};

/// Alloy surface potential for one realization. Couplings are a pure function
/// of (seed, impurity position), so nested grids see the same impurities.
SurfaceSample sample_surface(const GridSpec& grid, const SingleSiteProfile& profile,
                             const CouplingDistribution& dist, std::uint64_t seed);

/// Alloy sum with caller-supplied couplings, in the same summation order as
/// sample_surface and surface_floor.
PotentialField surface_from_couplings(const GridSpec& grid, const SingleSiteProfile& profile,
                                      const std::function<double(const int* cell)>& coupling);

/// Bulk disorder for one realization, hashed from lattice coordinates relative
/// to the surface, so different M agree on shared layers.
PotentialField sample_bulk(const GridSpec& grid, const BulkRandomSpec& spec, std::uint64_t seed);

/// Everything needed to draw realizations.
struct PotentialModel {
  SingleSiteProfile profile;
  CouplingDistribution dist;
  BulkRandomSpec bulk;
  /// One-cell U_b as a function of the cell grid; empty means U_b = 0.
  std::function<std::vector<double>(const GridSpec& cell)> ub_cell;

  /// U_b on any grid.
  PotentialField bulk_field(const GridSpec& grid) const;
  /// U_per = U_b + U_s on any grid.
  std::vector<double> periodic(const GridSpec& grid) const;
  Realization realize(const GridSpec& grid, std::uint64_t seed) const;
  /// All couplings pinned at q_min, V_b = 0.
  Realization floor(const GridSpec& grid) const;
};

/// The instance used throughout the acceptance suite: d1 = d2 = 1, a = 1,
/// one-column Compact profile on the two middle layers, Uniform(-2, -1).
PotentialModel default_model();

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Bracket of the bulk bottom inf spec(-Delta + U_b): Neumann and Dirichlet
/// ground energies on a probe box with M_probe layers and M_probe / a cells.
/// ub_cell is given on `cell` and extended to deeper layers by its edge values.
Interval estimate_bulk_bottom(const GridSpec& cell, const std::vector<double>& ub_cell, int M_probe);

/// CSV dump: site, x1 coords, x2 coords, U_b, V_b, V_s, at 17 significant digits.
std::string realization_csv(const Realization& r);

}  // namespace surflab
