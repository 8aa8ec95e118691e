#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "surflab/floquet.hpp"
#include "surflab/hamiltonian.hpp"
#include "surflab/potential.hpp"

namespace surflab {

/// U_per = U_b + U_s of a model as a periodic potential.
PeriodicPotential periodic_potential(const PotentialModel& model);

/// Ground energy E0 of the periodic operator against the bulk bottom.
struct S4Check {
  double E0 = 0.0;
  Interval bulk;          ///< Neumann / Dirichlet bracket of inf spec(-Delta + U_b)
  bool holds() const { return E0 < bulk.lower; }
};
/// Uses a reference of depth M + 2 over `cell` and a bulk probe of depth 2 M.
S4Check check_s4(const PotentialModel& model, const GridSpec& cell);

/// Ensemble over realizations V_i with seeds mix(seed, i) on `grid`.
struct IdssConfig {
  GridSpec grid;
  PotentialModel model;
  BcKind x1 = BcKind::Dirichlet;  ///< D, N or Mezincescu
  BcKind x2 = BcKind::Dirichlet;  ///< Dirichlet, or Mezincescu for the full chi variant
  std::vector<double> energies;   ///< ascending
  std::int64_t n_samples = 100;
  std::uint64_t seed = 1;
  int workers = 1;
  std::shared_ptr<const GroundStateRef> ref;  ///< built on demand for Mezincescu faces
  bool check_preconditions = true;            ///< S4 and energies below the bulk bottom
};

struct IdssCurve {
  std::vector<double> energies;
  std::vector<double> mean;  ///< mean count_below / L^d1
  std::vector<double> se;
  std::vector<double> cp_upper;  ///< 95% Clopper-Pearson bound on P{count > 0} / L^d1
  std::int64_t n_samples = 0;
  int L = 0, M = 0, a = 0;
  std::string bc;  ///< "D", "N" or "chi"
  std::uint64_t seed = 0;
  /// Per-sample counts, one row per realization.
  std::vector<std::vector<double>> counts;
  /// Fraction of realizations with count > 0, per energy.
  std::vector<double> probability_positive() const;
};

/// Boundary spec for an ensemble config, building the reference if needed.
BoundarySpec ensemble_bcs(IdssConfig& cfg);

/// Throws S4Violated, InvalidParam (energies not ascending or above the bulk
/// bottom), and solver errors.
IdssCurve idss_estimate(IdssConfig cfg);

/// Same ensemble without OpenMP, for cross-checking and benchmarks.
IdssCurve idss_estimate_serial(IdssConfig cfg);

struct BracketingReport {
  std::vector<double> energies;
  std::vector<std::int64_t> count_dd;  ///< x1 Dirichlet, x2 Dirichlet, depth M
  std::vector<std::int64_t> count_nd;  ///< x1 Neumann, x2 Dirichlet, depth M
  std::vector<int> Ms;
  std::vector<std::vector<std::int64_t>> count_by_M;  ///< x1 `x1`, x2 Dirichlet, per M
  int M_stab = -1;  ///< smallest M from which all later counts agree (-1: never)
};

/// Neumann-Dirichlet bracketing and M-stabilization for the realization with
/// `seed` (grids nested in M). Throws InequalityViolated with the witness energy.
BracketingReport bracketing_check(const PotentialModel& model, std::uint64_t seed, const GridSpec& grid,
                                  const std::vector<double>& energies, const std::vector<int>& Ms,
                                  BcKind x1 = BcKind::Dirichlet);

struct SandwichReport {
  std::vector<double> energies;
  std::vector<double> lower, lower_se;    ///< P{E0(H^D(V)) < E} / L^d1
  std::vector<double> middle, middle_se;  ///< IDSS estimate with full Mezincescu faces
  std::vector<double> upper, upper_se;    ///< count(H^chi_per, E) / L^d1 * P{E0(H^chi(V)) < E}
  std::vector<bool> holds;                ///< within three standard errors
  bool all() const;
};

/// Both ensembles share the realizations of `cfg` (x1/x2 fields are ignored).
SandwichReport sandwich_check(IdssConfig cfg);

/// Quantum-case reducing profile: f_u sum_j min(rho_j, cap) 1_{F1}(x1 - j) on
/// the x1 sites of `grid`, with rho_j = q_j - q_min from `couplings`.
std::vector<double> quantum_reduction(const GridSpec& grid, const SingleSiteProfile& profile,
                                      const std::vector<double>& couplings, double q_min, double cap);

/// Classical-case reducing profile: scale * f_u sum_{|j - c|_inf > R} min(rho_j, 1)
/// max(1, |x1 - j|)^-alpha, c the domain center.
std::vector<double> classical_reduction(const GridSpec& grid, const SingleSiteProfile& profile,
                                        const std::vector<double>& couplings, double q_min, double R, double scale);

/// W_R(x1) 1_{F2}(x2) as a site field.
std::vector<double> extend_reduction(const GridSpec& grid, const SingleSiteProfile& profile,
                                     const std::vector<double>& w_x1);

struct TempleTail {
  double bound = 0.0;     ///< E0 + <W>/2
  double temple = 0.0;    ///< full Temple value with lambda1 = E1(H^chi_{per,L})
  double shift = 0.0;     ///< <W> / 2
  double gap = 0.0;       ///< E1 - E0 of H^chi_{per,L}
  double sup_W = 0.0;
  double direct = 0.0;    ///< E0(H^chi_{per,L} + W) by eigensolve
  double margin() const { return direct - bound; }
};

/// Lower bound on the ground energy of H^chi_{per,L} + W (W a site field on
/// the strip of depth M_ref - 2) from Temple's inequality with trial psi0.
/// Throws GapTooSmall unless sup W <= gap / 3.
TempleTail temple_tail_bound(const PeriodicPotential& U, const GroundStateRef& ref, int L,
                             const std::vector<double>& W);

struct RayleighTail {
  double bound = 0.0;     ///< Rayleigh quotient of the cut-off trial for H^{D,D}(V)
  double E0 = 0.0;        ///< reference E0
  double penalty = 0.0;   ///< RQ for U_per minus E0 (cutoff and x2 truncation)
  double coupling = 0.0;  ///< sum (V_s - U_s) u^2 / |u|^2
  double bulk = 0.0;      ///< sum V_b u^2 / |u|^2
  double direct = 0.0;    ///< E0(H^{D,D}(V)) by eigensolve
  double margin() const { return bound - direct; }
};

/// Rayleigh-Ritz upper bound with trial psi0 times prod_j sin(pi (s_j + 1) / (a L + 1)).
RayleighTail rayleigh_tail_bound(const Realization& r, const PotentialModel& model, const GroundStateRef& ref);

struct LifshitsFit {
  double E_lo = 0.0, E_hi = 0.0;  ///< window (E_lo, E_hi]
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
};

/// Least squares of ln|ln N| against ln(E - E0) over window points with
/// 0 < N < 1. Throws TooFewPoints below 5 usable points.
LifshitsFit lifshits_fit(const std::vector<double>& energies, const std::vector<double>& N, double E0, double E_lo,
                         double E_hi);

/// n energies E0 + delta with delta geometric from delta_max down over `decades`.
std::vector<double> geometric_energies(double E0, double delta_max, double decades, int per_decade);

struct LifshitsCampaign {
  PotentialModel model;
  int d1 = 1, d2 = 1, a = 1, M = 24;
  BcKind x1 = BcKind::Neumann;
  std::vector<double> deltas;  ///< E - E0 values
  bool tie_L = true;           ///< L = clamp(round(c delta^-1/2), L_min, L_max); else L = L_fixed
  int L_min = 8, L_max = 48, L_fixed = 32;
  std::int64_t n_samples = 2000;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct LifshitsPoint {
  double E = 0.0, delta = 0.0;
  int L = 0;
  double mean = 0.0, se = 0.0, cp_upper = 0.0;
};

struct LifshitsResult {
  double E0 = 0.0;
  double c = 0.0;
  std::vector<LifshitsPoint> points;  ///< ascending in E
  LifshitsFit fit;
  bool fitted = false;
  std::string fit_error;
};

/// Runs one ensemble per distinct L and fits over the whole curve.
LifshitsResult lifshits_campaign(const LifshitsCampaign& c);

}  // namespace surflab
