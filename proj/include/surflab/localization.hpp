#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "surflab/hamiltonian.hpp"
#include "surflab/potential.hpp"

namespace surflab {

struct DecayFit {
  double E = 0.0;
  std::vector<double> distance;  ///< |x2|_inf of each x2 slab site
  std::vector<double> profile;   ///< max over x1 of |psi| at that slab site
  double gamma = 0.0;            ///< fitted rate, > 0 for decay
  double prefactor = 0.0;
  double r2 = 0.0;
  int points = 0;
};

/// Log-linear fit of the sup-profile over the outer half of the layers
/// (|x2|_inf > M h / 4), both sides pooled. Requires E <= bulk_bottom + eta
/// with eta < 0 (InvalidParam otherwise); ProfileUnderflow when fewer than two
/// outer values exceed 1e-300.
DecayFit decay_profile(const Hamiltonian& H, double E, const Eigen::VectorXd& psi, double eta,
                       double bulk_bottom = 0.0);

struct WegnerConfig {
  GridSpec grid;
  PotentialModel model;
  BcKind x1 = BcKind::Dirichlet;
  BcKind x2 = BcKind::Dirichlet;
  double E = -1.0;
  std::vector<double> eps;  ///< ascending, >= 0
  std::int64_t n_samples = 100;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct WegnerTable {
  std::vector<double> eps;
  std::vector<double> p;   ///< P{spec in (E - eps, E + eps] nonempty}
  std::vector<double> se;
  std::vector<std::vector<double>> events;  ///< per sample, 0/1 per eps
  double slope = 0.0;      ///< of ln p against ln eps over 0 < p < 1
  double intercept = 0.0;
  int points = 0;
};

/// Needs a Uniform coupling law (InvalidParam). Throws AllZeroOrOne when
/// fewer than two eps values give 0 < p < 1.
WegnerTable wegner_probe(const WegnerConfig& cfg);

struct InitialScaleConfig {
  PotentialModel model;
  int d1 = 1, d2 = 1, a = 1, M = 16;
  std::vector<int> Ls;
  std::vector<double> energies;
  std::int64_t n_samples = 200;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct InitialScaleTable {
  std::vector<int> Ls;
  std::vector<double> energies;
  std::vector<std::vector<double>> p;   ///< [L][E]: P{E0(H^{D,D}_L(V)) <= E}
  std::vector<std::vector<double>> se;
  /// Sample i uses seed mix(seed, i) at every L, so for ascending L the boxes
  /// are nested realizations of one potential and Dirichlet monotonicity
  /// forces p to be nondecreasing in L.
  bool nondecreasing(std::size_t j) const;
  /// p strictly decreases along L at energy index j.
  bool strictly_decreasing(std::size_t j) const;
  /// Every consecutive drop exceeds three combined standard errors.
  bool significantly_decreasing(std::size_t j) const;
};

InitialScaleTable initial_scale_probe(const InitialScaleConfig& cfg);

struct DynamicsResult {
  std::vector<double> times;
  std::vector<double> moment;  ///< M_p(t)
  std::vector<double> norm;    ///< |P_I u(t)|^2, constant up to rounding
  double projected_norm = 0.0; ///< |P_I u|^2
  double sup = 0.0;
  double norm_error = 0.0;     ///< max |norm(t) - projected_norm|
  int states = 0;              ///< eigenvectors inside I
};

/// M_p(t) = sum_x |x1 - origin|^p |(e^{-itH} P_I u)(x)|^2 by dense spectral
/// evolution. Throws DenseCapExceeded for dim(H) > dense_cap.
DynamicsResult dynamics_moment(const Hamiltonian& H, double E_lo, double E_hi, double p,
                               const std::vector<double>& times, const Eigen::VectorXd& u,
                               const std::array<double, 2>& origin, std::int64_t dense_cap = 2000);

struct X1Localization {
  double participation_ratio = 0.0;  ///< (sum |psi|^2)^2 / sum |psi|^4
  double decay_length = 0.0;         ///< -1 / slope of ln m(x1) against distance from the peak
  double r2 = 0.0;
  int peak = 0;                      ///< flattened x1 site of the maximum
};

/// x1 marginal m(x1) = (sum over x2 of |psi|^2)^(1/2), fitted where m > 1e-12 max m.
X1Localization x1_localization(const GridSpec& grid, const Eigen::VectorXcd& psi);
X1Localization x1_localization(const GridSpec& grid, const Eigen::VectorXd& psi);

}  // namespace surflab
