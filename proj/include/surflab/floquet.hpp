#pragma once

#include <array>
#include <functional>
#include <vector>

#include "surflab/hamiltonian.hpp"

namespace surflab {

/// A Z^{d1}-periodic potential that can be evaluated on any grid sharing its
/// (d1, d2, a). Layers are matched by their distance from the surface.
using PeriodicPotential = std::function<std::vector<double>(const GridSpec&)>;

/// Theta-periodic operator h_theta on one cell (L = 1) with the given x2 faces.
Hamiltonian reduced_operator(const GridSpec& cell, const PeriodicPotential& U, const std::array<double, 2>& theta,
                             BcKind x2 = BcKind::Dirichlet);

/// Positive ground state of h_0 on cell.cell(M_ref). Requires M_ref >= cell.M() + 2
/// so Mezincescu faces on the cell depth find ghost layers.
/// Throws NotPositive, NearDegenerate, InvalidParam.
GroundStateRef ground_state_cell(const GridSpec& cell, const PeriodicPotential& U, int M_ref);

/// Same, on exactly the given cell depth (no ghost-layer requirement).
GroundStateRef ground_state_on(const GridSpec& cell, const PeriodicPotential& U);

struct AveragedModel {
  GridSpec grid;                 ///< reference cell
  std::vector<double> psi_bar;   ///< sum of psi0 over the x1 sites of the cell, per x2 slab site
  std::vector<double> U_bar;     ///< psi0-weighted x1 average of U, per x2 slab site
  double E0 = 0.0;
  double identity_residual = 0.0;  ///< ||(-Delta_x2 + U_bar) psi_bar - E0 psi_bar||_inf
};

/// x1-average of the reference. Throws DivisionUnderflow when psi_bar < 1e-300.
AveragedModel averaged_reduction(const GroundStateRef& ref, const PeriodicPotential& U);

struct HarnackConstants {
  double C1 = 0.0;  ///< min over cell sites of psi0 / psi_bar
  double C2 = 0.0;  ///< max of the same ratio
  double ratio2() const { return (C1 / C2) * (C1 / C2); }
};

HarnackConstants harnack_constants(const GroundStateRef& ref, const AveragedModel& avg);

/// Discrete free band sum_j 2 a^2 (1 - cos(theta_j / a)).
double k_disc(const std::array<double, 2>& theta, int d1, int a);

/// n points per axis from -pi to pi (n odd includes 0 exactly), row-major in d1 axes.
std::vector<std::array<double, 2>> theta_grid(int d1, int n);

struct BandCurve {
  std::vector<std::array<double, 2>> theta;
  std::vector<double> E;             ///< E_0(h_theta)
  std::vector<double> residual;
  std::vector<double> dE;            ///< E - E_0(h_0)
  std::vector<double> kdisc;
  std::vector<double> upper_margin;  ///< |theta|^2 - dE
  std::vector<double> upper_margin_disc;  ///< k_disc - dE
  std::vector<double> lower_margin;  ///< dE - (C1/C2)^2 k_disc
  double E0 = 0.0;                   ///< E_0(h_0) of the same cell
  HarnackConstants harnack;
  std::size_t zero_index = 0;
  /// Smallest E over the grid minus E_0(h_0) (0 when the minimum sits at theta = 0).
  double min_offset() const;
};

/// Ground band over a theta grid containing 0; points run concurrently on
/// `workers` threads and are merged by index. Throws InvalidParam without 0.
BandCurve band_curve(const GridSpec& cell, const PeriodicPotential& U, const std::vector<std::array<double, 2>>& thetas,
                     int workers = 1);

/// H^chi_{per,L}: L cells, M layers, Mezincescu on the x1 faces and `x2` on the x2 faces.
Hamiltonian chi_strip(const PeriodicPotential& U, const GroundStateRef& ref, int L, int M,
                      BcKind x2 = BcKind::Mezincescu);

struct GapReport {
  int L = 0;
  double E0 = 0.0;       ///< E_0(H^chi_{per,L})
  double E1 = 0.0;
  double gap = 0.0;
  double x1_gap = 0.0;   ///< Neumann gap 2 a^2 (1 - cos(pi / (a L)))
  double x2_gap = 0.0;   ///< gap of the averaged transverse operator
  double gap_bar = 0.0;  ///< min(x1_gap, x2_gap)
  double bound = 0.0;    ///< (C1/C2)^2 gap_bar
  double margin = 0.0;   ///< gap - bound
  double e0_error = 0.0; ///< |E0 - reference E0|
  bool e0_ok = false;    ///< e0_error <= 10 reference residuals
  double tol = 0.0;      ///< rounding allowance 1e-9 (1 + |E0|); separable cells sit at equality
  bool certified() const { return margin >= -tol && e0_ok; }
};

struct GapCertificate {
  HarnackConstants harnack;
  double reference_E0 = 0.0;
  std::vector<GapReport> reports;
};

/// Gap certificates on strips of depth M_ref - 2 with full Mezincescu faces.
/// Throws InvalidParam for L < 2.
GapCertificate gap_certificate(const PeriodicPotential& U, const std::vector<int>& Ls, const GroundStateRef& ref);

}  // namespace surflab
