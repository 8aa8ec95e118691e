#include "surflab/floquet.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include "surflab/error.hpp"
#include "surflab/spectral.hpp"

namespace surflab {

namespace {

constexpr double kGroundTol = 1e-12;
constexpr double kBandTol = 1e-10;

std::vector<double> evaluate(const PeriodicPotential& U, const GridSpec& g) {
  if (!U) return std::vector<double>(g.size(), 0.0);
  std::vector<double> v = U(g);
  if (static_cast<std::int64_t>(v.size()) != g.size())
    throw Error(ErrorCode::ShapeMismatch, "periodic potential returned a field of the wrong size");
  return v;
}

// ||H v - E v||_2 plus the rounding of its own evaluation.
double certified_residual(const Hamiltonian& H, const Eigen::VectorXd& v, double E) {
  Eigen::VectorXd y;
  H.apply(v, y);
  const double r = (y - E * v).norm();
  const double n = static_cast<double>(v.size());
  return r + 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, H.norm_inf()) * std::sqrt(n);
}

}  // namespace

Hamiltonian reduced_operator(const GridSpec& cell, const PeriodicPotential& U, const std::array<double, 2>& theta,
                             BcKind x2) {
  if (cell.L() != 1) throw Error(ErrorCode::InvalidParam, "reduced operators live on a single cell (L = 1)");
  return assemble(cell, evaluate(U, cell), BoundarySpec::bloch(theta, x2));
}

GroundStateRef ground_state_on(const GridSpec& cell, const PeriodicPotential& U) {
  const Hamiltonian H = reduced_operator(cell, U, {0.0, 0.0});
  if (H.dim() < 2) throw Error(ErrorCode::InvalidParam, "cell too small for a gap check");
  const SpectralResult r = lowest_k(H, 2, kGroundTol);
  Eigen::VectorXd psi = r.vectors.col(0);
  if (psi.sum() < 0.0) psi = -psi;
  psi /= psi.norm();
  for (Eigen::Index i = 0; i < psi.size(); ++i)
    if (!(psi[i] > 0.0))
      throw Error(ErrorCode::NotPositive, "ground state entry " + std::to_string(i) + " is not positive");
  GroundStateRef ref;
  ref.grid = cell;
  ref.psi0.assign(psi.data(), psi.data() + psi.size());
  ref.E0 = quadratic_form(H, psi);
  ref.E1 = r.eigenvalues[1];
  ref.residual = certified_residual(H, psi, ref.E0);
  if (!(ref.E1 - ref.E0 > 10.0 * ref.residual))
    throw Error(ErrorCode::NearDegenerate, "E1 - E0 does not exceed ten residuals");
  return ref;
}

GroundStateRef ground_state_cell(const GridSpec& cell, const PeriodicPotential& U, int M_ref) {
  if (M_ref < cell.M() + 2) throw Error(ErrorCode::InvalidParam, "M_ref must be at least M + 2");
  return ground_state_on(cell.cell(M_ref), U);
}

AveragedModel averaged_reduction(const GroundStateRef& ref, const PeriodicPotential& U) {
  const GridSpec& g = ref.grid;
  const std::vector<double> u = evaluate(U, g);
  const std::int64_t slab = g.layer_size();
  std::vector<double> psum(slab, 0.0), usum(slab, 0.0);
  for (std::int64_t s = 0; s < g.size(); ++s) {
    psum[s % slab] += ref.psi0[s];
    usum[s % slab] += u[s] * ref.psi0[s];
  }
  AveragedModel m;
  m.grid = g;
  m.E0 = ref.E0;
  m.psi_bar = psum;
  m.U_bar.resize(slab);
  for (std::int64_t l = 0; l < slab; ++l) {
    if (!(psum[l] >= 1e-300)) throw Error(ErrorCode::DivisionUnderflow, "averaged ground state below 1e-300");
    m.U_bar[l] = usum[l] / psum[l];
  }
  // Sites 0..slab-1 form the x1 = 0 slab; their x2 arms stay inside it.
  const double hinv2 = static_cast<double>(g.a()) * g.a();
  double worst = 0.0;
  for (std::int64_t l = 0; l < slab; ++l) {
    double lap = 0.0;
    for (const Arm& arm : g.neighbors(l)) {
      if (arm.axis < g.d1()) continue;
      lap += hinv2 * (psum[l] - (arm.interior() ? psum[arm.neighbor] : 0.0));
    }
    worst = std::max(worst, std::abs(lap + m.U_bar[l] * psum[l] - m.E0 * psum[l]));
  }
  m.identity_residual = worst;
  return m;
}

HarnackConstants harnack_constants(const GroundStateRef& ref, const AveragedModel& avg) {
  HarnackConstants c{std::numeric_limits<double>::infinity(), 0.0};
  const std::int64_t slab = ref.grid.layer_size();
  for (std::int64_t s = 0; s < ref.grid.size(); ++s) {
    const double r = ref.psi0[s] / avg.psi_bar[s % slab];
    c.C1 = std::min(c.C1, r);
    c.C2 = std::max(c.C2, r);
  }
  return c;
}

double k_disc(const std::array<double, 2>& theta, int d1, int a) {
  double k = 0.0;
  for (int j = 0; j < d1; ++j) k += 2.0 * a * a * (1.0 - std::cos(theta[j] / a));
  return k;
}

std::vector<std::array<double, 2>> theta_grid(int d1, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidParam, "theta grid needs at least one point");
  std::vector<double> axis(n, 0.0);
  for (int k = 0; k < n && n > 1; ++k) axis[k] = std::numbers::pi * (2 * k - (n - 1)) / (n - 1);
  std::vector<std::array<double, 2>> out;
  if (d1 == 1) {
    for (double t : axis) out.push_back({t, 0.0});
  } else {
    for (double t0 : axis)
      for (double t1 : axis) out.push_back({t0, t1});
  }
  return out;
}

double BandCurve::min_offset() const {
  return *std::min_element(E.begin(), E.end()) - E0;
}

BandCurve band_curve(const GridSpec& cell, const PeriodicPotential& U, const std::vector<std::array<double, 2>>& thetas,
                     int workers) {
  const int d1 = cell.d1();
  auto is_zero = [d1](const std::array<double, 2>& t) { return t[0] == 0.0 && (d1 == 1 || t[1] == 0.0); };
  const auto zero = std::find_if(thetas.begin(), thetas.end(), is_zero);
  if (zero == thetas.end()) throw Error(ErrorCode::InvalidParam, "theta grid must contain 0");

  const GroundStateRef ref = ground_state_on(cell, U);
  const AveragedModel avg = averaged_reduction(ref, U);
  BandCurve b;
  b.theta = thetas;
  b.harnack = harnack_constants(ref, avg);
  b.zero_index = static_cast<std::size_t>(zero - thetas.begin());
  const std::size_t n = thetas.size();
  b.E.assign(n, 0.0);
  b.residual.assign(n, 0.0);
  std::vector<std::exception_ptr> errs(n);
  const std::vector<double> u = evaluate(U, cell);

#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, workers))
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    try {
      const Hamiltonian H = assemble(cell, u, BoundarySpec::bloch(thetas[i]));
      const SpectralResult r = lowest_k(H, 1, kBandTol);
      b.E[i] = r.eigenvalues[0];
      b.residual[i] = r.residuals[0];
    } catch (...) {
      errs[i] = std::current_exception();
    }
  }
  for (const auto& e : errs)
    if (e) std::rethrow_exception(e);

  b.E0 = b.E[b.zero_index];
  const double ratio = b.harnack.ratio2();
  for (std::size_t i = 0; i < n; ++i) {
    const double dE = b.E[i] - b.E0;
    const double kd = k_disc(thetas[i], d1, cell.a());
    double t2 = 0.0;
    for (int j = 0; j < d1; ++j) t2 += thetas[i][j] * thetas[i][j];
    b.dE.push_back(dE);
    b.kdisc.push_back(kd);
    b.upper_margin.push_back(t2 - dE);
    b.upper_margin_disc.push_back(kd - dE);
    b.lower_margin.push_back(dE - ratio * kd);
  }
  return b;
}

Hamiltonian chi_strip(const PeriodicPotential& U, const GroundStateRef& ref, int L, int M, BcKind x2) {
  const GridSpec g = ref.grid.with_M(M).with_L(L);
  auto ptr = std::make_shared<const GroundStateRef>(ref);
  return assemble(g, evaluate(U, g), BoundarySpec::make(BcKind::Mezincescu, x2, ptr));
}

namespace {

// Second eigenvalue of the averaged transverse operator on the domain layers,
// in ground-state form: its lowest eigenvalue is 0 with eigenvector psi_bar.
double averaged_x2_gap(const AveragedModel& avg, int M) {
  const GridSpec slab_grid = avg.grid.with_M(M);
  const int off = (avg.grid.M() - M) / 2;
  const std::int64_t n = slab_grid.layer_size();
  auto bar = [&](const SiteCoords& c) {
    SiteCoords r;
    r.x2 = {c.x2[0] + off, slab_grid.d2() == 2 ? c.x2[1] + off : 0};
    return avg.psi_bar[avg.grid.index(r)];
  };
  const double hinv2 = static_cast<double>(avg.grid.a()) * avg.grid.a();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  for (std::int64_t l = 0; l < n; ++l) {
    const double here = bar(slab_grid.coords(l));
    for (const Arm& arm : slab_grid.neighbors(l)) {
      if (arm.axis < slab_grid.d1() || !arm.interior()) continue;
      S(l, arm.neighbor) = -hinv2;
      S(l, l) += hinv2 * bar(slab_grid.coords(arm.neighbor)) / here;
    }
  }
  if (n < 2) return std::numeric_limits<double>::infinity();
  // The matrix is D^{-1/2} K D^{-1/2} of a symmetric K; symmetrize rounding.
  const Eigen::MatrixXd Ss = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ss, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[1] - es.eigenvalues()[0];
}

}  // namespace

GapCertificate gap_certificate(const PeriodicPotential& U, const std::vector<int>& Ls, const GroundStateRef& ref) {
  const AveragedModel avg = averaged_reduction(ref, U);
  GapCertificate cert;
  cert.harnack = harnack_constants(ref, avg);
  cert.reference_E0 = ref.E0;
  const int M = ref.grid.M() - 2;
  if (M < 2) throw Error(ErrorCode::InvalidParam, "reference cell too shallow for a gap certificate");
  const double x2_gap = averaged_x2_gap(avg, M);
  const int a = ref.grid.a();
  for (int L : Ls) {
    if (L < 2) throw Error(ErrorCode::InvalidParam, "gap certificates need L >= 2");
    const Hamiltonian H = chi_strip(U, ref, L, M);
    const SpectralResult r = lowest_k(H, 2, kBandTol);
    GapReport rep;
    rep.L = L;
    rep.E0 = r.eigenvalues[0];
    rep.E1 = r.eigenvalues[1];
    rep.gap = rep.E1 - rep.E0;
    rep.x1_gap = 2.0 * a * a * (1.0 - std::cos(std::numbers::pi / (a * L)));
    rep.x2_gap = x2_gap;
    rep.gap_bar = std::min(rep.x1_gap, rep.x2_gap);
    rep.bound = cert.harnack.ratio2() * rep.gap_bar;
    rep.margin = rep.gap - rep.bound;
    rep.e0_error = std::abs(rep.E0 - ref.E0);
    rep.e0_ok = rep.e0_error <= 10.0 * ref.residual;
    rep.tol = 1e-9 * (1.0 + std::abs(rep.E0));
    cert.reports.push_back(rep);
  }
  return cert;
}

}  // namespace surflab
