#include "checks/criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <optional>
#include <random>

#include "checks/instances.hpp"
#include "checks/oracles.hpp"
#include "surflab/error.hpp"
#include "surflab/floquet.hpp"
#include "surflab/idss.hpp"
#include "surflab/localization.hpp"
#include "surflab/spectral.hpp"

namespace surflab::checks {

namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

PeriodicPotential default_periodic() { return periodic_potential(default_model()); }

std::vector<double> dense_eigs(const Hamiltonian& H) { return oracle::eigenvalues(H.dense_complex()); }

/// max over x of the Mezincescu ghost ratio psi0(ghost) / psi0(x) on `dom`.
double max_ghost_ratio(const GridSpec& dom, const GroundStateRef& ref) {
  const int off = ref_layer_offset(dom, ref);
  double worst = 0.0;
  for (std::int64_t x = 0; x < dom.size(); ++x) {
    const SiteCoords c = dom.coords(x);
    std::array<int, 2> j{c.x2[0] + off, c.x2[1] + off};
    for (const Arm& arm : dom.neighbors(x)) {
      if (arm.interior()) continue;
      std::array<int, 2> gs = c.x1, gj = j;
      if (arm.axis < dom.d1())
        gs[arm.axis] += arm.dir;
      else
        gj[arm.axis - dom.d1()] += arm.dir;
      worst = std::max(worst, ref.at(gs, gj) / ref.at(c.x1, j));
    }
  }
  return worst;
}

CriterionResult exact_identities(const CriterionOptions&) {
  CriterionResult r;
  const PeriodicPotential U = default_periodic();
  const GroundStateRef ref = ground_state_cell(build_grid(1, 1, 1, 1, 16), U, 18);
  const AveragedModel avg = averaged_reduction(ref, U);
  double worst = avg.identity_residual / (1.0 + std::abs(avg.E0));
  for (int i = 0; i < 20; ++i) {
    const int a = 2 + i % 3, d1 = i % 4 == 3 ? 2 : 1;
    const PeriodicPotential P = random_periodic(a, 1000 + i, 2);
    const GroundStateRef g = ground_state_on(build_grid(d1, 1, 1, a, 8), P);
    const AveragedModel m = averaged_reduction(g, P);
    worst = std::max(worst, m.identity_residual / (1.0 + std::abs(m.E0)));
  }
  double e0_err = 0.0;
  bool e0_ok = true;
  for (const GapReport& g : gap_certificate(U, {4, 8, 16}, ref).reports) {
    e0_err = std::max(e0_err, g.e0_error);
    e0_ok = e0_ok && g.e0_ok;
  }
  r.passed = worst <= 1e-10 && e0_ok;
  r.detail = fmt("identity residual/(1+|E0|) max %.2e over 21 cells; |E0(chi,L) - E0| max %.2e vs 10*residual %.2e",
                 worst, e0_err, 10.0 * ref.residual);
  return r;
}

CriterionResult closed_forms(const CriterionOptions&) {
  CriterionResult r;
  double worst = 0.0;
  int grids = 0;
  std::mt19937_64 rng(2024);
  while (grids < 40) {
    const int d1 = 1 + rng() % 2, d2 = 1 + rng() % 2, a = 1 + rng() % 2, L = 1 + rng() % 3, M = 2 + 2 * (rng() % 3);
    const double n = std::pow(a * L, d1) * std::pow(M, d2);
    if (n > 128 || n < 2) continue;
    const GridSpec g = build_grid(d1, d2, L, a, M);
    const std::vector<double> zero(g.size(), 0.0);
    for (int kind = 0; kind < 3; ++kind) {
      const bool x1d = kind != 1, x2d = kind != 1 && kind != 2;
      const BoundarySpec b = kind == 0 ? BoundarySpec::dirichlet()
                             : kind == 1 ? BoundarySpec::neumann()
                                         : BoundarySpec::make(BcKind::Dirichlet, BcKind::Neumann);
      std::vector<std::vector<double>> axes;
      for (int k = 0; k < d1; ++k) axes.push_back(oracle::path_spectrum(a * L, x1d));
      for (int k = 0; k < d2; ++k) axes.push_back(oracle::path_spectrum(M, x2d));
      for (auto& ax : axes)
        for (double& v : ax) v *= a * a;
      const auto want = oracle::sum_spectrum(axes);
      const auto got = oracle::eigenvalues(assemble(g, zero, b).dense_real());
      for (std::size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(want[i] - got[i]));
    }
    ++grids;
  }
  // x1-independent potentials: the default instance (a = 1) and a random separable one.
  const PeriodicPotential sep = separable([](int j) { return j >= -2 && j < 2 ? -1.0 - 0.3 * j : 0.0; });
  double gap_err = 0.0, pi2_rel = 0.0;
  for (const PeriodicPotential& U : {default_periodic(), sep}) {
    const GroundStateRef ref = ground_state_cell(build_grid(1, 1, 1, 1, 16), U, 18);
    for (const GapReport& g : gap_certificate(U, {4, 8, 16, 32, 64}, ref).reports) {
      gap_err = std::max(gap_err, std::abs(g.gap - 2.0 * (1.0 - std::cos(std::numbers::pi / g.L))));
      if (g.L == 64) {
        const double pi2 = std::numbers::pi * std::numbers::pi;
        pi2_rel = std::max(pi2_rel, std::abs(g.gap * 64 * 64 - pi2) / pi2);
      }
    }
  }
  r.passed = worst <= 1e-12 && gap_err <= 1e-10 && pi2_rel <= 0.05;
  r.detail = fmt("free spectra max error %.2e on %d grids x 3 bcs; separable gap error %.2e; |g(64)*64^2/pi^2 - 1| %.4f",
                 worst, grids, gap_err, pi2_rel);
  return r;
}

CriterionResult oracle_equivalence(const CriterionOptions&) {
  CriterionResult r;
  int count_mismatch = 0, counted = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const RandomInstance in = random_instance(5000 + s, 400);
    const Hamiltonian H = assemble(in.grid, in.potential, in.bcs);
    const auto ev = dense_eigs(H);
    const InertiaCounter c(H);
    std::mt19937_64 rng(s);
    std::uniform_real_distribution<double> e(ev.front() - 0.5, ev.back() + 0.5);
    for (int j = 0; j < 5; ++j) {
      const double E = j == 0 ? ev[ev.size() / 2] + 1e-6 : e(rng);
      count_mismatch += c.count(E) != oracle::count(ev, E);
      ++counted;
    }
  }
  double lk_err = 0.0;
  int lk = 0;
  for (std::uint64_t s = 0; lk < 50; ++s) {
    const RandomInstance in = random_instance(9000 + s, 400);
    if (in.grid.size() < 60) continue;
    const Hamiltonian H = assemble(in.grid, in.potential, in.bcs);
    LowestKOptions o;
    o.method = LowestKOptions::Method::Iterative;
    const SpectralResult sr = lowest_k(H, 4, 1e-10, o);
    const auto ev = dense_eigs(H);
    for (int i = 0; i < 4; ++i) lk_err = std::max(lk_err, std::abs(sr.eigenvalues[i] - ev[i]));
    ++lk;
  }
  int contradictions = 0, trials = 0;
  std::mt19937_64 rng(31337);
  std::normal_distribution<double> nd;
  while (trials < 1000) {
    const int dim = 6 + rng() % 35, n = 1 + rng() % 4;
    Eigen::MatrixXd B(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) B(i, j) = nd(rng);
    const Eigen::MatrixXd A = 0.5 * (B + B.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const double size = std::pow(10.0, -6.0 + 5.0 * std::uniform_real_distribution<double>()(rng));
    Eigen::MatrixXd phi(dim, n);
    const int first = rng() % (dim - n + 1);
    for (int j = 0; j < n; ++j) {
      phi.col(j) = es.eigenvectors().col(first + j);
      for (int i = 0; i < dim; ++i) phi(i, j) += size * nd(rng);
    }
    const Eigen::MatrixXd G = phi.transpose() * phi, F = phi.transpose() * A * phi;
    std::vector<double> alphas(n);
    double e1 = 0.0, e2 = 0.0;
    for (int i = 0; i < n; ++i) {
      alphas[i] = F(i, i);
      for (int j = 0; j < n; ++j) {
        e1 = std::max(e1, std::abs(G(i, j) - (i == j ? 1.0 : 0.0)));
        if (i != j) e2 = std::max(e2, std::abs(F(i, j)));
      }
    }
    // Slack for the library's own evaluation of the same products.
    const double round = 1e-13 * (1.0 + A.cwiseAbs().rowwise().sum().maxCoeff());
    e1 = e1 * (1 + 1e-9) + 1e-14;
    e2 = e2 * (1 + 1e-9) + round;
    if (n * e1 >= 1.0) continue;
    const auto apply = [&A](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x; };
    const VariationalBound vb = variational_count_bound(apply, phi, alphas, e1, e2);
    const std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + dim);
    contradictions += oracle::count(ev, vb.alpha_prime) < n;
    ++trials;
  }
  r.passed = count_mismatch == 0 && lk_err <= 1e-9 && contradictions == 0;
  r.detail = fmt("count mismatches %d/%d; lowest_k max error %.2e on %d instances; variational contradictions %d/%d",
                 count_mismatch, counted, lk_err, lk, contradictions, trials);
  return r;
}

CriterionResult ordering(const CriterionOptions&) {
  CriterionResult r;
  int order_bad = 0, order_n = 0, skipped = 0;
  for (std::uint64_t s = 0; order_n < 50; ++s) {
    const int d1 = 1 + s % 2, d2 = 1 + (s / 2) % 2;
    const int L = d1 == 1 ? 3 + s % 4 : 3, M = d2 == 1 ? 6 + 2 * (s % 3) : 4;
    const GridSpec dom = build_grid(d1, d2, L, 1, M);
    const PeriodicPotential U = random_periodic(1, 300 + s, 1, -3.0, 0.0);
    const GroundStateRef ref = ground_state_cell(dom.cell(M), U, M + 2);
    if (max_ghost_ratio(dom, ref) > 1.0 + 1e-12) {
      ++skipped;
      continue;
    }
    std::vector<double> V = U(dom);
    std::mt19937_64 rng(s);
    for (double& v : V) v += std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto n = dense_eigs(assemble(dom, V, BoundarySpec::neumann()));
    const auto shared = std::make_shared<const GroundStateRef>(ref);
    const auto x = dense_eigs(assemble(dom, V, BoundarySpec::make(BcKind::Mezincescu, BcKind::Mezincescu, shared)));
    const auto d = dense_eigs(assemble(dom, V, BoundarySpec::dirichlet()));
    for (int k = 0; k < 3; ++k) order_bad += !(n[k] <= x[k] + 1e-12 && x[k] <= d[k] + 1e-12);
    ++order_n;
  }
  int chi_d_bad = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const GridSpec dom = build_grid(1, 1, 4, 2, 8);
    const PeriodicPotential U = random_periodic(2, 700 + s, 2);
    const auto ref = std::make_shared<const GroundStateRef>(ground_state_cell(dom.cell(8), U, 10));
    const auto x = dense_eigs(assemble(dom, U(dom), BoundarySpec::make(BcKind::Mezincescu, BcKind::Mezincescu, ref)));
    const auto d = dense_eigs(assemble(dom, U(dom), BoundarySpec::dirichlet()));
    for (int k = 0; k < 3; ++k) chi_d_bad += !(x[k] <= d[k] + 1e-12);
  }

  int bound_bad = 0;
  std::normal_distribution<double> nd;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const RandomInstance in = random_instance(12000 + s, 300, false);
    const Hamiltonian H = assemble(in.grid, in.potential, in.bcs);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.dense_real());
    if (es.eigenvalues()[1] - es.eigenvalues()[0] < 1e-6) continue;
    std::mt19937_64 rng(s);
    Eigen::VectorXd u = es.eigenvectors().col(0);
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] += 0.02 * nd(rng) / std::sqrt(double(u.size()));
    u.normalize();
    const double E0 = es.eigenvalues()[0], tol = 1e-12 * (1.0 + std::abs(E0));
    const double rr = rayleigh_ritz_upper(H, u);
    if (!(rr < es.eigenvalues()[1])) continue;
    const double t = temple_lower_bound(H, u, es.eigenvalues()[1]);
    bound_bad += !(t <= E0 + tol && E0 <= rr + tol);
  }
  // The tail bounds built from the periodic ground state, on default realizations.
  const PotentialModel m = default_model();
  const PeriodicPotential U = periodic_potential(m);
  const GroundStateRef ref = ground_state_cell(build_grid(1, 1, 1, 1, 16), U, 18);
  const GridSpec g = ref.grid.with_M(16).with_L(8);
  const double gap = temple_tail_bound(U, ref, 8, std::vector<double>(g.size(), 0.0)).gap;
  int tail_bad = 0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const Realization real = m.realize(g, s);
    const RayleighTail rt = rayleigh_tail_bound(real, m, ref);
    const auto w = quantum_reduction(g, m.profile, real.couplings, m.dist.q_min, gap / 3.0);
    const TempleTail tt = temple_tail_bound(U, ref, 8, extend_reduction(g, m.profile, w));
    tail_bad += rt.margin() < -1e-12 || tt.margin() < -1e-12;
  }

  int bracket_bad = 0;
  const std::vector<double> E{-1.6, -1.4, -1.2, -1.0, -0.8, -0.6, -0.4, -0.2, -0.05};
  for (std::uint64_t s = 1; s <= 50; ++s) {
    try {
      const BracketingReport b = bracketing_check(m, s, build_grid(1, 1, 8, 1, 16), E, {16});
      for (std::size_t j = 0; j < E.size(); ++j) bracket_bad += b.count_dd[j] > b.count_nd[j];
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InequalityViolated) throw;
      ++bracket_bad;
    }
  }
  r.passed = order_bad == 0 && chi_d_bad == 0 && bound_bad == 0 && tail_bad == 0 && bracket_bad == 0;
  r.detail = fmt("N<=chi<=D violations %d on %d instances (%d skipped, ghost ratio > 1); chi<=D (a=2) %d/20; "
                 "Temple/Rayleigh violations %d/100, tail bounds %d/20; bracketing violations %d/50",
                 order_bad, order_n, skipped, chi_d_bad, bound_bad, tail_bad, bracket_bad);
  return r;
}

CriterionResult parabolicity(const CriterionOptions& opt) {
  CriterionResult r;
  double lo = 1e300, hi = 1e300;
  auto check = [&](const BandCurve& b) {
    for (std::size_t i = 0; i < b.E.size(); ++i) {
      lo = std::min(lo, b.lower_margin[i]);
      hi = std::min(hi, b.upper_margin_disc[i]);
    }
  };
  check(band_curve(build_grid(1, 1, 1, 1, 16), default_periodic(), theta_grid(1, 65), opt.workers));
  for (int i = 0; i < 10; ++i) {
    const int a = 2 + i % 2, d1 = i < 7 ? 1 : 2;
    check(band_curve(build_grid(d1, 1, 1, a, 8), random_periodic(a, 400 + i, 2), theta_grid(d1, d1 == 1 ? 33 : 9),
                     opt.workers));
  }
  r.passed = lo >= -1e-9 && hi >= -1e-9;
  r.detail = fmt("min lower margin %.3e, min upper margin %.3e over 11 instances", lo, hi);
  return r;
}

CriterionResult truncation(const CriterionOptions&) {
  CriterionResult r;
  const std::vector<double> E{-1.6, -1.4, -1.2, -1.0, -0.8, -0.6, -0.4, -0.3, -0.2, -0.1, -0.05};
  int differing = 0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const BracketingReport b = bracketing_check(default_model(), s, build_grid(1, 1, 8, 1, 16), E, {16, 32, 64});
    for (std::size_t k = 1; k < b.Ms.size(); ++k) differing += b.count_by_M[k] != b.count_by_M[k - 1];
  }
  const PeriodicPotential U = default_periodic();
  const GroundStateRef ref = ground_state_on(build_grid(1, 1, 1, 1, 48), U);
  std::vector<double> err;
  for (int M : {4, 8, 16}) err.push_back(lowest_k(chi_strip(U, ref, 8, M, BcKind::Dirichlet), 1, 1e-12).eigenvalues[0] - ref.E0);
  const double f1 = err[0] / err[1], f2 = err[1] / err[2];
  r.passed = differing == 0 && err[2] > 0.0 && f1 >= 3.0 && f2 >= 3.0;
  r.detail = fmt("count differences M vs 2M (M=16,32): %d over 20 realizations; Dirichlet-x2 E0 errors %.2e %.2e %.2e "
                 "(M=4,8,16), shrink factors %.1f %.1f",
                 differing, err[0], err[1], err[2], f1, f2);
  return r;
}

CriterionResult idss_sandwich(const CriterionOptions& opt) {
  CriterionResult r;
  IdssConfig c;
  c.grid = build_grid(1, 1, 16, 1, 16);
  c.model = default_model();
  c.n_samples = 500;
  c.seed = 7;
  c.workers = opt.workers;
  const double E0 = check_s4(c.model, c.grid).E0;
  c.energies = {E0 - 0.05, -1.3, -1.2, -1.1, -1.0, -0.9, -0.8, -0.6, -0.4, -0.2};
  const SandwichReport s = sandwich_check(c);
  int bad = 0;
  for (bool h : s.holds) bad += !h;
  r.passed = s.all();
  r.detail = fmt("%d of %zu energies outside 3 SE; at E=-1.0: %.4f <= %.4f <= %.4f", bad, s.energies.size(), s.lower[4],
                 s.middle[4], s.upper[4]);
  return r;
}

LifshitsCampaign campaign(const PotentialModel& m, double delta_max, const CriterionOptions& opt) {
  LifshitsCampaign c;
  c.model = m;
  c.deltas = geometric_energies(0.0, delta_max, 1.5, 8);
  c.n_samples = 2000;
  c.seed = 11;
  c.workers = opt.workers;
  return c;
}

/// Smallest and largest E - E0 among the points the fit used.
std::pair<double, double> fitted_span(const LifshitsResult& r) {
  double lo = 1e300, hi = 0.0;
  for (const LifshitsPoint& p : r.points)
    if (p.mean > 0.0 && p.mean < 1.0 && p.E > r.fit.E_lo && p.E <= r.fit.E_hi) {
      lo = std::min(lo, p.delta);
      hi = std::max(hi, p.delta);
    }
  return {lo, hi};
}

std::string describe(const LifshitsResult& r) {
  if (!r.fitted) return "no fit (" + r.fit_error + ")";
  const auto [lo, hi] = fitted_span(r);
  return fmt("slope %.3f, R^2 %.3f, %d points over E-E0 in [%.3g, %.3g]", r.fit.slope, r.fit.r2, r.fit.points, lo, hi);
}

double fit_decades(const LifshitsResult& r) {
  const auto [lo, hi] = fitted_span(r);
  return std::log10(hi / lo);
}

PotentialModel classical_model() {
  PotentialModel m = default_model();
  m.profile = SingleSiteProfile::power_law(1.5, 0.5, 256, 1.0, 1.0, 0.3);
  return m;
}

const LifshitsResult& quantum_campaign(const CriterionOptions& opt) {
  static std::optional<LifshitsResult> cached;
  if (!cached) cached = lifshits_campaign(campaign(default_model(), 1.3, opt));
  return *cached;
}

CriterionResult lifshits_quantum(const CriterionOptions& opt) {
  CriterionResult r;
  const LifshitsResult& q = quantum_campaign(opt);
  r.passed = q.fitted && q.fit.slope >= -0.8 && q.fit.slope <= -0.3 && q.fit.r2 >= 0.9 && fit_decades(q) >= 1.0 - 1e-9;
  r.detail = "default instance: " + describe(q);
  PotentialModel two = default_model();
  two.dist = CouplingDistribution::two_point(-2.0, -1.0, 0.7);
  r.info.push_back("two-point couplings (p = 0.7): " + describe(lifshits_campaign(campaign(two, 1.3, opt))));
  return r;
}

CriterionResult lifshits_classical(const CriterionOptions& opt) {
  CriterionResult r;
  const LifshitsResult& q = quantum_campaign(opt);
  const LifshitsResult c = lifshits_campaign(campaign(classical_model(), 8.0, opt));
  r.passed = q.fitted && c.fitted && c.fit.slope <= q.fit.slope - 0.5;
  r.detail = "power law alpha 1.5: " + describe(c) + "; quantum slope " + (q.fitted ? fmt("%.3f", q.fit.slope) : "n/a");
  return r;
}

CriterionResult decay_fits(const CriterionOptions&) {
  CriterionResult r;
  double rel = 0.0;
  const auto U = separable([](int j) { return j == -1 || j == 0 ? -2.0 : 0.0; });
  for (int a : {1, 2}) {
    const int M = 60 * a;  // the Dirichlet wall bends the outermost layers; depth keeps that below 2%
    const GridSpec g = build_grid(1, 1, 3, a, M);
    const std::vector<double> v = U(g);
    const Hamiltonian H = assemble(g, v, BoundarySpec::make(BcKind::Neumann, BcKind::Dirichlet));
    const SpectralResult s = lowest_k(H, 1, 1e-12);
    Eigen::MatrixXd P = oracle::path(M, true, true) * double(a * a);
    for (int j = 0; j < M; ++j) P(j, j) += v[j];
    const double gamma = oracle::decay_rate(oracle::eigenvalues(P)[0], 1.0 / a);
    const DecayFit f = decay_profile(H, s.eigenvalues[0], s.vectors.col(0), -0.1);
    rel = std::max(rel, std::abs(f.gamma - gamma) / gamma);
  }
  const GridSpec g = build_grid(1, 1, 16, 1, 32);
  const Hamiltonian H = assemble(g, default_model().realize(g, 3).total(), BoundarySpec::dirichlet());
  const SpectralResult s = lowest_k(H, 1, 1e-12);
  const DecayFit f = decay_profile(H, s.eigenvalues[0], s.vectors.col(0), -0.1);
  r.passed = rel <= 0.02 && f.gamma > 0.0 && f.r2 >= 0.95;
  r.detail = fmt("separable gamma relative error %.2e; default ground state gamma %.3f, R^2 %.4f", rel, f.gamma, f.r2);
  return r;
}

CriterionResult wegner(const CriterionOptions& opt) {
  CriterionResult r;
  WegnerConfig c;
  c.grid = build_grid(1, 1, 16, 1, 16);
  c.model = default_model();
  c.E = -1.0;
  for (int k = 6; k >= 0; --k) c.eps.push_back(0.1 * std::pow(10.0, -1.5 * k / 6.0));
  c.n_samples = 2000;
  c.seed = 5;
  c.workers = opt.workers;
  const WegnerTable t = wegner_probe(c);
  r.passed = t.slope >= 0.8 && t.points == static_cast<int>(c.eps.size());
  r.detail = fmt("slope %.3f over eps in [%.2e, %.2e]; p from %.4f to %.4f", t.slope, c.eps.front(), c.eps.back(),
                 t.p.front(), t.p.back());
  return r;
}

CriterionResult dynamics(const CriterionOptions&) {
  CriterionResult r;
  const int L = 60, M = 16;
  const GridSpec g = build_grid(1, 1, L, 1, M);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(g.size());
  u[g.index({{L / 2, 0}, {M / 2, 0}})] = 1.0;
  const std::array<double, 2> origin{double(L / 2), 0.0};

  std::vector<double> t_free;
  for (int k = 0; k <= 20; ++k) t_free.push_back(0.5 * k);
  const Hamiltonian F = assemble(g, std::vector<double>(g.size(), 0.0), BoundarySpec::dirichlet());
  const DynamicsResult free = dynamics_moment(F, -1.0, 1e3, 2.0, t_free, u, origin);
  bool increasing = true;
  for (std::size_t i = 1; i < free.moment.size(); ++i) increasing = increasing && free.moment[i] > free.moment[i - 1];

  // Tail window: E <= E0 + 3/4 |E0| of the periodic operator.
  const double E_hi = check_s4(default_model(), g).E0 * 0.25;
  std::vector<double> t_dis{0.0};
  for (int k = 0; k <= 24; ++k) t_dis.push_back(std::pow(10.0, -1.0 + 5.0 * k / 24.0));
  double worst = 0.0;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    const Hamiltonian H = assemble(g, default_model().realize(g, s).total(), BoundarySpec::dirichlet());
    const DynamicsResult d = dynamics_moment(H, -1e3, E_hi, 2.0, t_dis, u, origin);
    double early = 0.0;
    for (std::size_t i = 0; i < t_dis.size(); ++i)
      if (t_dis[i] <= 10.0) early = std::max(early, d.moment[i]);
    worst = std::max(worst, early > 0.0 ? d.sup / early : 0.0);
  }
  r.passed = increasing && worst <= 10.0;
  r.detail = fmt("free M2 strictly increasing on t in [0, 10]: %s (M2(10) = %.2f); disordered window E <= %.3f: "
                 "max sup/early ratio %.2f over 3 realizations (t up to 1e4)",
                 increasing ? "yes" : "no", free.moment.back(), E_hi, worst);
  return r;
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "exact identities", 60, exact_identities},
      {2, "closed-form spectra", 60, closed_forms},
      {3, "oracle equivalence", 300, oracle_equivalence},
      {4, "ordering invariants", 300, ordering},
      {5, "parabolicity sandwich", 300, parabolicity},
      {6, "truncation stabilization", 300, truncation},
      {7, "IDSS sandwich", 600, idss_sandwich},
      {8, "Lifshits quantum exponent", 1800, lifshits_quantum},
      {9, "Lifshits classical ordering", 1800, lifshits_classical},
      {10, "decay fits", 120, decay_fits},
      {11, "Wegner probe", 600, wegner},
      {12, "dynamics contrast", 300, dynamics},
  };
  return list;
}

CriterionResult run_criterion(const Criterion& c, const CriterionOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = c.run(opt);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.id = c.id;
  r.name = c.name;
  r.budget = c.budget;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds > r.budget) {
    r.passed = false;
    r.detail += fmt("; runtime %.0f s over the %.0f s budget", r.seconds, r.budget);
  }
  return r;
}

}  // namespace surflab::checks
