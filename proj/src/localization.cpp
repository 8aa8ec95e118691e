#include "surflab/localization.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>

#include "surflab/ensemble.hpp"
#include "surflab/error.hpp"
#include "surflab/seed.hpp"
#include "surflab/spectral.hpp"

namespace surflab {

namespace {

constexpr double kGuard = 1e-300;

double slab_distance(const GridSpec& g, const SiteCoords& c) {
  double d = 0.0;
  for (int k = 0; k < g.d2(); ++k) d = std::max(d, std::abs(g.x2_coord(c.x2[k])));
  return d;
}

std::int64_t x1_sites(const GridSpec& g) { return g.size() / g.layer_size(); }

}  // namespace

DecayFit decay_profile(const Hamiltonian& H, double E, const Eigen::VectorXd& psi, double eta, double bulk_bottom) {
  const GridSpec& g = H.grid();
  if (psi.size() != g.size()) throw Error(ErrorCode::ShapeMismatch, "eigenvector does not match the grid");
  if (!(eta < 0.0) || !(E <= bulk_bottom + eta))
    throw Error(ErrorCode::InvalidParam, "eigenvalue is not below the bulk bottom by the margin |eta|");
  const std::int64_t slab = g.layer_size();
  DecayFit f;
  f.E = E;
  f.profile.assign(slab, 0.0);
  for (std::int64_t x = 0; x < g.size(); ++x) f.profile[x % slab] = std::max(f.profile[x % slab], std::abs(psi[x]));
  std::vector<double> xs, ys;
  const double outer = 0.25 * g.M() * g.h();
  for (std::int64_t l = 0; l < slab; ++l) {
    const double d = slab_distance(g, g.coords(l));
    f.distance.push_back(d);
    if (d > outer && f.profile[l] > kGuard) {
      xs.push_back(d);
      ys.push_back(std::log(f.profile[l]));
    }
  }
  if (xs.size() < 2) throw Error(ErrorCode::ProfileUnderflow, "outer layers are below the underflow guard");
  const LineFit line = fit_line(xs, ys);
  f.gamma = -line.slope;
  f.prefactor = std::exp(line.intercept);
  f.r2 = line.r2;
  f.points = line.n;
  return f;
}

WegnerTable wegner_probe(const WegnerConfig& cfg) {
  if (cfg.model.dist.kind != CouplingDistribution::Kind::Uniform)
    throw Error(ErrorCode::InvalidParam, "the Wegner probe needs a Uniform coupling law");
  if (cfg.eps.empty()) throw Error(ErrorCode::InvalidParam, "empty eps list");
  for (std::size_t i = 0; i < cfg.eps.size(); ++i)
    if (!(cfg.eps[i] >= 0.0) || (i > 0 && !(cfg.eps[i] > cfg.eps[i - 1])))
      throw Error(ErrorCode::InvalidParam, "eps must be nonnegative and ascending");
  const BoundarySpec bcs = BoundarySpec::make(cfg.x1, cfg.x2);
  const SampleJob job = [&](std::int64_t i) {
    const Realization r = cfg.model.realize(cfg.grid, seed::mix(cfg.seed, i));
    const InertiaCounter c(assemble(cfg.grid, r.total(), bcs));
    std::vector<double> ev;
    for (double e : cfg.eps) ev.push_back(e > 0.0 && c.count(cfg.E + e) > c.count(cfg.E - e) ? 1.0 : 0.0);
    return ev;
  };
  WegnerTable t;
  t.eps = cfg.eps;
  t.events = run_samples(cfg.n_samples, job, cfg.workers);
  const ColumnStats st = column_stats(t.events);
  t.p = st.mean;
  t.se = st.se;
  std::vector<double> xs, ys;
  for (std::size_t j = 0; j < t.eps.size(); ++j)
    if (t.p[j] > 0.0 && t.p[j] < 1.0) {
      xs.push_back(std::log(t.eps[j]));
      ys.push_back(std::log(t.p[j]));
    }
  if (xs.size() < 2) throw Error(ErrorCode::AllZeroOrOne, "fewer than two eps values with 0 < p < 1");
  const LineFit line = fit_line(xs, ys);
  t.slope = line.slope;
  t.intercept = line.intercept;
  t.points = line.n;
  return t;
}

bool InitialScaleTable::strictly_decreasing(std::size_t j) const {
  for (std::size_t i = 1; i < Ls.size(); ++i)
    if (!(p[i][j] < p[i - 1][j])) return false;
  return true;
}

bool InitialScaleTable::nondecreasing(std::size_t j) const {
  for (std::size_t i = 1; i < Ls.size(); ++i)
    if (p[i][j] < p[i - 1][j]) return false;
  return true;
}

bool InitialScaleTable::significantly_decreasing(std::size_t j) const {
  for (std::size_t i = 1; i < Ls.size(); ++i)
    if (!(p[i - 1][j] - p[i][j] > 3.0 * std::hypot(se[i][j], se[i - 1][j]))) return false;
  return true;
}

InitialScaleTable initial_scale_probe(const InitialScaleConfig& cfg) {
  InitialScaleTable t;
  t.Ls = cfg.Ls;
  t.energies = cfg.energies;
  for (int L : cfg.Ls) {
    const GridSpec g = build_grid(cfg.d1, cfg.d2, L, cfg.a, cfg.M);
    const SampleJob job = [&](std::int64_t i) {
      const Realization r = cfg.model.realize(g, seed::mix(cfg.seed, i));
      const InertiaCounter c(assemble(g, r.total(), BoundarySpec::dirichlet()));
      std::vector<double> ev;
      for (double E : cfg.energies) ev.push_back(c.count(E) > 0 ? 1.0 : 0.0);
      return ev;
    };
    const ColumnStats st = column_stats(run_samples(cfg.n_samples, job, cfg.workers));
    t.p.push_back(st.mean);
    t.se.push_back(st.se);
  }
  return t;
}

DynamicsResult dynamics_moment(const Hamiltonian& H, double E_lo, double E_hi, double p,
                               const std::vector<double>& times, const Eigen::VectorXd& u,
                               const std::array<double, 2>& origin, std::int64_t dense_cap) {
  const GridSpec& g = H.grid();
  if (H.dim() > dense_cap)
    throw Error(ErrorCode::DenseCapExceeded, std::to_string(H.dim()) + " sites exceed the dense cap " +
                                                 std::to_string(dense_cap));
  if (u.size() != H.dim()) throw Error(ErrorCode::ShapeMismatch, "initial vector does not match the grid");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.dense_complex());
  std::vector<int> keep;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] >= E_lo && es.eigenvalues()[i] <= E_hi) keep.push_back(i);
  const Eigen::Index n = H.dim();
  const int k = static_cast<int>(keep.size());
  Eigen::MatrixXcd V(n, k);
  Eigen::VectorXd lam(k);
  for (int j = 0; j < k; ++j) {
    V.col(j) = es.eigenvectors().col(keep[j]);
    lam[j] = es.eigenvalues()[keep[j]];
  }
  const Eigen::VectorXcd c = V.adjoint() * u.cast<cplx>();
  Eigen::VectorXd weight(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    const SiteCoords sc = g.coords(x);
    double r2 = 0.0;
    for (int a = 0; a < g.d1(); ++a) {
      const double d = g.x1_coord(sc.x1[a]) - origin[a];
      r2 += d * d;
    }
    weight[x] = std::pow(std::sqrt(r2), p);
  }
  DynamicsResult res;
  res.times = times;
  res.states = k;
  res.projected_norm = c.squaredNorm();
  for (double t : times) {
    Eigen::VectorXcd ct(k);
    for (int j = 0; j < k; ++j) ct[j] = c[j] * std::exp(cplx(0.0, -lam[j] * t));
    const Eigen::VectorXcd psi = V * ct;
    const Eigen::VectorXd dens = psi.cwiseAbs2();
    const double m = weight.dot(dens);
    res.moment.push_back(m);
    res.norm.push_back(dens.sum());
    res.sup = std::max(res.sup, m);
    res.norm_error = std::max(res.norm_error, std::abs(dens.sum() - res.projected_norm));
  }
  return res;
}

X1Localization x1_localization(const GridSpec& grid, const Eigen::VectorXcd& psi) {
  if (psi.size() != grid.size()) throw Error(ErrorCode::ShapeMismatch, "vector does not match the grid");
  const std::int64_t slab = grid.layer_size();
  const std::int64_t n1 = x1_sites(grid);
  std::vector<double> m(n1, 0.0);
  double s2 = 0.0, s4 = 0.0;
  for (std::int64_t x = 0; x < grid.size(); ++x) {
    const double w = std::norm(psi[x]);
    m[x / slab] += w;
    s2 += w;
    s4 += w * w;
  }
  X1Localization r;
  r.participation_ratio = s2 * s2 / s4;
  for (double& v : m) v = std::sqrt(v);
  r.peak = static_cast<int>(std::max_element(m.begin(), m.end()) - m.begin());
  const double floor = 1e-12 * m[r.peak];
  const SiteCoords pc = grid.coords(r.peak * slab);
  std::vector<double> xs, ys;
  for (std::int64_t s = 0; s < n1; ++s) {
    if (!(m[s] > floor)) continue;
    const SiteCoords c = grid.coords(s * slab);
    double d2 = 0.0;
    for (int a = 0; a < grid.d1(); ++a) {
      const double d = (c.x1[a] - pc.x1[a]) * grid.h();
      d2 += d * d;
    }
    xs.push_back(std::sqrt(d2));
    ys.push_back(std::log(m[s]));
  }
  if (xs.size() >= 2) {
    try {
      const LineFit f = fit_line(xs, ys);
      r.decay_length = f.slope < 0.0 ? -1.0 / f.slope : std::numeric_limits<double>::infinity();
      r.r2 = f.r2;
    } catch (const Error&) {
      r.decay_length = std::numeric_limits<double>::infinity();
    }
  } else {
    r.decay_length = 0.0;
  }
  return r;
}

X1Localization x1_localization(const GridSpec& grid, const Eigen::VectorXd& psi) {
  return x1_localization(grid, Eigen::VectorXcd(psi.cast<cplx>()));
}

}  // namespace surflab
