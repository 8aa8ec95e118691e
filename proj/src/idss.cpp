#include "surflab/idss.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "surflab/ensemble.hpp"
#include "surflab/error.hpp"
#include "surflab/seed.hpp"
#include "surflab/spectral.hpp"

namespace surflab {

namespace {

constexpr double kSolveTol = 1e-10;

double surface_volume(const GridSpec& g) { return std::pow(static_cast<double>(g.L()), g.d1()); }

void require_ascending(const std::vector<double>& e) {
  if (e.empty()) throw Error(ErrorCode::InvalidParam, "empty energy grid");
  for (std::size_t i = 1; i < e.size(); ++i)
    if (!(e[i] > e[i - 1])) throw Error(ErrorCode::InvalidParam, "energy grid must be strictly ascending");
}

std::vector<double> counts_at(const Hamiltonian& H, const std::vector<double>& energies) {
  const InertiaCounter c(H);
  std::vector<double> out;
  out.reserve(energies.size());
  for (double E : energies) out.push_back(static_cast<double>(c.count(E)));
  return out;
}

void check_preconditions(const IdssConfig& cfg) {
  const S4Check s4 = check_s4(cfg.model, cfg.grid);
  if (!s4.holds())
    throw Error(ErrorCode::S4Violated, "periodic ground energy " + std::to_string(s4.E0) +
                                           " is not below the bulk bottom " + std::to_string(s4.bulk.lower));
  if (!(cfg.energies.back() < s4.bulk.lower))
    throw Error(ErrorCode::InvalidParam, "energies must lie below the bulk bottom estimate");
}

IdssCurve estimate(IdssConfig cfg, bool parallel) {
  require_ascending(cfg.energies);
  if (cfg.n_samples < 1) throw Error(ErrorCode::InvalidParam, "n_samples must be >= 1");
  if (cfg.check_preconditions) check_preconditions(cfg);
  const BoundarySpec bcs = ensemble_bcs(cfg);
  const SampleJob job = [&](std::int64_t i) {
    const Realization r = cfg.model.realize(cfg.grid, seed::mix(cfg.seed, i));
    return counts_at(assemble(cfg.grid, r.total(), bcs), cfg.energies);
  };
  IdssCurve c;
  c.counts = parallel ? run_samples(cfg.n_samples, job, cfg.workers) : run_samples_serial(cfg.n_samples, job);
  const ColumnStats st = column_stats(c.counts);
  const double vol = surface_volume(cfg.grid);
  c.energies = cfg.energies;
  c.n_samples = cfg.n_samples;
  c.L = cfg.grid.L();
  c.M = cfg.grid.M();
  c.a = cfg.grid.a();
  c.bc = to_string(cfg.x1);
  c.seed = cfg.seed;
  const std::vector<double> pos = positive_fraction(c.counts);
  for (std::size_t j = 0; j < cfg.energies.size(); ++j) {
    c.mean.push_back(st.mean[j] / vol);
    c.se.push_back(st.se[j] / vol);
    const auto k = static_cast<std::int64_t>(std::llround(pos[j] * static_cast<double>(cfg.n_samples)));
    c.cp_upper.push_back(clopper_pearson_upper(k, cfg.n_samples) / vol);
  }
  return c;
}

}  // namespace

PeriodicPotential periodic_potential(const PotentialModel& model) {
  return [model](const GridSpec& g) { return model.periodic(g); };
}

S4Check check_s4(const PotentialModel& model, const GridSpec& grid) {
  const GridSpec cell = grid.cell(grid.M());
  S4Check s;
  s.E0 = ground_state_cell(cell, periodic_potential(model), cell.M() + 2).E0;
  s.bulk = estimate_bulk_bottom(cell, model.bulk_field(cell).values, 2 * cell.M());
  return s;
}

std::vector<double> IdssCurve::probability_positive() const { return positive_fraction(counts); }

BoundarySpec ensemble_bcs(IdssConfig& cfg) {
  if (cfg.x1 == BcKind::Bloch || cfg.x2 == BcKind::Bloch)
    throw Error(ErrorCode::InvalidParam, "ensembles use D, N or Mezincescu faces");
  const bool mez = cfg.x1 == BcKind::Mezincescu || cfg.x2 == BcKind::Mezincescu;
  if (mez && !cfg.ref)
    cfg.ref = std::make_shared<const GroundStateRef>(
        ground_state_cell(cfg.grid.cell(cfg.grid.M()), periodic_potential(cfg.model), cfg.grid.M() + 2));
  return BoundarySpec::make(cfg.x1, cfg.x2, mez ? cfg.ref : nullptr);
}

IdssCurve idss_estimate(IdssConfig cfg) { return estimate(std::move(cfg), true); }

IdssCurve idss_estimate_serial(IdssConfig cfg) { return estimate(std::move(cfg), false); }

BracketingReport bracketing_check(const PotentialModel& model, std::uint64_t seed, const GridSpec& grid,
                                  const std::vector<double>& energies, const std::vector<int>& Ms, BcKind x1) {
  require_ascending(energies);
  BracketingReport rep;
  rep.energies = energies;
  const std::vector<double> V = model.realize(grid, seed).total();
  auto to_int = [](const std::vector<double>& v) {
    std::vector<std::int64_t> o;
    for (double x : v) o.push_back(static_cast<std::int64_t>(x));
    return o;
  };
  rep.count_dd = to_int(counts_at(assemble(grid, V, BoundarySpec::dirichlet()), energies));
  rep.count_nd =
      to_int(counts_at(assemble(grid, V, BoundarySpec::make(BcKind::Neumann, BcKind::Dirichlet)), energies));
  for (std::size_t j = 0; j < energies.size(); ++j)
    if (rep.count_dd[j] > rep.count_nd[j])
      throw Error(ErrorCode::InequalityViolated,
                  "count(D,D) > count(N,D) at E = " + std::to_string(energies[j]));

  rep.Ms = Ms;
  std::sort(rep.Ms.begin(), rep.Ms.end());
  for (int M : rep.Ms) {
    const GridSpec g = grid.with_M(M);
    rep.count_by_M.push_back(to_int(
        counts_at(assemble(g, model.realize(g, seed).total(), BoundarySpec::make(x1, BcKind::Dirichlet)), energies)));
  }
  for (std::size_t i = 1; i < rep.count_by_M.size(); ++i)
    for (std::size_t j = 0; j < energies.size(); ++j)
      if (rep.count_by_M[i][j] < rep.count_by_M[i - 1][j])
        throw Error(ErrorCode::InequalityViolated, "count decreased from M = " + std::to_string(rep.Ms[i - 1]) +
                                                       " to M = " + std::to_string(rep.Ms[i]) +
                                                       " at E = " + std::to_string(energies[j]));
  for (std::size_t i = 0; i + 1 < rep.count_by_M.size(); ++i) {
    bool same = true;
    for (std::size_t k = i + 1; k < rep.count_by_M.size(); ++k) same = same && rep.count_by_M[k] == rep.count_by_M[i];
    if (same) {
      rep.M_stab = rep.Ms[i];
      break;
    }
  }
  return rep;
}

bool SandwichReport::all() const { return std::all_of(holds.begin(), holds.end(), [](bool b) { return b; }); }

SandwichReport sandwich_check(IdssConfig cfg) {
  require_ascending(cfg.energies);
  if (cfg.check_preconditions) check_preconditions(cfg);
  cfg.x1 = BcKind::Mezincescu;
  cfg.x2 = BcKind::Mezincescu;
  const BoundarySpec chi = ensemble_bcs(cfg);
  const std::size_t ne = cfg.energies.size();
  const double vol = surface_volume(cfg.grid);
  const std::vector<double> per =
      counts_at(assemble(cfg.grid, cfg.model.periodic(cfg.grid), chi), cfg.energies);

  const SampleJob job = [&](std::int64_t i) {
    const std::vector<double> V = cfg.model.realize(cfg.grid, seed::mix(cfg.seed, i)).total();
    const std::vector<double> d = counts_at(assemble(cfg.grid, V, BoundarySpec::dirichlet()), cfg.energies);
    const std::vector<double> x = counts_at(assemble(cfg.grid, V, chi), cfg.energies);
    std::vector<double> row(3 * ne);
    for (std::size_t j = 0; j < ne; ++j) {
      row[j] = d[j] > 0.0 ? 1.0 / vol : 0.0;
      row[ne + j] = x[j] / vol;
      row[2 * ne + j] = x[j] > 0.0 ? per[j] / vol : 0.0;
    }
    return row;
  };
  const ColumnStats st = column_stats(run_samples(cfg.n_samples, job, cfg.workers));
  SandwichReport rep;
  rep.energies = cfg.energies;
  for (std::size_t j = 0; j < ne; ++j) {
    rep.lower.push_back(st.mean[j]);
    rep.lower_se.push_back(st.se[j]);
    rep.middle.push_back(st.mean[ne + j]);
    rep.middle_se.push_back(st.se[ne + j]);
    rep.upper.push_back(st.mean[2 * ne + j]);
    rep.upper_se.push_back(st.se[2 * ne + j]);
    const double s1 = std::hypot(st.se[j], st.se[ne + j]), s2 = std::hypot(st.se[ne + j], st.se[2 * ne + j]);
    rep.holds.push_back(rep.lower[j] <= rep.middle[j] + 3.0 * s1 && rep.middle[j] <= rep.upper[j] + 3.0 * s2);
  }
  return rep;
}

namespace {

// x1 site s (flattened, axis 0 fastest) to lattice indices.
std::array<int, 2> x1_site(const GridSpec& g, std::int64_t s) {
  return {static_cast<int>(s % g.n1()), g.d1() == 2 ? static_cast<int>(s / g.n1()) : 0};
}

std::int64_t x1_count(const GridSpec& g) { return g.d1() == 1 ? g.n1() : std::int64_t{g.n1()} * g.n1(); }

std::array<int, 2> cell_of(const GridSpec& g, std::size_t j) {
  return {static_cast<int>(j % g.L()), g.d1() == 2 ? static_cast<int>(j / g.L()) : 0};
}

void check_couplings(const GridSpec& g, const std::vector<double>& couplings) {
  if (static_cast<std::int64_t>(couplings.size()) != x1_count(g) / (g.d1() == 1 ? g.a() : g.a() * g.a()))
    throw Error(ErrorCode::ShapeMismatch, "one coupling per cell expected");
}

}  // namespace

std::vector<double> quantum_reduction(const GridSpec& grid, const SingleSiteProfile& profile,
                                      const std::vector<double>& couplings, double q_min, double cap) {
  check_couplings(grid, couplings);
  const double fu = profile.kind == SingleSiteProfile::Kind::Compact ? profile.f0 : profile.f_u;
  std::vector<double> w(x1_count(grid), 0.0);
  for (std::int64_t s = 0; s < x1_count(grid); ++s) {
    const auto x = x1_site(grid, s);
    for (std::size_t j = 0; j < couplings.size(); ++j) {
      const auto c = cell_of(grid, j);
      double inf = 0.0, two = 0.0;
      for (int k = 0; k < grid.d1(); ++k) {
        const double dx = static_cast<double>(x[k] - c[k] * grid.a()) / grid.a();
        inf = std::max(inf, std::abs(dx));
        two += dx * dx;
      }
      const bool in_f1 = profile.kind == SingleSiteProfile::Kind::Compact ? inf <= profile.w1 + 1e-9
                                                                          : std::sqrt(two) <= 1.0;
      if (in_f1) w[s] += fu * std::min(couplings[j] - q_min, cap);
    }
  }
  return w;
}

std::vector<double> classical_reduction(const GridSpec& grid, const SingleSiteProfile& profile,
                                        const std::vector<double>& couplings, double q_min, double R, double scale) {
  check_couplings(grid, couplings);
  const double center = 0.5 * (grid.L() - 1);
  std::vector<double> w(x1_count(grid), 0.0);
  for (std::int64_t s = 0; s < x1_count(grid); ++s) {
    const auto x = x1_site(grid, s);
    for (std::size_t j = 0; j < couplings.size(); ++j) {
      const auto c = cell_of(grid, j);
      double from_center = 0.0, two = 0.0;
      for (int k = 0; k < grid.d1(); ++k) {
        from_center = std::max(from_center, std::abs(c[k] - center));
        const double dx = static_cast<double>(x[k] - c[k] * grid.a()) / grid.a();
        two += dx * dx;
      }
      if (from_center <= R) continue;
      w[s] += scale * profile.f_u * std::min(couplings[j] - q_min, 1.0) *
              std::pow(std::max(1.0, std::sqrt(two)), -profile.alpha);
    }
  }
  return w;
}

std::vector<double> extend_reduction(const GridSpec& grid, const SingleSiteProfile& profile,
                                     const std::vector<double>& w_x1) {
  if (static_cast<std::int64_t>(w_x1.size()) != x1_count(grid))
    throw Error(ErrorCode::ShapeMismatch, "one reduction value per x1 site expected");
  std::vector<double> W(grid.size(), 0.0);
  for (std::int64_t x = 0; x < grid.size(); ++x) {
    const SiteCoords c = grid.coords(x);
    double x2 = 0.0;
    for (int k = 0; k < grid.d2(); ++k) x2 = std::max(x2, std::abs(grid.x2_coord(c.x2[k])));
    if (x2 <= profile.w2 + 1e-9) W[x] = w_x1[c.x1[0] + std::int64_t{grid.n1()} * c.x1[1]];
  }
  return W;
}

TempleTail temple_tail_bound(const PeriodicPotential& U, const GroundStateRef& ref, int L,
                             const std::vector<double>& W) {
  const int M = ref.grid.M() - 2;
  const GridSpec g = ref.grid.with_M(M).with_L(L);
  if (static_cast<std::int64_t>(W.size()) != g.size()) throw Error(ErrorCode::ShapeMismatch, "W must live on the strip");
  TempleTail t;
  for (double w : W) {
    if (!(w >= 0.0)) throw Error(ErrorCode::InvalidParam, "reducing potential must be nonnegative");
    t.sup_W = std::max(t.sup_W, w);
  }
  const SpectralResult base = lowest_k(chi_strip(U, ref, L, M), 2, kSolveTol);
  t.gap = base.eigenvalues[1] - base.eigenvalues[0];
  if (t.sup_W > t.gap / 3.0)
    throw Error(ErrorCode::GapTooSmall, "sup W = " + std::to_string(t.sup_W) + " exceeds gap / 3 = " +
                                            std::to_string(t.gap / 3.0));
  Eigen::VectorXd u = extend_ground_state(g, ref);
  u /= u.norm();
  double mean_w = 0.0;
  for (std::int64_t x = 0; x < g.size(); ++x) mean_w += W[x] * u[x] * u[x];
  t.shift = 0.5 * mean_w;
  t.bound = ref.E0 + t.shift;

  std::vector<double> V = U ? U(g) : std::vector<double>(g.size(), 0.0);
  for (std::int64_t x = 0; x < g.size(); ++x) V[x] += W[x];
  const Hamiltonian H = assemble(g, V, BoundarySpec::make(BcKind::Mezincescu, BcKind::Mezincescu,
                                                          std::make_shared<const GroundStateRef>(ref)));
  t.temple = temple_lower_bound(H, u, base.eigenvalues[1]);
  t.direct = lowest_k(H, 1, kSolveTol).eigenvalues[0];
  return t;
}

RayleighTail rayleigh_tail_bound(const Realization& r, const PotentialModel& model, const GroundStateRef& ref) {
  const GridSpec& g = r.ub.grid;
  if (ref.grid.M() < g.M()) throw Error(ErrorCode::IncompatibleRef, "reference cell is shallower than the domain");
  Eigen::VectorXd u = extend_ground_state(g, ref);
  for (std::int64_t x = 0; x < g.size(); ++x) {
    const SiteCoords c = g.coords(x);
    for (int k = 0; k < g.d1(); ++k) u[x] *= std::sin(std::numbers::pi * (c.x1[k] + 1) / (g.n1() + 1));
  }
  const double nn = u.squaredNorm();
  RayleighTail t;
  t.E0 = ref.E0;
  const Hamiltonian HV = assemble(g, r.total(), BoundarySpec::dirichlet());
  t.bound = rayleigh_ritz_upper(HV, u);
  t.penalty = rayleigh_ritz_upper(assemble(g, model.periodic(g), BoundarySpec::dirichlet()), u) - ref.E0;
  const PotentialField floor = surface_floor(g, model.profile, model.dist.q_min);
  for (std::int64_t x = 0; x < g.size(); ++x) {
    t.coupling += (r.vs.values[x] - floor.values[x]) * u[x] * u[x] / nn;
    t.bulk += r.vb.values[x] * u[x] * u[x] / nn;
  }
  t.direct = lowest_k(HV, 1, kSolveTol).eigenvalues[0];
  return t;
}

LifshitsFit lifshits_fit(const std::vector<double>& energies, const std::vector<double>& N, double E0, double E_lo,
                         double E_hi) {
  if (energies.size() != N.size()) throw Error(ErrorCode::ShapeMismatch, "energies and N differ in length");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < energies.size(); ++i) {
    const double E = energies[i];
    if (!(E > E_lo && E <= E_hi && E > E0 && N[i] > 0.0 && N[i] < 1.0)) continue;
    xs.push_back(std::log(E - E0));
    ys.push_back(std::log(std::abs(std::log(N[i]))));
  }
  const int n = static_cast<int>(xs.size());
  if (n < 5) throw Error(ErrorCode::TooFewPoints, std::to_string(n) + " usable points in the fit window");
  const LineFit line = fit_line(xs, ys);
  LifshitsFit f;
  f.E_lo = E_lo;
  f.E_hi = E_hi;
  f.points = n;
  f.slope = line.slope;
  f.intercept = line.intercept;
  f.r2 = line.r2;
  return f;
}

std::vector<double> geometric_energies(double E0, double delta_max, double decades, int per_decade) {
  if (!(delta_max > 0.0) || !(decades > 0.0) || per_decade < 1)
    throw Error(ErrorCode::InvalidParam, "geometric grid needs delta_max > 0, decades > 0, per_decade >= 1");
  const int n = static_cast<int>(std::lround(decades * per_decade)) + 1;
  std::vector<double> e;
  for (int k = n - 1; k >= 0; --k) e.push_back(E0 + delta_max * std::pow(10.0, -static_cast<double>(k) / per_decade));
  return e;
}

LifshitsResult lifshits_campaign(const LifshitsCampaign& c) {
  if (c.deltas.empty()) throw Error(ErrorCode::InvalidParam, "no energies in the campaign");
  const GridSpec cell = build_grid(c.d1, c.d2, 1, c.a, c.M);
  const S4Check s4 = check_s4(c.model, cell);
  if (!s4.holds()) throw Error(ErrorCode::S4Violated, "periodic ground energy is not below the bulk bottom");
  LifshitsResult res;
  res.E0 = s4.E0;
  const double dmax = *std::max_element(c.deltas.begin(), c.deltas.end());
  res.c = c.L_min * std::sqrt(dmax);

  std::map<int, std::vector<double>> groups;
  for (double d : c.deltas) {
    if (!(d > 0.0)) throw Error(ErrorCode::InvalidParam, "campaign energies must lie above E0");
    if (!(s4.E0 + d < s4.bulk.lower)) throw Error(ErrorCode::InvalidParam, "campaign energy above the bulk bottom");
    const int L = c.tie_L ? std::clamp(static_cast<int>(std::lround(res.c / std::sqrt(d))), c.L_min, c.L_max)
                          : c.L_fixed;
    groups[L].push_back(d);
  }
  for (auto& [L, ds] : groups) {
    std::sort(ds.begin(), ds.end());
    IdssConfig cfg;
    cfg.grid = build_grid(c.d1, c.d2, L, c.a, c.M);
    cfg.model = c.model;
    cfg.x1 = c.x1;
    cfg.n_samples = c.n_samples;
    cfg.seed = seed::mix(c.seed, L);
    cfg.workers = c.workers;
    cfg.check_preconditions = false;
    for (double d : ds) cfg.energies.push_back(s4.E0 + d);
    const IdssCurve curve = idss_estimate(cfg);
    for (std::size_t j = 0; j < ds.size(); ++j)
      res.points.push_back({curve.energies[j], ds[j], L, curve.mean[j], curve.se[j], curve.cp_upper[j]});
  }
  std::sort(res.points.begin(), res.points.end(), [](const auto& x, const auto& y) { return x.E < y.E; });
  std::vector<double> E, N;
  for (const auto& p : res.points) {
    E.push_back(p.E);
    N.push_back(p.mean);
  }
  try {
    res.fit = lifshits_fit(E, N, res.E0, res.E0, E.back());
    res.fitted = true;
  } catch (const Error& e) {
    res.fit_error = e.what();
  }
  return res;
}

}  // namespace surflab
