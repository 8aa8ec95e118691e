#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "checks/criteria.hpp"
#include "ref_cache.hpp"
#include "surflab/error.hpp"
#include "surflab/idss.hpp"
#include "surflab/localization.hpp"
#include "surflab/report.hpp"
#include "surflab/seed.hpp"
#include "surflab/spectral.hpp"

namespace surflab::cli {

namespace {

struct Context {
  const json& config;
  ConfigReader cfg;
  Geometry geo;
  PotentialConfig pot;
  std::uint64_t seed = 1;
  int workers = 1;
  std::filesystem::path out;
  std::string prefix;
  RefCache cache;
  RunOutcome result;

  std::string potential_key() const {
    const json* p = cfg.find("potential");
    return p ? p->dump() : "{}";
  }
  std::shared_ptr<const GroundStateRef> ref(int M) {
    return cache.get(potential_key(), geo.cell().with_M(M), periodic_of(pot), M + 2);
  }
  void emit(const std::string& suffix, const CsvTable& t) {
    const std::string path = (out / (prefix + suffix + ".csv")).string();
    write_text(path, t.str());
    result.files.push_back(path);
  }
  void require_surface(const char* sub) const {
    if (!pot.surface) ConfigReader::fail("potential.surface", std::string(sub) + " needs a random surface potential");
  }
};

std::string f17(double v) { return fmt17(v); }
std::string i2s(long long v) { return std::to_string(v); }

double tol_for(double E0) { return 1e-9 * (1.0 + std::abs(E0)); }

void cmd_band(Context& c) {
  const int n = c.cfg.get_int("run.theta_points", 33);
  if (n < 3 || n % 2 == 0) ConfigReader::fail("run.theta_points", "must be odd and >= 3");
  const BandCurve b = band_curve(c.geo.cell(), periodic_of(c.pot), theta_grid(c.geo.d1, n), c.workers);
  std::vector<std::string> head{"theta1"};
  if (c.geo.d1 == 2) head.push_back("theta2");
  for (const char* h : {"E", "residual", "dE", "k_disc", "upper_margin", "upper_margin_disc", "lower_margin"})
    head.push_back(h);
  CsvTable t(head);
  const double tol = tol_for(b.E0);
  double lo = 1e300, up = 1e300;
  for (std::size_t i = 0; i < b.E.size(); ++i) {
    std::vector<double> row{b.theta[i][0]};
    if (c.geo.d1 == 2) row.push_back(b.theta[i][1]);
    for (double v : {b.E[i], b.residual[i], b.dE[i], b.kdisc[i], b.upper_margin[i], b.upper_margin_disc[i],
                     b.lower_margin[i]})
      row.push_back(v);
    t.add_numbers(row);
    lo = std::min(lo, b.lower_margin[i]);
    up = std::min(up, b.upper_margin_disc[i]);
  }
  c.emit("", t);
  c.result.passed = lo >= -tol && up >= -tol && b.min_offset() >= -tol;
  c.result.summary = {{"E0", b.E0},           {"C1", b.harnack.C1},   {"C2", b.harnack.C2},
                      {"ratio2", b.harnack.ratio2()}, {"min_offset", b.min_offset()}, {"min_lower_margin", lo},
                      {"min_upper_margin_disc", up},  {"tol", tol}};
}

void cmd_gap(Context& c) {
  for (int L : c.geo.Ls)
    if (L < 2) ConfigReader::fail("geometry.Ls", "gap certificates need L >= 2");
  const auto ref = c.ref(c.geo.M);
  const GapCertificate g = gap_certificate(periodic_of(c.pot), c.geo.Ls, *ref);
  CsvTable t({"L", "E0", "E1", "gap", "x1_gap", "x2_gap", "gap_bar", "bound", "margin", "e0_error", "tol",
              "certified"});
  json per = json::array();
  for (const GapReport& r : g.reports) {
    t.add_row({i2s(r.L), f17(r.E0), f17(r.E1), f17(r.gap), f17(r.x1_gap), f17(r.x2_gap), f17(r.gap_bar),
               f17(r.bound), f17(r.margin), f17(r.e0_error), f17(r.tol), r.certified() ? "1" : "0"});
    c.result.passed = c.result.passed && r.certified();
    per.push_back({{"L", r.L}, {"gap", r.gap}, {"bound", r.bound}, {"certified", r.certified()}});
  }
  c.emit("", t);
  c.result.summary = {{"E0", g.reference_E0}, {"reference_residual", ref->residual}, {"C1", g.harnack.C1},
                      {"C2", g.harnack.C2},   {"certificates", per}};
}

IdssConfig idss_config(Context& c, int L) {
  c.require_surface("idss");
  IdssConfig k;
  k.grid = c.geo.grid(L);
  k.model = c.pot.model;
  k.x1 = read_bc(c.cfg, "run.x1", BcKind::Dirichlet);
  k.x2 = read_bc(c.cfg, "run.x2", BcKind::Dirichlet);
  if (k.x2 == BcKind::Neumann) ConfigReader::fail("run.x2", "x2 faces are \"D\" or \"chi\"");
  k.energies = c.cfg.get_grid("run.energies");
  k.n_samples = c.cfg.get_int("run.n_samples", 100);
  if (k.n_samples < 1) ConfigReader::fail("run.n_samples", "must be >= 1");
  k.seed = c.seed;
  k.workers = c.workers;
  if (k.x1 == BcKind::Mezincescu || k.x2 == BcKind::Mezincescu) k.ref = c.ref(c.geo.M);
  return k;
}

void cmd_idss(Context& c) {
  CsvTable t({"E", "mean", "SE", "n_samples", "L", "M", "cp_upper", "p_positive"});
  CsvTable sw({"L", "E", "lower", "lower_se", "middle", "middle_se", "upper", "upper_se", "holds"});
  const bool sandwich = c.cfg.get_bool("run.sandwich", false);
  json curves = json::array();
  for (int L : c.geo.Ls) {
    const IdssCurve k = idss_estimate(idss_config(c, L));
    const auto pp = k.probability_positive();
    for (std::size_t j = 0; j < k.energies.size(); ++j)
      t.add_row({f17(k.energies[j]), f17(k.mean[j]), f17(k.se[j]), i2s(k.n_samples), i2s(L), i2s(k.M),
                 f17(k.cp_upper[j]), f17(pp[j])});
    curves.push_back({{"L", L}, {"bc", k.bc}});
    if (sandwich) {
      const SandwichReport s = sandwich_check(idss_config(c, L));
      for (std::size_t j = 0; j < s.energies.size(); ++j)
        sw.add_row({i2s(L), f17(s.energies[j]), f17(s.lower[j]), f17(s.lower_se[j]), f17(s.middle[j]),
                    f17(s.middle_se[j]), f17(s.upper[j]), f17(s.upper_se[j]), s.holds[j] ? "1" : "0"});
      c.result.passed = c.result.passed && s.all();
    }
  }
  c.emit("", t);
  if (sandwich) c.emit("_sandwich", sw);
  c.result.summary["curves"] = curves;
  c.result.summary["sandwich_checked"] = sandwich;

  const int reals = c.cfg.get_int("run.bracketing.realizations", 0);
  if (reals > 0) {
    const std::vector<int> Ms = c.cfg.get_ints("run.bracketing.Ms", std::vector<int>{c.geo.M, 2 * c.geo.M});
    for (int M : Ms)
      if (M < 2 || M % 2) ConfigReader::fail("run.bracketing.Ms", "entries must be even and >= 2");
    const std::vector<double> E = c.cfg.get_grid("run.energies");
    CsvTable b({"realization", "E", "count_dd", "count_nd"});
    json stab = json::array();
    int violations = 0;
    for (int i = 0; i < reals; ++i) {
      try {
        const BracketingReport r = bracketing_check(c.pot.model, seed::mix(c.seed, i), c.geo.grid(c.geo.L()), E, Ms,
                                                    read_bc(c.cfg, "run.x1", BcKind::Dirichlet));
        for (std::size_t j = 0; j < E.size(); ++j)
          b.add_row({i2s(i), f17(E[j]), i2s(r.count_dd[j]), i2s(r.count_nd[j])});
        stab.push_back(r.M_stab);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InequalityViolated) throw;
        ++violations;
        stab.push_back(nullptr);
      }
    }
    c.emit("_bracketing", b);
    c.result.summary["bracketing"] = {{"realizations", reals}, {"violations", violations}, {"M_stab", stab}};
    c.result.passed = c.result.passed && violations == 0;
  }
}

void cmd_lifshits(Context& c) {
  c.require_surface("lifshits");
  LifshitsCampaign k;
  k.model = c.pot.model;
  k.d1 = c.geo.d1;
  k.d2 = c.geo.d2;
  k.a = c.geo.a;
  k.M = c.geo.M;
  k.x1 = read_bc(c.cfg, "run.x1", BcKind::Neumann);
  if (c.cfg.has("run.deltas")) {
    k.deltas = c.cfg.get_doubles("run.deltas");
  } else {
    const double dmax = c.cfg.get_double("run.delta_max");
    const double dec = c.cfg.get_double("run.decades", 1.5);
    const int per = c.cfg.get_int("run.per_decade", 8);
    if (!(dmax > 0.0)) ConfigReader::fail("run.delta_max", "must be > 0");
    if (!(dec > 0.0) || per < 1) ConfigReader::fail("run.decades", "need decades > 0 and per_decade >= 1");
    k.deltas = geometric_energies(0.0, dmax, dec, per);
  }
  for (double d : k.deltas)
    if (!(d > 0.0)) ConfigReader::fail("run.deltas", "entries must be > 0");
  k.tie_L = c.cfg.get_bool("run.tie_L", true);
  k.L_min = c.cfg.get_int("run.L_min", 8);
  k.L_max = c.cfg.get_int("run.L_max", 48);
  k.L_fixed = c.cfg.get_int("run.L_fixed", c.geo.L());
  if (k.L_min < 1 || k.L_max < k.L_min) ConfigReader::fail("run.L_max", "need 1 <= L_min <= L_max");
  k.n_samples = c.cfg.get_int("run.n_samples", 2000);
  k.seed = c.seed;
  k.workers = c.workers;
  const LifshitsResult r = lifshits_campaign(k);
  CsvTable t({"E", "delta", "L", "mean", "SE", "n_samples", "M", "cp_upper"});
  for (const LifshitsPoint& p : r.points)
    t.add_row({f17(p.E), f17(p.delta), i2s(p.L), f17(p.mean), f17(p.se), i2s(k.n_samples), i2s(k.M), f17(p.cp_upper)});
  c.emit("", t);
  c.result.summary = {{"E0", r.E0}, {"c", r.c}, {"fitted", r.fitted}};
  if (r.fitted) {
    c.result.summary["fit"] = {{"slope", r.fit.slope}, {"intercept", r.fit.intercept}, {"r2", r.fit.r2},
                               {"points", r.fit.points}, {"E_lo", r.fit.E_lo}, {"E_hi", r.fit.E_hi}};
    if (c.cfg.has("run.expect.slope_min"))
      c.result.passed = c.result.passed && r.fit.slope >= c.cfg.get_double("run.expect.slope_min");
    if (c.cfg.has("run.expect.slope_max"))
      c.result.passed = c.result.passed && r.fit.slope <= c.cfg.get_double("run.expect.slope_max");
    if (c.cfg.has("run.expect.r2_min"))
      c.result.passed = c.result.passed && r.fit.r2 >= c.cfg.get_double("run.expect.r2_min");
  } else {
    c.result.summary["fit_error"] = r.fit_error;
    c.result.passed = !c.cfg.has("run.expect");
  }
}

/// The potential for single-operator commands: "random" (seeded realization),
/// "periodic" (U_per) or "free" (zero).
std::vector<double> single_potential(Context& c, const GridSpec& g, std::string* kind) {
  *kind = c.cfg.get_string("run.potential", "random");
  if (*kind == "random") {
    c.require_surface("a random realization");
    const Realization r = c.pot.model.realize(g, c.seed);
    if (c.cfg.get_bool("output.dump_potential", false)) {
      const std::string path = (c.out / (c.prefix + "_potential.csv")).string();
      write_text(path, realization_csv(r));
      c.result.files.push_back(path);
    }
    return r.total();
  }
  if (*kind == "periodic") return periodic_of(c.pot)(g);
  if (*kind == "free") return std::vector<double>(g.size(), 0.0);
  ConfigReader::fail("run.potential", "expected \"random\", \"periodic\" or \"free\"");
}

BoundarySpec single_bcs(Context& c) {
  const BcKind x1 = read_bc(c.cfg, "run.x1", BcKind::Dirichlet), x2 = read_bc(c.cfg, "run.x2", BcKind::Dirichlet);
  return BoundarySpec::make(x1, x2, x1 == BcKind::Mezincescu || x2 == BcKind::Mezincescu ? c.ref(c.geo.M) : nullptr);
}

void cmd_decay(Context& c) {
  const GridSpec g = c.geo.grid(c.geo.L());
  std::string kind;
  const Hamiltonian H = assemble(g, single_potential(c, g, &kind), single_bcs(c));
  const int k = c.cfg.get_int("run.states", 1);
  if (k < 1 || k > g.size()) ConfigReader::fail("run.states", "must be in [1, sites]");
  const double eta = c.cfg.get_double("run.eta", -0.05);
  if (!(eta < 0.0)) ConfigReader::fail("run.eta", "must be < 0");
  const GridSpec cell = c.geo.cell();
  const double bulk = estimate_bulk_bottom(cell, c.pot.model.bulk_field(cell).values, 2 * c.geo.M).lower;
  const SpectralResult s = lowest_k(H, k, 1e-12);
  CsvTable t({"state", "E", "gamma", "prefactor", "r2", "points", "participation_ratio", "x1_decay_length"});
  CsvTable prof({"state", "slab_site", "distance", "profile"});
  int fitted = 0;
  for (int i = 0; i < k; ++i) {
    if (s.eigenvalues[i] > bulk + eta) break;
    const Eigen::VectorXd v = s.vectors.col(i);
    const DecayFit f = decay_profile(H, s.eigenvalues[i], v, eta, bulk);
    const X1Localization x = x1_localization(g, v);
    t.add_row({i2s(i), f17(f.E), f17(f.gamma), f17(f.prefactor), f17(f.r2), i2s(f.points),
               f17(x.participation_ratio), f17(x.decay_length)});
    for (std::size_t l = 0; l < f.profile.size(); ++l)
      prof.add_row({i2s(i), i2s(static_cast<long long>(l)), f17(f.distance[l]), f17(f.profile[l])});
    c.result.passed = c.result.passed && f.gamma > 0.0;
    ++fitted;
  }
  c.emit("", t);
  c.emit("_profile", prof);
  c.result.summary = {{"potential", kind}, {"bulk_bottom", bulk}, {"states_requested", k}, {"states_fitted", fitted}};
  if (fitted == 0) c.result.passed = false;
}

void cmd_wegner(Context& c) {
  c.require_surface("wegner");
  WegnerConfig k;
  k.grid = c.geo.grid(c.geo.L());
  k.model = c.pot.model;
  k.x1 = read_bc(c.cfg, "run.x1", BcKind::Dirichlet);
  k.x2 = read_bc(c.cfg, "run.x2", BcKind::Dirichlet);
  if (k.x1 == BcKind::Mezincescu || k.x2 == BcKind::Mezincescu) ConfigReader::fail("run.x1", "use \"D\" or \"N\"");
  k.E = c.cfg.get_double("run.E");
  if (const json* e = c.cfg.find("run.eps"); e && e->is_object()) {
    const double lo = c.cfg.get_double("run.eps.min"), hi = c.cfg.get_double("run.eps.max");
    const int n = c.cfg.get_int("run.eps.count");
    if (!(lo > 0.0 && hi > lo) || n < 2) ConfigReader::fail("run.eps", "need 0 < min < max and count >= 2");
    for (int i = 0; i < n; ++i) k.eps.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  } else {
    k.eps = c.cfg.get_doubles("run.eps");
  }
  k.n_samples = c.cfg.get_int("run.n_samples", 2000);
  k.seed = c.seed;
  k.workers = c.workers;
  try {
    k.model.dist.validate();
  } catch (const Error& e) {
    ConfigReader::fail("potential.distribution", e.what());
  }
  const WegnerTable w = wegner_probe(k);
  CsvTable t({"eps", "p", "SE", "n_samples"});
  for (std::size_t j = 0; j < w.eps.size(); ++j) t.add_row({f17(w.eps[j]), f17(w.p[j]), f17(w.se[j]), i2s(k.n_samples)});
  c.emit("", t);
  c.result.summary = {{"E", k.E}, {"slope", w.slope}, {"intercept", w.intercept}, {"points", w.points}};
  if (c.cfg.has("run.expect.slope_min"))
    c.result.passed = w.slope >= c.cfg.get_double("run.expect.slope_min");
}

void cmd_initial_scale(Context& c) {
  c.require_surface("initial-scale");
  InitialScaleConfig k;
  k.model = c.pot.model;
  k.d1 = c.geo.d1;
  k.d2 = c.geo.d2;
  k.a = c.geo.a;
  k.M = c.geo.M;
  k.Ls = c.geo.Ls;
  if (!std::is_sorted(k.Ls.begin(), k.Ls.end())) ConfigReader::fail("geometry.Ls", "must be ascending");
  const double E0 = check_s4(k.model, c.geo.cell()).E0;
  if (c.cfg.has("run.deltas")) {
    for (double d : c.cfg.get_doubles("run.deltas")) k.energies.push_back(E0 + d);
  } else {
    k.energies = c.cfg.get_grid("run.energies");
  }
  k.n_samples = c.cfg.get_int("run.n_samples", 200);
  k.seed = c.seed;
  k.workers = c.workers;
  const InitialScaleTable s = initial_scale_probe(k);
  CsvTable t({"L", "E", "p", "SE", "n_samples"});
  for (std::size_t i = 0; i < s.Ls.size(); ++i)
    for (std::size_t j = 0; j < s.energies.size(); ++j)
      t.add_row({i2s(s.Ls[i]), f17(s.energies[j]), f17(s.p[i][j]), f17(s.se[i][j]), i2s(k.n_samples)});
  c.emit("", t);
  json per = json::array();
  for (std::size_t j = 0; j < s.energies.size(); ++j) {
    per.push_back({{"E", s.energies[j]},
                   {"nondecreasing_in_L", s.nondecreasing(j)},
                   {"strictly_decreasing_in_L", s.strictly_decreasing(j)},
                   {"significantly_decreasing_in_L", s.significantly_decreasing(j)}});
    c.result.passed = c.result.passed && s.nondecreasing(j);
  }
  c.result.summary = {{"E0", E0}, {"energies", per}};
}

void cmd_dynamics(Context& c) {
  const GridSpec g = c.geo.grid(c.geo.L());
  std::string kind;
  const Hamiltonian H = assemble(g, single_potential(c, g, &kind), single_bcs(c));
  SiteCoords start;
  for (int k = 0; k < g.d1(); ++k) start.x1[k] = g.n1() / 2;
  for (int k = 0; k < g.d2(); ++k) start.x2[k] = g.M() / 2;
  if (c.cfg.has("run.site.x1")) {
    const auto v = c.cfg.get_ints("run.site.x1");
    if (static_cast<int>(v.size()) != g.d1()) ConfigReader::fail("run.site.x1", "needs d1 entries");
    for (int k = 0; k < g.d1(); ++k) start.x1[k] = v[k];
  }
  if (c.cfg.has("run.site.x2")) {
    const auto v = c.cfg.get_ints("run.site.x2");
    if (static_cast<int>(v.size()) != g.d2()) ConfigReader::fail("run.site.x2", "needs d2 entries");
    for (int k = 0; k < g.d2(); ++k) start.x2[k] = v[k];
  }
  for (int k = 0; k < g.d1(); ++k)
    if (start.x1[k] < 0 || start.x1[k] >= g.n1()) ConfigReader::fail("run.site.x1", "outside the grid");
  for (int k = 0; k < g.d2(); ++k)
    if (start.x2[k] < 0 || start.x2[k] >= g.M()) ConfigReader::fail("run.site.x2", "outside the grid");
  Eigen::VectorXd u = Eigen::VectorXd::Zero(g.size());
  u[g.index(start)] = 1.0;
  std::array<double, 2> origin{g.x1_coord(start.x1[0]), g.x1_coord(start.x1[1])};
  const double lo = c.cfg.get_double("run.E_lo", -1e300), hi = c.cfg.get_double("run.E_hi");
  const double p = c.cfg.get_double("run.p", 2.0);
  const std::vector<double> times = c.cfg.get_grid("run.times");
  const DynamicsResult d =
      dynamics_moment(H, lo, hi, p, times, u, origin, c.cfg.get_int("run.dense_cap", 2000));
  CsvTable t({"t", "moment", "norm"});
  for (std::size_t i = 0; i < d.times.size(); ++i) t.add_numbers({d.times[i], d.moment[i], d.norm[i]});
  c.emit("", t);
  c.result.passed = d.norm_error <= 1e-9 * std::max(1.0, d.projected_norm);
  c.result.summary = {{"potential", kind},          {"states", d.states}, {"projected_norm", d.projected_norm},
                      {"sup", d.sup},               {"norm_error", d.norm_error}};
}

void cmd_bounds(Context& c) {
  c.require_surface("bounds");
  const int L = c.geo.L();
  const auto ref = c.ref(c.geo.M);
  const PeriodicPotential U = periodic_of(c.pot);
  const GridSpec g = c.geo.grid(L);
  const PotentialModel& m = c.pot.model;
  const double gap = temple_tail_bound(U, *ref, L, std::vector<double>(g.size(), 0.0)).gap;
  const double cap = c.cfg.get_double("run.cap_fraction", 1.0 / 3.0) * gap;
  if (!(cap > 0.0 && cap <= gap / 3.0)) ConfigReader::fail("run.cap_fraction", "must lie in (0, 1/3]");
  const int n = c.cfg.get_int("run.realizations", 10);
  CsvTable t({"realization", "temple_bound", "temple", "temple_direct", "sup_W", "rayleigh_bound", "rayleigh_direct",
              "penalty", "coupling", "bulk"});
  const double tol = 1e-12 * (1.0 + std::abs(ref->E0));
  int bad = 0;
  for (int i = 0; i < n; ++i) {
    const Realization r = m.realize(g, seed::mix(c.seed, i));
    std::vector<double> w;
    if (m.profile.kind == SingleSiteProfile::Kind::Compact) {
      w = quantum_reduction(g, m.profile, r.couplings, m.dist.q_min, cap);
    } else {
      w = classical_reduction(g, m.profile, r.couplings, m.dist.q_min, c.cfg.get_double("run.R", 2.0), 1.0);
      const double top = *std::max_element(w.begin(), w.end());
      if (top > cap)
        for (double& v : w) v *= cap / top;
    }
    const TempleTail tt = temple_tail_bound(U, *ref, L, extend_reduction(g, m.profile, w));
    const RayleighTail rt = rayleigh_tail_bound(r, m, *ref);
    t.add_row({i2s(i), f17(tt.bound), f17(tt.temple), f17(tt.direct), f17(tt.sup_W), f17(rt.bound), f17(rt.direct),
               f17(rt.penalty), f17(rt.coupling), f17(rt.bulk)});
    bad += tt.margin() < -tol || rt.margin() < -tol;
  }
  c.emit("", t);
  c.result.passed = bad == 0;
  c.result.summary = {{"E0", ref->E0}, {"gap", gap}, {"cap", cap}, {"realizations", n}, {"violations", bad}};
}

void cmd_selftest(Context& c) {
  const std::vector<int> ids = c.cfg.get_ints("run.criteria", std::vector<int>{1, 2, 3, 4, 5, 6, 10});
  CsvTable t({"id", "name", "passed"});
  json list = json::array();
  for (int id : ids) {
    const auto& all = checks::criteria();
    const auto it = std::find_if(all.begin(), all.end(), [id](const checks::Criterion& k) { return k.id == id; });
    if (it == all.end()) ConfigReader::fail("run.criteria", "unknown criterion " + std::to_string(id));
    checks::CriterionOptions o;
    o.workers = c.workers;
    const checks::CriterionResult r = checks::run_criterion(*it, o);
    t.add_row({i2s(r.id), r.name, r.passed ? "1" : "0"});
    list.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
    c.result.passed = c.result.passed && r.passed;
  }
  c.emit("", t);
  c.result.summary["invariants"] = list;
}

struct Command {
  void (*run)(Context&);
  std::vector<std::string> run_keys;  ///< accepted besides seed and workers
};

const std::map<std::string, Command>& table() {
  static const std::map<std::string, Command> t{
      {"band", {cmd_band, {"theta_points"}}},
      {"gap", {cmd_gap, {}}},
      {"idss", {cmd_idss, {"x1", "x2", "energies", "n_samples", "sandwich", "bracketing"}}},
      {"lifshits",
       {cmd_lifshits,
        {"x1", "deltas", "delta_max", "decades", "per_decade", "tie_L", "L_min", "L_max", "L_fixed", "n_samples",
         "expect"}}},
      {"decay", {cmd_decay, {"potential", "x1", "x2", "states", "eta"}}},
      {"wegner", {cmd_wegner, {"x1", "x2", "E", "eps", "n_samples", "expect"}}},
      {"initial-scale", {cmd_initial_scale, {"deltas", "energies", "n_samples"}}},
      {"dynamics", {cmd_dynamics, {"potential", "x1", "x2", "site", "E_lo", "E_hi", "p", "times", "dense_cap"}}},
      {"bounds", {cmd_bounds, {"realizations", "cap_fraction", "R"}}},
      {"selftest", {cmd_selftest, {"criteria"}}},
  };
  return t;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"band",          "gap",      "idss",   "lifshits", "decay",
                                              "wegner",        "initial-scale", "dynamics", "bounds", "selftest"};
  return names;
}

RunOutcome execute(const std::string& subcommand, const json& config, const RunOptions& opt) {
  const auto it = table().find(subcommand);
  if (it == table().end()) throw Error(ErrorCode::InvalidParam, "unknown subcommand " + subcommand);
  if (!config.is_object()) ConfigReader::fail("(root)", "config must be a JSON object");
  for (const auto& [key, _] : config.items())
    if (key != "geometry" && key != "potential" && key != "run" && key != "output")
      ConfigReader::fail(key, "unknown top-level block");
  std::vector<std::string> run_keys = it->second.run_keys;
  run_keys.insert(run_keys.end(), {"seed", "workers"});
  Context c{config, ConfigReader(config), {}, {}, 1, 1, {}, {}, RefCache(), {}};
  c.cfg.check_keys("run", run_keys);
  c.cfg.check_keys("run.bracketing", {"realizations", "Ms"});
  c.cfg.check_keys("run.expect", {"slope_min", "slope_max", "r2_min"});
  c.cfg.check_keys("run.site", {"x1", "x2"});
  c.cfg.check_keys("output", {"dir", "prefix", "formats", "dump_potential"});
  if (c.cfg.has("output.formats")) {
    const json& f = *c.cfg.find("output.formats");
    if (!f.is_array()) ConfigReader::fail("output.formats", "expected an array");
    for (const json& e : f)
      if (e != "csv" && e != "json") ConfigReader::fail("output.formats", "supported formats are \"csv\" and \"json\"");
  }
  c.geo = read_geometry(c.cfg);
  c.pot = read_potential(c.cfg, c.geo);
  c.seed = opt.seed ? *opt.seed : c.cfg.get_u64("run.seed", 1);
  c.workers = opt.workers ? *opt.workers : c.cfg.get_int("run.workers", 1);
  if (c.workers < 0) ConfigReader::fail("run.workers", "must be >= 0 (0 = all cores)");
  c.out = opt.out ? *opt.out : c.cfg.get_string("output.dir", ".");
  c.prefix = c.cfg.get_string("output.prefix", subcommand);
  if (c.prefix.empty() || c.prefix.find('/') != std::string::npos)
    ConfigReader::fail("output.prefix", "must be a nonempty file name");

  it->second.run(c);

  json side;
  side["tool"] = "surflab";
  side["version"] = SURFLAB_VERSION;
  side["subcommand"] = subcommand;
  side["config_path"] = opt.config_path;
  side["config"] = config;
  side["seed"] = c.seed;
  side["workers"] = c.workers;
  side["overrides"] = json::object();
  if (opt.seed) side["overrides"]["seed"] = *opt.seed;
  if (opt.workers) side["overrides"]["workers"] = *opt.workers;
  if (opt.out) side["overrides"]["out"] = *opt.out;
  side["timestamp"] = utc_now();
  side["passed"] = c.result.passed;
  side["summary"] = c.result.summary;
  side["files"] = c.result.files;
  side["cache"] = {{"dir", c.cache.dir()}, {"hits", c.cache.hits()}, {"misses", c.cache.misses()}};
  const std::string path = (c.out / (c.prefix + ".json")).string();
  write_text(path, side.dump(2) + "\n");
  c.result.files.push_back(path);
  return c.result;
}

int run_file(const std::string& subcommand, const RunOptions& opt) {
  try {
    std::ifstream in(opt.config_path);
    if (!in) throw Error(ErrorCode::ConfigInvalid, opt.config_path + ": cannot open");
    json config;
    try {
      config = json::parse(in);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ConfigInvalid, opt.config_path + ": " + e.what());
    }
    const RunOutcome r = execute(subcommand, config, opt);
    std::cout << subcommand << ": " << (r.passed ? "PASS" : "FAIL") << "\n";
    for (const std::string& f : r.files) std::cout << "  " << f << "\n";
    return r.passed ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "surflab " << subcommand << ": " << e.what() << "\n";
    return e.code() == ErrorCode::ConfigInvalid ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "surflab " << subcommand << ": " << e.what() << "\n";
    return 3;
  }
}

}  // namespace surflab::cli
