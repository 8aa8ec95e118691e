#include "surflab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "surflab/error.hpp"
#include "surflab/hamiltonian.hpp"
#include "surflab/report.hpp"
#include "surflab/seed.hpp"
#include "surflab/spectral.hpp"

namespace surflab {

namespace {

constexpr double kGeomEps = 1e-9;

double x2_inf(const GridSpec& g, const SiteCoords& c) {
  double m = 0.0;
  for (int k = 0; k < g.d2(); ++k) m = std::max(m, std::abs(g.x2_coord(c.x2[k])));
  return m;
}

}  // namespace

SingleSiteProfile SingleSiteProfile::compact(double w1, double w2, double f0) {
  SingleSiteProfile p;
  p.kind = Kind::Compact;
  p.w1 = w1;
  p.w2 = w2;
  p.f0 = f0;
  return p;
}

SingleSiteProfile SingleSiteProfile::power_law(double alpha, double w2, int R, double f0, double f_u,
                                               double tol) {
  SingleSiteProfile p;
  p.kind = Kind::PowerLaw;
  p.alpha = alpha;
  p.w2 = w2;
  p.R = R;
  p.f0 = f0;
  p.f_u = f_u;
  p.tol = tol;
  return p;
}

void SingleSiteProfile::validate(int d1) const {
  if (!(f0 > 0.0) || !std::isfinite(f0)) throw Error(ErrorCode::InvalidParam, "profile f0 must be > 0");
  if (!(w2 > 0.0)) throw Error(ErrorCode::InvalidParam, "profile w2 must be > 0");
  if (kind == Kind::Compact) {
    if (!(w1 >= 0.0)) throw Error(ErrorCode::InvalidParam, "profile w1 must be >= 0");
    return;
  }
  if (!(alpha > d1 && alpha <= d1 + 2)) throw Error(ErrorCode::InvalidParam, "power-law alpha must lie in (d1, d1+2]");
  if (!(f_u > 0.0 && f_u <= f0)) throw Error(ErrorCode::InvalidParam, "power-law f_u must lie in (0, f0]");
  if (R < 1 || (d1 == 2 && R < 2)) throw Error(ErrorCode::InvalidParam, "power-law R too small");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParam, "power-law tol must be > 0");
}

double SingleSiteProfile::operator()(const double* dx1, int d1, double x2abs) const {
  if (x2abs > w2 + kGeomEps) return 0.0;
  if (kind == Kind::Compact) {
    for (int k = 0; k < d1; ++k)
      if (std::abs(dx1[k]) > w1 + kGeomEps) return 0.0;
    return f0;
  }
  double r2 = 0.0;
  for (int k = 0; k < d1; ++k) r2 += dx1[k] * dx1[k];
  const double r = std::sqrt(r2);
  return r <= 1.0 ? f0 : f0 * std::pow(r, -alpha);
}

double SingleSiteProfile::radius() const { return kind == Kind::Compact ? w1 : static_cast<double>(R); }

double SingleSiteProfile::tail_bound(int d1) const {
  if (kind == Kind::Compact) return 0.0;
  const double r = R;
  if (d1 == 1) return 2.0 * (std::pow(r, -alpha) + std::pow(r, 1.0 - alpha) / (alpha - 1.0)) * f0;
  // Every excluded impurity i has |x1 - i| > R >= 2, and its unit square lies
  // at distance >= |x1 - i| / 2, where |y|^-alpha >= 2^-alpha |x1 - i|^-alpha.
  return std::pow(2.0, alpha) * 2.0 * std::numbers::pi * std::pow(r / 2.0, 2.0 - alpha) / (alpha - 2.0) * f0;
}

CouplingDistribution CouplingDistribution::uniform(double q_min, double q_max) {
  return {Kind::Uniform, q_min, q_max, 0.5};
}

CouplingDistribution CouplingDistribution::two_point(double q_min, double q_max, double p) {
  return {Kind::TwoPoint, q_min, q_max, p};
}

void CouplingDistribution::validate() const {
  if (!(q_min < q_max)) throw Error(ErrorCode::InvalidParam, "distribution needs q_min < q_max");
  if (!(q_max < 0.0)) throw Error(ErrorCode::InvalidParam, "distribution needs q_max < 0");
  if (kind == Kind::TwoPoint && !(p > 0.0 && p <= 1.0))
    throw Error(ErrorCode::InvalidParam, "two-point p must lie in (0, 1]");
}

double CouplingDistribution::quantile(double u) const {
  if (kind == Kind::Uniform) return q_min + (q_max - q_min) * u;
  return u < p ? q_min : q_max;
}

double CouplingDistribution::mean() const {
  if (kind == Kind::Uniform) return 0.5 * (q_min + q_max);
  return p * q_min + (1.0 - p) * q_max;
}

double CouplingDistribution::variance() const {
  const double w = q_max - q_min;
  if (kind == Kind::Uniform) return w * w / 12.0;
  return p * (1.0 - p) * w * w;
}

void BulkRandomSpec::validate() const {
  if (kind == Kind::IidUniform && !(v_max >= 0.0)) throw Error(ErrorCode::InvalidParam, "bulk v_max must be >= 0");
}

PotentialField PotentialField::zeros(const GridSpec& grid, std::string source) {
  PotentialField f{grid, std::vector<double>(grid.size(), 0.0), {std::move(source), 0, 0, 0.0}};
  f.provenance.hash = fnv1a(f.values);
  return f;
}

std::uint64_t fnv1a(const std::vector<double>& values) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double v : values) {
    unsigned char b[sizeof(double)];
    std::memcpy(b, &v, sizeof(double));
    for (unsigned char c : b) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::vector<double> Realization::total() const {
  std::vector<double> v(ub.values.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (ub.values[i] + vb.values[i]) + vs.values[i];
  return v;
}

std::uint64_t Realization::hash() const {
  return seed::mix(seed::mix(ub.provenance.hash, vb.provenance.hash), vs.provenance.hash);
}

PotentialField periodic_bulk(const GridSpec& grid, const std::vector<double>& cell_function) {
  const GridSpec cell = grid.cell(grid.M());
  if (static_cast<std::int64_t>(cell_function.size()) != cell.size())
    throw Error(ErrorCode::ShapeMismatch, "cell function has " + std::to_string(cell_function.size()) +
                                              " entries, cell has " + std::to_string(cell.size()));
  PotentialField f{grid, std::vector<double>(grid.size()), {"periodic_bulk", 0, 0, 0.0}};
  for (std::int64_t s = 0; s < grid.size(); ++s) {
    SiteCoords c = grid.coords(s);
    for (int k = 0; k < grid.d1(); ++k) c.x1[k] %= grid.a();
    f.values[s] = cell_function[cell.index(c)];
  }
  f.provenance.hash = fnv1a(f.values);
  return f;
}

PotentialField surface_from_couplings(const GridSpec& grid, const SingleSiteProfile& profile,
                                      const std::function<double(const int* cell)>& coupling) {
  profile.validate(grid.d1());
  const int d1 = grid.d1();
  const int a = grid.a();
  const int n1 = grid.n1();
  const double rad = profile.radius();

  // Couplings over the bounding box of every window, indexed from lo.
  const int lo = -static_cast<int>(std::ceil(rad)) - 1;
  const int hi = grid.L() + static_cast<int>(std::ceil(rad)) + 1;
  const int span = hi - lo + 1;
  std::vector<double> q(d1 == 1 ? span : static_cast<std::size_t>(span) * span);
  for (int i0 = lo; i0 <= hi; ++i0) {
    if (d1 == 1) {
      const int cell[2] = {i0, 0};
      q[i0 - lo] = coupling(cell);
    } else {
      for (int i1 = lo; i1 <= hi; ++i1) {
        const int cell[2] = {i0, i1};
        q[static_cast<std::size_t>(i1 - lo) * span + (i0 - lo)] = coupling(cell);
      }
    }
  }

  // Column sums over x1 positions; dx1 = (s - i a) / a keeps every cell's
  // offsets bit-identical, so pinned couplings give an exactly periodic field.
  const std::int64_t ncol = d1 == 1 ? n1 : std::int64_t{n1} * n1;
  std::vector<double> col(ncol, 0.0);
  const double big = rad + kGeomEps;
  for (std::int64_t cidx = 0; cidx < ncol; ++cidx) {
    const int s0 = static_cast<int>(cidx % n1);
    const int s1 = d1 == 2 ? static_cast<int>(cidx / n1) : 0;
    const double x0 = static_cast<double>(s0) / a;
    const double x1v = static_cast<double>(s1) / a;
    const int i0lo = static_cast<int>(std::ceil(x0 - big)), i0hi = static_cast<int>(std::floor(x0 + big));
    double acc = 0.0;
    if (d1 == 1) {
      for (int i0 = i0lo; i0 <= i0hi; ++i0) {
        const double dx[1] = {static_cast<double>(s0 - i0 * a) / a};
        const double fv = profile(dx, 1, 0.0);
        if (fv != 0.0) acc += q[i0 - lo] * fv;
      }
    } else {
      const int i1lo = static_cast<int>(std::ceil(x1v - big)), i1hi = static_cast<int>(std::floor(x1v + big));
      for (int i1 = i1lo; i1 <= i1hi; ++i1)
        for (int i0 = i0lo; i0 <= i0hi; ++i0) {
          const double dx[2] = {static_cast<double>(s0 - i0 * a) / a, static_cast<double>(s1 - i1 * a) / a};
          const double fv = profile(dx, 2, 0.0);
          if (fv != 0.0) acc += q[static_cast<std::size_t>(i1 - lo) * span + (i0 - lo)] * fv;
        }
    }
    col[cidx] = acc;
  }

  PotentialField f{grid, std::vector<double>(grid.size(), 0.0), {"surface", 0, 0, 0.0}};
  const std::int64_t layer = grid.layer_size();
  for (std::int64_t s = 0; s < grid.size(); ++s) {
    const SiteCoords c = grid.coords(s);
    if (x2_inf(grid, c) <= profile.w2 + kGeomEps) f.values[s] = col[s / layer];
  }
  return f;
}

PotentialField surface_floor(const GridSpec& grid, const SingleSiteProfile& profile, double q_min) {
  if (q_min > 0.0) throw Error(ErrorCode::InvalidParam, "q_min must be <= 0");
  const double tail = profile.tail_bound(grid.d1());
  if (q_min != 0.0 && tail > profile.tol)
    throw Error(ErrorCode::TailTooLarge, "truncated power-law tail bound " + fmt17(tail) + " exceeds tol " +
                                             fmt17(profile.tol) + "; raise R or tol");
  PotentialField f = surface_from_couplings(grid, profile, [q_min](const int*) { return q_min; });
  f.provenance.source = "surface_floor";
  f.provenance.tail_bound = tail * std::abs(q_min);
  f.provenance.hash = fnv1a(f.values);
  return f;
}

double coupling_at(std::uint64_t seed, const int* cell, int d1, const CouplingDistribution& dist) {
  std::uint64_t h = seed::mix(seed::mix(seed, seed::kSurfaceStream), cell[0]);
  if (d1 == 2) h = seed::mix(h, cell[1]);
  return dist.quantile(seed::unit(h));
}

SurfaceSample sample_surface(const GridSpec& grid, const SingleSiteProfile& profile,
                             const CouplingDistribution& dist, std::uint64_t seed) {
  dist.validate();
  const double tail = profile.tail_bound(grid.d1());
  if (tail > profile.tol)
    throw Error(ErrorCode::TailTooLarge, "truncated power-law tail bound " + fmt17(tail) + " exceeds tol " +
                                             fmt17(profile.tol));
  const int d1 = grid.d1();
  SurfaceSample out;
  out.field = surface_from_couplings(grid, profile,
                                     [&](const int* cell) { return coupling_at(seed, cell, d1, dist); });
  const int L = grid.L();
  const int ncell = d1 == 1 ? L : L * L;
  out.couplings.resize(ncell);
  for (int c = 0; c < ncell; ++c) {
    const int cell[2] = {c % L, c / L};
    out.couplings[c] = coupling_at(seed, cell, d1, dist);
  }
  out.field.provenance = {"sample_surface", seed, fnv1a(out.field.values), tail * std::abs(dist.q_min)};
  return out;
}

PotentialField sample_bulk(const GridSpec& grid, const BulkRandomSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (spec.kind == BulkRandomSpec::Kind::None || spec.v_max == 0.0) {
    PotentialField f = PotentialField::zeros(grid, "bulk_none");
    f.provenance.seed = seed;
    return f;
  }
  PotentialField f{grid, std::vector<double>(grid.size()), {"sample_bulk", seed, 0, 0.0}};
  const std::uint64_t stream = seed::mix(seed, seed::kBulkStream);
  const int half = grid.M() / 2;
  for (std::int64_t s = 0; s < grid.size(); ++s) {
    const SiteCoords c = grid.coords(s);
    std::uint64_t h = stream;
    for (int k = 0; k < grid.d1(); ++k) h = seed::mix(h, c.x1[k]);
    for (int k = 0; k < grid.d2(); ++k) h = seed::mix(h, c.x2[k] - half);
    f.values[s] = spec.v_max * seed::unit(h);
  }
  f.provenance.hash = fnv1a(f.values);
  return f;
}

PotentialField PotentialModel::bulk_field(const GridSpec& grid) const {
  if (!ub_cell) return PotentialField::zeros(grid, "ub_zero");
  return periodic_bulk(grid, ub_cell(grid.cell(grid.M())));
}

std::vector<double> PotentialModel::periodic(const GridSpec& grid) const { return floor(grid).total(); }

Realization PotentialModel::realize(const GridSpec& grid, std::uint64_t seed) const {
  SurfaceSample s = sample_surface(grid, profile, dist, seed);
  return {bulk_field(grid), sample_bulk(grid, bulk, seed), std::move(s.field), std::move(s.couplings)};
}

Realization PotentialModel::floor(const GridSpec& grid) const {
  const int ncell = grid.d1() == 1 ? grid.L() : grid.L() * grid.L();
  return {bulk_field(grid), PotentialField::zeros(grid, "bulk_none"), surface_floor(grid, profile, dist.q_min),
          std::vector<double>(ncell, dist.q_min)};
}

PotentialModel default_model() {
  PotentialModel m;
  m.profile = SingleSiteProfile::compact(0.0, 0.5, 1.0);
  m.dist = CouplingDistribution::uniform(-2.0, -1.0);
  return m;
}

Interval estimate_bulk_bottom(const GridSpec& cell, const std::vector<double>& ub_cell, int M_probe) {
  if (M_probe < cell.M()) throw Error(ErrorCode::InvalidParam, "M_probe must be >= M");
  if (static_cast<std::int64_t>(ub_cell.size()) != cell.size())
    throw Error(ErrorCode::ShapeMismatch, "U_b cell function does not match the cell grid");
  const int L_probe = std::max(1, M_probe / cell.a());
  const GridSpec probe = build_grid(cell.d1(), cell.d2(), L_probe, cell.a(), M_probe);
  const int shift = (M_probe - cell.M()) / 2;
  std::vector<double> v(probe.size());
  for (std::int64_t s = 0; s < probe.size(); ++s) {
    SiteCoords c = probe.coords(s);
    for (int k = 0; k < probe.d1(); ++k) c.x1[k] %= cell.a();
    for (int k = 0; k < probe.d2(); ++k) c.x2[k] = std::clamp(c.x2[k] - shift, 0, cell.M() - 1);
    v[s] = ub_cell[cell.index(c)];
  }
  const auto lo = lowest_k(assemble(probe, v, BoundarySpec::neumann()), 1, 1e-10);
  const auto hi = lowest_k(assemble(probe, v, BoundarySpec::dirichlet()), 1, 1e-10);
  return {lo.eigenvalues[0], hi.eigenvalues[0]};
}

std::string realization_csv(const Realization& r) {
  const GridSpec& g = r.ub.grid;
  std::vector<std::string> header{"site"};
  for (int k = 0; k < g.d1(); ++k) header.push_back("x1_" + std::to_string(k));
  for (int k = 0; k < g.d2(); ++k) header.push_back("x2_" + std::to_string(k));
  for (const char* h : {"U_b", "V_b", "V_s"}) header.emplace_back(h);
  CsvTable t(header);
  for (std::int64_t s = 0; s < g.size(); ++s) {
    const SiteCoords c = g.coords(s);
    std::vector<std::string> row{std::to_string(s)};
    for (int k = 0; k < g.d1(); ++k) row.push_back(fmt17(g.x1_coord(c.x1[k])));
    for (int k = 0; k < g.d2(); ++k) row.push_back(fmt17(g.x2_coord(c.x2[k])));
    row.push_back(fmt17(r.ub.values[s]));
    row.push_back(fmt17(r.vb.values[s]));
    row.push_back(fmt17(r.vs.values[s]));
    t.add_row(std::move(row));
  }
  return t.str();
}

}  // namespace surflab
