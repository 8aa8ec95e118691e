#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "surflab/error.hpp"
#include "surflab/idss.hpp"

namespace surflab::cli {

namespace {

std::vector<std::string> split(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = path.find('.', start);
    parts.push_back(path.substr(start, dot - start));
    if (dot == std::string::npos) return parts;
    start = dot + 1;
  }
}

template <class T, class Check>
T read(const ConfigReader& c, const std::string& path, const std::optional<T>& def, const char* what, Check ok) {
  const json* v = c.find(path);
  if (!v) {
    if (def) return *def;
    ConfigReader::fail(path, "required field is missing");
  }
  if (!ok(*v)) ConfigReader::fail(path, std::string("expected ") + what);
  return v->get<T>();
}

}  // namespace

void ConfigReader::fail(const std::string& path, const std::string& why) {
  std::string pointer;
  if (!path.empty() && path != "(root)")
    for (const std::string& key : split(path)) pointer += "/" + key;
  throw Error(ErrorCode::ConfigInvalid, path + " (" + (pointer.empty() ? "root" : pointer) + "): " + why);
}

void ConfigReader::check_keys(const std::string& path, const std::vector<std::string>& allowed) const {
  const json* v = find(path);
  if (!v) return;
  if (!v->is_object()) fail(path, "expected an object");
  for (const auto& [key, _] : v->items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail(path + "." + key, "unknown field");
}

const json* ConfigReader::find(const std::string& path) const {
  const json* node = &root_;
  for (const std::string& key : split(path)) {
    if (!node->is_object()) return nullptr;
    const auto it = node->find(key);
    if (it == node->end() || it->is_null()) return nullptr;
    node = &*it;
  }
  return node;
}

bool ConfigReader::has(const std::string& path) const { return find(path) != nullptr; }

int ConfigReader::get_int(const std::string& path, std::optional<int> def) const {
  return read<int>(*this, path, def, "an integer", [](const json& v) { return v.is_number_integer(); });
}

std::uint64_t ConfigReader::get_u64(const std::string& path, std::optional<std::uint64_t> def) const {
  return read<std::uint64_t>(*this, path, def, "a nonnegative integer",
                             [](const json& v) { return v.is_number_unsigned(); });
}

double ConfigReader::get_double(const std::string& path, std::optional<double> def) const {
  const double x = read<double>(*this, path, def, "a number", [](const json& v) { return v.is_number(); });
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

bool ConfigReader::get_bool(const std::string& path, std::optional<bool> def) const {
  return read<bool>(*this, path, def, "true or false", [](const json& v) { return v.is_boolean(); });
}

std::string ConfigReader::get_string(const std::string& path, std::optional<std::string> def) const {
  return read<std::string>(*this, path, def, "a string", [](const json& v) { return v.is_string(); });
}

std::vector<int> ConfigReader::get_ints(const std::string& path, std::optional<std::vector<int>> def) const {
  return read<std::vector<int>>(*this, path, def, "a nonempty array of integers", [](const json& v) {
    if (!v.is_array() || v.empty()) return false;
    for (const json& e : v)
      if (!e.is_number_integer()) return false;
    return true;
  });
}

std::vector<double> ConfigReader::get_doubles(const std::string& path,
                                              std::optional<std::vector<double>> def) const {
  return read<std::vector<double>>(*this, path, def, "a nonempty array of numbers", [](const json& v) {
    if (!v.is_array() || v.empty()) return false;
    for (const json& e : v)
      if (!e.is_number()) return false;
    return true;
  });
}

std::vector<double> ConfigReader::get_grid(const std::string& path) const {
  const json* v = find(path);
  if (v && v->is_object()) {
    const double from = get_double(path + ".from"), to = get_double(path + ".to");
    const int n = get_int(path + ".count");
    if (n < 1) fail(path + ".count", "must be >= 1");
    if (n == 1) return {from};
    std::vector<double> g;
    for (int i = 0; i < n; ++i) g.push_back(from + (to - from) * i / (n - 1));
    return g;
  }
  return get_doubles(path);
}

Geometry read_geometry(const ConfigReader& c) {
  c.check_keys("geometry", {"d1", "d2", "a", "M", "L", "Ls"});
  Geometry g;
  g.d1 = c.get_int("geometry.d1", 1);
  g.d2 = c.get_int("geometry.d2", 1);
  g.a = c.get_int("geometry.a", 1);
  g.M = c.get_int("geometry.M", 16);
  if (g.d1 != 1 && g.d1 != 2) ConfigReader::fail("geometry.d1", "must be 1 or 2");
  if (g.d2 != 1 && g.d2 != 2) ConfigReader::fail("geometry.d2", "must be 1 or 2");
  if (g.a < 1) ConfigReader::fail("geometry.a", "must be >= 1");
  if (g.M < 2 || g.M % 2 != 0) ConfigReader::fail("geometry.M", "must be even and >= 2");
  if (c.has("geometry.L") && c.has("geometry.Ls")) ConfigReader::fail("geometry.Ls", "give either L or Ls");
  if (c.has("geometry.Ls")) {
    g.Ls = c.get_ints("geometry.Ls");
    for (int L : g.Ls)
      if (L < 1) ConfigReader::fail("geometry.Ls", "entries must be >= 1");
  } else {
    g.Ls = {c.get_int("geometry.L", 8)};
    if (g.Ls[0] < 1) ConfigReader::fail("geometry.L", "must be >= 1");
  }
  for (int L : g.Ls) {
    try {
      g.grid(L);
    } catch (const Error& e) {
      ConfigReader::fail("geometry", e.what());
    }
  }
  return g;
}

PotentialConfig read_potential(const ConfigReader& c, const Geometry& g) {
  c.check_keys("potential", {"surface", "profile", "distribution", "bulk_random", "bulk_periodic"});
  c.check_keys("potential.profile", {"kind", "w1", "w2", "f0", "alpha", "R", "f_u", "tol"});
  c.check_keys("potential.distribution", {"kind", "q_min", "q_max", "p"});
  c.check_keys("potential.bulk_random", {"kind", "v_max"});
  c.check_keys("potential.bulk_periodic", {"kind", "value", "amplitude", "recenter"});
  PotentialConfig p;
  PotentialModel& m = p.model;
  m = default_model();
  p.surface = c.get_bool("potential.surface", true);

  const std::string pk = c.get_string("potential.profile.kind", "compact");
  if (pk == "compact") {
    m.profile = SingleSiteProfile::compact(c.get_double("potential.profile.w1", 0.0),
                                           c.get_double("potential.profile.w2", 0.5),
                                           c.get_double("potential.profile.f0", 1.0));
  } else if (pk == "power_law") {
    const double f0 = c.get_double("potential.profile.f0", 1.0);
    m.profile = SingleSiteProfile::power_law(
        c.get_double("potential.profile.alpha", 1.5), c.get_double("potential.profile.w2", 0.5),
        c.get_int("potential.profile.R", 64), f0, c.get_double("potential.profile.f_u", f0),
        c.get_double("potential.profile.tol", 1e-8));
  } else {
    ConfigReader::fail("potential.profile.kind", "expected \"compact\" or \"power_law\"");
  }
  try {
    m.profile.validate(g.d1);
  } catch (const Error& e) {
    ConfigReader::fail("potential.profile", e.what());
  }

  const std::string dk = c.get_string("potential.distribution.kind", "uniform");
  const double q_min = c.get_double("potential.distribution.q_min", -2.0);
  const double q_max = c.get_double("potential.distribution.q_max", -1.0);
  if (dk == "uniform")
    m.dist = CouplingDistribution::uniform(q_min, q_max);
  else if (dk == "two_point")
    m.dist = CouplingDistribution::two_point(q_min, q_max, c.get_double("potential.distribution.p", 0.5));
  else
    ConfigReader::fail("potential.distribution.kind", "expected \"uniform\" or \"two_point\"");
  try {
    m.dist.validate();
  } catch (const Error& e) {
    ConfigReader::fail("potential.distribution", e.what());
  }

  const std::string bk = c.get_string("potential.bulk_random.kind", "none");
  if (bk == "iid_uniform") {
    m.bulk = {BulkRandomSpec::Kind::IidUniform, c.get_double("potential.bulk_random.v_max")};
    if (!(m.bulk.v_max >= 0.0)) ConfigReader::fail("potential.bulk_random.v_max", "must be >= 0");
  } else if (bk != "none") {
    ConfigReader::fail("potential.bulk_random.kind", "expected \"none\" or \"iid_uniform\"");
  }

  const std::string uk = c.get_string("potential.bulk_periodic.kind", "zero");
  if (uk == "constant") {
    const double v = c.get_double("potential.bulk_periodic.value");
    m.ub_cell = [v](const GridSpec& cell) { return std::vector<double>(cell.size(), v); };
  } else if (uk == "cosine") {
    // amplitude * sum_k cos(2 pi x1_k), constant in x2.
    const double amp = c.get_double("potential.bulk_periodic.amplitude");
    m.ub_cell = [amp](const GridSpec& cell) {
      std::vector<double> v(cell.size(), 0.0);
      for (std::int64_t s = 0; s < cell.size(); ++s) {
        const SiteCoords sc = cell.coords(s);
        for (int k = 0; k < cell.d1(); ++k) v[s] += amp * std::cos(2.0 * std::numbers::pi * cell.x1_coord(sc.x1[k]));
      }
      return v;
    };
  } else if (uk != "zero") {
    ConfigReader::fail("potential.bulk_periodic.kind", "expected \"zero\", \"constant\" or \"cosine\"");
  }
  if (m.ub_cell && c.get_bool("potential.bulk_periodic.recenter", false)) {
    // Shift so that the Neumann end of the bulk-bottom bracket sits at 0.
    const GridSpec cell = g.cell();
    const double lower = estimate_bulk_bottom(cell, m.ub_cell(cell), 2 * g.M).lower;
    auto base = m.ub_cell;
    m.ub_cell = [base, lower](const GridSpec& cell) {
      std::vector<double> v = base(cell);
      for (double& x : v) x -= lower;
      return v;
    };
  }
  return p;
}

PeriodicPotential periodic_of(const PotentialConfig& p) {
  if (p.surface) return periodic_potential(p.model);
  const PotentialModel m = p.model;
  return [m](const GridSpec& g) { return m.bulk_field(g).values; };
}

BcKind read_bc(const ConfigReader& c, const std::string& path, BcKind def) {
  if (!c.has(path)) return def;
  const std::string s = c.get_string(path);
  if (s == "D" || s == "dirichlet") return BcKind::Dirichlet;
  if (s == "N" || s == "neumann") return BcKind::Neumann;
  if (s == "chi" || s == "mezincescu") return BcKind::Mezincescu;
  ConfigReader::fail(path, "expected \"D\", \"N\" or \"chi\"");
}

}  // namespace surflab::cli
