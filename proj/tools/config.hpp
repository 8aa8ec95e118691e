#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "surflab/floquet.hpp"
#include "surflab/hamiltonian.hpp"
#include "surflab/potential.hpp"

namespace surflab::cli {

using json = nlohmann::ordered_json;

/// Typed access to a JSON config. Every failure is a ConfigInvalid error whose
/// message starts with the dotted path of the offending field and its JSON pointer.
class ConfigReader {
 public:
  explicit ConfigReader(const json& root) : root_(root) {}

  bool has(const std::string& path) const;
  const json* find(const std::string& path) const;

  int get_int(const std::string& path, std::optional<int> def = std::nullopt) const;
  std::uint64_t get_u64(const std::string& path, std::optional<std::uint64_t> def = std::nullopt) const;
  double get_double(const std::string& path, std::optional<double> def = std::nullopt) const;
  bool get_bool(const std::string& path, std::optional<bool> def = std::nullopt) const;
  std::string get_string(const std::string& path, std::optional<std::string> def = std::nullopt) const;
  std::vector<int> get_ints(const std::string& path, std::optional<std::vector<int>> def = std::nullopt) const;
  std::vector<double> get_doubles(const std::string& path,
                                  std::optional<std::vector<double>> def = std::nullopt) const;

  /// Energy list: an array, or {"from", "to", "count"} evenly spaced inclusive.
  std::vector<double> get_grid(const std::string& path) const;

  /// Rejects keys of the object at `path` outside `allowed` (absent object: no-op).
  void check_keys(const std::string& path, const std::vector<std::string>& allowed) const;

  [[noreturn]] static void fail(const std::string& path, const std::string& why);

 private:
  const json& root_;
};

struct Geometry {
  int d1 = 1, d2 = 1, a = 1, M = 16;
  std::vector<int> Ls{8};  ///< "L" gives one entry, "Ls" a list
  int L() const { return Ls.front(); }
  GridSpec grid(int L) const { return build_grid(d1, d2, L, a, M); }
  GridSpec cell() const { return build_grid(d1, d2, 1, a, M); }
};

Geometry read_geometry(const ConfigReader& c);

struct PotentialConfig {
  PotentialModel model;
  bool surface = true;  ///< false: no surface potential, periodic commands only
};

PotentialConfig read_potential(const ConfigReader& c, const Geometry& g);

/// U_per of the configured potential.
PeriodicPotential periodic_of(const PotentialConfig& p);

/// "D"/"dirichlet", "N"/"neumann", "chi"/"mezincescu".
BcKind read_bc(const ConfigReader& c, const std::string& path, BcKind def);

}  // namespace surflab::cli
