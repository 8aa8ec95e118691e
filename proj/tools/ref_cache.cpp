#include "ref_cache.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "surflab/report.hpp"

namespace surflab::cli {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double parse17(const nlohmann::json& v) {
  const std::string s = v.get<std::string>();
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw nlohmann::json::other_error::create(501, "bad number", nullptr);
  return x;
}

}  // namespace

RefCache::RefCache() {
  if (const char* d = std::getenv("SURFLAB_CACHE_DIR")) dir_ = d;
}

std::shared_ptr<const GroundStateRef> RefCache::get(const std::string& potential_key, const GridSpec& cell,
                                                    const PeriodicPotential& U, int M_ref) {
  if (!enabled()) return std::make_shared<const GroundStateRef>(ground_state_cell(cell, U, M_ref));
  const std::string key = potential_key + "|" + std::to_string(cell.d1()) + "," + std::to_string(cell.d2()) + "," +
                          std::to_string(cell.a()) + "," + std::to_string(cell.M()) + "," + std::to_string(M_ref);
  char name[64];
  std::snprintf(name, sizeof name, "ref-%016llx.json", static_cast<unsigned long long>(fnv1a(key)));
  const std::filesystem::path path = std::filesystem::path(dir_) / name;

  if (std::ifstream in{path}) {
    try {
      const nlohmann::json j = nlohmann::json::parse(in);
      if (j.at("key").get<std::string>() == key) {
        GroundStateRef r;
        r.grid = cell.cell(M_ref);
        for (const auto& v : j.at("psi0")) r.psi0.push_back(parse17(v));
        r.E0 = parse17(j.at("E0"));
        r.E1 = parse17(j.at("E1"));
        r.residual = parse17(j.at("residual"));
        if (static_cast<std::int64_t>(r.psi0.size()) == r.grid.size()) {
          ++hits_;
          return std::make_shared<const GroundStateRef>(std::move(r));
        }
      }
    } catch (const nlohmann::json::exception&) {
      // A damaged entry is recomputed and overwritten.
    }
  }
  ++misses_;
  auto ref = std::make_shared<const GroundStateRef>(ground_state_cell(cell, U, M_ref));
  nlohmann::json j;
  j["key"] = key;
  j["E0"] = fmt17(ref->E0);
  j["E1"] = fmt17(ref->E1);
  j["residual"] = fmt17(ref->residual);
  j["psi0"] = nlohmann::json::array();
  for (double v : ref->psi0) j["psi0"].push_back(fmt17(v));
  write_text(path.string(), j.dump(1) + "\n");
  return ref;
}

}  // namespace surflab::cli
