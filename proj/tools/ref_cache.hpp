#pragma once

#include <memory>
#include <string>

#include "surflab/floquet.hpp"

namespace surflab::cli {

/// Ground-state references kept across runs in $SURFLAB_CACHE_DIR (disabled
/// when unset). Entries are keyed by the potential description and the cell
/// geometry, and stored with 17 significant digits so a cached reference
/// reproduces a fresh one bit-exactly.
class RefCache {
 public:
  /// Reads SURFLAB_CACHE_DIR.
  RefCache();
  explicit RefCache(std::string dir) : dir_(std::move(dir)) {}

  bool enabled() const { return !dir_.empty(); }
  const std::string& dir() const { return dir_; }

  /// ground_state_cell(cell, U, M_ref), from the cache when present.
  /// `potential_key` must identify U (the canonical potential config).
  std::shared_ptr<const GroundStateRef> get(const std::string& potential_key, const GridSpec& cell,
                                            const PeriodicPotential& U, int M_ref);

  int hits() const { return hits_; }
  int misses() const { return misses_; }

 private:
  std::string dir_;
  int hits_ = 0, misses_ = 0;
};

}  // namespace surflab::cli
