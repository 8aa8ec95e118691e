#include "surflab/grid.hpp"

#include <string>

#include "surflab/error.hpp"

namespace surflab {

GridSpec build_grid(int d1, int d2, int L, int a, int M) {
  if (d1 < 1 || d1 > 2) throw Error(ErrorCode::InvalidParam, "d1 must be 1 or 2, got " + std::to_string(d1));
  if (d2 < 1 || d2 > 2) throw Error(ErrorCode::InvalidParam, "d2 must be 1 or 2, got " + std::to_string(d2));
  if (L < 1) throw Error(ErrorCode::InvalidParam, "L must be >= 1");
  if (a < 1) throw Error(ErrorCode::InvalidParam, "a must be >= 1");
  if (M < 2 || M % 2 != 0) throw Error(ErrorCode::InvalidParam, "M must be even and >= 2, got " + std::to_string(M));

  // Overflow-safe product against the cap.
  std::int64_t n = 1;
  auto grow = [&](std::int64_t f) {
    if (n > kMaxSites / f) throw Error(ErrorCode::CapExceeded, "grid exceeds the site cap");
    n *= f;
  };
  const std::int64_t n1 = std::int64_t{a} * L;
  for (int k = 0; k < d1; ++k) grow(n1);
  std::int64_t layer = 1;
  for (int k = 0; k < d2; ++k) {
    grow(M);
    layer *= M;
  }

  GridSpec g;
  g.d1_ = d1;
  g.d2_ = d2;
  g.L_ = L;
  g.a_ = a;
  g.M_ = M;
  g.layer_size_ = layer;
  g.size_ = n;
  return g;
}

std::int64_t GridSpec::index(const SiteCoords& c) const {
  std::int64_t idx = 0;
  for (int k = d1_ - 1; k >= 0; --k) idx = idx * n1() + c.x1[k];
  for (int k = d2_ - 1; k >= 0; --k) idx = idx * M_ + c.x2[k];
  return idx;
}

SiteCoords GridSpec::coords(std::int64_t site) const {
  SiteCoords c;
  for (int k = 0; k < d2_; ++k) {
    c.x2[k] = static_cast<int>(site % M_);
    site /= M_;
  }
  for (int k = 0; k < d1_; ++k) {
    c.x1[k] = static_cast<int>(site % n1());
    site /= n1();
  }
  return c;
}

std::vector<Arm> GridSpec::neighbors(std::int64_t site) const {
  const SiteCoords c = coords(site);
  std::vector<Arm> arms;
  arms.reserve(2 * dims());
  for (int axis = 0; axis < dims(); ++axis) {
    const bool is_x1 = axis < d1_;
    const int extent = is_x1 ? n1() : M_;
    for (int dir : {-1, +1}) {
      SiteCoords nc = c;
      int& v = is_x1 ? nc.x1[axis] : nc.x2[axis - d1_];
      v += dir;
      Arm arm{axis, dir, -1};
      if (v >= 0 && v < extent) arm.neighbor = index(nc);
      arms.push_back(arm);
    }
  }
  return arms;
}

GridSpec GridSpec::with_L(int L) const { return build_grid(d1_, d2_, L, a_, M_); }
GridSpec GridSpec::with_M(int M) const { return build_grid(d1_, d2_, L_, a_, M); }
GridSpec GridSpec::cell(int M) const { return build_grid(d1_, d2_, 1, a_, M); }

}  // namespace surflab
