#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace surflab {

/// Hard cap on the number of lattice sites of any grid.
inline constexpr std::int64_t kMaxSites = std::int64_t{1} << 22;

/// Lattice coordinates of a site: x1 indices in [0, a*L), x2 indices in [0, M).
struct SiteCoords {
  std::array<int, 2> x1{0, 0};
  std::array<int, 2> x2{0, 0};

  friend bool operator==(const SiteCoords&, const SiteCoords&) = default;
};

/// One stencil arm of a site. `neighbor` is the interior neighbor index, or -1
/// when the arm leaves the domain through the face (axis, dir).
struct Arm {
  int axis = 0;  ///< 0..d1-1 are x1 axes, d1..d1+d2-1 are x2 axes
  int dir = 0;   ///< -1 or +1
  std::int64_t neighbor = -1;

  bool interior() const { return neighbor >= 0; }
};

/// Discretized cuboid: L unit cells of a sites per x1 axis, M layers per x2
/// axis, spacing h = 1/a. x2 layers are centered so that the surface x2 = 0
/// lies between the two middle layers. Sites are ordered with the x2 axes
/// fastest, then x1 axis 0, then x1 axis 1.
class GridSpec {
 public:
  GridSpec() = default;

  int d1() const { return d1_; }
  int d2() const { return d2_; }
  int L() const { return L_; }
  int a() const { return a_; }
  int M() const { return M_; }
  double h() const { return 1.0 / a_; }
  int dims() const { return d1_ + d2_; }

  /// Sites along one x1 axis (a*L).
  int n1() const { return a_ * L_; }
  /// Sites in one x2 slab (M^d2).
  std::int64_t layer_size() const { return layer_size_; }
  /// Sites per unit cell of x1 (a^d1) times the slab.
  std::int64_t size() const { return size_; }

  std::int64_t index(const SiteCoords& c) const;
  SiteCoords coords(std::int64_t site) const;

  /// Continuum x1 coordinate along axis k: s*h.
  double x1_coord(int s) const { return s * h(); }
  /// Continuum x2 coordinate of layer j: (j - M/2 + 1/2) h.
  double x2_coord(int j) const { return (j - M_ / 2 + 0.5) * h(); }

  /// The 2(d1+d2) stencil arms of a site, axis-major with dir -1 before +1.
  std::vector<Arm> neighbors(std::int64_t site) const;

  /// Same geometry with a different L or M.
  GridSpec with_L(int L) const;
  GridSpec with_M(int M) const;
  /// Single unit cell (L = 1) with M layers.
  GridSpec cell(int M) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  friend GridSpec build_grid(int d1, int d2, int L, int a, int M);
  int d1_ = 1, d2_ = 1, L_ = 1, a_ = 1, M_ = 2;
  std::int64_t layer_size_ = 2;
  std::int64_t size_ = 2;
};

/// Validated grid. Throws InvalidParam (d1, d2 not in {1,2}, L < 1, a < 1,
/// M odd or < 2) or CapExceeded.
GridSpec build_grid(int d1, int d2, int L, int a, int M);

}  // namespace surflab
