#include "surflab/hamiltonian.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "surflab/error.hpp"
#include "surflab/potential.hpp"
#include "surflab/report.hpp"

namespace surflab {

namespace {

int pmod(int v, int m) {
  const int r = v % m;
  return r < 0 ? r + m : r;
}

bool real_angle(double t) { return t == 0.0 || std::abs(t) == std::numbers::pi; }

cplx phase(double t) {
  if (t == 0.0) return {1.0, 0.0};
  if (std::abs(t) == std::numbers::pi) return {-1.0, 0.0};
  return {std::cos(t), std::sin(t)};
}

void check_ref(const GridSpec& grid, const BoundarySpec& bcs) {
  const bool need = bcs.x1 == BcKind::Mezincescu || bcs.x2 == BcKind::Mezincescu;
  if (!need) return;
  if (!bcs.ref) throw Error(ErrorCode::IncompatibleRef, "Mezincescu boundary needs a ground-state reference");
  const GridSpec& r = bcs.ref->grid;
  if (r.d1() != grid.d1() || r.d2() != grid.d2() || r.a() != grid.a() || r.L() != 1)
    throw Error(ErrorCode::IncompatibleRef, "reference cell has a different geometry (d1, d2, a) or L != 1");
  if (static_cast<std::int64_t>(bcs.ref->psi0.size()) != r.size())
    throw Error(ErrorCode::IncompatibleRef, "reference vector size does not match its grid");
  const int extra = r.M() - grid.M();
  if (extra < 0) throw Error(ErrorCode::IncompatibleRef, "reference cell is shallower than the domain");
  if (bcs.x2 == BcKind::Mezincescu && extra < 2)
    throw Error(ErrorCode::IncompatibleRef, "x2 Mezincescu faces need M_ref >= M + 2 for ghost layers");
}

}  // namespace

double GroundStateRef::at(const std::array<int, 2>& s, const std::array<int, 2>& j) const {
  SiteCoords c;
  for (int k = 0; k < grid.d1(); ++k) c.x1[k] = pmod(s[k], grid.a());
  for (int k = 0; k < grid.d2(); ++k) c.x2[k] = j[k];
  return psi0[grid.index(c)];
}

std::string to_string(BcKind k) {
  switch (k) {
    case BcKind::Dirichlet: return "D";
    case BcKind::Neumann: return "N";
    case BcKind::Bloch: return "Bloch";
    case BcKind::Mezincescu: return "chi";
  }
  return "?";
}

bool BoundarySpec::is_real() const {
  if (x1 != BcKind::Bloch) return true;
  return real_angle(theta[0]) && real_angle(theta[1]);
}

int ref_layer_offset(const GridSpec& domain, const GroundStateRef& ref) {
  return (ref.grid.M() - domain.M()) / 2;
}

Eigen::VectorXd extend_ground_state(const GridSpec& domain, const GroundStateRef& ref) {
  const int off = ref_layer_offset(domain, ref);
  Eigen::VectorXd v(domain.size());
  for (std::int64_t s = 0; s < domain.size(); ++s) {
    const SiteCoords c = domain.coords(s);
    v[s] = ref.at(c.x1, {c.x2[0] + off, c.x2[1] + off});
  }
  return v;
}

Hamiltonian assemble(const GridSpec& grid, const std::vector<double>& potential, const BoundarySpec& bcs) {
  if (static_cast<std::int64_t>(potential.size()) != grid.size())
    throw Error(ErrorCode::ShapeMismatch, "potential has " + std::to_string(potential.size()) +
                                              " entries, grid has " + std::to_string(grid.size()));
  if (bcs.x2 == BcKind::Bloch) throw Error(ErrorCode::InvalidParam, "Bloch conditions are only admissible on x1 faces");
  if (bcs.x1 == BcKind::Bloch)
    for (int k = 0; k < grid.d1(); ++k)
      if (!(std::abs(bcs.theta[k]) <= std::numbers::pi))
        throw Error(ErrorCode::InvalidParam, "Bloch angle outside [-pi, pi]");
  check_ref(grid, bcs);

  const double hinv2 = static_cast<double>(grid.a()) * grid.a();
  const int d1 = grid.d1();
  const int off = bcs.ref ? ref_layer_offset(grid, *bcs.ref) : 0;
  using Trip = Eigen::Triplet<cplx, std::int64_t>;
  std::vector<Trip> trips;
  trips.reserve(static_cast<std::size_t>(grid.size()) * (2 * grid.dims() + 1));

  for (std::int64_t x = 0; x < grid.size(); ++x) {
    const SiteCoords c = grid.coords(x);
    double kin = 0.0;
    for (const Arm& arm : grid.neighbors(x)) {
      if (arm.interior()) {
        kin += hinv2;
        trips.emplace_back(x, arm.neighbor, cplx(-hinv2, 0.0));
        continue;
      }
      const bool on_x1 = arm.axis < d1;
      const BcKind kind = on_x1 ? bcs.x1 : bcs.x2;
      switch (kind) {
        case BcKind::Dirichlet:
          kin += hinv2;
          break;
        case BcKind::Neumann:
          break;
        case BcKind::Bloch: {
          SiteCoords w = c;
          w.x1[arm.axis] = arm.dir > 0 ? 0 : grid.n1() - 1;
          const cplx ph = phase(arm.dir > 0 ? bcs.theta[arm.axis] : -bcs.theta[arm.axis]);
          trips.emplace_back(x, grid.index(w), -hinv2 * ph);
          kin += hinv2;
          break;
        }
        case BcKind::Mezincescu: {
          std::array<int, 2> s = c.x1;
          std::array<int, 2> j{c.x2[0] + off, c.x2[1] + off};
          const double here = bcs.ref->at(s, j);
          if (on_x1) {
            s[arm.axis] += arm.dir;
          } else {
            j[arm.axis - d1] += arm.dir;
          }
          kin += hinv2 * (1.0 - bcs.ref->at(s, j) / here);
          break;
        }
      }
    }
    trips.emplace_back(x, x, cplx(potential[x] + kin, 0.0));
  }

  Hamiltonian H;
  H.grid_ = grid;
  H.bcs_ = bcs;
  H.complex_ = !bcs.is_real();
  H.potential_hash_ = fnv1a(potential);
  const std::int64_t n = grid.size();
  ComplexSparse A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  // Exact Hermiticity: keep the strict upper triangle and mirror it.
  ComplexSparse up = A.triangularView<Eigen::StrictlyUpper>();
  ComplexSparse full = ComplexSparse(up.adjoint()) + up;
  std::vector<Trip> diag;
  diag.reserve(n);
  for (std::int64_t i = 0; i < n; ++i) diag.emplace_back(i, i, cplx(A.coeff(i, i).real(), 0.0));
  ComplexSparse D(n, n);
  D.setFromTriplets(diag.begin(), diag.end());
  full = full + D;
  full.makeCompressed();
  if (H.complex_) {
    H.cplx_ = std::move(full);
  } else {
    H.real_ = full.real();
    H.real_.makeCompressed();
  }
  return H;
}

void Hamiltonian::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  if (complex_) throw Error(ErrorCode::InvalidParam, "real apply on a complex Hamiltonian");
  y.noalias() = real_ * x;
}

void Hamiltonian::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  if (complex_) {
    y.noalias() = cplx_ * x;
    return;
  }
  const Eigen::VectorXd re = real_ * x.real();
  const Eigen::VectorXd im = real_ * x.imag();
  y.resize(x.size());
  y.real() = re;
  y.imag() = im;
}

Eigen::MatrixXd Hamiltonian::dense_real() const {
  if (complex_) throw Error(ErrorCode::InvalidParam, "dense_real on a complex Hamiltonian");
  return Eigen::MatrixXd(real_);
}

Eigen::MatrixXcd Hamiltonian::dense_complex() const {
  if (complex_) return Eigen::MatrixXcd(cplx_);
  return Eigen::MatrixXd(real_).cast<cplx>();
}

double Hamiltonian::norm_inf() const {
  double m = 0.0;
  if (complex_) {
    for (std::int64_t r = 0; r < cplx_.outerSize(); ++r) {
      double s = 0.0;
      for (ComplexSparse::InnerIterator it(cplx_, r); it; ++it) s += std::abs(it.value());
      m = std::max(m, s);
    }
  } else {
    for (std::int64_t r = 0; r < real_.outerSize(); ++r) {
      double s = 0.0;
      for (RealSparse::InnerIterator it(real_, r); it; ++it) s += std::abs(it.value());
      m = std::max(m, s);
    }
  }
  return m;
}

std::string Hamiltonian::coo_dump() const {
  std::string out = "row col re im\n";
  auto line = [&](std::int64_t r, std::int64_t c, cplx v) {
    out += std::to_string(r) + ' ' + std::to_string(c) + ' ' + fmt17(v.real()) + ' ' + fmt17(v.imag()) + '\n';
  };
  if (complex_) {
    for (std::int64_t r = 0; r < cplx_.outerSize(); ++r)
      for (ComplexSparse::InnerIterator it(cplx_, r); it; ++it) line(r, it.col(), it.value());
  } else {
    for (std::int64_t r = 0; r < real_.outerSize(); ++r)
      for (RealSparse::InnerIterator it(real_, r); it; ++it) line(r, it.col(), it.value());
  }
  return out;
}

double quadratic_form(const Hamiltonian& H, const Eigen::VectorXd& u) {
  if (u.size() != H.dim()) throw Error(ErrorCode::ShapeMismatch, "vector size differs from the Hamiltonian");
  if (H.is_complex()) return quadratic_form(H, Eigen::VectorXcd(u.cast<cplx>()));
  Eigen::VectorXd y;
  H.apply(u, y);
  return u.dot(y);
}

double quadratic_form(const Hamiltonian& H, const Eigen::VectorXcd& u) {
  if (u.size() != H.dim()) throw Error(ErrorCode::ShapeMismatch, "vector size differs from the Hamiltonian");
  Eigen::VectorXcd y;
  H.apply(u, y);
  return u.dot(y).real();
}

}  // namespace surflab
