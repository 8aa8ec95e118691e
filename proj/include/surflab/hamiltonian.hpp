#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <array>
#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "surflab/grid.hpp"

namespace surflab {

using cplx = std::complex<double>;
using RealSparse = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;
using ComplexSparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor, std::int64_t>;

/// Strictly positive ground state of a periodic cell operator (Bloch theta = 0
/// in x1, Dirichlet at depth M_ref in x2), used for Mezincescu ghost values.
struct GroundStateRef {
  GridSpec grid;            ///< one cell, L = 1
  std::vector<double> psi0; ///< normalized, all entries > 0
  double E0 = 0.0;
  /// ||h0 psi0 - E0 psi0||_2 plus a rounding allowance for its own evaluation.
  double residual = 0.0;
  double E1 = 0.0;          ///< second eigenvalue of the cell operator

  /// psi0 at x1 index s (any integer, reduced mod a per axis) and ref layer j.
  double at(const std::array<int, 2>& s, const std::array<int, 2>& j) const;
};

enum class BcKind { Dirichlet, Neumann, Bloch, Mezincescu };

std::string to_string(BcKind k);

/// Boundary conditions on the x1 faces and the x2 faces. Bloch is x1-only.
struct BoundarySpec {
  BcKind x1 = BcKind::Dirichlet;
  BcKind x2 = BcKind::Dirichlet;
  std::array<double, 2> theta{0.0, 0.0};
  std::shared_ptr<const GroundStateRef> ref;

  static BoundarySpec dirichlet() { return {}; }
  static BoundarySpec neumann() { return {BcKind::Neumann, BcKind::Neumann, {0.0, 0.0}, nullptr}; }
  static BoundarySpec make(BcKind x1, BcKind x2, std::shared_ptr<const GroundStateRef> ref = nullptr) {
    return {x1, x2, {0.0, 0.0}, std::move(ref)};
  }
  static BoundarySpec bloch(std::array<double, 2> theta, BcKind x2 = BcKind::Dirichlet) {
    return {BcKind::Bloch, x2, theta, nullptr};
  }

  /// True when every matrix entry is real.
  bool is_real() const;
};

/// Sparse self-adjoint H = -Delta_h + V. Exactly one of the two matrices is
/// populated; the complex one only for Bloch angles outside {0, +-pi}.
class Hamiltonian {
 public:
  const GridSpec& grid() const { return grid_; }
  const BoundarySpec& bcs() const { return bcs_; }
  bool is_complex() const { return complex_; }
  std::int64_t dim() const { return grid_.size(); }
  const RealSparse& real() const { return real_; }
  const ComplexSparse& complex() const { return cplx_; }
  std::uint64_t potential_hash() const { return potential_hash_; }

  /// y = H x.
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;

  /// Dense copy (complex always valid; real only when !is_complex()).
  Eigen::MatrixXd dense_real() const;
  Eigen::MatrixXcd dense_complex() const;

  /// Row-sum infinity norm.
  double norm_inf() const;

  /// Coordinate text dump, one "row col re im" line per stored entry.
  std::string coo_dump() const;

 private:
  friend Hamiltonian assemble(const GridSpec&, const std::vector<double>&, const BoundarySpec&);
  GridSpec grid_;
  BoundarySpec bcs_;
  bool complex_ = false;
  RealSparse real_;
  ComplexSparse cplx_;
  std::uint64_t potential_hash_ = 0;
};

/// Assembles H on `grid` for a site potential (size grid.size()).
/// Throws ShapeMismatch, InvalidParam (Bloch on x2), IncompatibleRef.
Hamiltonian assemble(const GridSpec& grid, const std::vector<double>& potential, const BoundarySpec& bcs);

/// <u, H u>, real part (the imaginary part is rounding only).
double quadratic_form(const Hamiltonian& H, const Eigen::VectorXd& u);
double quadratic_form(const Hamiltonian& H, const Eigen::VectorXcd& u);

/// Layer offset of the domain inside the reference cell: domain layer j sits at
/// reference layer j + offset.
int ref_layer_offset(const GridSpec& domain, const GroundStateRef& ref);

/// psi0 extended periodically in x1 onto the domain (restricted, unnormalized).
Eigen::VectorXd extend_ground_state(const GridSpec& domain, const GroundStateRef& ref);

}  // namespace surflab
