#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "surflab/hamiltonian.hpp"

namespace surflab {

struct SpectralResult {
  enum class Method { Dense, Iterative };

  std::vector<double> eigenvalues;  ///< ascending
  Eigen::MatrixXd vectors;          ///< columns; set for real problems
  Eigen::MatrixXcd cvectors;        ///< columns; set for complex problems
  std::vector<double> residuals;    ///< ||H v - lambda v||_2 per pair
  bool complex = false;
  Method method = Method::Dense;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  /// Column i as a complex vector regardless of the problem type.
  Eigen::VectorXcd vector(int i) const;
  double max_residual() const;
  /// max |<v_i, v_j> - delta_ij|.
  double orthogonality_error() const;
};

struct LowestKOptions {
  enum class Method { Auto, Dense, Iterative };
  Method method = Method::Auto;
  std::int64_t dense_threshold = 200;  ///< Auto picks dense at or below this size
  std::int64_t dense_fallback = 2000;  ///< iterative failures fall back to dense up to here
  std::uint64_t seed = 0x1A2B3C4D5E6F7081ULL;
  int max_restarts = 400;
  int basis = 0;                       ///< Krylov basis size, 0 = automatic
};

/// k lowest eigenpairs with true residuals <= tol. Throws NoConvergence with
/// the achieved residual in the message.
SpectralResult lowest_k(const Hamiltonian& H, int k, double tol, const LowestKOptions& opt = {});
SpectralResult lowest_k(const RealSparse& A, int k, double tol, const LowestKOptions& opt = {});
SpectralResult lowest_k(const ComplexSparse& A, int k, double tol, const LowestKOptions& opt = {});

/// Dense eigendecomposition of a whole Hamiltonian (all pairs).
SpectralResult dense_spectrum(const Hamiltonian& H);

/// Inertia counter for one matrix, reusable across energies. Counts
/// eigenvalues <= E, where eigenvalues within 1e-12 * scale of E count as
/// <= E (scale = max(1, ||H||_inf)).
class InertiaCounter {
 public:
  explicit InertiaCounter(const Hamiltonian& H);
  explicit InertiaCounter(const RealSparse& A);
  explicit InertiaCounter(const ComplexSparse& A);
  ~InertiaCounter();
  InertiaCounter(InertiaCounter&&) noexcept;
  InertiaCounter& operator=(InertiaCounter&&) noexcept;

  /// Throws FactorizationBreakdown when every pivoting strategy hits a
  /// numerically singular pivot.
  std::int64_t count(double E) const;
  double scale() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

std::int64_t count_below(const Hamiltonian& H, double E);
std::int64_t count_below(const RealSparse& A, double E);

/// Temple: <H> - (<H^2> - <H>^2) / (lambda1_low - <H>) for normalized u.
/// Throws DenominatorNonpositive unless lambda1_low > <H>; InvalidParam if
/// u is not normalized to 1e-10.
double temple_lower_bound(const Hamiltonian& H, const Eigen::VectorXd& u, double lambda1_low);
double temple_lower_bound(const RealSparse& A, const Eigen::VectorXd& u, double lambda1_low);

/// Rayleigh quotient <u,Hu>/<u,u>. Throws ZeroVector.
double rayleigh_ritz_upper(const Hamiltonian& H, const Eigen::VectorXd& u);
double rayleigh_ritz_upper(const Hamiltonian& H, const Eigen::VectorXcd& u);
double rayleigh_ritz_upper(const RealSparse& A, const Eigen::VectorXd& u);

struct VariationalBound {
  double alpha_prime = 0.0;  ///< N(A, alpha_prime) >= n is certified
  int n = 0;
  double gram_deviation = 0.0;  ///< measured max |<phi_i,phi_j> - delta_ij|
  double form_deviation = 0.0;  ///< measured max |<phi_i,A phi_j> - alpha_j delta_ij|
  double gram_min_eigenvalue = 0.0;
};

/// Certified threshold from n nearly orthonormal, nearly diagonalizing
/// vectors (columns of phi). With alpha = max alpha_j and entrywise bounds
/// eps1, eps2 the certificate uses
///   alpha' = (alpha + n eps2) / (1 - n eps1)   if alpha + n eps2 >= 0,
///   alpha' = (alpha + n eps2) / (1 + n eps1)   otherwise,
/// which needs n eps1 < 1. The stated eps bounds are verified against the
/// measured deviations (HypothesisViolated); a singular Gram matrix raises
/// GramDegenerate.
VariationalBound variational_count_bound(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply_A,
                                         const Eigen::MatrixXd& phi, const std::vector<double>& alphas,
                                         double eps1, double eps2);

}  // namespace surflab
