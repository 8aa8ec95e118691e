#pragma once

// Test-only reference computations. Nothing here calls into the library's
// assembly or solver code paths.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

/// 1D path operator on n sites with unit spacing: 2 on the diagonal minus one
/// per Neumann end, -1 off the diagonal.
inline Eigen::MatrixXd path(int n, bool dirichlet_lo, bool dirichlet_hi) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    P(i, i) = 2.0;
    if (i + 1 < n) P(i, i + 1) = P(i + 1, i) = -1.0;
  }
  if (!dirichlet_lo) P(0, 0) -= 1.0;
  if (!dirichlet_hi) P(n - 1, n - 1) -= 1.0;
  return P;
}

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

/// Free -Delta_h on (a L)^d1 x M^d2 sites, x2 fastest, then x1 axis 0, x1 axis 1.
inline Eigen::MatrixXd free_laplacian(int d1, int d2, int n1, int M, double h, bool x1_dirichlet,
                                      bool x2_dirichlet) {
  std::vector<Eigen::MatrixXd> factors;  // slowest first
  for (int k = 0; k < d1; ++k) factors.push_back(path(n1, x1_dirichlet, x1_dirichlet));
  for (int k = 0; k < d2; ++k) factors.push_back(path(M, x2_dirichlet, x2_dirichlet));
  std::reverse(factors.begin(), factors.begin() + d1);  // x1 axis 1 is slowest
  std::reverse(factors.begin() + d1, factors.end());    // x2 axis 1 slower than x2 axis 0
  const int D = static_cast<int>(factors.size());
  Eigen::Index n = 1;
  for (auto& f : factors) n *= f.rows();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  for (int t = 0; t < D; ++t) {
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(1, 1);
    for (int s = 0; s < D; ++s)
      term = kron(term, s == t ? factors[s] : Eigen::MatrixXd::Identity(factors[s].rows(), factors[s].rows()));
    H += term;
  }
  return H / (h * h);
}

inline std::vector<double> eigenvalues(const Eigen::MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + A.rows()};
}

inline std::vector<double> eigenvalues(const Eigen::MatrixXcd& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + A.rows()};
}

/// Dense count of eigenvalues <= E.
inline long count(const std::vector<double>& ev, double E) {
  return std::count_if(ev.begin(), ev.end(), [E](double x) { return x <= E; });
}

/// Closed-form eigenvalues 2 - 2 cos(k pi/(n+1)) (Dirichlet) or 2 - 2 cos(k pi/n) (Neumann).
inline std::vector<double> path_spectrum(int n, bool dirichlet) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k)
    v.push_back(dirichlet ? 2.0 - 2.0 * std::cos((k + 1) * std::numbers::pi / (n + 1))
                          : 2.0 - 2.0 * std::cos(k * std::numbers::pi / n));
  return v;
}

/// All sums of one eigenvalue per axis, sorted.
inline std::vector<double> sum_spectrum(const std::vector<std::vector<double>>& axes) {
  std::vector<double> acc{0.0};
  for (const auto& ax : axes) {
    std::vector<double> next;
    for (double a : acc)
      for (double b : ax) next.push_back(a + b);
    acc.swap(next);
  }
  std::sort(acc.begin(), acc.end());
  return acc;
}

/// Decay rate of exp(-gamma |x2|) solving the free discrete equation at e < 0:
/// 2 - 2 cosh(gamma h) = e h^2.
inline double decay_rate(double e, double h) { return std::acosh(1.0 - e * h * h / 2.0) / h; }

}  // namespace oracle
