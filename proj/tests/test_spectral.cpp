#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "doctest.h"
#include "checks/oracles.hpp"
#include "surflab/error.hpp"
#include "surflab/potential.hpp"
#include "surflab/spectral.hpp"

using namespace surflab;

namespace {

ErrorCode code_of(auto f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ConfigInvalid;
}

RealSparse sparse_of(const Eigen::MatrixXd& D) { return D.sparseView(); }

Hamiltonian random_hamiltonian(std::mt19937_64& rng, std::int64_t max_n, bool allow_bloch) {
  std::uniform_int_distribution<int> pick(0, 1000);
  for (;;) {
    const int d1 = 1 + pick(rng) % 2, d2 = 1 + pick(rng) % 2;
    const int a = 1 + pick(rng) % 2, L = 1 + pick(rng) % 6, M = 2 * (1 + pick(rng) % 4);
    std::int64_t n = 1;
    for (int k = 0; k < d1; ++k) n *= a * L;
    for (int k = 0; k < d2; ++k) n *= M;
    if (n > max_n || n < 2) continue;
    const GridSpec g = build_grid(d1, d2, L, a, M);
    std::uniform_real_distribution<double> u(-3.0, 1.0);
    std::vector<double> V(g.size());
    for (double& v : V) v = u(rng);
    const int bc = pick(rng) % (allow_bloch ? 4 : 3);
    BoundarySpec b = bc == 0 ? BoundarySpec::dirichlet()
                   : bc == 1 ? BoundarySpec::neumann()
                   : bc == 2 ? BoundarySpec::make(BcKind::Neumann, BcKind::Dirichlet)
                             : BoundarySpec::bloch({u(rng), u(rng)});
    return assemble(g, V, b);
  }
}

std::vector<double> dense_eigs(const Hamiltonian& H) { return oracle::eigenvalues(H.dense_complex()); }

}  // namespace

TEST_CASE("lowest_k small examples") {
  const GridSpec g = build_grid(1, 1, 2, 1, 2);
  const auto r = lowest_k(assemble(g, std::vector<double>(4, 0.0), BoundarySpec::neumann()), 2, 1e-10);
  CHECK(std::abs(r.eigenvalues[0]) <= 1e-12);
  CHECK(std::abs(r.eigenvalues[1] - 2.0) <= 1e-12);

  Eigen::MatrixXd D = Eigen::Vector3d(-1.0, 0.0, 2.0).asDiagonal();
  const auto d = lowest_k(sparse_of(D), 2, 1e-12);
  CHECK(d.eigenvalues == std::vector<double>{-1.0, 0.0});
  CHECK(code_of([&] { lowest_k(sparse_of(D), 4, 1e-12); }) == ErrorCode::InvalidParam);
}

TEST_CASE("iterative lowest_k agrees with dense diagonalization") {
  std::mt19937_64 rng(20240101);
  LowestKOptions opt;
  opt.method = LowestKOptions::Method::Iterative;
  for (int trial = 0; trial < 12; ++trial) {
    const Hamiltonian H = random_hamiltonian(rng, 400, true);
    const int k = 1 + trial % 4;
    if (k > H.dim()) continue;
    const auto r = lowest_k(H, k, 1e-10, opt);
    const auto ev = dense_eigs(H);
    CHECK(r.method == SpectralResult::Method::Iterative);
    for (int i = 0; i < k; ++i) CHECK(std::abs(r.eigenvalues[i] - ev[i]) <= 1e-9);
    CHECK(r.max_residual() <= 1e-10);
    CHECK(r.orthogonality_error() <= 1e-8);
  }
}

TEST_CASE("iterative lowest_k resolves exact degeneracies") {
  // 8 x 8 Neumann square: eigenvalue pairs lambda_i + lambda_j with i != j are double.
  const GridSpec g = build_grid(1, 1, 8, 1, 8);
  const Hamiltonian H = assemble(g, std::vector<double>(g.size(), 0.0), BoundarySpec::neumann());
  LowestKOptions opt;
  opt.method = LowestKOptions::Method::Iterative;
  const auto r = lowest_k(H, 6, 1e-10, opt);
  const auto ev = dense_eigs(H);
  for (int i = 0; i < 6; ++i) CHECK(std::abs(r.eigenvalues[i] - ev[i]) <= 1e-9);
}

TEST_CASE("300-site sparse instance against the dense oracle") {
  const GridSpec g = build_grid(1, 1, 25, 1, 12);
  std::mt19937_64 rng(300);
  std::uniform_real_distribution<double> u(-2.0, 0.0);
  std::vector<double> V(g.size());
  for (double& v : V) v = u(rng);
  const Hamiltonian H = assemble(g, V, BoundarySpec::dirichlet());
  const auto r = lowest_k(H, 5, 1e-10);
  const auto ev = dense_eigs(H);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(r.eigenvalues[i] - ev[i]) <= 1e-9);
}

TEST_CASE("count_below examples") {
  Eigen::MatrixXd D = Eigen::Vector3d(-1.0, 0.0, 2.0).asDiagonal();
  CHECK(count_below(sparse_of(D), 0.0) == 2);
  const GridSpec g = build_grid(1, 1, 2, 1, 2);
  CHECK(count_below(assemble(g, std::vector<double>(4, 0.0), BoundarySpec::neumann()), 1.0) == 1);
  // Ties count as <= E.
  CHECK(count_below(assemble(g, std::vector<double>(4, 0.0), BoundarySpec::neumann()), 2.0) == 3);
}

TEST_CASE("count_below equals the dense count") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const Hamiltonian H = random_hamiltonian(rng, 400, true);
    const auto ev = dense_eigs(H);
    std::uniform_real_distribution<double> e(ev.front() - 0.5, ev.back() + 0.5);
    const InertiaCounter counter(H);
    for (int j = 0; j < 5; ++j) {
      const double E = e(rng);
      CHECK(counter.count(E) == oracle::count(ev, E));
    }
  }
}

TEST_CASE("count_below is shift covariant") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Hamiltonian H = random_hamiltonian(rng, 200, false);
    const double c = 0.75;
    RealSparse shifted = H.real();
    for (std::int64_t i = 0; i < shifted.rows(); ++i) shifted.coeffRef(i, i) += c;
    for (double E : {-2.0, -0.5, 0.3, 1.7}) CHECK(count_below(shifted, E + c) == count_below(H.real(), E));
  }
}

TEST_CASE("Temple and Rayleigh-Ritz") {
  const double eps = 0.1;
  Eigen::MatrixXd A(2, 2);
  A << 0.0, eps, eps, 1.0;
  const Eigen::Vector2d u(1.0, 0.0);
  const double t = temple_lower_bound(sparse_of(A), u, 0.5);
  CHECK(t == doctest::Approx(-0.02).epsilon(1e-14));
  const double e0 = (1.0 - std::sqrt(1.04)) / 2.0;
  CHECK(t <= e0);
  CHECK(rayleigh_ritz_upper(sparse_of(A), u) >= e0);
  CHECK(code_of([&] { temple_lower_bound(sparse_of(A), u, -0.1); }) == ErrorCode::DenominatorNonpositive);
  CHECK(code_of([&] { rayleigh_ritz_upper(sparse_of(A), Eigen::Vector2d::Zero()); }) == ErrorCode::ZeroVector);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const Eigen::VectorXd v = es.eigenvectors().col(0);
  CHECK(temple_lower_bound(sparse_of(A), v, es.eigenvalues()[1]) == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-14));
  CHECK(rayleigh_ritz_upper(sparse_of(A), v) == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-14));

  const GridSpec g = build_grid(1, 1, 3, 1, 4);
  const Hamiltonian N = assemble(g, std::vector<double>(g.size(), 0.0), BoundarySpec::neumann());
  CHECK(std::abs(rayleigh_ritz_upper(N, Eigen::VectorXd(Eigen::VectorXd::Ones(g.size())))) <= 1e-14);
}

TEST_CASE("variational count bound") {
  auto apply = [](const Eigen::MatrixXd& A) {
    return [A](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x; };
  };
  SUBCASE("exact eigenvectors") {
    Eigen::MatrixXd A = Eigen::Vector3d(-1.0, 0.5, 2.0).asDiagonal();
    const auto b = variational_count_bound(apply(A), Eigen::MatrixXd::Identity(3, 2), {-1.0, 0.5}, 0.0, 0.0);
    CHECK(b.alpha_prime == 0.5);
    CHECK(count_below(sparse_of(A), b.alpha_prime) >= 2);
  }
  SUBCASE("entrywise bounds need the factor n") {
    // A = [[e, e], [e, e]] has eigenvalues 0 and 2e; the basis vectors satisfy
    // the hypotheses with alpha_j = 0, eps1 = 0, eps2 = e. A threshold of e
    // would certify two eigenvalues below e, but only one exists.
    const double e = 0.1;
    Eigen::MatrixXd A(2, 2);
    A << e, e, e, e;
    const auto b = variational_count_bound(apply(A), Eigen::MatrixXd::Identity(2, 2), {0.0, 0.0}, 0.0, e);
    CHECK(count_below(sparse_of(A), e) == 1);
    CHECK(b.alpha_prime == doctest::Approx(2 * e));
    CHECK(count_below(sparse_of(A), b.alpha_prime) == 2);
  }
  SUBCASE("hypothesis checks") {
    Eigen::MatrixXd A = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
    Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(3, 2);
    CHECK(code_of([&] { variational_count_bound(apply(A), phi, {1.0, 2.5}, 0.0, 0.1); }) == ErrorCode::HypothesisViolated);
    phi.col(1) = phi.col(0);
    CHECK(code_of([&] { variational_count_bound(apply(A), phi, {1.0, 1.0}, 1.0, 0.1); }) == ErrorCode::GramDegenerate);
  }
}
