#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "checks/oracles.hpp"
#include "surflab/error.hpp"
#include "surflab/hamiltonian.hpp"
#include "surflab/potential.hpp"

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

std::shared_ptr<GroundStateRef> dense_ref(const GridSpec& cell, const std::vector<double>& U) {
  const Hamiltonian h = assemble(cell, U, BoundarySpec::bloch({0.0, 0.0}));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense_real());
  auto ref = std::make_shared<GroundStateRef>();
  ref->grid = cell;
  Eigen::VectorXd v = es.eigenvectors().col(0);
  if (v.sum() < 0) v = -v;
  ref->psi0.assign(v.data(), v.data() + v.size());
  ref->E0 = es.eigenvalues()[0];
  ref->E1 = es.eigenvalues()[1];
  ref->residual = (h.dense_real() * v - ref->E0 * v).norm();
  return ref;
}

}  // namespace

TEST_CASE("free 2x2 spectra") {
  const GridSpec g = build_grid(1, 1, 2, 1, 2);
  const std::vector<double> zero(4, 0.0);
  const auto D = oracle::eigenvalues(assemble(g, zero, BoundarySpec::dirichlet()).dense_real());
  const auto N = oracle::eigenvalues(assemble(g, zero, BoundarySpec::neumann()).dense_real());
  const std::vector<double> d{2, 4, 4, 6}, n{0, 2, 2, 4};
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(D[i] - d[i]) <= 1e-12);
    CHECK(std::abs(N[i] - n[i]) <= 1e-12);
  }
  const auto H = assemble(g, zero, BoundarySpec::dirichlet()).dense_real();
  CHECK(H.diagonal().isConstant(4.0));
  CHECK((H.array() == -1.0).count() == 8);
}

TEST_CASE("assembly matches the Kronecker oracle") {
  struct Case {
    int d1, d2, L, a, M;
    bool x1d, x2d;
  };
  for (const Case c : {Case{1, 1, 3, 2, 4, true, false}, Case{1, 2, 2, 1, 4, false, true},
                       Case{2, 1, 2, 2, 2, true, true}, Case{2, 2, 2, 1, 2, false, false}}) {
    const GridSpec g = build_grid(c.d1, c.d2, c.L, c.a, c.M);
    const BoundarySpec b = BoundarySpec::make(c.x1d ? BcKind::Dirichlet : BcKind::Neumann,
                                              c.x2d ? BcKind::Dirichlet : BcKind::Neumann);
    const Eigen::MatrixXd A = assemble(g, std::vector<double>(g.size(), 0.0), b).dense_real();
    const Eigen::MatrixXd O = oracle::free_laplacian(c.d1, c.d2, g.n1(), c.M, g.h(), c.x1d, c.x2d);
    CHECK((A - O).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("constant potential shifts the spectrum") {
  const GridSpec g = build_grid(1, 1, 3, 1, 4);
  const auto e0 = oracle::eigenvalues(assemble(g, std::vector<double>(g.size(), 0.0), BoundarySpec::dirichlet()).dense_real());
  const auto e1 = oracle::eigenvalues(assemble(g, std::vector<double>(g.size(), 0.3), BoundarySpec::dirichlet()).dense_real());
  for (std::size_t i = 0; i < e0.size(); ++i) CHECK(std::abs(e1[i] - e0[i] - 0.3) <= 1e-12);
}

TEST_CASE("Bloch operators: Hermitian, real at 0 and pi, conjugate pairs") {
  const GridSpec g = build_grid(2, 1, 2, 2, 4);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> V(g.size());
  for (double& v : V) v = u(rng);
  CHECK(!assemble(g, V, BoundarySpec::bloch({0.0, std::numbers::pi})).is_complex());
  const Hamiltonian hp = assemble(g, V, BoundarySpec::bloch({0.7, -1.1}));
  const Hamiltonian hm = assemble(g, V, BoundarySpec::bloch({-0.7, 1.1}));
  REQUIRE(hp.is_complex());
  const Eigen::MatrixXcd A = hp.dense_complex();
  CHECK((A - A.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((hm.dense_complex() - A.conjugate()).cwiseAbs().maxCoeff() == 0.0);
  const auto ep = oracle::eigenvalues(A);
  const auto em = oracle::eigenvalues(hm.dense_complex());
  for (std::size_t i = 0; i < ep.size(); ++i) CHECK(std::abs(ep[i] - em[i]) <= 1e-12);
}

TEST_CASE("Bloch single-site cell: x1 band is 2(1 - cos theta)") {
  const GridSpec cell = build_grid(1, 1, 1, 1, 6);
  const std::vector<double> U(cell.size(), 0.0);
  const double e0 = oracle::eigenvalues(assemble(cell, U, BoundarySpec::bloch({0.0, 0.0})).dense_real())[0];
  for (double t : {0.3, 1.0, 2.5, std::numbers::pi}) {
    const Hamiltonian h = assemble(cell, U, BoundarySpec::bloch({t, 0.0}));
    const double e = oracle::eigenvalues(h.dense_complex())[0];
    CHECK(std::abs(e - e0 - 2.0 * (1.0 - std::cos(t))) <= 1e-12);
  }
}

TEST_CASE("Mezincescu boundary keeps the periodic ground state") {
  for (int a : {1, 2}) {
    const PotentialModel m = default_model();
    const GridSpec cell = build_grid(1, 1, 1, a, 10);
    const auto ref = dense_ref(cell, m.periodic(cell));
    CHECK(ref->E0 < 0.0);
    for (const BcKind x2 : {BcKind::Mezincescu}) {
      const GridSpec dom = build_grid(1, 1, 5, a, 8);
      const Hamiltonian H = assemble(dom, m.periodic(dom), BoundarySpec::make(BcKind::Mezincescu, x2, ref));
      const Eigen::VectorXd psi = extend_ground_state(dom, *ref);
      Eigen::VectorXd y;
      H.apply(psi, y);
      CHECK((y - ref->E0 * psi).norm() <= 10 * ref->residual + 1e-13);
      CHECK(std::abs(oracle::eigenvalues(H.dense_real())[0] - ref->E0) <= 1e-12);
    }
  }
}

TEST_CASE("assembly errors") {
  const GridSpec g = build_grid(1, 1, 2, 1, 4);
  const std::vector<double> V(g.size(), 0.0);
  CHECK(code_of([&] { assemble(g, std::vector<double>(3, 0.0), BoundarySpec::dirichlet()); }) == ErrorCode::ShapeMismatch);
  CHECK(code_of([&] { assemble(g, V, BoundarySpec::make(BcKind::Dirichlet, BcKind::Bloch)); }) == ErrorCode::InvalidParam);
  CHECK(code_of([&] { assemble(g, V, BoundarySpec::make(BcKind::Mezincescu, BcKind::Dirichlet)); }) == ErrorCode::IncompatibleRef);
  const GridSpec cell = build_grid(1, 1, 1, 1, 4);
  const auto ref = dense_ref(cell, std::vector<double>(cell.size(), 0.0));
  CHECK(code_of([&] { assemble(g, V, BoundarySpec::make(BcKind::Dirichlet, BcKind::Mezincescu, ref)); }) ==
        ErrorCode::IncompatibleRef);
  CHECK_NOTHROW(assemble(g, V, BoundarySpec::make(BcKind::Mezincescu, BcKind::Dirichlet, ref)));
}

TEST_CASE("quadratic_form") {
  const GridSpec g = build_grid(1, 1, 3, 1, 4);
  const Hamiltonian N = assemble(g, std::vector<double>(g.size(), 0.0), BoundarySpec::neumann());
  CHECK(std::abs(quadratic_form(N, Eigen::VectorXd(Eigen::VectorXd::Ones(g.size())))) <= 1e-14);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> V(g.size());
  for (double& v : V) v = u(rng);
  const Hamiltonian H = assemble(g, V, BoundarySpec::bloch({0.4, 0.0}));
  Eigen::VectorXcd x(g.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = cplx(u(rng), u(rng));
  const cplx dense = x.dot(H.dense_complex() * x);
  CHECK(std::abs(quadratic_form(H, x) - dense.real()) <= 1e-12 * std::abs(dense.real()));
  CHECK(std::abs(dense.imag()) <= 1e-12 * std::abs(dense.real()));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.dense_complex());
  const Eigen::VectorXcd v = es.eigenvectors().col(0);
  CHECK(quadratic_form(H, v) == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-12));
}

TEST_CASE("coordinate dump lists every stored entry") {
  const GridSpec g = build_grid(1, 1, 2, 1, 2);
  const Hamiltonian H = assemble(g, std::vector<double>(4, 0.0), BoundarySpec::dirichlet());
  const std::string s = H.coo_dump();
  CHECK(std::count(s.begin(), s.end(), '\n') == 1 + 4 + 8);
}
