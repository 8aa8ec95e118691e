#include <cmath>

#include "checks/instances.hpp"
#include "checks/oracles.hpp"
#include "doctest.h"
#include "surflab/error.hpp"
#include "surflab/localization.hpp"
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

Eigen::VectorXd ground_vector(const Hamiltonian& H, double* E) {
  const SpectralResult r = lowest_k(H, 1, 1e-11);
  *E = r.eigenvalues[0];
  return r.vectors.col(0);
}

}  // namespace

TEST_CASE("decay rate of a separable well matches the free discrete rate") {
  const int M = 40;
  const auto U = checks::separable([](int j) { return j == -1 || j == 0 ? -2.0 : 0.0; });
  for (int a : {1, 2}) {
    const GridSpec g = build_grid(1, 1, 3, a, M * a);
    const Hamiltonian H = assemble(g, U(g), BoundarySpec::make(BcKind::Neumann, BcKind::Dirichlet));
    double E = 0.0;
    const Eigen::VectorXd psi = ground_vector(H, &E);
    // Ground energy of the x2 factor alone, built independently.
    Eigen::MatrixXd P = oracle::path(M * a, true, true) * double(a * a);
    for (int j = 0; j < M * a; ++j) P(j, j) += U(g.cell(M * a))[j];
    const double e2 = oracle::eigenvalues(P)[0];
    CHECK(E == doctest::Approx(e2).epsilon(1e-9));
    const DecayFit f = decay_profile(H, E, psi, -0.1);
    CHECK(f.gamma == doctest::Approx(oracle::decay_rate(e2, 1.0 / a)).epsilon(0.02));
    CHECK(f.r2 > 0.99);
  }
}

TEST_CASE("decay of the default ground state") {
  const GridSpec g = build_grid(1, 1, 8, 1, 32);
  const Realization r = default_model().realize(g, 5);
  const Hamiltonian H = assemble(g, r.total(), BoundarySpec::dirichlet());
  double E = 0.0;
  const Eigen::VectorXd psi = ground_vector(H, &E);
  const DecayFit f = decay_profile(H, E, psi, -0.1);
  CHECK(f.gamma > 0.0);
  CHECK(f.r2 >= 0.95);
  CHECK(f.points >= 2);
}

TEST_CASE("decay precondition and underflow") {
  const GridSpec g = build_grid(1, 1, 4, 1, 8);
  const Hamiltonian H = assemble(g, std::vector<double>(g.size(), 0.0), BoundarySpec::dirichlet());
  double E = 0.0;
  const Eigen::VectorXd psi = ground_vector(H, &E);
  CHECK(code_of([&] { decay_profile(H, E, psi, -0.1); }) == ErrorCode::InvalidParam);
  CHECK(code_of([&] { decay_profile(H, -1.0, psi, 0.0); }) == ErrorCode::InvalidParam);
  Eigen::VectorXd tiny = Eigen::VectorXd::Zero(g.size());
  tiny[g.size() / 2] = 1.0;
  CHECK(code_of([&] { decay_profile(H, -1.0, tiny, -0.1); }) == ErrorCode::ProfileUnderflow);
}

TEST_CASE("Wegner probe limits and monotonicity") {
  WegnerConfig c;
  c.grid = build_grid(1, 1, 6, 1, 12);
  c.model = default_model();
  c.E = -0.4;
  c.eps = {0.0, 0.02, 0.05, 0.1, 0.2, 20.0};
  c.n_samples = 200;
  c.seed = 3;
  const WegnerTable t = wegner_probe(c);
  CHECK(t.p.front() == 0.0);
  CHECK(t.p.back() == 1.0);
  for (std::size_t j = 1; j < t.p.size(); ++j) CHECK(t.p[j] >= t.p[j - 1]);
  CHECK(t.points >= 2);
  CHECK(t.slope > 0.0);

  WegnerConfig bad = c;
  bad.model.dist = CouplingDistribution::two_point(-2.0, -1.0, 0.5);
  CHECK(code_of([&] { wegner_probe(bad); }) == ErrorCode::InvalidParam);
  WegnerConfig flat = c;
  flat.eps = {0.0, 20.0};
  CHECK(code_of([&] { wegner_probe(flat); }) == ErrorCode::AllZeroOrOne);
}

TEST_CASE("initial-scale probe limits") {
  InitialScaleConfig c;
  c.model = default_model();
  c.M = 12;
  c.Ls = {4, 6};
  c.energies = {-5.0, 50.0};
  c.n_samples = 40;
  const InitialScaleTable t = initial_scale_probe(c);
  for (std::size_t i = 0; i < t.Ls.size(); ++i) {
    CHECK(t.p[i][0] == 0.0);
    CHECK(t.p[i][1] == 1.0);
  }
  c.Ls = {4, 8, 16};
  c.energies = {-1.2, -1.0, -0.8};
  c.n_samples = 100;
  const InitialScaleTable m = initial_scale_probe(c);
  for (std::size_t j = 0; j < c.energies.size(); ++j) CHECK(m.nondecreasing(j));
  c.model.dist = CouplingDistribution::two_point(-2.0, -1.0, 1.0);
  c.energies = {-1.6, -1.4, -1.2, -1.0};
  const InitialScaleTable d = initial_scale_probe(c);
  for (const auto& row : d.p)
    for (double v : row) CHECK((v == 0.0 || v == 1.0));
  for (std::size_t i = 0; i < d.se.size(); ++i)
    for (double s : d.se[i]) CHECK(s == 0.0);
}

TEST_CASE("dynamics: stationary eigenstates, norm, free spreading, cap") {
  const GridSpec g = build_grid(1, 1, 10, 1, 8);
  const Realization r = default_model().realize(g, 11);
  const Hamiltonian H = assemble(g, r.total(), BoundarySpec::dirichlet());
  double E = 0.0;
  const Eigen::VectorXd psi = ground_vector(H, &E);
  const std::vector<double> times{0.0, 1.0, 10.0, 100.0};
  const DynamicsResult s = dynamics_moment(H, E - 1.0, E + 1e-6, 2.0, times, psi, {5.0, 0.0});
  CHECK(s.states == 1);
  for (double m : s.moment) CHECK(m == doctest::Approx(s.moment[0]).epsilon(1e-9));
  CHECK(s.projected_norm == doctest::Approx(1.0).epsilon(1e-9));

  Eigen::VectorXd u = Eigen::VectorXd::Zero(g.size());
  u[g.index({{5, 0}, {4, 0}})] = 1.0;
  const DynamicsResult n = dynamics_moment(H, -10.0, 10.0, 2.0, times, u, {5.0, 0.0});
  CHECK(n.norm_error < 1e-9);
  CHECK(n.projected_norm == doctest::Approx(1.0));

  const GridSpec f = build_grid(1, 1, 41, 1, 4);
  const Hamiltonian F = assemble(f, std::vector<double>(f.size(), 0.0), BoundarySpec::neumann());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(f.size());
  v[f.index({{20, 0}, {1, 0}})] = 1.0;
  const DynamicsResult free = dynamics_moment(F, -1.0, 20.0, 2.0, {0.0, 2.0, 4.0, 8.0}, v, {20.0, 0.0});
  CHECK(free.moment[0] < 1e-20);
  for (std::size_t i = 1; i < free.moment.size(); ++i) CHECK(free.moment[i] > free.moment[i - 1]);
  // Ballistic spreading on Z: sum x^2 |u_t(x)|^2 = 2 t^2 before the walls are reached.
  CHECK(free.moment[1] == doctest::Approx(8.0).epsilon(1e-3));

  CHECK(code_of([&] { dynamics_moment(H, -1.0, 1.0, 2.0, times, psi, {0.0, 0.0}, 10); }) ==
        ErrorCode::DenseCapExceeded);
}

TEST_CASE("participation ratio and x1 decay length") {
  const GridSpec g = build_grid(1, 1, 12, 1, 4);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(g.size());
  d[g.index({{3, 0}, {1, 0}})] = 2.0;
  const X1Localization a = x1_localization(g, d);
  CHECK(a.participation_ratio == doctest::Approx(1.0));
  CHECK(a.peak == 3);
  const X1Localization b = x1_localization(g, Eigen::VectorXd(Eigen::VectorXd::Ones(g.size())));
  CHECK(b.participation_ratio == doctest::Approx(double(g.size())));
  Eigen::VectorXd e(g.size());
  for (std::int64_t x = 0; x < g.size(); ++x) e[x] = std::exp(-std::abs(g.coords(x).x1[0] - 6) / 1.5);
  const X1Localization c = x1_localization(g, e);
  CHECK(c.peak == 6);
  CHECK(c.decay_length == doctest::Approx(1.5));
  CHECK(c.r2 == doctest::Approx(1.0));
}
