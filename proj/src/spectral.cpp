#include "surflab/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "surflab/error.hpp"
#include "surflab/report.hpp"
#include "surflab/seed.hpp"

namespace surflab {

namespace {

template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Sparse = Eigen::SparseMatrix<S, Eigen::RowMajor, std::int64_t>;
template <class S>
using Apply = std::function<void(const Vec<S>&, Vec<S>&)>;

double re(double v) { return v; }
double re(cplx v) { return v.real(); }

template <class S>
Vec<S> random_vector(std::int64_t n, std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t s = seed::mix(seed, counter);
  Vec<S> v(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double x = seed::unit(seed::mix(s, i)) - 0.5;
    if constexpr (std::is_same_v<S, double>) {
      v[i] = x;
    } else {
      v[i] = cplx(x, seed::unit(seed::mix(s, i + n)) - 0.5);
    }
  }
  return v;
}

template <class S>
double sparse_norm_inf(const Sparse<S>& A) {
  double m = 0.0;
  for (std::int64_t r = 0; r < A.outerSize(); ++r) {
    double s = 0.0;
    for (typename Sparse<S>::InnerIterator it(A, r); it; ++it) s += std::abs(it.value());
    m = std::max(m, s);
  }
  return m;
}

template <class S>
void store(SpectralResult& out, const Mat<S>& X) {
  if constexpr (std::is_same_v<S, double>) {
    out.vectors = X;
    out.complex = false;
  } else {
    out.cvectors = X;
    out.complex = true;
  }
}

template <class S>
std::vector<double> true_residuals(const Apply<S>& op, const Mat<S>& X, const std::vector<double>& vals) {
  std::vector<double> r(vals.size());
  Vec<S> y;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const Vec<S> x = X.col(static_cast<Eigen::Index>(i));
    op(x, y);
    r[i] = (y - vals[i] * x).norm();
  }
  return r;
}

template <class S>
SpectralResult dense_lowest(const Apply<S>& op, const Mat<S>& D, int k) {
  Eigen::SelfAdjointEigenSolver<Mat<S>> es(D);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "dense eigensolver failed");
  SpectralResult out;
  out.method = SpectralResult::Method::Dense;
  out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
  const Mat<S> X = es.eigenvectors().leftCols(k);
  out.residuals = true_residuals<S>(op, X, out.eigenvalues);
  store<S>(out, X);
  return out;
}

template <class S>
struct Krylov {
  std::vector<double> vals;
  Mat<S> vecs;
  std::vector<double> res;
  bool ok = false;
  double worst = 0.0;
};

// Thick-restart Lanczos (Krylov-Schur form) on P A P with P = I - Q Q^H.
// The projected matrix is assembled from explicit inner products, so restarts
// need no special structure, and every new vector is orthogonalized twice.
template <class S>
Krylov<S> krylov_schur(const Apply<S>& op, std::int64_t n, int k, double tol, const Mat<S>& Q, double anorm,
                       const LowestKOptions& opt, std::uint64_t stream) {
  const std::int64_t neff = n - Q.cols();
  k = static_cast<int>(std::min<std::int64_t>(k, neff));
  int m = opt.basis > 0 ? opt.basis : std::max(2 * k + 20, 40);
  m = static_cast<int>(std::min<std::int64_t>(m, neff));

  Mat<S> V(n, m);
  Mat<S> T = Mat<S>::Zero(m, m);
  auto project = [&](Vec<S>& w, int ncols) {
    for (int pass = 0; pass < 2; ++pass) {
      if (Q.cols() > 0) w -= Q * (Q.adjoint() * w);
      if (ncols > 0) w -= V.leftCols(ncols) * (V.leftCols(ncols).adjoint() * w);
    }
    if (Q.cols() > 0) w -= Q * (Q.adjoint() * w);
  };
  std::uint64_t fresh = 0;
  auto new_direction = [&](int ncols) {
    for (int tries = 0; tries < 8; ++tries) {
      Vec<S> v = random_vector<S>(n, opt.seed ^ stream, fresh++);
      project(v, ncols);
      const double nv = v.norm();
      if (nv > 1e-8) return Vec<S>(v / nv);
    }
    throw Error(ErrorCode::NoConvergence, "cannot find a new Krylov direction");
  };

  Vec<S> v = new_direction(0);
  Vec<S> w(n);
  int j = 0;
  double fnorm = 0.0;
  Krylov<S> out;
  const double breakdown = 1e-12 * std::max(1.0, anorm);

  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    while (j < m) {
      V.col(j) = v;
      op(v, w);
      // Deflate after each pass: V-orthogonalization shrinks w and would
      // otherwise amplify the Q-components carried by V.
      Vec<S> c = Vec<S>::Zero(j + 1);
      for (int pass = 0; pass < 2; ++pass) {
        if (Q.cols() > 0) w -= Q * (Q.adjoint() * w);
        const Vec<S> cp = V.leftCols(j + 1).adjoint() * w;
        w -= V.leftCols(j + 1) * cp;
        c += cp;
      }
      if (Q.cols() > 0) w -= Q * (Q.adjoint() * w);
      for (int i = 0; i < j; ++i) {
        T(i, j) = c[i];
        T(j, i) = Eigen::numext::conj(c[i]);
      }
      T(j, j) = re(c[j]);
      const double beta = w.norm();
      ++j;
      if (beta <= breakdown) {
        fnorm = 0.0;
        if (j >= neff) break;
        v = new_direction(j);
      } else {
        v = w / beta;
        fnorm = beta;
      }
    }

    Eigen::SelfAdjointEigenSolver<Mat<S>> es(T.topLeftCorner(j, j));
    const Eigen::VectorXd theta = es.eigenvalues();
    const Mat<S>& Y = es.eigenvectors();
    const int kk = std::min(k, j);
    bool estimated = true;
    for (int i = 0; i < kk; ++i)
      if (fnorm * std::abs(Y(j - 1, i)) > 0.25 * tol) estimated = false;

    if (estimated || j >= neff) {
      const Mat<S> X = V.leftCols(j) * Y.leftCols(kk);
      std::vector<double> vals(theta.data(), theta.data() + kk);
      std::vector<double> res = true_residuals<S>(op, X, vals);
      const double worst = res.empty() ? 0.0 : *std::max_element(res.begin(), res.end());
      if (worst <= tol || j >= neff) {
        out.vals = std::move(vals);
        out.vecs = X;
        out.res = std::move(res);
        out.worst = worst;
        out.ok = worst <= tol;
        return out;
      }
      out.worst = worst;
    }

    const int keep = std::min(j - 1, kk + (m - kk) / 2);
    const Mat<S> Vk = V.leftCols(j) * Y.leftCols(keep);
    V.leftCols(keep) = Vk;
    T.setZero();
    for (int i = 0; i < keep; ++i) T(i, i) = theta[i];
    j = keep;
    if (fnorm == 0.0) v = new_direction(j);
  }
  out.ok = false;
  return out;
}

template <class S>
SpectralResult lowest_impl(const Apply<S>& op, std::int64_t n, const std::function<Mat<S>()>& dense, int k,
                           double tol, const LowestKOptions& opt, double anorm) {
  if (k < 1 || k > n)
    throw Error(ErrorCode::InvalidParam, "k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  using M = LowestKOptions::Method;
  const bool use_dense = opt.method == M::Dense || (opt.method == M::Auto && n <= opt.dense_threshold);
  if (use_dense) {
    SpectralResult r = dense_lowest<S>(op, dense(), k);
    if (r.max_residual() > tol)
      throw Error(ErrorCode::NoConvergence, "dense residual " + fmt17(r.max_residual()) + " above tol");
    return r;
  }

  auto fallback = [&](double achieved) -> SpectralResult {
    if (opt.method != M::Iterative && n <= opt.dense_fallback) {
      SpectralResult r = dense_lowest<S>(op, dense(), k);
      if (r.max_residual() <= tol) return r;
      achieved = r.max_residual();
    }
    throw Error(ErrorCode::NoConvergence, "achieved residual " + fmt17(achieved) + " > tol " + fmt17(tol));
  };

  Krylov<S> cur = krylov_schur<S>(op, n, k, tol, Mat<S>(n, 0), anorm, opt, 0);
  if (!cur.ok) return fallback(cur.worst);

  // Single-vector Krylov spaces see one copy of a degenerate eigenvalue in
  // exact arithmetic; search the complement of the found vectors for more.
  for (int pass = 1; pass <= 8 && cur.vecs.cols() < n; ++pass) {
    const int kd = static_cast<int>(std::min<std::int64_t>(k, n - cur.vecs.cols()));
    Krylov<S> extra = krylov_schur<S>(op, n, kd, tol, cur.vecs, anorm, opt, static_cast<std::uint64_t>(pass));
    if (!extra.ok) return fallback(extra.worst);
    if (!(extra.vals.front() < cur.vals.back())) break;
    std::vector<std::pair<double, int>> all;
    for (int i = 0; i < static_cast<int>(cur.vals.size()); ++i) all.emplace_back(cur.vals[i], i);
    for (int i = 0; i < static_cast<int>(extra.vals.size()); ++i) all.emplace_back(extra.vals[i], -1 - i);
    std::stable_sort(all.begin(), all.end(), [](auto& x, auto& y) { return x.first < y.first; });
    Krylov<S> merged;
    merged.vecs.resize(n, k);
    for (int i = 0; i < k; ++i) {
      const int src = all[i].second;
      merged.vals.push_back(all[i].first);
      if (src >= 0) {
        merged.vecs.col(i) = cur.vecs.col(src);
        merged.res.push_back(cur.res[src]);
      } else {
        merged.vecs.col(i) = extra.vecs.col(-1 - src);
        merged.res.push_back(extra.res[-1 - src]);
      }
    }
    merged.ok = true;
    cur = std::move(merged);
  }

  SpectralResult out;
  out.method = SpectralResult::Method::Iterative;
  out.eigenvalues = cur.vals;
  out.residuals = true_residuals<S>(op, cur.vecs, cur.vals);
  store<S>(out, cur.vecs);
  if (out.max_residual() > tol) return fallback(out.max_residual());
  return out;
}

template <class S>
SpectralResult lowest_sparse(const Sparse<S>& A, int k, double tol, const LowestKOptions& opt) {
  const std::int64_t n = A.rows();
  Apply<S> op = [&A](const Vec<S>& x, Vec<S>& y) { y.noalias() = A * x; };
  return lowest_impl<S>(op, n, [&A]() { return Mat<S>(A); }, k, tol, opt, sparse_norm_inf<S>(A));
}

}  // namespace

Eigen::VectorXcd SpectralResult::vector(int i) const {
  if (complex) return cvectors.col(i);
  return vectors.col(i).cast<cplx>();
}

double SpectralResult::max_residual() const {
  return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
}

double SpectralResult::orthogonality_error() const {
  Eigen::MatrixXcd G;
  if (complex) {
    G = cvectors.adjoint() * cvectors;
  } else {
    G = (vectors.transpose() * vectors).cast<cplx>();
  }
  G -= Eigen::MatrixXcd::Identity(G.rows(), G.cols());
  return G.cwiseAbs().maxCoeff();
}

SpectralResult lowest_k(const Hamiltonian& H, int k, double tol, const LowestKOptions& opt) {
  if (H.is_complex()) return lowest_sparse<cplx>(H.complex(), k, tol, opt);
  return lowest_sparse<double>(H.real(), k, tol, opt);
}

SpectralResult lowest_k(const RealSparse& A, int k, double tol, const LowestKOptions& opt) {
  return lowest_sparse<double>(A, k, tol, opt);
}

SpectralResult lowest_k(const ComplexSparse& A, int k, double tol, const LowestKOptions& opt) {
  return lowest_sparse<cplx>(A, k, tol, opt);
}

SpectralResult dense_spectrum(const Hamiltonian& H) {
  const int n = static_cast<int>(H.dim());
  if (H.is_complex()) {
    const ComplexSparse& A = H.complex();
    Apply<cplx> op = [&A](const Vec<cplx>& x, Vec<cplx>& y) { y.noalias() = A * x; };
    return dense_lowest<cplx>(op, Mat<cplx>(A), n);
  }
  const RealSparse& A = H.real();
  Apply<double> op = [&A](const Vec<double>& x, Vec<double>& y) { y.noalias() = A * x; };
  return dense_lowest<double>(op, Mat<double>(A), n);
}

// ---------------------------------------------------------------------------
// Inertia counting

struct InertiaCounter::Impl {
  virtual ~Impl() = default;
  virtual std::int64_t count(double E) const = 0;
  double scale = 1.0;
};

namespace {

constexpr double kTieShift = 1e-12;
constexpr double kPivotFloor = 1e-10;
constexpr std::int64_t kDenseCap = 4000;
constexpr std::int64_t kDenseRetryCap = 2000;

// Block-tridiagonal Schur complement sweep: S_k = A_kk - sigma - B^H S_{k-1}^{-1} B.
// The inertia of A - sigma is the sum of the inertias of the S_k.
template <class S>
class BlockCounter final : public InertiaCounter::Impl {
 public:
  explicit BlockCounter(const Sparse<S>& A) : A_(A) {
    n_ = A.rows();
    scale = std::max(1.0, sparse_norm_inf<S>(A));
    std::int64_t b = 0;
    for (std::int64_t r = 0; r < A.outerSize(); ++r)
      for (typename Sparse<S>::InnerIterator it(A, r); it; ++it) b = std::max(b, std::abs(it.col() - r));
    band_ = b;
    if (b == 0) {
      diag_.resize(n_);
      for (std::int64_t i = 0; i < n_; ++i) diag_[i] = re(A.coeff(i, i));
      return;
    }
    if (2 * b >= n_) {
      if (n_ <= kDenseCap) dense_values();
      return;
    }
    const std::int64_t nb = (n_ + b - 1) / b;
    for (std::int64_t k = 0; k < nb; ++k) {
      const std::int64_t r0 = k * b, r1 = std::min(n_, r0 + b);
      starts_.push_back(r0);
      Mat<S> D = Mat<S>::Zero(r1 - r0, r1 - r0);
      Mat<S> U;
      if (k + 1 < nb) U = Mat<S>::Zero(r1 - r0, std::min(n_, r1 + b) - r1);
      for (std::int64_t r = r0; r < r1; ++r)
        for (typename Sparse<S>::InnerIterator it(A, r); it; ++it) {
          const std::int64_t c = it.col();
          if (c >= r0 && c < r1) D(r - r0, c - r0) = it.value();
          else if (c >= r1) U(r - r0, c - r1) = it.value();
        }
      blocks_.push_back(std::move(D));
      upper_.push_back(std::move(U));
    }
  }

  std::int64_t count(double E) const override {
    const double sigma = E + kTieShift * scale;
    if (band_ == 0) {
      std::int64_t c = 0;
      for (double d : diag_) c += d < sigma;
      return c;
    }
    if (!evals_.empty()) return dense_count(sigma);
    if (blocks_.empty()) {
      if (auto c = ldlt(sigma)) return *c;
    } else {
      if (auto c = sweep(sigma, false)) return *c;
      if (auto c = sweep(sigma, true)) return *c;
    }
    if (n_ <= kDenseRetryCap) {
      dense_values();
      return dense_count(sigma);
    }
    for (int t = 1; t <= 3; ++t) {
      const double s2 = sigma + (t % 2 ? 1.0 : -0.5) * t * 1e-10 * scale;
      if (auto c = blocks_.empty() ? ldlt(s2) : sweep(s2, false)) return *c;
    }
    throw Error(ErrorCode::FactorizationBreakdown,
                "singular pivot at E = " + fmt17(E) + "; retry with a perturbed energy");
  }

 private:
  void dense_values() const {
    if (!evals_.empty()) return;
    Eigen::SelfAdjointEigenSolver<Mat<S>> es(Mat<S>(A_), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "dense eigensolver failed");
    evals_.assign(es.eigenvalues().data(), es.eigenvalues().data() + n_);
  }

  std::int64_t dense_count(double sigma) const {
    return std::lower_bound(evals_.begin(), evals_.end(), sigma) - evals_.begin();
  }

  std::optional<std::int64_t> sweep(double sigma, bool reverse) const {
    const std::int64_t nb = static_cast<std::int64_t>(blocks_.size());
    const double floor = kPivotFloor * scale;
    std::int64_t neg = 0;
    Mat<S> Sk;
    Mat<S> C;
    Eigen::VectorXd inv;
    for (std::int64_t step = 0; step < nb; ++step) {
      const std::int64_t k = reverse ? nb - 1 - step : step;
      Sk = blocks_[k];
      Sk.diagonal().array() -= sigma;
      if (step > 0) Sk.noalias() -= C.adjoint() * inv.asDiagonal() * C;
      const bool last = step + 1 == nb;
      Eigen::SelfAdjointEigenSolver<Mat<S>> es(Sk, last ? Eigen::EigenvaluesOnly : Eigen::ComputeEigenvectors);
      const Eigen::VectorXd& lam = es.eigenvalues();
      for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (std::abs(lam[i]) < floor) return std::nullopt;
        neg += lam[i] < 0.0;
      }
      if (last) break;
      inv = lam.cwiseInverse();
      // Coupling from block k to the next block in sweep order.
      if (reverse) {
        C = es.eigenvectors().adjoint() * upper_[k - 1].adjoint();
      } else {
        C = es.eigenvectors().adjoint() * upper_[k];
      }
    }
    return neg;
  }

  std::optional<std::int64_t> ldlt(double sigma) const {
    Eigen::SparseMatrix<S> M = A_;
    for (std::int64_t i = 0; i < n_; ++i) M.coeffRef(i, i) -= sigma;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<S>> f(M);
    if (f.info() != Eigen::Success) return std::nullopt;
    const auto D = f.vectorD();
    std::int64_t neg = 0;
    for (Eigen::Index i = 0; i < D.size(); ++i) {
      const double d = re(D[i]);
      if (std::abs(d) < kPivotFloor * scale) return std::nullopt;
      neg += d < 0.0;
    }
    return neg;
  }

  Sparse<S> A_;
  std::int64_t n_ = 0;
  std::int64_t band_ = 0;
  std::vector<double> diag_;
  std::vector<std::int64_t> starts_;
  std::vector<Mat<S>> blocks_;
  std::vector<Mat<S>> upper_;
  mutable std::vector<double> evals_;
};

}  // namespace

InertiaCounter::InertiaCounter(const Hamiltonian& H) {
  if (H.is_complex()) impl_ = std::make_unique<BlockCounter<cplx>>(H.complex());
  else impl_ = std::make_unique<BlockCounter<double>>(H.real());
}
InertiaCounter::InertiaCounter(const RealSparse& A) : impl_(std::make_unique<BlockCounter<double>>(A)) {}
InertiaCounter::InertiaCounter(const ComplexSparse& A) : impl_(std::make_unique<BlockCounter<cplx>>(A)) {}
InertiaCounter::~InertiaCounter() = default;
InertiaCounter::InertiaCounter(InertiaCounter&&) noexcept = default;
InertiaCounter& InertiaCounter::operator=(InertiaCounter&&) noexcept = default;

std::int64_t InertiaCounter::count(double E) const { return impl_->count(E); }
double InertiaCounter::scale() const { return impl_->scale; }

std::int64_t count_below(const Hamiltonian& H, double E) { return InertiaCounter(H).count(E); }
std::int64_t count_below(const RealSparse& A, double E) { return InertiaCounter(A).count(E); }

// ---------------------------------------------------------------------------
// Bounds

namespace {

double temple_core(const Eigen::VectorXd& u, const Eigen::VectorXd& Au, double lambda1_low) {
  if (std::abs(u.squaredNorm() - 1.0) > 1e-10)
    throw Error(ErrorCode::InvalidParam, "Temple trial vector must be normalized");
  const double mean = u.dot(Au);
  const double denom = lambda1_low - mean;
  if (!(denom > 0.0))
    throw Error(ErrorCode::DenominatorNonpositive, "lambda1_low " + fmt17(lambda1_low) + " <= <H> " + fmt17(mean));
  const double var = std::max(0.0, Au.squaredNorm() - mean * mean);
  return mean - var / denom;
}

double rayleigh_core(const Eigen::VectorXd& u, const Eigen::VectorXd& Au) {
  const double nn = u.squaredNorm();
  if (!(nn > 0.0)) throw Error(ErrorCode::ZeroVector, "Rayleigh quotient of the zero vector");
  return u.dot(Au) / nn;
}

}  // namespace

double temple_lower_bound(const Hamiltonian& H, const Eigen::VectorXd& u, double lambda1_low) {
  if (u.size() != H.dim()) throw Error(ErrorCode::ShapeMismatch, "trial vector size differs from H");
  if (H.is_complex()) throw Error(ErrorCode::InvalidParam, "temple_lower_bound expects a real Hamiltonian");
  Eigen::VectorXd Au;
  H.apply(u, Au);
  return temple_core(u, Au, lambda1_low);
}

double temple_lower_bound(const RealSparse& A, const Eigen::VectorXd& u, double lambda1_low) {
  if (u.size() != A.rows()) throw Error(ErrorCode::ShapeMismatch, "trial vector size differs from A");
  const Eigen::VectorXd Au = A * u;
  return temple_core(u, Au, lambda1_low);
}

double rayleigh_ritz_upper(const Hamiltonian& H, const Eigen::VectorXd& u) {
  if (u.size() != H.dim()) throw Error(ErrorCode::ShapeMismatch, "trial vector size differs from H");
  if (H.is_complex()) return rayleigh_ritz_upper(H, Eigen::VectorXcd(u.cast<cplx>()));
  Eigen::VectorXd Au;
  H.apply(u, Au);
  return rayleigh_core(u, Au);
}

double rayleigh_ritz_upper(const Hamiltonian& H, const Eigen::VectorXcd& u) {
  if (u.size() != H.dim()) throw Error(ErrorCode::ShapeMismatch, "trial vector size differs from H");
  const double nn = u.squaredNorm();
  if (!(nn > 0.0)) throw Error(ErrorCode::ZeroVector, "Rayleigh quotient of the zero vector");
  return quadratic_form(H, u) / nn;
}

double rayleigh_ritz_upper(const RealSparse& A, const Eigen::VectorXd& u) {
  if (u.size() != A.rows()) throw Error(ErrorCode::ShapeMismatch, "trial vector size differs from A");
  const Eigen::VectorXd Au = A * u;
  return rayleigh_core(u, Au);
}

VariationalBound variational_count_bound(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply_A,
                                         const Eigen::MatrixXd& phi, const std::vector<double>& alphas,
                                         double eps1, double eps2) {
  const int n = static_cast<int>(phi.cols());
  if (n < 1 || static_cast<int>(alphas.size()) != n)
    throw Error(ErrorCode::ShapeMismatch, "need one alpha per vector and at least one vector");
  Eigen::MatrixXd Aphi(phi.rows(), n);
  for (int j = 0; j < n; ++j) Aphi.col(j) = apply_A(phi.col(j));
  const Eigen::MatrixXd G = phi.transpose() * phi;
  Eigen::MatrixXd F = phi.transpose() * Aphi;

  VariationalBound out;
  out.n = n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gs(G, Eigen::EigenvaluesOnly);
  out.gram_min_eigenvalue = gs.eigenvalues()[0];
  if (!(out.gram_min_eigenvalue > 0.0)) throw Error(ErrorCode::GramDegenerate, "Gram matrix is singular");
  out.gram_deviation = (G - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  for (int j = 0; j < n; ++j) F(j, j) -= alphas[j];
  out.form_deviation = F.cwiseAbs().maxCoeff();

  if (out.gram_deviation > eps1)
    throw Error(ErrorCode::HypothesisViolated, "Gram deviation " + fmt17(out.gram_deviation) + " exceeds eps1");
  if (out.form_deviation > eps2)
    throw Error(ErrorCode::HypothesisViolated, "form deviation " + fmt17(out.form_deviation) + " exceeds eps2");
  if (!(n * eps1 < 1.0)) throw Error(ErrorCode::HypothesisViolated, "n * eps1 must be < 1");

  const double alpha = *std::max_element(alphas.begin(), alphas.end());
  const double num = alpha + n * eps2;
  out.alpha_prime = num >= 0.0 ? num / (1.0 - n * eps1) : num / (1.0 + n * eps1);
  return out;
}

}  // namespace surflab
