#include "twistlab/eigensolver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <limits>
#include <random>
#include <stdexcept>

namespace twistlab::numerics {

namespace {

constexpr int kDenseCutoff = 700;

std::vector<double> dense_path(const SparseReal& A) {
  Eigen::MatrixXd dense(A);
  dense = 0.5 * (dense + dense.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense,
                                                    Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(),
          es.eigenvalues().data() + es.eigenvalues().size()};
}

// Lanczos on (A - sigma I)^{-1}; returns Ritz pairs converted back to
// eigenvalues of A, ascending, with residual-based convergence flags.
struct LanczosResult {
  std::vector<double> values;
  std::vector<bool> converged;
};

LanczosResult shift_invert_lanczos(const SparseReal& A, double sigma,
                                   int steps) {
  const int n = static_cast<int>(A.rows());
  steps = std::min(steps, n);
  SparseReal shifted = A;
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
  Eigen::SimplicialLDLT<SparseReal> solver(shifted);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("lowest_eigenvalues: factorization failed");

  std::mt19937 rng(0x5eed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd V(n, steps);
  Eigen::VectorXd alpha(steps), beta(steps);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  v.normalize();

  int m = 0;
  double beta_prev = 0.0;
  Eigen::VectorXd v_prev = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < steps; ++j) {
    V.col(j) = v;
    Eigen::VectorXd w = solver.solve(v);
    alpha[j] = v.dot(w);
    w -= alpha[j] * v + beta_prev * v_prev;
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass)
      w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w).eval();
    const double b = w.norm();
    m = j + 1;
    if (b < 1e-13) break;
    beta[j] = b;
    v_prev = v;
    v = w / b;
    beta_prev = b;
  }

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    T(i, i) = alpha[i];
    if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);

  LanczosResult out;
  const double bm = m < steps ? 0.0 : beta[m - 1];
  // Ritz values of the inverse, descending = lowest of A first.
  for (int i = m - 1; i >= 0; --i) {
    const double mu = es.eigenvalues()[i];
    if (mu <= 0.0) continue;  // beyond the representable window
    out.values.push_back(sigma + 1.0 / mu);
    const double resid = std::abs(bm * es.eigenvectors()(m - 1, i));
    out.converged.push_back(resid <= 1e-9 * std::max(1.0, std::abs(mu)));
  }
  return out;
}

double spectral_scale(const SparseReal& A) {
  double scale = 0.0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseReal::InnerIterator it(A, k); it; ++it)
      scale = std::max(scale, std::abs(it.value()));
  return scale > 0.0 ? scale : 1.0;
}

}  // namespace

std::vector<double> dense_eigenvalues(const SparseReal& A) {
  return dense_path(A);
}

std::vector<double> lowest_eigenvalues(const SparseReal& A, int k) {
  const int n = static_cast<int>(A.rows());
  k = std::min(k, n);
  if (n <= kDenseCutoff) {
    auto all = dense_path(A);
    all.resize(k);
    return all;
  }
  const double sigma = -1e-3 * spectral_scale(A);
  int steps = std::max(2 * k + 30, 60);
  for (;;) {
    auto res = shift_invert_lanczos(A, sigma, steps);
    int good = 0;
    for (int i = 0; i < static_cast<int>(res.values.size()) && good < k; ++i) {
      if (!res.converged[i]) break;
      ++good;
    }
    if (good >= k || steps >= std::min(n, 1200)) {
      res.values.resize(std::min<std::size_t>(res.values.size(), k));
      return res.values;
    }
    steps *= 2;
  }
}

int count_below(const SparseReal& A, double threshold) {
  int k = 16;
  const int n = static_cast<int>(A.rows());
  for (;;) {
    auto vals = lowest_eigenvalues(A, k);
    int count = 0;
    for (double v : vals)
      if (v <= threshold) ++count;
    if (count < static_cast<int>(vals.size()) || k >= n) return count;
    k *= 2;
  }
}

double smallest_above(const SparseReal& A, double threshold) {
  int k = 16;
  const int n = static_cast<int>(A.rows());
  for (;;) {
    auto vals = lowest_eigenvalues(A, k);
    for (double v : vals)
      if (v > threshold) return v;
    if (k >= n) return std::numeric_limits<double>::infinity();
    k *= 2;
  }
}

}  // namespace twistlab::numerics
