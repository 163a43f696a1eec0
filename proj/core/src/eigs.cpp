#include "cbif/eigs.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cbif/rng.hpp"

namespace cbif {

namespace {

TopkEigen dense_topk(const Eigen::MatrixXd& A, int k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  const int n = static_cast<int>(A.rows());
  TopkEigen out;
  out.used_dense = true;
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (int i = 0; i < k; ++i) {
    out.values[i] = es.eigenvalues()[n - 1 - i];
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

}  // namespace

TopkEigen eigs_symmetric_topk(const Eigen::MatrixXd& A, int k, double tol, int max_iter,
                              int dense_threshold) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw std::invalid_argument("eigs_symmetric_topk: matrix must be square");
  if (k < 1 || k > n) throw std::invalid_argument("eigs_symmetric_topk: bad k");

  if (n <= dense_threshold) return dense_topk(A, k);

  if (max_iter <= 0) max_iter = std::min(n, std::max(6 * k, 200));
  const double anorm = std::max(1.0, A.cwiseAbs().rowwise().sum().maxCoeff());

  // Lanczos with full reorthogonalization, deterministic start vector.
  Eigen::MatrixXd V(n, max_iter + 1);
  std::vector<double> alpha, beta;
  {
    Rng rng(0x5eed5eedULL);
    Eigen::VectorXd v0(n);
    for (int i = 0; i < n; ++i) v0[i] = rng.next_double() - 0.5;
    V.col(0) = v0 / v0.norm();
  }

  int m = 0;
  Eigen::VectorXd w;
  for (int j = 0; j < max_iter; ++j) {
    w.noalias() = A * V.col(j);
    const double a = V.col(j).dot(w);
    alpha.push_back(a);
    w -= a * V.col(j);
    if (j > 0) w -= beta[j - 1] * V.col(j - 1);
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) w -= V.col(i).dot(w) * V.col(i);
    }
    const double b = w.norm();
    m = j + 1;
    if (b < 1e-14 * anorm) break;  // invariant subspace found
    beta.push_back(b);
    V.col(j + 1) = w / b;

    // convergence check every few steps once we have enough Ritz pairs
    if (m >= std::max(2 * k, 20) && (m % 10 == 0 || j == max_iter - 1)) {
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < m) {
          T(i, i + 1) = beta[i];
          T(i + 1, i) = beta[i];
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
      // residual of Ritz pair i: |beta_m * s_{m-1,i}|
      bool done = true;
      for (int i = 0; i < k; ++i) {
        const double resid = std::abs(beta[m - 1] * es.eigenvectors()(m - 1, m - 1 - i));
        if (resid > tol * anorm) {
          done = false;
          break;
        }
      }
      if (done) break;
    }
  }

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    T(i, i) = alpha[i];
    if (i + 1 < m && i < static_cast<int>(beta.size())) {
      T(i, i + 1) = beta[i];
      T(i + 1, i) = beta[i];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  if (m < k) return dense_topk(A, k);

  TopkEigen out;
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (int i = 0; i < k; ++i) {
    out.values[i] = es.eigenvalues()[m - 1 - i];
    out.vectors.col(i).noalias() = V.leftCols(m) * es.eigenvectors().col(m - 1 - i);
    out.vectors.col(i).normalize();
  }
  // verify; fall back to dense if the subspace is not accurate enough
  for (int i = 0; i < k; ++i) {
    const double resid = (A * out.vectors.col(i) - out.values[i] * out.vectors.col(i)).norm();
    if (!(resid <= 1e3 * tol * anorm + 1e-10 * anorm)) {
      return dense_topk(A, k);
    }
  }
  return out;
}

}  // namespace cbif
