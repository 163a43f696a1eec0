#include "cbif/diffusion_maps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "cbif/eigs.hpp"
#include "cbif/rng.hpp"

namespace cbif {

namespace {

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& X) {
  const Eigen::VectorXd sq = X.rowwise().squaredNorm();
  Eigen::MatrixXd D2 = -2.0 * X * X.transpose();
  D2.colwise() += sq;
  D2.rowwise() += sq.transpose();
  return D2.cwiseMax(0.0);
}

double median_of_distances(const Eigen::MatrixXd& D2) {
  const int n = static_cast<int>(D2.rows());
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) d.push_back(std::sqrt(D2(i, j)));
  }
  if (d.empty()) return 1.0;
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + mid, d.end());
  return d[mid];
}

}  // namespace

DiffusionMatrices build_diffusion_matrices(const Eigen::MatrixXd& points,
                                           const KernelConfig& cfg) {
  const int n = static_cast<int>(points.rows());
  if (n < 2) throw std::invalid_argument("build_diffusion_matrices: need at least 2 points");
  if (!(cfg.sigma > 0.0)) throw std::invalid_argument("build_diffusion_matrices: sigma > 0");

  DiffusionMatrices out;
  out.W = (-squared_distances(points) / cfg.sigma).array().exp();
  out.degrees = out.W.rowwise().sum();
  if ((out.degrees.array() <= 0.0).any()) {
    throw std::runtime_error("build_diffusion_matrices: zero kernel row sum");
  }
  out.P = out.degrees.cwiseInverse().asDiagonal() * out.W;
  const Eigen::VectorXd dsqrt_inv = out.degrees.cwiseSqrt().cwiseInverse();
  out.P_sym = dsqrt_inv.asDiagonal() * out.W * dsqrt_inv.asDiagonal();
  out.P_sym = 0.5 * (out.P_sym + out.P_sym.transpose()).eval();
  return out;
}

EmbeddingResult embed(const Eigen::MatrixXd& points, const KernelConfig& cfg) {
  if (cfg.n_eigen < 2) throw std::invalid_argument("embed: n_eigen must be >= 2");
  auto mats = std::make_shared<DiffusionMatrices>(build_diffusion_matrices(points, cfg));
  const int n = static_cast<int>(points.rows());
  const int k = std::min(cfg.n_eigen, n);

  TopkEigen top = eigs_symmetric_topk(mats->P_sym, k);

  EmbeddingResult res;
  res.eigenvalues = top.values;
  res.eigenvectors.resize(n, k);
  const Eigen::VectorXd dsqrt_inv = mats->degrees.cwiseSqrt().cwiseInverse();
  for (int c = 0; c < k; ++c) {
    Eigen::VectorXd psi = dsqrt_inv.asDiagonal() * top.vectors.col(c);
    psi.normalize();
    for (int i = 0; i < n; ++i) {
      if (std::abs(psi[i]) > 1e-12) {
        if (psi[i] < 0) psi = -psi;
        break;
      }
    }
    res.eigenvectors.col(c) = psi;
  }
  res.sample_count = n;
  res.t_steps = cfg.t_steps;
  res.matrices = std::move(mats);
  res.residuals = parsimony_residuals(res.eigenvectors, 0.0, cfg.parsimony_samples,
                                      cfg.parsimony_seed);
  return res;
}

Eigen::MatrixXd EmbeddingResult::coordinates() const {
  Eigen::MatrixXd Y = eigenvectors;
  for (int c = 0; c < Y.cols(); ++c) {
    Y.col(c) *= std::pow(eigenvalues[c], t_steps);
  }
  return Y;
}

double diffusion_distance(const EmbeddingResult& result, int i, int j) {
  if (!result.matrices) throw std::runtime_error("diffusion_distance: matrices not retained");
  const auto& M = *result.matrices;
  const int n = static_cast<int>(M.P.rows());
  if (i < 0 || j < 0 || i >= n || j >= n) throw std::out_of_range("diffusion_distance: index");

  Eigen::RowVectorXd pi = M.P.row(i);
  Eigen::RowVectorXd pj = M.P.row(j);
  for (int t = 1; t < result.t_steps; ++t) {
    pi = pi * M.P;
    pj = pj * M.P;
  }
  const double total_degree = M.degrees.sum();
  double acc = 0.0;
  for (int kk = 0; kk < n; ++kk) {
    const double phi0 = M.degrees[kk] / total_degree;
    const double diff = pi[kk] - pj[kk];
    acc += diff * diff / phi0;
  }
  return std::sqrt(acc);
}

Eigen::VectorXd parsimony_residuals(const Eigen::MatrixXd& eigenvectors, double kernel_scale,
                                    int max_samples, std::uint64_t seed) {
  const int n_total = static_cast<int>(eigenvectors.rows());
  const int K = static_cast<int>(eigenvectors.cols());
  if (K < 2) throw std::invalid_argument("parsimony_residuals: need at least 2 eigenvectors");

  // optional subsample: LOOCV local fits are O(N^2) per eigenvector
  Eigen::MatrixXd Psi;
  if (max_samples > 0 && max_samples < n_total) {
    std::vector<int> idx(n_total);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(derive_seed(seed, "parsimony-subsample"));
    for (int i = n_total - 1; i > 0; --i) {
      std::swap(idx[i], idx[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    }
    idx.resize(max_samples);
    std::sort(idx.begin(), idx.end());
    Psi.resize(max_samples, K);
    for (int r = 0; r < max_samples; ++r) Psi.row(r) = eigenvectors.row(idx[r]);
  } else {
    Psi = eigenvectors;
  }
  const int N = static_cast<int>(Psi.rows());

  Eigen::VectorXd res = Eigen::VectorXd::Zero(K);
  res[1] = 1.0;

  for (int k = 2; k < K; ++k) {
    const Eigen::MatrixXd X = Psi.middleCols(1, k - 1);  // nontrivial predecessors
    const Eigen::VectorXd y = Psi.col(k);

    Eigen::MatrixXd D2 = squared_distances(X);
    double scale = kernel_scale;
    if (!(scale > 0.0)) scale = 3.0 * median_of_distances(D2);
    if (!(scale > 0.0)) scale = 1.0;
    Eigen::MatrixXd Wk = (-D2 / (scale * scale)).array().exp();
    Wk.diagonal().setZero();  // leave-one-out

    Eigen::MatrixXd A(N, k);
    A.col(0).setOnes();
    A.rightCols(k - 1) = X;

    double err2 = 0.0;
    Eigen::MatrixXd M(k, k);
    Eigen::VectorXd b(k);
    for (int i = 0; i < N; ++i) {
      const Eigen::MatrixXd Aw = Wk.col(i).asDiagonal() * A;
      M.noalias() = A.transpose() * Aw;
      M.diagonal().array() += 1e-10;  // ridge stabilizer
      b.noalias() = Aw.transpose() * y;
      const Eigen::VectorXd coef = M.ldlt().solve(b);
      const double pred = A.row(i).dot(coef);
      const double d = y[i] - pred;
      err2 += d * d;
    }
    res[k] = std::sqrt(err2 / y.squaredNorm());
  }
  return res;
}

std::vector<int> retained_directions(const Eigen::VectorXd& residuals, double cutoff, int mu) {
  const int K = static_cast<int>(residuals.size());
  std::vector<int> keep;
  if (mu > 0) {
    std::vector<int> order(K - 1);
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return residuals[a] > residuals[b]; });
    order.resize(std::min<std::size_t>(mu, order.size()));
    std::sort(order.begin(), order.end());
    return order;
  }
  // leading nontrivial block above the cutoff
  keep.push_back(1);
  for (int k = 2; k < K; ++k) {
    if (residuals[k] > cutoff) {
      keep.push_back(k);
    } else {
      break;
    }
  }
  return keep;
}

}  // namespace cbif
