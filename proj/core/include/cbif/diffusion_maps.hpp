#pragma once

#include <Eigen/Core>
#include <memory>

namespace cbif {

struct KernelConfig {
  double sigma = 10.0;    // Gaussian kernel width, w_ij = exp(-||zi-zj||^2 / sigma)
  int n_eigen = 8;        // computed eigenpairs (including the trivial one)
  int t_steps = 1;        // diffusion steps in the embedding coordinates
  int parsimony_samples = 1000;  // LOOCV subsample bound (0 = all points)
  std::uint64_t parsimony_seed = 17;
};

struct DiffusionMatrices {
  Eigen::MatrixXd W;      // Gaussian kernel
  Eigen::MatrixXd P;      // row-stochastic D^-1 W
  Eigen::MatrixXd P_sym;  // D^1/2 P D^-1/2
  Eigen::VectorXd degrees;
};

DiffusionMatrices build_diffusion_matrices(const Eigen::MatrixXd& points,
                                           const KernelConfig& cfg);

struct EmbeddingResult {
  Eigen::VectorXd eigenvalues;  // descending; eigenvalues[0] ~ 1
  Eigen::MatrixXd eigenvectors; // right eigenvectors of P, unit norm, sign-fixed
  Eigen::VectorXd residuals;    // parsimony r_k; residuals[0]=0 (trivial), [1]=1
  int sample_count = 0;
  int t_steps = 1;
  std::shared_ptr<const DiffusionMatrices> matrices;  // kept for diffusion_distance

  // embedding coordinate k of point i: lambda_k^t * psi_{k,i}
  Eigen::MatrixXd coordinates() const;
};

// Top-n_eigen eigenpairs of P_sym converted to right eigenvectors of P;
// residuals are filled by parsimony_residuals (kernel_scale = 0 -> median).
EmbeddingResult embed(const Eigen::MatrixXd& points, const KernelConfig& cfg);

// D_t(z_i, z_j) from the transition probabilities of P^t weighted by the
// stationary distribution deg/sum(deg).
double diffusion_distance(const EmbeddingResult& result, int i, int j);

// Leave-one-out local linear regression residuals r_k of each eigenvector on
// its predecessors. residuals[1] = 1 by convention (first nontrivial); the
// trivial constant direction gets 0. kernel_scale <= 0 selects the median
// pairwise distance among predecessor coordinates (times 3 for stability of
// the local fits). Local solves are ridge-stabilized (1e-10).
Eigen::VectorXd parsimony_residuals(const Eigen::MatrixXd& eigenvectors, double kernel_scale = 0.0,
                                    int max_samples = 0, std::uint64_t seed = 17);

// Indices (into eigenvector columns) of the retained parsimonious directions:
// the leading nontrivial block with r_k above the cutoff, or exactly mu
// directions with the largest residuals when mu > 0.
std::vector<int> retained_directions(const Eigen::VectorXd& residuals, double cutoff = 0.5,
                                     int mu = 0);

}  // namespace cbif
