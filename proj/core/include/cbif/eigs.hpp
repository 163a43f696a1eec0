#pragma once

#include <Eigen/Core>

namespace cbif {

// Top-k eigenpairs (largest algebraic) of a dense symmetric matrix.
// Uses Lanczos with full reorthogonalization for large N and falls back to a
// dense solve for small problems or when the iteration has not converged.
// Eigenvalues come back in descending order; eigenvectors have unit norm.
struct TopkEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  bool used_dense = false;
};

TopkEigen eigs_symmetric_topk(const Eigen::MatrixXd& A, int k, double tol = 1e-12,
                              int max_iter = 0 /* 0: auto */, int dense_threshold = 600);

}  // namespace cbif
