#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <string>

#include "cbif/fhn.hpp"

namespace cbif {

// Second-order central finite-difference discretization of the FHN PDEs on
// the full grid (2M equations including mirrored-ghost boundary rows), with
// analytic Jacobian. Shares the stencil with fhn_rhs_reference.
struct FdSystem {
  SpatialGrid grid;
  FhnParams params;
};

// Residual layout: rows 0..M-1 are the u equations, rows M..2M-1 the v ones.
Eigen::VectorXd fd_residual(const FieldState& state, const FdSystem& sys);

// Nonzeros: tridiagonal diffusion blocks (doubled off-diagonal on boundary
// rows), the u-v coupling diagonals, reaction diagonal terms. The v-diagonal
// carries -epsilon*alpha1, the exact linearization of the v reaction term.
Eigen::SparseMatrix<double> fd_jacobian(const FieldState& state, const FdSystem& sys);

// dF/d(epsilon): zero on u rows, (u - alpha1 v - alpha0) on v rows.
Eigen::VectorXd fd_depsilon(const FieldState& state, const FdSystem& sys);

struct NewtonResult {
  FieldState state;
  bool converged = false;
  double residual_norm = 0.0;  // L-infinity of the final residual
  int iterations = 0;
  std::string failure;  // empty unless the linear solver failed
};

// Full Newton steps with a halving line search when the residual increases.
NewtonResult newton_solve(const FieldState& initial_guess, const FdSystem& sys,
                          double tol = 1e-10, int max_iter = 50);

// Helpers shared with the continuation driver.
Eigen::VectorXd pack_state(const FieldState& s);
FieldState unpack_state(const Eigen::VectorXd& y, double t = 0.0);

}  // namespace cbif
