#include "cbif/fd.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <vector>

namespace cbif {

Eigen::VectorXd pack_state(const FieldState& s) {
  Eigen::VectorXd y(2 * s.size());
  y.head(s.size()) = s.u;
  y.tail(s.size()) = s.v;
  return y;
}

FieldState unpack_state(const Eigen::VectorXd& y, double t) {
  FieldState s;
  const int m = static_cast<int>(y.size()) / 2;
  s.u = y.head(m);
  s.v = y.tail(m);
  s.t = t;
  return s;
}

Eigen::VectorXd fd_residual(const FieldState& state, const FdSystem& sys) {
  if (state.size() != sys.grid.m || state.u.size() != state.v.size()) {
    throw std::invalid_argument("fd_residual: state/grid size mismatch");
  }
  Eigen::VectorXd ut, vt;
  fhn_rhs_reference(state, sys.params, sys.grid, ut, vt);
  Eigen::VectorXd r(2 * sys.grid.m);
  r.head(sys.grid.m) = ut;
  r.tail(sys.grid.m) = vt;
  return r;
}

Eigen::SparseMatrix<double> fd_jacobian(const FieldState& state, const FdSystem& sys) {
  const int m = sys.grid.m;
  if (state.size() != m) throw std::invalid_argument("fd_jacobian: state/grid size mismatch");
  const double h2 = sys.grid.dx() * sys.grid.dx();
  const double cu = sys.params.d_u / h2;
  const double cv = sys.params.d_v / h2;
  const double eps = sys.params.epsilon;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(8 * m);
  for (int j = 0; j < m; ++j) {
    // u row
    trip.emplace_back(j, j, -2.0 * cu + 1.0 - 3.0 * state.u[j] * state.u[j]);
    if (j > 0) trip.emplace_back(j, j - 1, (j == m - 1) ? 2.0 * cu : cu);
    if (j + 1 < m) trip.emplace_back(j, j + 1, (j == 0) ? 2.0 * cu : cu);
    trip.emplace_back(j, m + j, -1.0);
    // v row
    const int r = m + j;
    trip.emplace_back(r, r, -2.0 * cv - eps * sys.params.alpha1);
    if (j > 0) trip.emplace_back(r, r - 1, (j == m - 1) ? 2.0 * cv : cv);
    if (j + 1 < m) trip.emplace_back(r, r + 1, (j == 0) ? 2.0 * cv : cv);
    trip.emplace_back(r, j, eps);
  }
  Eigen::SparseMatrix<double> J(2 * m, 2 * m);
  J.setFromTriplets(trip.begin(), trip.end());
  J.makeCompressed();
  return J;
}

Eigen::VectorXd fd_depsilon(const FieldState& state, const FdSystem& sys) {
  const int m = sys.grid.m;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(2 * m);
  d.tail(m) = state.u.array() - sys.params.alpha1 * state.v.array() - sys.params.alpha0;
  return d;
}

NewtonResult newton_solve(const FieldState& initial_guess, const FdSystem& sys, double tol,
                          int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("newton_solve: tol must be positive");
  NewtonResult res;
  res.state = initial_guess;

  Eigen::VectorXd y = pack_state(initial_guess);
  Eigen::VectorXd r = fd_residual(res.state, sys);
  double rnorm = r.lpNorm<Eigen::Infinity>();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  for (int it = 0; it < max_iter; ++it) {
    if (rnorm <= tol) {
      res.converged = true;
      break;
    }
    lu.compute(fd_jacobian(res.state, sys));
    if (lu.info() != Eigen::Success) {
      res.failure = "singular Jacobian factorization";
      break;
    }
    const Eigen::VectorXd step = lu.solve(-r);
    // full step, then halving fallback if the residual grows
    double scale = 1.0;
    Eigen::VectorXd y_new;
    Eigen::VectorXd r_new;
    double rnorm_new = rnorm;
    for (int half = 0; half < 8; ++half) {
      y_new = y + scale * step;
      r_new = fd_residual(unpack_state(y_new), sys);
      rnorm_new = r_new.lpNorm<Eigen::Infinity>();
      if (rnorm_new < rnorm || !std::isfinite(rnorm)) break;
      scale *= 0.5;
    }
    y = y_new;
    r = r_new;
    rnorm = rnorm_new;
    res.state = unpack_state(y);
    res.iterations = it + 1;
  }
  res.converged = res.converged || rnorm <= tol;
  res.residual_norm = rnorm;
  return res;
}

}  // namespace cbif
