#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "cbif/rng.hpp"

namespace cbif {

// FitzHugh-Nagumo coupled PDEs on a 1D interval:
//   u_t = d_u u_xx + u - u^3 - v
//   v_t = d_v v_xx + epsilon (u - alpha1 v - alpha0)
// with homogeneous Neumann boundaries. epsilon is the bifurcation parameter.
struct FhnParams {
  double alpha0 = -0.03;
  double alpha1 = 2.0;
  double d_u = 1.0;
  double d_v = 4.0;
  double epsilon = 0.5;

  FhnParams with_epsilon(double eps) const {
    FhnParams p = *this;
    p.epsilon = eps;
    return p;
  }
};

// Uniform grid of m nodes, x_q = x0 + q*dx (0-based), x_{m-1} = x_end.
struct SpatialGrid {
  double x0 = 0.0;
  double x_end = 20.0;
  int m = 200;

  double dx() const { return (x_end - x0) / (m - 1); }
  double x(int q) const { return x0 + q * dx(); }
  std::vector<double> points() const;

  // m cell midpoints of [a, b]; used as the lattice grid so that bounce-back
  // walls sit exactly on a and b.
  static SpatialGrid cell_centered(double a, double b, int m);
};

void validate(const SpatialGrid& g);

struct FieldState {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
  double t = 0.0;

  int size() const { return static_cast<int>(u.size()); }
};

struct InitialConditionParams {
  double w = 1.0;
  double alpha = 1.0;
  double c = 10.0;
  double beta = 0.0;
};

// v0 = kVCoupling * u0
inline constexpr double kVCoupling = 0.12;

// Chebyshev-Gauss-Lobatto nodes mapped to [lo, hi], ascending, endpoints included.
std::vector<double> make_epsilon_grid(int n_eps, double lo, double hi);

// u0(x) = w tanh(alpha (x - c)) + beta, v0 = 0.12 u0
FieldState initial_condition_state(const InitialConditionParams& p, const SpatialGrid& grid,
                                   double v_coupling = kVCoupling);

// Draws w ~ U(0.8,1.2), alpha ~ U(0.5,1), c ~ U(2,18), beta ~ U(-0.4,0).
std::pair<InitialConditionParams, FieldState> sample_initial_condition(Rng& rng,
                                                                       const SpatialGrid& grid);

// Closed-form discrete RHS with 3-point central second differences and
// mirrored ghost nodes at the walls.
void fhn_rhs_reference(const FieldState& state, const FhnParams& params, const SpatialGrid& grid,
                       Eigen::VectorXd& u_t, Eigen::VectorXd& v_t);

std::pair<Eigen::VectorXd, Eigen::VectorXd> fhn_rhs_reference(const FieldState& state,
                                                              const FhnParams& params,
                                                              const SpatialGrid& grid);

// Second difference with mirrored ghosts, divided by dx^2.
void mirrored_second_difference(const Eigen::VectorXd& w, double dx, Eigen::VectorXd& out);

}  // namespace cbif
