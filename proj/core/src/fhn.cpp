#include "cbif/fhn.hpp"

#include <cmath>
#include <stdexcept>

namespace cbif {

std::vector<double> SpatialGrid::points() const {
  std::vector<double> xs(m);
  for (int q = 0; q < m; ++q) xs[q] = x(q);
  return xs;
}

SpatialGrid SpatialGrid::cell_centered(double a, double b, int m) {
  if (m < 3 || !(b > a)) throw std::invalid_argument("cell_centered: need m >= 3 and b > a");
  const double h = (b - a) / m;
  return SpatialGrid{a + 0.5 * h, b - 0.5 * h, m};
}

void validate(const SpatialGrid& g) {
  if (g.m < 3) throw std::invalid_argument("SpatialGrid: m must be >= 3");
  if (!(g.dx() > 0.0)) throw std::invalid_argument("SpatialGrid: dx must be positive");
}

std::vector<double> make_epsilon_grid(int n_eps, double lo, double hi) {
  if (n_eps < 2) throw std::domain_error("make_epsilon_grid: n_eps must be >= 2");
  if (!(lo < hi)) throw std::domain_error("make_epsilon_grid: lo must be < hi");
  const double mid = 0.5 * (lo + hi);
  const double rad = 0.5 * (hi - lo);
  std::vector<double> eps(n_eps);
  for (int k = 0; k < n_eps; ++k) {
    eps[k] = mid - rad * std::cos(M_PI * k / (n_eps - 1));
  }
  eps.front() = lo;
  eps.back() = hi;
  return eps;
}

FieldState initial_condition_state(const InitialConditionParams& p, const SpatialGrid& grid,
                                   double v_coupling) {
  validate(grid);
  FieldState s;
  s.u.resize(grid.m);
  s.v.resize(grid.m);
  for (int q = 0; q < grid.m; ++q) {
    s.u[q] = p.w * std::tanh(p.alpha * (grid.x(q) - p.c)) + p.beta;
    s.v[q] = v_coupling * s.u[q];
  }
  s.t = 0.0;
  return s;
}

std::pair<InitialConditionParams, FieldState> sample_initial_condition(Rng& rng,
                                                                       const SpatialGrid& grid) {
  InitialConditionParams p;
  p.w = rng.uniform(0.8, 1.2);
  p.alpha = rng.uniform(0.5, 1.0);
  p.c = rng.uniform(2.0, 18.0);
  p.beta = rng.uniform(-0.4, 0.0);
  return {p, initial_condition_state(p, grid)};
}

void mirrored_second_difference(const Eigen::VectorXd& w, double dx, Eigen::VectorXd& out) {
  const int m = static_cast<int>(w.size());
  out.resize(m);
  const double inv_h2 = 1.0 / (dx * dx);
  for (int j = 1; j + 1 < m; ++j) {
    out[j] = (w[j + 1] - 2.0 * w[j] + w[j - 1]) * inv_h2;
  }
  out[0] = 2.0 * (w[1] - w[0]) * inv_h2;
  out[m - 1] = 2.0 * (w[m - 2] - w[m - 1]) * inv_h2;
}

void fhn_rhs_reference(const FieldState& state, const FhnParams& params, const SpatialGrid& grid,
                       Eigen::VectorXd& u_t, Eigen::VectorXd& v_t) {
  if (state.u.size() != state.v.size() || state.size() != grid.m) {
    throw std::invalid_argument("fhn_rhs_reference: state/grid size mismatch");
  }
  Eigen::VectorXd lap_u, lap_v;
  mirrored_second_difference(state.u, grid.dx(), lap_u);
  mirrored_second_difference(state.v, grid.dx(), lap_v);
  const auto& u = state.u;
  const auto& v = state.v;
  u_t = params.d_u * lap_u + (u.array() - u.array().cube() - v.array()).matrix();
  v_t = params.d_v * lap_v +
        params.epsilon * (u.array() - params.alpha1 * v.array() - params.alpha0).matrix();
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> fhn_rhs_reference(const FieldState& state,
                                                              const FhnParams& params,
                                                              const SpatialGrid& grid) {
  Eigen::VectorXd ut, vt;
  fhn_rhs_reference(state, params, grid, ut, vt);
  return {std::move(ut), std::move(vt)};
}

}  // namespace cbif
