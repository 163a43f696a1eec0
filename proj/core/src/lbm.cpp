#include "cbif/lbm.hpp"

#include <cmath>

namespace cbif {

double relaxation_coefficient(double d, double dt, double dx) {
  if (d < 0.0 || !(dt > 0.0) || !(dx > 0.0)) {
    throw std::domain_error("relaxation_coefficient: requires d >= 0, dt > 0, dx > 0");
  }
  return 2.0 / (1.0 + 6.0 * d * dt / (dx * dx));
}

LbmConfig make_lbm_config(const SpatialGrid& lattice_grid, const FhnParams& params, double dt,
                          double record_every, double t_end) {
  validate(lattice_grid);
  LbmConfig cfg;
  cfg.dt = dt;
  cfg.dx = lattice_grid.dx();
  cfg.record_every = record_every;
  cfg.t_end = t_end;
  const double wu = relaxation_coefficient(params.d_u, dt, cfg.dx);
  const double wv = relaxation_coefficient(params.d_v, dt, cfg.dx);
  if (!(wu > 0.0 && wu < 2.0 && wv > 0.0 && wv < 2.0)) {
    throw std::domain_error("make_lbm_config: relaxation coefficients must lie in (0,2)");
  }
  const double steps = record_every / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
    throw std::domain_error("make_lbm_config: record_every must be an integer multiple of dt");
  }
  return cfg;
}

LatticeState initialize_lattice(const FieldState& ic, const LbmConfig& cfg) {
  LatticeState s;
  const int m = ic.size();
  s.f_u.resize(3, m);
  s.f_v.resize(3, m);
  const double w[3] = {cfg.omega_move, cfg.omega_rest, cfg.omega_move};
  for (int i = 0; i < 3; ++i) {
    s.f_u.row(i) = w[i] * ic.u.transpose();
    s.f_v.row(i) = w[i] * ic.v.transpose();
  }
  s.t = ic.t;
  return s;
}

namespace {

void collide_react_stream(Eigen::Matrix<double, 3, Eigen::Dynamic>& f, const Eigen::VectorXd& mom,
                          const Eigen::VectorXd& react, double omega, double dt,
                          const double weights[3]) {
  const int m = static_cast<int>(f.cols());
  // collision toward equilibrium w_i * moment plus explicit reaction source
  for (int i = 0; i < 3; ++i) {
    f.row(i) += omega * (weights[i] * mom.transpose() - f.row(i)) +
                dt * weights[i] * react.transpose();
  }
  // stream: row 2 moves right, row 0 moves left; bounce-back at the walls
  const double out_right = f(2, m - 1);
  const double out_left = f(0, 0);
  for (int j = m - 1; j > 0; --j) f(2, j) = f(2, j - 1);
  for (int j = 0; j + 1 < m; ++j) f(0, j) = f(0, j + 1);
  f(0, m - 1) = out_right;
  f(2, 0) = out_left;
}

}  // namespace

LatticeState lbm_step(const LatticeState& state, const FhnParams& params, const LbmConfig& cfg) {
  LatticeState next = state;
  const int m = static_cast<int>(state.f_u.cols());
  const double weights[3] = {cfg.omega_move, cfg.omega_rest, cfg.omega_move};
  const double omega_u = relaxation_coefficient(params.d_u, cfg.dt, cfg.dx);
  const double omega_v = relaxation_coefficient(params.d_v, cfg.dt, cfg.dx);

  const Eigen::VectorXd u = state.moment_u();
  const Eigen::VectorXd v = state.moment_v();
  Eigen::VectorXd react_u = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd react_v = Eigen::VectorXd::Zero(m);
  if (cfg.reactions_enabled) {
    react_u = u.array() - u.array().cube() - v.array();
    react_v = params.epsilon * (u.array() - params.alpha1 * v.array() - params.alpha0);
  }

  collide_react_stream(next.f_u, u, react_u, omega_u, cfg.dt, weights);
  collide_react_stream(next.f_v, v, react_v, omega_v, cfg.dt, weights);
  next.t = state.t + cfg.dt;

  const double mag = std::max(next.f_u.cwiseAbs().maxCoeff(), next.f_v.cwiseAbs().maxCoeff());
  if (!(mag < cfg.overflow_guard)) {
    throw SimulationDiverged(next.t, mag);
  }
  return next;
}

Trajectory run_lbm(const FieldState& ic, const FhnParams& params, const SpatialGrid& grid,
                   const LbmConfig& cfg) {
  validate(grid);
  if (ic.size() != grid.m) throw std::invalid_argument("run_lbm: ic/grid size mismatch");
  if (cfg.t_end > 0.0 && cfg.t_end < cfg.record_every) {
    throw std::invalid_argument("run_lbm: t_end must be >= record_every (or 0)");
  }

  Trajectory traj;
  traj.grid = grid;
  traj.epsilon = params.epsilon;
  traj.states.push_back(ic);

  const long total_steps = std::lround(cfg.t_end / cfg.dt);
  const long rec_steps = std::lround(cfg.record_every / cfg.dt);

  LatticeState s = initialize_lattice(ic, cfg);
  for (long k = 1; k <= total_steps; ++k) {
    s = lbm_step(s, params, cfg);
    if (k % rec_steps == 0) {
      FieldState rec;
      rec.u = s.moment_u();
      rec.v = s.moment_v();
      rec.t = (k / rec_steps) * cfg.record_every;
      traj.states.push_back(std::move(rec));
    }
  }
  return traj;
}

}  // namespace cbif
