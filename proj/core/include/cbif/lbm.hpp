#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <vector>

#include "cbif/fhn.hpp"

namespace cbif {

// D1Q3 BGK lattice Boltzmann scheme with explicit reaction terms. The lattice
// is cell-centered: m cells over [domain_x0, domain_x_end], bounce-back walls
// exactly on the domain boundary.
struct LbmConfig {
  double dt = 0.01;
  double dx = 0.5;
  double record_every = 1.0;
  double t_end = 450.0;
  double omega_rest = 4.0 / 6.0;
  double omega_move = 1.0 / 6.0;
  double overflow_guard = 1e6;
  bool reactions_enabled = true;  // test hook: pure-diffusion mode when false
};

// cfg.dx is taken from the grid spacing; validates relaxation coefficients.
LbmConfig make_lbm_config(const SpatialGrid& lattice_grid, const FhnParams& params,
                          double dt = 0.01, double record_every = 1.0, double t_end = 450.0);

struct LatticeState {
  // row 0: direction -1, row 1: rest, row 2: direction +1
  Eigen::Matrix<double, 3, Eigen::Dynamic> f_u;
  Eigen::Matrix<double, 3, Eigen::Dynamic> f_v;
  double t = 0.0;

  Eigen::VectorXd moment_u() const { return f_u.colwise().sum().transpose(); }
  Eigen::VectorXd moment_v() const { return f_v.colwise().sum().transpose(); }
};

struct Trajectory {
  std::vector<FieldState> states;
  double epsilon = 0.0;
  InitialConditionParams ic;
  SpatialGrid grid;
};

class SimulationDiverged : public std::runtime_error {
 public:
  SimulationDiverged(double t, double magnitude)
      : std::runtime_error("lattice Boltzmann simulation diverged at t = " + std::to_string(t) +
                           " (|f| = " + std::to_string(magnitude) + ")"),
        t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

// 2 / (1 + 6 d dt / dx^2); in (0,2) for d > 0.
double relaxation_coefficient(double d, double dt, double dx);

// f_i = omega_i * field (local equilibrium of a stationary medium)
LatticeState initialize_lattice(const FieldState& ic, const LbmConfig& cfg);

// One collide-react-stream cycle with bounce-back walls.
LatticeState lbm_step(const LatticeState& state, const FhnParams& params, const LbmConfig& cfg);

// Iterates lbm_step, recording the zeroth moments every record_every time
// units; first recorded state is the initial condition at t = 0.
Trajectory run_lbm(const FieldState& ic, const FhnParams& params, const SpatialGrid& grid,
                   const LbmConfig& cfg);

}  // namespace cbif
