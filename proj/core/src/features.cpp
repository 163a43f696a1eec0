#include "cbif/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cbif/rng.hpp"

namespace cbif {

double feature_value(const FeatureRecord& r, const std::string& name) {
  if (name == "u") return r.u;
  if (name == "v") return r.v;
  if (name == "u_x") return r.u_x;
  if (name == "v_x") return r.v_x;
  if (name == "u_xx") return r.u_xx;
  if (name == "v_xx") return r.v_xx;
  if (name == "epsilon") return r.epsilon;
  if (name == "u_t") return r.u_t;
  if (name == "v_t") return r.v_t;
  throw std::invalid_argument("unknown feature name: " + name);
}

namespace {

void mirrored_first_difference(const Eigen::VectorXd& w, double dx, Eigen::VectorXd& out) {
  const int m = static_cast<int>(w.size());
  out.resize(m);
  for (int j = 1; j + 1 < m; ++j) out[j] = (w[j + 1] - w[j - 1]) / (2.0 * dx);
  out[0] = 0.0;      // mirrored ghost: w[-1] = w[1]
  out[m - 1] = 0.0;  // w[m] = w[m-2]
}

}  // namespace

std::vector<FeatureRecord> compute_derivatives(const Trajectory& traj, const SpatialGrid& grid,
                                               double trim_cutoff) {
  std::vector<const FieldState*> kept;
  for (const auto& s : traj.states) {
    if (s.t > trim_cutoff) kept.push_back(&s);
  }
  if (kept.size() < 3) {
    throw std::invalid_argument("compute_derivatives: fewer than 3 frames after trimming");
  }
  if (grid.m < 3 || kept.front()->size() != grid.m) {
    throw std::invalid_argument("compute_derivatives: grid mismatch");
  }
  const int T = static_cast<int>(kept.size());
  const int m = grid.m;
  const double dt = kept[1]->t - kept[0]->t;

  std::vector<FeatureRecord> out;
  out.reserve(static_cast<std::size_t>(T) * m);

  Eigen::VectorXd ux, vx, uxx, vxx;
  for (int s = 0; s < T; ++s) {
    const FieldState& f = *kept[s];
    mirrored_first_difference(f.u, grid.dx(), ux);
    mirrored_first_difference(f.v, grid.dx(), vx);
    mirrored_second_difference(f.u, grid.dx(), uxx);
    mirrored_second_difference(f.v, grid.dx(), vxx);

    const FieldState* prev = kept[std::max(0, s - 1)];
    const FieldState* next = kept[std::min(T - 1, s + 1)];
    for (int q = 0; q < m; ++q) {
      FeatureRecord r;
      r.u = f.u[q];
      r.v = f.v[q];
      r.u_x = ux[q];
      r.v_x = vx[q];
      r.u_xx = uxx[q];
      r.v_xx = vxx[q];
      if (s == 0) {
        r.u_t = (-3.0 * f.u[q] + 4.0 * kept[1]->u[q] - kept[2]->u[q]) / (2.0 * dt);
        r.v_t = (-3.0 * f.v[q] + 4.0 * kept[1]->v[q] - kept[2]->v[q]) / (2.0 * dt);
      } else if (s == T - 1) {
        r.u_t = (3.0 * f.u[q] - 4.0 * kept[T - 2]->u[q] + kept[T - 3]->u[q]) / (2.0 * dt);
        r.v_t = (3.0 * f.v[q] - 4.0 * kept[T - 2]->v[q] + kept[T - 3]->v[q]) / (2.0 * dt);
      } else {
        r.u_t = (next->u[q] - prev->u[q]) / (2.0 * dt);
        r.v_t = (next->v[q] - prev->v[q]) / (2.0 * dt);
      }
      r.epsilon = traj.epsilon;
      r.x_index = q;
      r.t_index = s;
      if (!std::isfinite(r.u) || !std::isfinite(r.v) || !std::isfinite(r.u_t) ||
          !std::isfinite(r.v_t)) {
        throw std::runtime_error("compute_derivatives: non-finite value in trajectory");
      }
      out.push_back(r);
    }
  }
  return out;
}

Dataset assemble_dataset(const std::vector<Trajectory>& trajs, double test_fraction,
                         std::uint64_t seed, double trim_cutoff) {
  if (trajs.empty()) throw std::invalid_argument("assemble_dataset: no trajectories");
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("assemble_dataset: test_fraction must be in (0,1)");
  }

  const int n = static_cast<int>(trajs.size());
  // deterministic by-trajectory split: shuffle indices with the seed, first
  // ceil(fraction*n) become test (at least one of each when n >= 2)
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, "dataset-split"));
  for (int i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);
  }
  int n_test = static_cast<int>(std::llround(test_fraction * n));
  n_test = std::clamp(n_test, n >= 2 ? 1 : 0, n - 1);

  Dataset ds;
  ds.trajectory_is_test.assign(n, 0);
  for (int k = 0; k < n_test; ++k) ds.trajectory_is_test[order[k]] = 1;

  ds.provenance.seed = seed;
  ds.provenance.trim_cutoff = trim_cutoff;
  ds.provenance.grid_points = trajs.front().grid.m;

  for (int ti = 0; ti < n; ++ti) {
    auto recs = compute_derivatives(trajs[ti], trajs[ti].grid, trim_cutoff);
    if (ti == 0 && !recs.empty()) {
      ds.provenance.frames_per_trajectory = recs.back().t_index + 1;
    }
    for (auto& r : recs) {
      ds.records.push_back(r);
      ds.is_test.push_back(ds.trajectory_is_test[ti]);
      ds.trajectory_of_record.push_back(ti);
    }
  }
  return ds;
}

}  // namespace cbif
