#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cbif/lbm.hpp"

namespace cbif {

// One supervised sample at a grid point and retained frame.
struct FeatureRecord {
  double u = 0, v = 0;
  double u_x = 0, v_x = 0;
  double u_xx = 0, v_xx = 0;
  double u_t = 0, v_t = 0;  // regression targets
  double epsilon = 0;
  int x_index = 0;
  int t_index = 0;  // index into the retained frame sequence
};

inline constexpr std::array<const char*, 6> kCandidateFeatures = {"u",    "v",    "u_x",
                                                                  "v_x",  "u_xx", "v_xx"};

double feature_value(const FeatureRecord& r, const std::string& name);

// Spatial derivatives by 3-point central differences with mirrored ghosts
// (u_x = 0 at the walls); time derivatives by central differences over the
// recording interval, one-sided second order at the first/last retained
// frames. Frames with t <= trim_cutoff are dropped.
std::vector<FeatureRecord> compute_derivatives(const Trajectory& traj, const SpatialGrid& grid,
                                               double trim_cutoff = 2.0);

struct DatasetProvenance {
  std::vector<double> epsilon_grid;
  int n_initial_conditions = 0;
  std::uint64_t seed = 0;
  double trim_cutoff = 2.0;
  int grid_points = 0;
  int frames_per_trajectory = 0;
};

struct Dataset {
  std::vector<FeatureRecord> records;
  std::vector<std::uint8_t> is_test;       // per record
  std::vector<int> trajectory_of_record;   // per record
  std::vector<std::uint8_t> trajectory_is_test;
  DatasetProvenance provenance;

  std::size_t size() const { return records.size(); }
};

// Whole trajectories go to train or test (no leakage across adjacent time
// samples); the assignment is a deterministic function of seed.
Dataset assemble_dataset(const std::vector<Trajectory>& trajs, double test_fraction,
                         std::uint64_t seed, double trim_cutoff = 2.0);

}  // namespace cbif
