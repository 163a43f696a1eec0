#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "cbif/diffusion_maps.hpp"
#include "cbif/features.hpp"

namespace cbif {

struct KrrConfig {
  double ridge = 1e-8;
  // candidate width factors applied to the median pairwise distance; the
  // factor with the lowest held-out loss wins (deterministic GP stand-in)
  std::vector<double> width_factors = {1.0, 0.5, 0.25};
};

struct FeatureSubsetScore {
  std::vector<std::string> subset;
  Eigen::VectorXd per_eigenvector_losses;
  double total_loss = 0.0;
};

// RBF-kernel ridge regression from the subset columns to each target
// eigenvector; fit rows and evaluation rows are disjoint, losses are held-out
// MSE per eigenvector, total = sqrt(sum of squares).
FeatureSubsetScore score_feature_subset(const Eigen::MatrixXd& fit_features,
                                        const Eigen::MatrixXd& eval_features,
                                        const std::vector<std::string>& all_names,
                                        const std::vector<std::string>& subset,
                                        const Eigen::MatrixXd& fit_targets,
                                        const Eigen::MatrixXd& eval_targets,
                                        const KrrConfig& cfg = {});

struct SelectionConfig {
  int max_subset_size = 4;
  int embed_samples = 3000;      // per-slice subsample for the embedding
  int score_fit_samples = 1000;  // KRR fit rows
  int score_eval_samples = 1000; // held-out rows for the loss
  double sigma_multiplier = 1.0; // kernel width = multiplier * median squared distance
  int n_eigen = 8;
  double residual_cutoff = 0.5;
  int max_retained = 3;
  std::uint64_t seed = 0;
  KrrConfig krr;
};

struct SliceScoreRow {
  int slice_index = 0;
  double epsilon = 0.0;
  std::string equation;  // "u" or "v"
  std::vector<std::string> subset;
  double total_loss = 0.0;
};

struct SelectionResult {
  std::vector<std::string> subset_u;
  std::vector<std::string> subset_v;
  // summed losses across slices, per subset, per equation
  std::vector<std::pair<std::vector<std::string>, double>> totals_u;
  std::vector<std::pair<std::vector<std::string>, double>> totals_v;
  std::vector<SliceScoreRow> table;
  // per-slice retained direction counts, for reporting
  std::vector<int> retained_u, retained_v;
  // best total loss per subset size, per equation (diagnostics / ratio checks)
  std::vector<double> best_by_size_u, best_by_size_v;
};

// Runs the per-slice output-informed embeddings and subset scoring, summing
// total losses across slices; the argmin subset per equation wins, ties break
// lexicographically. epsilon is never a candidate feature.
SelectionResult select_features(const Dataset& dataset, const SelectionConfig& cfg);

// All subsets of kCandidateFeatures up to max_size, in enumeration order.
std::vector<std::vector<std::string>> enumerate_subsets(int max_size);

}  // namespace cbif
