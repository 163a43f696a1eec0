#include "cbif/feature_select.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "cbif/rng.hpp"
#include "cbif/util.hpp"

namespace cbif {

namespace {

std::vector<int> column_indices(const std::vector<std::string>& all,
                                const std::vector<std::string>& subset) {
  std::vector<int> idx;
  idx.reserve(subset.size());
  for (const auto& name : subset) {
    auto it = std::find(all.begin(), all.end(), name);
    if (it == all.end()) throw std::invalid_argument("unknown feature name: " + name);
    idx.push_back(static_cast<int>(it - all.begin()));
  }
  return idx;
}

Eigen::MatrixXd take_columns(const Eigen::MatrixXd& X, const std::vector<int>& idx) {
  Eigen::MatrixXd out(X.rows(), idx.size());
  for (std::size_t c = 0; c < idx.size(); ++c) out.col(c) = X.col(idx[c]);
  return out;
}

double median_distance(const Eigen::MatrixXd& D2) {
  std::vector<double> d;
  const int n = static_cast<int>(D2.rows());
  d.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d.push_back(std::sqrt(D2(i, j)));
  if (d.empty()) return 1.0;
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + mid, d.end());
  return std::max(d[mid], 1e-12);
}

Eigen::MatrixXd cross_squared_distances(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  Eigen::MatrixXd D2 = -2.0 * A * B.transpose();
  D2.colwise() += A.rowwise().squaredNorm();
  D2.rowwise() += B.rowwise().squaredNorm().transpose();
  return D2.cwiseMax(0.0);
}

}  // namespace

std::vector<std::vector<std::string>> enumerate_subsets(int max_size) {
  const int n = static_cast<int>(kCandidateFeatures.size());
  std::vector<std::vector<std::string>> out;
  for (int size = 1; size <= max_size; ++size) {
    std::vector<int> pick(size);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      std::vector<std::string> names;
      for (int p : pick) names.emplace_back(kCandidateFeatures[p]);
      out.push_back(std::move(names));
      int i = size - 1;
      while (i >= 0 && pick[i] == n - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

FeatureSubsetScore score_feature_subset(const Eigen::MatrixXd& fit_features,
                                        const Eigen::MatrixXd& eval_features,
                                        const std::vector<std::string>& all_names,
                                        const std::vector<std::string>& subset,
                                        const Eigen::MatrixXd& fit_targets,
                                        const Eigen::MatrixXd& eval_targets,
                                        const KrrConfig& cfg) {
  if (subset.empty()) throw std::invalid_argument("score_feature_subset: empty subset");
  const auto idx = column_indices(all_names, subset);
  const Eigen::MatrixXd Xf = take_columns(fit_features, idx);
  const Eigen::MatrixXd Xe = take_columns(eval_features, idx);

  const Eigen::MatrixXd D2 = cross_squared_distances(Xf, Xf);
  const Eigen::MatrixXd D2e = cross_squared_distances(Xe, Xf);
  const double med = median_distance(D2);
  const int n = static_cast<int>(Xf.rows());

  FeatureSubsetScore best;
  best.subset = subset;
  best.total_loss = std::numeric_limits<double>::infinity();
  for (double wf : cfg.width_factors) {
    const double s2 = 2.0 * (wf * med) * (wf * med);
    Eigen::MatrixXd K = (-D2 / s2).array().exp();
    K.diagonal().array() += cfg.ridge;
    const Eigen::MatrixXd alpha = K.llt().solve(fit_targets);
    const Eigen::MatrixXd pred = (-D2e / s2).array().exp().matrix() * alpha;
    const Eigen::VectorXd losses =
        (eval_targets - pred).array().square().colwise().mean().transpose();
    const double total = std::sqrt(losses.squaredNorm());
    if (total < best.total_loss) {
      best.total_loss = total;
      best.per_eigenvector_losses = losses;
    }
  }
  return best;
}

SelectionResult select_features(const Dataset& dataset, const SelectionConfig& cfg) {
  // group records by epsilon slice
  std::map<double, std::vector<int>> slices;
  for (int i = 0; i < static_cast<int>(dataset.records.size()); ++i) {
    slices[dataset.records[i].epsilon].push_back(i);
  }
  if (slices.empty()) throw std::invalid_argument("select_features: empty dataset");

  const auto subsets = enumerate_subsets(cfg.max_subset_size);
  const std::vector<std::string> names(kCandidateFeatures.begin(), kCandidateFeatures.end());

  SelectionResult result;
  std::vector<double> sum_u(subsets.size(), 0.0), sum_v(subsets.size(), 0.0);

  struct SliceTask {
    int index;
    double eps;
    const std::vector<int>* rows;
  };
  std::vector<SliceTask> tasks;
  int si = 0;
  for (auto& [eps, rows] : slices) tasks.push_back({si++, eps, &rows});

  std::vector<std::vector<double>> totals_u(tasks.size()), totals_v(tasks.size());
  result.retained_u.resize(tasks.size());
  result.retained_v.resize(tasks.size());

  parallel_for(tasks.size(), [&](std::size_t ti) {
    const auto& task = tasks[ti];
    const auto& rows = *task.rows;

    // per-slice subsample for the embedding
    const int n_emb = std::min<int>(cfg.embed_samples, static_cast<int>(rows.size()));
    std::vector<int> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(cfg.seed, "select-subsample", task.index));
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      std::swap(order[i], order[rng.below(i + 1)]);
    }

    std::vector<int> emb_rows(n_emb);
    for (int i = 0; i < n_emb; ++i) emb_rows[i] = rows[order[i]];

    // feature matrix over the embedding subsample
    Eigen::MatrixXd F(n_emb, 6);
    for (int i = 0; i < n_emb; ++i) {
      const auto& r = dataset.records[emb_rows[i]];
      F.row(i) << r.u, r.v, r.u_x, r.v_x, r.u_xx, r.v_xx;
    }

    for (int eq = 0; eq < 2; ++eq) {
      // combined input-output embedding: features plus this equation's
      // time derivative, standardized, median-scaled Gaussian kernel
      Eigen::MatrixXd Z(n_emb, 7);
      Z.leftCols(2) = F.leftCols(2);
      for (int i = 0; i < n_emb; ++i) {
        const auto& r = dataset.records[emb_rows[i]];
        Z(i, 2) = (eq == 0) ? r.u_t : r.v_t;
      }
      Z.rightCols(4) = F.rightCols(4);
      standardize_columns_in_place(Z);

      KernelConfig kc;
      kc.n_eigen = cfg.n_eigen;
      kc.parsimony_seed = derive_seed(cfg.seed, "parsimony", task.index, eq);
      {
        // sigma from the median squared pairwise distance of the slice
        Eigen::MatrixXd D2 = cross_squared_distances(Z, Z);
        const double med = median_distance(D2);
        kc.sigma = std::max(cfg.sigma_multiplier * med * med, 1e-12);
      }
      EmbeddingResult emb = embed(Z, kc);
      const auto keep_all = retained_directions(emb.residuals, cfg.residual_cutoff);
      std::vector<int> keep(keep_all.begin(),
                            keep_all.begin() + std::min<std::size_t>(keep_all.size(),
                                                                     cfg.max_retained));
      (eq == 0 ? result.retained_u : result.retained_v)[ti] = static_cast<int>(keep.size());

      // fit/eval split for the KRR scoring
      const int n_fit = std::min<int>(cfg.score_fit_samples, n_emb / 2);
      const int n_eval = std::min<int>(cfg.score_eval_samples, n_emb - n_fit);
      Eigen::MatrixXd Xf(n_fit, 6), Xe(n_eval, 6);
      Eigen::MatrixXd Yf(n_fit, keep.size()), Ye(n_eval, keep.size());
      for (int i = 0; i < n_fit; ++i) {
        Xf.row(i) = F.row(i);
        for (std::size_t c = 0; c < keep.size(); ++c) Yf(i, c) = emb.eigenvectors(i, keep[c]);
      }
      for (int i = 0; i < n_eval; ++i) {
        Xe.row(i) = F.row(n_fit + i);
        for (std::size_t c = 0; c < keep.size(); ++c)
          Ye(i, c) = emb.eigenvectors(n_fit + i, keep[c]);
      }
      // standardize features with fit-row statistics
      Eigen::RowVectorXd mean = Xf.colwise().mean();
      Eigen::RowVectorXd sd =
          ((Xf.rowwise() - mean).array().square().colwise().mean()).sqrt();
      for (int c = 0; c < sd.size(); ++c)
        if (sd[c] < 1e-12) sd[c] = 1.0;
      Xf = (Xf.rowwise() - mean).array().rowwise() / sd.array();
      Xe = (Xe.rowwise() - mean).array().rowwise() / sd.array();

      auto& acc = (eq == 0) ? totals_u[ti] : totals_v[ti];
      acc.assign(subsets.size(), 0.0);
      for (std::size_t s = 0; s < subsets.size(); ++s) {
        const auto score = score_feature_subset(Xf, Xe, names, subsets[s], Yf, Ye, cfg.krr);
        acc[s] = score.total_loss;
      }
    }
  });

  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      sum_u[s] += totals_u[ti][s];
      sum_v[s] += totals_v[ti][s];
      result.table.push_back({tasks[ti].index, tasks[ti].eps, "u", subsets[s],
                              totals_u[ti][s]});
      result.table.push_back({tasks[ti].index, tasks[ti].eps, "v", subsets[s],
                              totals_v[ti][s]});
    }
  }

  auto pick_best = [&](const std::vector<double>& sums, std::vector<double>& best_by_size) {
    best_by_size.assign(cfg.max_subset_size + 1, std::numeric_limits<double>::infinity());
    std::size_t best = 0;
    double best_loss = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      const int size = static_cast<int>(subsets[s].size());
      best_by_size[size] = std::min(best_by_size[size], sums[s]);
      // strict less keeps the lexicographically first subset on ties
      // (enumeration order is lexicographic within each size)
      if (sums[s] < best_loss) {
        best_loss = sums[s];
        best = s;
      }
    }
    return subsets[best];
  };
  result.subset_u = pick_best(sum_u, result.best_by_size_u);
  result.subset_v = pick_best(sum_v, result.best_by_size_v);
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    result.totals_u.emplace_back(subsets[s], sum_u[s]);
    result.totals_v.emplace_back(subsets[s], sum_v[s]);
  }
  return result;
}

}  // namespace cbif
