#pragma once

#include <Eigen/Core>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace cbif {

// Static work pool over [0, n); rethrows the first worker exception.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         unsigned max_threads = 0) {
  if (n == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (max_threads > 0 && max_threads < hw) hw = max_threads;
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

struct ColumnStats {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd std;
};

inline ColumnStats column_stats(const Eigen::MatrixXd& X) {
  ColumnStats s;
  s.mean = X.colwise().mean();
  s.std = ((X.rowwise() - s.mean).array().square().colwise().mean()).sqrt();
  for (int c = 0; c < s.std.size(); ++c) {
    if (s.std[c] < 1e-14) s.std[c] = 1.0;
  }
  return s;
}

inline void apply_standardization(Eigen::MatrixXd& X, const ColumnStats& s) {
  X = (X.rowwise() - s.mean).array().rowwise() / s.std.array();
}

inline ColumnStats standardize_columns_in_place(Eigen::MatrixXd& X) {
  ColumnStats s = column_stats(X);
  apply_standardization(X, s);
  return s;
}

}  // namespace cbif
