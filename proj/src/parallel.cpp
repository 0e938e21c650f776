#include "gmt/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace gmt {

namespace {

std::atomic<int> g_threads{1};

// Nested parallel_for calls run inline on the calling worker.
thread_local bool t_in_worker = false;

constexpr std::size_t kLeafBlock = 8;

double pairwise_sum_range(const double* data, std::size_t n) {
  if (n <= kLeafBlock) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_range(data, half) + pairwise_sum_range(data + half, n - half);
}

void pairwise_sum_columns_range(const Eigen::MatrixXd& m, Eigen::Index begin, Eigen::Index n,
                                Eigen::Ref<Eigen::VectorXd> out) {
  if (n <= static_cast<Eigen::Index>(kLeafBlock)) {
    out.setZero();
    for (Eigen::Index i = 0; i < n; ++i) out += m.col(begin + i);
    return;
  }
  const Eigen::Index half = n / 2;
  Eigen::VectorXd right(m.rows());
  pairwise_sum_columns_range(m, begin, half, out);
  pairwise_sum_columns_range(m, begin + half, n - half, right);
  out += right;
}

}  // namespace

void set_thread_count(int threads) { g_threads.store(std::max(1, threads)); }

int thread_count() { return g_threads.load(); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), count);
  if (workers <= 1 || t_in_worker) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      t_in_worker = true;
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_range(values.data(), values.size());
}

Eigen::VectorXd pairwise_sum_columns(const Eigen::MatrixXd& columns) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(columns.rows());
  if (columns.cols() == 0) return out;
  pairwise_sum_columns_range(columns, 0, columns.cols(), out);
  return out;
}

}  // namespace gmt
