#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace gmt {

// Process-wide worker count used by parallel_for. Defaults to 1.
void set_thread_count(int threads);
int thread_count();

// Runs body(i) for i in [0, count). Work is split into contiguous static
// chunks; body must only write to per-index storage. Results are therefore
// identical for any thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

// Pairwise (tree) summation with a fixed split order. The summation tree
// depends only on the input length, never on threading.
double pairwise_sum(std::span<const double> values);

// Column-wise pairwise sum of a dim x count matrix.
Eigen::VectorXd pairwise_sum_columns(const Eigen::MatrixXd& columns);

}  // namespace gmt
