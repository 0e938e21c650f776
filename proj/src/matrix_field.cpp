#include "gmt/matrix_field.hpp"

#include "gmt/parallel.hpp"

#include <cmath>

namespace gmt {

BallAverage ball_average(const MatrixField& field, const Vector& center, double radius, int per_axis) {
  const int n = field.dim;
  if (center.size() != n) throw ContractError("ball_average: dimension mismatch");
  if (!(radius > 0.0)) throw ContractError("ball_average: radius must be positive");
  if (per_axis < 1) throw ContractError("ball_average: per_axis must be >= 1");

  const double h = 2.0 * radius / per_axis;
  std::vector<Vector> nodes;
  std::vector<int> k(static_cast<std::size_t>(n), 0);
  Vector z(n);
  while (true) {
    for (int i = 0; i < n; ++i) z[i] = center[i] - radius + (k[static_cast<std::size_t>(i)] + 0.5) * h;
    if ((z - center).norm() <= radius) nodes.push_back(z);
    int i = n - 1;
    while (i >= 0 && k[static_cast<std::size_t>(i)] == per_axis - 1) k[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) break;
    ++k[static_cast<std::size_t>(i)];
  }
  if (nodes.empty()) nodes.push_back(center);

  const Matrix base = field(center);
  const auto count = nodes.size();
  const auto entries = base.size();
  Matrix diffs(entries, static_cast<Eigen::Index>(count));
  parallel_for(count, [&](std::size_t j) {
    const Matrix d = field(nodes[j]) - base;
    diffs.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Vector>(d.data(), entries);
  });
  const Vector sum = pairwise_sum_columns(diffs);

  BallAverage out;
  out.nodes = static_cast<int>(count);
  const Matrix mean_diff = Eigen::Map<const Matrix>(sum.data(), base.rows(), base.cols()) / static_cast<double>(count);
  out.mean = base + mean_diff;

  std::vector<double> osc(count);
  const Vector md = Eigen::Map<const Vector>(mean_diff.data(), entries);
  for (std::size_t j = 0; j < count; ++j) osc[j] = (diffs.col(static_cast<Eigen::Index>(j)) - md).norm();
  out.oscillation = pairwise_sum(osc) / static_cast<double>(count);
  return out;
}

}  // namespace gmt
