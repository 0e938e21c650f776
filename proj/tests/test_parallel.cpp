#include "gmt/parallel.hpp"

#include <doctest.h>

#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

using namespace gmt;

TEST_CASE("parallel_for writes every slot once for any thread count") {
  for (int threads : {1, 2, 3, 8}) {
    set_thread_count(threads);
    std::vector<int> hits(1001, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::accumulate(hits.begin(), hits.end(), 0) == 1001);
    CHECK(*std::min_element(hits.begin(), hits.end()) == 1);
  }
  set_thread_count(1);
}

TEST_CASE("pairwise_sum does not depend on threading") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> values(12345);
  for (auto& v : values) v = u(rng) * 1e6;

  set_thread_count(1);
  std::vector<double> a(values.size());
  parallel_for(values.size(), [&](std::size_t i) { a[i] = values[i] * values[i]; });
  const double one = pairwise_sum(a);
  set_thread_count(4);
  std::vector<double> b(values.size());
  parallel_for(values.size(), [&](std::size_t i) { b[i] = values[i] * values[i]; });
  const double four = pairwise_sum(b);
  set_thread_count(1);
  CHECK(one == four);

  const std::vector<double> small = {1.0, 2.0, 3.0};
  CHECK(pairwise_sum(small) == 6.0);
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("pairwise_sum_columns matches per-row pairwise sums") {
  Eigen::MatrixXd m(3, 100);
  for (Eigen::Index j = 0; j < 100; ++j) m.col(j) << j * 0.1, -j * 0.3, 1.0 / (j + 1);
  const Eigen::VectorXd s = pairwise_sum_columns(m);
  for (Eigen::Index i = 0; i < 3; ++i) {
    std::vector<double> row(m.row(i).data(), m.row(i).data() + 0);
    std::vector<double> r(100);
    for (Eigen::Index j = 0; j < 100; ++j) r[static_cast<std::size_t>(j)] = m(i, j);
    CHECK(s[i] == pairwise_sum(r));
  }
}

TEST_CASE("parallel_for propagates exceptions and nests") {
  set_thread_count(3);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  std::vector<int> out(6 * 5, 0);
  parallel_for(6, [&](std::size_t i) { parallel_for(5, [&](std::size_t j) { out[i * 5 + j] = 1; }); });
  CHECK(std::accumulate(out.begin(), out.end(), 0) == 30);
  set_thread_count(1);
}
