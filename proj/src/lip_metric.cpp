#include "gmt/lip_metric.hpp"

#include "gmt/lp.hpp"
#include "gmt/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gmt {

namespace {

void check_inputs(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double r) {
  if (mu.dim() != nu.dim()) throw ContractError("F_r: measures live in different dimensions");
  if (!(r > 0.0) || !std::isfinite(r)) throw ContractError("F_r: radius must be positive");
}

}  // namespace

LipschitzLP build_lipschitz_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double r) {
  check_inputs(mu, nu, r);
  const int n = mu.dim();

  // Atoms strictly inside the ball; those on the sphere have cap 0 and force f = 0.
  std::vector<Vector> pts;
  std::vector<double> mass;
  auto collect = [&](const DiscreteMeasure& m, double sign) {
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      if (m.weight(i) <= 0.0) continue;
      const double norm = m.point(i).norm();
      if (!(norm < r)) continue;
      pts.emplace_back(m.point(i));
      mass.push_back(sign * m.weight(i));
    }
  };
  collect(mu, 1.0);
  collect(nu, -1.0);

  // Merge coincident atoms; the lexicographic order also makes the LP independent
  // of the input order.
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    for (int k = 0; k < n; ++k) {
      if (pts[a][k] != pts[b][k]) return pts[a][k] < pts[b][k];
    }
    return mass[a] < mass[b];
  });
  std::vector<Vector> merged_pts;
  std::vector<double> merged_mass;
  for (std::size_t k = 0; k < order.size();) {
    const Vector& p = pts[order[k]];
    double total = 0.0;
    std::size_t e = k;
    while (e < order.size() && pts[order[e]] == p) total += mass[order[e++]];
    if (total != 0.0) {
      merged_pts.push_back(p);
      merged_mass.push_back(total);
    }
    k = e;
  }

  LipschitzLP lp;
  lp.radius = r;
  const auto count = static_cast<Eigen::Index>(merged_pts.size());
  lp.sites.resize(n, count);
  lp.signed_mass.resize(count);
  lp.caps.resize(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    lp.sites.col(i) = merged_pts[static_cast<std::size_t>(i)];
    lp.signed_mass[i] = merged_mass[static_cast<std::size_t>(i)];
    lp.caps[i] = std::max(0.0, r - merged_pts[static_cast<std::size_t>(i)].norm());
  }
  return lp;
}

FBallResult solve_f_ball(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double r) {
  FBallResult result;
  result.lp = build_lipschitz_lp(mu, nu, r);
  const LipschitzLP& lp = result.lp;
  const auto count = lp.sites.cols();
  if (count > kMaxLpSites) {
    throw LpSizeError("F_r: " + std::to_string(count) + " sites exceed the LP size cap of " +
                      std::to_string(kMaxLpSites));
  }
  result.potentials = Vector::Zero(count);
  if (count == 0) return result;

  std::vector<Eigen::Index> sources;
  std::vector<Eigen::Index> sinks;
  for (Eigen::Index i = 0; i < count; ++i) (lp.signed_mass[i] > 0.0 ? sources : sinks).push_back(i);

  // Transport dual: rows = sources then sinks; columns = source->boundary,
  // boundary->sink, source->sink.
  LpProblem problem;
  problem.rows = static_cast<int>(count);
  problem.rhs.resize(static_cast<std::size_t>(count));
  std::vector<Eigen::Index> row_site;
  row_site.reserve(static_cast<std::size_t>(count));
  for (auto s : sources) row_site.push_back(s);
  for (auto s : sinks) row_site.push_back(s);
  for (std::size_t row = 0; row < row_site.size(); ++row) problem.rhs[row] = std::abs(lp.signed_mass[row_site[row]]);

  problem.columns.reserve(row_site.size() + sources.size() * sinks.size());
  for (std::size_t row = 0; row < row_site.size(); ++row) {
    LpColumn c;
    c.entries.emplace_back(static_cast<int>(row), 1.0);
    c.cost = lp.caps[row_site[row]];
    problem.columns.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < sources.size(); ++i) {
    for (std::size_t j = 0; j < sinks.size(); ++j) {
      LpColumn c;
      c.entries.emplace_back(static_cast<int>(i), 1.0);
      c.entries.emplace_back(static_cast<int>(sources.size() + j), 1.0);
      c.cost = (lp.sites.col(sources[i]) - lp.sites.col(sinks[j])).norm();
      problem.columns.push_back(std::move(c));
    }
  }

  const LpSolution sol = solve_lp(problem);
  if (sol.status != LpStatus::optimal) {
    throw Error(std::string("F_r: simplex terminated with status ") + to_string(sol.status));
  }
  result.value = sol.objective;
  result.iterations = sol.iterations;

  // Dual values are potentials on sources and negated potentials on sinks.
  // A double c-transform turns them into a potential satisfying every primal
  // constraint (including source-source and sink-sink pairs) without lowering
  // the objective.
  Vector f(count);
  for (std::size_t row = 0; row < row_site.size(); ++row) {
    const double y = sol.duals[row];
    f[row_site[row]] = row < sources.size() ? y : -y;
  }
  for (auto i : sources) {
    double v = lp.caps[i];
    for (auto j : sinks) v = std::min(v, (lp.sites.col(i) - lp.sites.col(j)).norm() + f[j]);
    f[i] = v;
  }
  for (auto j : sinks) {
    double v = -lp.caps[j];
    for (auto i : sources) v = std::max(v, f[i] - (lp.sites.col(i) - lp.sites.col(j)).norm());
    f[j] = v;
  }
  result.potentials = std::move(f);
  return result;
}

double f_ball(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double r) { return solve_f_ball(mu, nu, r).value; }

double f_ball_mass(const DiscreteMeasure& mu, double r) {
  if (!(r > 0.0)) throw ContractError("F_r: radius must be positive");
  std::vector<double> terms(static_cast<std::size_t>(mu.size()));
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    terms[static_cast<std::size_t>(i)] = mu.weight(i) * std::max(0.0, r - mu.point(i).norm());
  }
  return pairwise_sum(terms);
}

FSeriesResult f_series(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int max_terms) {
  if (max_terms < 1) throw ContractError("f_series: max_terms must be >= 1");
  FSeriesResult out;
  out.terms = max_terms;
  out.tail_bound = std::ldexp(1.0, -max_terms);
  for (int l = 1; l <= max_terms; ++l) {
    const double fl = f_ball(mu, nu, static_cast<double>(l));
    ++out.lp_solves;
    if (fl >= 1.0) {
      // r -> F_r is nondecreasing, so every remaining term is saturated.
      out.value += std::ldexp(1.0, -(l - 1)) - std::ldexp(1.0, -max_terms);
      return out;
    }
    out.value += std::ldexp(fl, -l);
  }
  return out;
}

double f_scaling_residual(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double r) {
  check_inputs(mu, nu, r);
  const Vector origin = Vector::Zero(mu.dim());
  const double direct = f_ball(mu, nu, r);
  const double rescaled = r * f_ball(rescale(mu, origin, r), rescale(nu, origin, r), 1.0);
  return std::abs(direct - rescaled);
}

}  // namespace gmt
