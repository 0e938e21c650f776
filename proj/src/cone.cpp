#include "gmt/cone.hpp"

#include "gmt/lip_metric.hpp"
#include "gmt/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>

namespace gmt {

namespace {

void check_frame(const Matrix& frame) {
  const auto n = frame.rows();
  const auto m = frame.cols();
  if (m < 1) throw ContractError("flat measure: m must be >= 1");
  if (m > n) throw ContractError("flat measure: m exceeds the ambient dimension");
  const Matrix gram = frame.transpose() * frame - Matrix::Identity(m, m);
  if (gram.cwiseAbs().maxCoeff() > 1e-12) throw ContractError("flat measure: frame is not orthonormal");
}

double unit_ball_volume(int m) {
  return std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

// Mass-weighted centroids of nu on the cells of eta * Z^n.
DiscreteMeasure bin_measure(const DiscreteMeasure& nu, double eta) {
  const int n = nu.dim();
  struct Cell {
    Vector moment;
    double mass = 0.0;
  };
  std::map<std::vector<long long>, Cell> cells;
  std::vector<long long> key(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    const double w = nu.weight(i);
    if (w <= 0.0) continue;
    for (int k = 0; k < n; ++k) key[static_cast<std::size_t>(k)] = static_cast<long long>(std::floor(nu.point(i)[k] / eta));
    auto [it, inserted] = cells.try_emplace(key);
    if (inserted) it->second.moment = Vector::Zero(n);
    it->second.moment += w * nu.point(i);
    it->second.mass += w;
  }
  Matrix pts(n, static_cast<Eigen::Index>(cells.size()));
  Vector wts(static_cast<Eigen::Index>(cells.size()));
  Eigen::Index j = 0;
  for (const auto& [k, cell] : cells) {
    pts.col(j) = cell.moment / cell.mass;
    wts[j] = cell.mass;
    ++j;
  }
  return DiscreteMeasure(std::move(pts), std::move(wts));
}

// Orthonormal basis of the orthogonal complement of the columns of `frame`.
Matrix complement(const Matrix& frame) {
  const auto n = frame.rows();
  const auto m = frame.cols();
  Eigen::HouseholderQR<Matrix> qr(frame);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - m);
}

Matrix orthonormalize(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
  return q;
}

// Frame for a line with direction u (m = 1) or a hyperplane with normal u (m = n - 1).
Matrix frame_from_direction(const Vector& u, int m) {
  const auto n = u.size();
  Matrix one(n, 1);
  one.col(0) = u.normalized();
  if (m == 1) return one;
  return complement(one);
}

struct NelderMeadResult {
  Vector x;
  double value;
};

NelderMeadResult nelder_mead(const std::function<double(const Vector&)>& f, const Vector& x0, double step,
                             double tol, int max_evals, int& evals) {
  const auto d = x0.size();
  std::vector<Vector> simplex(static_cast<std::size_t>(d + 1), x0);
  std::vector<double> values(static_cast<std::size_t>(d + 1));
  for (Eigen::Index k = 0; k < d; ++k) simplex[static_cast<std::size_t>(k + 1)][k] += step;
  for (std::size_t k = 0; k < simplex.size(); ++k) {
    values[k] = f(simplex[k]);
    ++evals;
  }
  std::vector<std::size_t> order(simplex.size());
  while (evals < max_evals) {
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];
    double size = 0.0;
    for (const auto& p : simplex) size = std::max(size, (p - simplex[best]).cwiseAbs().maxCoeff());
    if (values[worst] - values[best] <= tol && size <= 10.0 * tol) break;

    Vector centroid = Vector::Zero(d);
    for (std::size_t k = 0; k < simplex.size(); ++k) {
      if (k != worst) centroid += simplex[k];
    }
    centroid /= static_cast<double>(d);
    const Vector reflected = centroid + (centroid - simplex[worst]);
    const double fr = f(reflected);
    ++evals;
    if (fr < values[best]) {
      const Vector expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double fe = f(expanded);
      ++evals;
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const Vector contracted = outside ? Vector(centroid + 0.5 * (reflected - centroid))
                                      : Vector(centroid + 0.5 * (simplex[worst] - centroid));
    const double fc = f(contracted);
    ++evals;
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fc;
      continue;
    }
    for (std::size_t k = 0; k < simplex.size(); ++k) {
      if (k == best) continue;
      simplex[k] = simplex[best] + 0.5 * (simplex[k] - simplex[best]);
      values[k] = f(simplex[k]);
      ++evals;
    }
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] < values[best]) best = k;
  }
  return {simplex[best], values[best]};
}

std::vector<Matrix> coarse_frames(int n, int m, std::uint64_t seed, double& step) {
  std::vector<Matrix> frames;
  if (n == 2) {
    const int count = 36;
    for (int k = 0; k < count; ++k) {
      const double t = std::numbers::pi * k / count;
      Vector u(2);
      u << std::cos(t), std::sin(t);
      frames.push_back(frame_from_direction(u, m));
    }
    step = std::tan(std::numbers::pi / count);
    return frames;
  }
  if (n == 3) {
    const double d = std::numbers::pi / 12.0;
    Vector pole(3);
    pole << 0.0, 0.0, 1.0;
    frames.push_back(frame_from_direction(pole, m));
    for (int i = 1; i <= 6; ++i) {
      const int azimuths = i == 6 ? 12 : 24;
      for (int j = 0; j < azimuths; ++j) {
        const double th = i * d;
        const double ph = j * d;
        Vector u(3);
        u << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
        frames.push_back(frame_from_direction(u, m));
      }
    }
    step = 0.5 * std::tan(d);
    return frames;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int k = 0; k < 200; ++k) {
    Matrix g(n, m);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = gauss(rng);
    frames.push_back(orthonormalize(g));
  }
  step = 0.3;
  return frames;
}

}  // namespace

Matrix coordinate_frame(int n, int m) {
  if (m < 1 || m > n) throw ContractError("coordinate_frame: need 1 <= m <= n");
  return Matrix::Identity(n, m);
}

DiscreteMeasure sample_flat(const FlatMeasureSpec& spec, double radius) {
  check_frame(spec.frame);
  if (!(radius > 0.0)) throw ContractError("sample_flat: radius must be positive");
  if (!(spec.spacing > 0.0) || spec.spacing > radius / 10.0) {
    throw ContractError("sample_flat: spacing must lie in (0, radius / 10]");
  }
  if (!(spec.constant > 0.0)) throw ContractError("sample_flat: constant must be positive");
  const auto n = spec.frame.rows();
  const auto m = static_cast<int>(spec.frame.cols());
  const double h = spec.spacing;
  const double limit = radius * (1.0 + kTieTolerance);
  const auto reach = static_cast<long long>(std::floor(limit / h));
  const double weight = spec.constant * std::pow(h, m);

  std::vector<long long> k(static_cast<std::size_t>(m), -reach);
  std::vector<Vector> pts;
  Vector coords(m);
  while (true) {
    for (int i = 0; i < m; ++i) coords[i] = static_cast<double>(k[static_cast<std::size_t>(i)]) * h;
    if (coords.norm() <= limit) pts.emplace_back(spec.frame * coords);
    int i = m - 1;
    while (i >= 0 && k[static_cast<std::size_t>(i)] == reach) k[static_cast<std::size_t>(i--)] = -reach;
    if (i < 0) break;
    ++k[static_cast<std::size_t>(i)];
  }
  Matrix p(n, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) p.col(static_cast<Eigen::Index>(j)) = pts[j];
  return DiscreteMeasure(std::move(p), Vector::Constant(static_cast<Eigen::Index>(pts.size()), weight));
}

ConeDistance d_cone_flat(const DiscreteMeasure& nu, int m, double s, const ConeOptions& options) {
  const int n = nu.dim();
  if (m < 1 || m > n - 1) throw ContractError("d_cone_flat: m must lie in {1, ..., n-1}");
  if (!(s > 0.0)) throw ContractError("d_cone_flat: s must be positive");

  // d_s(nu) = d_1(T_{0,s}[nu]); only atoms in the open unit ball matter.
  const DiscreteMeasure unit = rescale(nu, Vector::Zero(n), s);
  Matrix inside_pts(n, unit.size());
  Vector inside_w(unit.size());
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < unit.size(); ++i) {
    if (unit.weight(i) > 0.0 && unit.point(i).norm() < 1.0) {
      inside_pts.col(count) = unit.point(i);
      inside_w[count++] = unit.weight(i);
    }
  }
  const DiscreteMeasure inside(inside_pts.leftCols(count), inside_w.head(count));

  ConeDistance out;
  const double f_nu = f_ball_mass(inside, 1.0);
  if (!(f_nu > 0.0)) return out;

  double eta = 1.0 / 64.0;
  DiscreteMeasure binned = bin_measure(inside, eta);
  while (binned.size() > options.max_sites) {
    eta *= 2.0;
    binned = bin_measure(inside, eta);
  }
  const DiscreteMeasure target = binned.scaled(1.0 / f_ball_mass(binned, 1.0));

  const double h = std::max(options.flat_spacing, std::pow(unit_ball_volume(m) / 200.0, 1.0 / m));
  auto candidate = [&](const Matrix& frame, double& c) {
    const DiscreteMeasure flat = sample_flat({frame, 1.0, h}, 1.0);
    c = 1.0 / f_ball_mass(flat, 1.0);
    return flat.scaled(c);
  };
  auto objective = [&](const Matrix& frame) {
    double c = 0.0;
    return f_ball(target, candidate(frame, c), 1.0);
  };

  double step = 0.0;
  const std::vector<Matrix> frames = coarse_frames(n, m, options.seed, step);
  std::vector<double> values(frames.size());
  parallel_for(frames.size(), [&](std::size_t k) { values[k] = objective(frames[k]); });
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] < values[best]) best = k;
  }
  out.evaluations = static_cast<int>(frames.size());

  // Local chart of G(n, m) around the best coarse frame: span(F0 + C B).
  const Matrix f0 = frames[best];
  const Matrix comp = complement(f0);
  auto chart = [&](const Vector& b) {
    const Matrix bm = Eigen::Map<const Matrix>(b.data(), n - m, m);
    return orthonormalize(f0 + comp * bm);
  };
  int evals = 0;
  const auto refined = nelder_mead([&](const Vector& b) { return objective(chart(b)); },
                                   Vector::Zero((n - m) * m), step, options.tolerance, 60 + 20 * (n - m) * m, evals);
  out.evaluations += evals;

  Matrix frame = f0;
  double value = values[best];
  if (refined.value < value) {
    frame = chart(refined.x);
    value = refined.value;
  }
  out.value = std::clamp(value, 0.0, 1.0);
  out.frame = frame;
  candidate(frame, out.constant);
  out.floor = 2.0 * std::max(h, eta);
  return out;
}

double symmetry_defect(const DiscreteMeasure& nu, const Vector& x, double r, double R, int m) {
  const int n = nu.dim();
  if (x.size() != n) throw ContractError("symmetry_defect: dimension mismatch");
  if (!(r > 0.0) || !(r < R)) throw ContractError("symmetry_defect: need 0 < r < R");
  if (m < 1 || m > n) throw ContractError("symmetry_defect: m must lie in {1, ..., n}");
  const auto count = static_cast<std::size_t>(nu.size());
  Matrix terms = Matrix::Zero(n, nu.size());
  parallel_for(count, [&](std::size_t i) {
    const auto j = static_cast<Eigen::Index>(i);
    const double w = nu.weight(j);
    if (w <= 0.0) return;
    const Vector v = x - nu.point(j);
    const double d = v.norm();
    if (d < r * (1.0 - kTieTolerance) || d > R * (1.0 + kTieTolerance)) return;
    terms.col(j) = (w / std::pow(d, m + 1)) * v;
  });
  return pairwise_sum_columns(terms).norm();
}

DefectReport uniformity_defect(const DiscreteMeasure& nu, int m, int probe_pairs, const std::vector<double>& radii,
                               std::uint64_t seed) {
  const int n = nu.dim();
  if (m < 1 || m > n) throw ContractError("uniformity_defect: m must lie in {1, ..., n}");
  if (probe_pairs < 1) throw ContractError("uniformity_defect: probe_pairs must be >= 1");
  if (radii.empty()) throw ContractError("uniformity_defect: no radii");
  for (double r : radii) {
    if (!(r > 0.0)) throw ContractError("uniformity_defect: radii must be positive");
  }
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    if (nu.weight(i) > 0.0) support.push_back(i);
  }
  if (support.empty()) throw ContractError("uniformity_defect: empty support");

  Vector lo = nu.point(support.front());
  Vector hi = lo;
  for (auto i : support) {
    lo = lo.cwiseMin(nu.point(i));
    hi = hi.cwiseMax(nu.point(i));
  }
  const Vector center = 0.5 * (lo + hi);
  double reach = 0.0;
  for (auto i : support) reach = std::max(reach, (nu.point(i) - center).norm());

  DefectReport report;
  std::vector<Eigen::Index> pool;
  for (auto i : support) {
    if ((nu.point(i) - center).norm() <= 0.5 * reach) pool.push_back(i);
  }
  if (pool.size() < 2) {
    pool = support;
    report.inner_half_fallback = true;
  }

  std::mt19937_64 rng(seed);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (int k = 0; k < probe_pairs; ++k) {
    const auto i = pool[static_cast<std::size_t>(rng() % pool.size())];
    const auto j = pool[static_cast<std::size_t>(rng() % pool.size())];
    pairs.emplace_back(i, j);
  }

  double min_density = std::numeric_limits<double>::infinity();
  double max_density = 0.0;
  report.x = nu.point(pairs.front().first);
  report.y = nu.point(pairs.front().second);
  report.radius = radii.front();
  for (const auto& [i, j] : pairs) {
    for (double r : radii) {
      const double mx = mass_in(nu, Ball::euclidean(nu.point(i), r));
      const double my = mass_in(nu, Ball::euclidean(nu.point(j), r));
      const double top = std::max(mx, my);
      const double scale = std::pow(r, m);
      min_density = std::min({min_density, mx / scale, my / scale});
      max_density = std::max({max_density, mx / scale, my / scale});
      if (!(top > 0.0)) continue;
      const double gap = std::abs(mx - my) / top;
      if (gap > report.value) {
        report.value = gap;
        report.x = nu.point(i);
        report.y = nu.point(j);
        report.radius = r;
      }
    }
  }
  report.power_spread = min_density > 0.0 ? max_density / min_density : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace gmt
