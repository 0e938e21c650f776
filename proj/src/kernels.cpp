#include "gmt/kernels.hpp"

#include "gmt/parallel.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace gmt {

namespace {

void check_m(int m, int n, const char* what) {
  if (m < 1 || m > n - 1) throw ContractError(std::string(what) + ": m must lie in {1, ..., n-1}");
}

std::vector<Vector> unit_directions(int n) {
  std::vector<Vector> dirs;
  if (n == 1) {
    dirs.push_back(Vector::Ones(1));
    dirs.push_back(-Vector::Ones(1));
  } else if (n == 2) {
    for (int k = 0; k < 720; ++k) {
      const double t = 2.0 * std::numbers::pi * k / 720.0;
      Vector u(2);
      u << std::cos(t), std::sin(t);
      dirs.push_back(u);
    }
  } else if (n == 3) {
    const int count = 2000;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / count;
      const double rho = std::sqrt(1.0 - z * z);
      Vector u(3);
      u << rho * std::cos(golden * k), rho * std::sin(golden * k), z;
      dirs.push_back(u);
    }
  } else {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    for (int k = 0; k < 4000; ++k) {
      Vector u(n);
      for (int i = 0; i < n; ++i) u[i] = gauss(rng);
      dirs.push_back(u.normalized());
    }
  }
  return dirs;
}

}  // namespace

Matrix spd_sqrt(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1) throw ContractError("spd_sqrt: matrix must be square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw SingularMatrixError("spd_sqrt: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (a + a.transpose()));
  if (eig.info() != Eigen::Success) throw SingularMatrixError("spd_sqrt: eigen-decomposition failed");
  const Vector lambda = eig.eigenvalues();
  if (!(lambda.minCoeff() > 0.0)) throw SingularMatrixError("spd_sqrt: matrix is not positive definite");
  const Matrix root = eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
  if ((root * root - a).norm() > 1e-10 * scale) throw SingularMatrixError("spd_sqrt: square root is inaccurate");
  return root;
}

KernelSpec::KernelSpec(KernelFlavor flavor, int dim, int m) : flavor_(flavor), dim_(dim), m_(m) {}

KernelSpec KernelSpec::riesz(const EllipseField& field, int m) {
  check_m(m, field.dim(), "riesz kernel");
  KernelSpec spec(KernelFlavor::riesz_lambda, field.dim(), m);
  spec.field_ = field;
  return spec;
}

KernelSpec KernelSpec::theta_gradient(const Matrix& a, double c_n) {
  const auto n = static_cast<int>(a.rows());
  KernelSpec spec(KernelFlavor::theta_gradient, n, n - 1);
  spec.c_n_ = c_n;
  spec.sqrt_a_ = spd_sqrt(a);
  spec.sqrt_a_inverse_ = spec.sqrt_a_.inverse();
  spec.a_inverse_ = a.inverse();
  spec.sqrt_det_ = std::sqrt(a.determinant());
  if (!(spec.sqrt_det_ > std::sqrt(kDeterminantFloor))) throw SingularMatrixError("theta kernel: det(A) below floor");
  return spec;
}

KernelSpec KernelSpec::finsler(const Matrix& a, int m) {
  const auto n = static_cast<int>(a.rows());
  check_m(m, n, "finsler kernel");
  KernelSpec spec(KernelFlavor::finsler, n, m);
  spec.sqrt_a_ = spd_sqrt(a);
  spec.sqrt_a_inverse_ = spec.sqrt_a_.inverse();
  spec.a_inverse_ = a.inverse();
  spec.sqrt_det_ = std::sqrt(a.determinant());
  return spec;
}

Matrix KernelSpec::gauge_inverse(const Vector& x) const {
  if (flavor_ == KernelFlavor::riesz_lambda) return field_->inverse_at(x);
  return sqrt_a_inverse_;
}

Vector KernelSpec::eval(const Vector& x, const Vector& y) const {
  if (x.size() != dim_ || y.size() != dim_) throw ContractError("kernel_eval: dimension mismatch");
  const Vector v = y - x;
  if (v.isZero(0.0)) throw ContractError("kernel_eval: singular at x = y");
  switch (flavor_) {
    case KernelFlavor::riesz_lambda: {
      const Vector u = field_->inverse_at(x) * v;
      return u / std::pow(u.norm(), m_ + 1);
    }
    case KernelFlavor::theta_gradient: {
      const Vector u = a_inverse_ * v;
      return (c_n_ / (sqrt_det_ * std::pow(u.dot(v), 0.5 * dim_))) * u;
    }
    case KernelFlavor::finsler: {
      const Vector u = a_inverse_ * v;
      return u / std::pow(u.dot(v), 0.5 * (m_ + 1));
    }
  }
  return Vector::Zero(dim_);
}

Vector kernel_eval(const KernelSpec& spec, const Vector& x, const Vector& y) { return spec.eval(x, y); }

Vector truncated_pv(const KernelSpec& spec, const DiscreteMeasure& mu, const Vector& x, double eps, double R,
                    Truncation truncation) {
  const int n = spec.dim();
  if (mu.dim() != n || x.size() != n) throw ContractError("truncated_pv: dimension mismatch");
  if (!(eps > 0.0)) throw ContractError("truncated_pv: eps must be positive");
  if (!(eps < R)) throw ContractError("truncated_pv: eps must be below R");
  const Matrix gauge = truncation == Truncation::ellipse ? spec.gauge_inverse(x) : Matrix::Identity(n, n);
  const double lower = eps * (1.0 - kTieTolerance);
  const double upper = R * (1.0 - kTieTolerance);
  Matrix terms = Matrix::Zero(n, mu.size());
  parallel_for(static_cast<std::size_t>(mu.size()), [&](std::size_t i) {
    const auto j = static_cast<Eigen::Index>(i);
    const double w = mu.weight(j);
    if (w <= 0.0) return;
    const double g = (gauge * (mu.point(j) - x)).norm();
    if (g < lower || !(g < upper)) return;
    terms.col(j) = w * spec.eval(x, mu.point(j));
  });
  return pairwise_sum_columns(terms);
}

const char* to_string(PvVerdict verdict) {
  switch (verdict) {
    case PvVerdict::converged:
      return "converged";
    case PvVerdict::oscillating:
      return "oscillating";
    case PvVerdict::diverging:
      return "diverging";
  }
  return "?";
}

std::vector<double> halving_ladder(double top, int count) {
  if (!(top > 0.0) || count < 1) throw ContractError("halving_ladder: need top > 0 and count >= 1");
  std::vector<double> out;
  for (int k = 0; k < count; ++k) out.push_back(std::ldexp(top, -k));
  return out;
}

PvScan pv_convergence_scan(const KernelSpec& spec, const DiscreteMeasure& mu, const Vector& x,
                           const std::vector<double>& eps_ladder, const PvScanOptions& options) {
  if (eps_ladder.size() < 2) throw ContractError("pv_convergence_scan: ladder needs at least two rungs");
  for (std::size_t k = 1; k < eps_ladder.size(); ++k) {
    const double ratio = eps_ladder[k - 1] / eps_ladder[k];
    if (!(std::abs(ratio - 2.0) <= 1e-9)) throw ContractError("pv_convergence_scan: ladder ratio must be 2");
  }
  if (!(options.spacing > 0.0)) throw ContractError("pv_convergence_scan: sample spacing must be positive");
  if (eps_ladder.back() < 5.0 * options.spacing) {
    throw ResolutionGuardError("pv_convergence_scan: bottom rung " + std::to_string(eps_ladder.back()) +
                               " is below 5 sample spacings");
  }
  if (!(eps_ladder.front() < options.outer)) throw ContractError("pv_convergence_scan: top rung must be below R");

  PvScan scan;
  scan.eps = eps_ladder;
  for (double e : eps_ladder) {
    scan.values.push_back(truncated_pv(spec, mu, x, e, options.outer, options.truncation));
    scan.norms.push_back(scan.values.back().norm());
    scan.diffs.push_back(scan.values.size() == 1 ? 0.0 : (scan.values.back() - scan.values[scan.values.size() - 2]).norm());
  }

  const std::size_t k = scan.values.size();
  const double tol = 1e-2 * (1.0 + scan.norms.back());
  if (k >= 4 && scan.diffs[k - 1] <= tol && scan.diffs[k - 2] <= tol && scan.diffs[k - 3] <= tol) {
    scan.verdict = PvVerdict::converged;
    return scan;
  }
  bool growing = true;
  for (std::size_t i = 1; i < k && growing; ++i) {
    const double inc = scan.norms[i] - scan.norms[i - 1];
    if (!(inc > 0.0)) growing = false;
    if (i >= 2 && growing) {
      const double prev = scan.norms[i - 1] - scan.norms[i - 2];
      if (inc * 1.2 < prev) growing = false;
    }
  }
  scan.verdict = growing ? PvVerdict::diverging : PvVerdict::oscillating;
  return scan;
}

double layer_potential_identity_residual(const Matrix& a, const DiscreteMeasure& mu, const Vector& x, double eps) {
  const KernelSpec theta = KernelSpec::theta_gradient(a);
  const auto n = theta.dim();
  const KernelSpec riesz = KernelSpec::riesz(EllipseField::constant(theta.sqrt_a()), n - 1);
  const Vector lhs = riesz.gauge_inverse(x) * truncated_pv(riesz, mu, x, eps);
  const Vector rhs = std::sqrt(a.determinant()) * truncated_pv(theta, mu, x, eps) / theta.c_n();
  return (lhs - rhs).norm();
}

double finsler_factorization_residual(const Matrix& a, int m, const Vector& x, const Vector& y) {
  const KernelSpec fin = KernelSpec::finsler(a, m);
  const KernelSpec riesz = KernelSpec::riesz(EllipseField::constant(fin.sqrt_a()), m);
  return (fin.eval(x, y) - riesz.gauge_inverse(x) * riesz.eval(x, y)).norm();
}

FrozenDiscrepancy frozen_discrepancy(const MatrixField& field, const Vector& a, double r, double c2, double C2) {
  if (!(r > 0.0)) throw ContractError("frozen_discrepancy: r must be positive");
  if (!(c2 > 0.0) || !(c2 < C2)) throw ContractError("frozen_discrepancy: need 0 < c2 < C2");
  const int n = field.dim;
  FrozenDiscrepancy out;
  const BallAverage fine = ball_average(field, a, 1.5 * r, 16);
  const BallAverage coarse = ball_average(field, a, 1.5 * r, 8);
  out.average = fine.mean;
  out.average_error = (fine.mean - coarse.mean).norm();

  KernelSpec averaged = [&] {
    try {
      return KernelSpec::theta_gradient(fine.mean);
    } catch (const SingularMatrixError& e) {
      throw SingularMatrixError(std::string("frozen_discrepancy: ball average is not SPD: ") + e.what());
    }
  }();
  const KernelSpec frozen = KernelSpec::theta_gradient(field(a));
  const std::vector<Vector> dirs = unit_directions(n);
  std::vector<double> gaps(dirs.size());
  parallel_for(dirs.size(), [&](std::size_t k) {
    const Vector y = a + dirs[k];
    gaps[k] = (averaged.eval(a, y) - frozen.eval(a, y)).norm();
  });
  for (double g : gaps) out.value = std::max(out.value, g);
  return out;
}

}  // namespace gmt
