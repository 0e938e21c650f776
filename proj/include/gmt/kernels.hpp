#pragma once

// Anisotropic Riesz-type kernels and their truncated principal values.
//
//   riesz_lambda:    Lambda(x)^{-1}(y-x) / |Lambda(x)^{-1}(y-x)|^{m+1}
//   theta_gradient:  c_n A^{-1}(y-x) / (det(A)^{1/2} <A^{-1}(y-x), y-x>^{n/2})
//   finsler:         A^{-1}(y-x) / <A^{-1}(y-x), y-x>^{(m+1)/2}
//
// For theta_gradient and finsler, Lambda = A^{1/2} (the SPD square root);
// truncation windows are measured in the gauge |Lambda^{-1}(y-x)|.

#include "gmt/matrix_field.hpp"
#include "gmt/measure.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gmt {

enum class KernelFlavor { riesz_lambda, theta_gradient, finsler };

class KernelSpec {
 public:
  static KernelSpec riesz(const EllipseField& field, int m);
  static KernelSpec theta_gradient(const Matrix& a, double c_n = 1.0);
  static KernelSpec finsler(const Matrix& a, int m);

  KernelFlavor flavor() const { return flavor_; }
  int dim() const { return dim_; }
  int m() const { return m_; }
  double c_n() const { return c_n_; }
  // A^{1/2} for theta_gradient and finsler.
  const Matrix& sqrt_a() const { return sqrt_a_; }

  Vector eval(const Vector& x, const Vector& y) const;
  // Lambda(x)^{-1}, the matrix defining the truncation gauge at x.
  Matrix gauge_inverse(const Vector& x) const;

 private:
  KernelSpec(KernelFlavor flavor, int dim, int m);

  KernelFlavor flavor_;
  int dim_;
  int m_;
  double c_n_ = 1.0;
  std::optional<EllipseField> field_;
  Matrix a_inverse_;
  Matrix sqrt_a_;
  Matrix sqrt_a_inverse_;
  double sqrt_det_ = 1.0;
};

// SPD square root by eigen-decomposition; throws SingularMatrixError if `a`
// is not symmetric positive definite or the root misses |L^2 - A| <= 1e-10.
Matrix spd_sqrt(const Matrix& a);

Vector kernel_eval(const KernelSpec& spec, const Vector& x, const Vector& y);

enum class Truncation { ellipse, euclidean };

// sum over eps <= g(y) < R of w_y K(x, y), g the truncation gauge at x.
// Windows with a shared boundary partition the sum: (eps, rho) + (rho, R) = (eps, R).
Vector truncated_pv(const KernelSpec& spec, const DiscreteMeasure& mu, const Vector& x, double eps,
                    double R = std::numeric_limits<double>::infinity(), Truncation truncation = Truncation::ellipse);

enum class PvVerdict { converged, oscillating, diverging };
const char* to_string(PvVerdict verdict);

struct PvScanOptions {
  double spacing = 0.0;  // sample spacing of mu; the bottom rung must be >= 5 * spacing
  double outer = std::numeric_limits<double>::infinity();
  Truncation truncation = Truncation::ellipse;
};

struct PvScan {
  std::vector<double> eps;
  std::vector<Vector> values;
  std::vector<double> norms;
  std::vector<double> diffs;  // |values[i] - values[i-1]|, diffs[0] = 0
  PvVerdict verdict = PvVerdict::oscillating;
};

// eps_k = top * 2^{-k}, k = 0 .. count-1.
std::vector<double> halving_ladder(double top, int count);

// Cauchy test along a ratio-2 ladder:
//   converged   if the last three differences are <= 1e-2 (1 + |last value|);
//   diverging   if the norms increase at every rung and their increments
//               shrink by less than a factor 1.2 per rung;
//   oscillating otherwise.
PvScan pv_convergence_scan(const KernelSpec& spec, const DiscreteMeasure& mu, const Vector& x,
                           const std::vector<double>& eps_ladder, const PvScanOptions& options);

// | A^{-1/2} T^{n-1}_Lambda mu(x) - det(A)^{1/2} T_A mu(x) / c_n | at truncation eps,
// both sides over the same ellipse window.
double layer_potential_identity_residual(const Matrix& a, const DiscreteMeasure& mu, const Vector& x, double eps);

// | finsler(A, m) - A^{-1/2} riesz(A^{1/2}, m) | at one pair (x, y).
double finsler_factorization_residual(const Matrix& a, int m, const Vector& x, const Vector& y);

struct FrozenDiscrepancy {
  double value = 0.0;
  Matrix average;              // A averaged over B(a, 3r/2)
  double average_error = 0.0;  // |average(16 per axis) - average(8 per axis)|_F
};

// sup over y in the annulus c2 r <= |y - a| <= C2 r of
//   |grad Theta(a, y; Abar) - grad Theta(a, y; A(a))| |y - a|^{n-1}.
// The quantity is 0-homogeneous in y - a, so the sup runs over directions.
FrozenDiscrepancy frozen_discrepancy(const MatrixField& field, const Vector& a, double r, double c2, double C2);

}  // namespace gmt
