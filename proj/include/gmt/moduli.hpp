#pragma once

// Mean-oscillation moduli of coefficient fields:
//
//   omega_A(r) = sup_x avg_{B(x,r)} |A(z) - Abar_{x,r}| dz
//   I_theta(r) = int_0^r theta(t) dt / t
//   L^d_theta(r) = r^d int_r^inf theta(t) dt / t^{d+1}
//   tau_A(r) = I(r) + L^{n-1}(r),   tau_hat_A(r) = I(r) + L^{n-2}(r)
//
// The sup over x is taken over a finite probe set, so omega is a lower bound.

#include "gmt/matrix_field.hpp"

#include <functional>
#include <vector>

namespace gmt {

struct OscillationProfile {
  std::vector<double> radii;  // increasing
  std::vector<double> omega;
  std::vector<double> error;  // |omega(g per axis) - omega(g/2 per axis)|, maximized over probes
  double kappa_hat = 1.0;
};

struct OmegaOptions {
  int per_axis = 16;
};

OscillationProfile omega_profile(const MatrixField& field, const std::vector<Vector>& probes,
                                 const std::vector<double>& radii, const OmegaOptions& options = {});

// Piecewise-linear interpolation of the profile in log t.
std::function<double(double)> profile_function(const OscillationProfile& profile);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // Richardson estimate from the half-resolution rule
  bool divergence_warning = false;
  // dini_large with d = 0 has no convergent flat extension; the integral then stops at t_max.
  bool truncated = false;
};

struct DiniOptions {
  double t_min_ratio = 1e-6;  // t_min = t_min_ratio * r
  double t_max = 10.0;        // theta is extended by theta(t_max) beyond t_max
  int nodes_per_decade = 200;
};

QuadratureResult dini_small(const std::function<double(double)>& theta, double r, const DiniOptions& options = {});
QuadratureResult dini_large(const std::function<double(double)>& theta, int d, double r,
                            const DiniOptions& options = {});

struct TauResult {
  double tau = 0.0;
  double tau_hat = 0.0;
  double tau_error = 0.0;
  double tau_hat_error = 0.0;
  QuadratureResult small;
  QuadratureResult large_tau;      // d = n - 1
  QuadratureResult large_tau_hat;  // d = n - 2
};

// Moduli from an omega profile that must cover [t_min_ratio * r, t_max].
TauResult tau_moduli(const OscillationProfile& profile, int n, double r, const DiniOptions& options = {});

// Computes the profile on a log ladder (8 radii per decade) covering the
// quadrature range, then the moduli.
TauResult tau_moduli(const MatrixField& field, const std::vector<Vector>& probes, double r,
                     const DiniOptions& options = {}, const OmegaOptions& omega_options = {});

// max over the ladder of theta(t) / min { theta(s) : s in [t/2, t] on the ladder }.
// A zero numerator contributes 1; a zero denominator under a positive numerator gives +inf.
double doubling_constant(const std::vector<double>& radii, const std::vector<double>& theta);

// Log-spaced radii lo * 10^{k / per_decade} through hi (inclusive up to rounding).
std::vector<double> log_ladder(double lo, double hi, int per_decade);

}  // namespace gmt
