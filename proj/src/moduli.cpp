#include "gmt/moduli.hpp"

#include "gmt/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gmt {

namespace {

// Midpoint rule in u = ln t for int_{a}^{b} g(e^u) du with `nodes` cells.
double log_midpoint(const std::function<double(double)>& g, double a, double b, int nodes) {
  const double lu = std::log(a);
  const double du = (std::log(b) - lu) / nodes;
  std::vector<double> terms(static_cast<std::size_t>(nodes));
  for (int k = 0; k < nodes; ++k) terms[static_cast<std::size_t>(k)] = g(std::exp(lu + (k + 0.5) * du));
  return pairwise_sum(terms) * du;
}

int node_count(double a, double b, int per_decade) {
  const double decades = std::log10(b / a);
  // Even count so the half-resolution rule is well defined.
  int nodes = std::max(2, static_cast<int>(std::ceil(decades * per_decade)));
  return nodes + (nodes % 2);
}

void check_theta(double value) {
  if (value < 0.0 || std::isnan(value)) throw ContractError("Dini functional: theta must be nonnegative");
}

}  // namespace

OscillationProfile omega_profile(const MatrixField& field, const std::vector<Vector>& probes,
                                 const std::vector<double>& radii, const OmegaOptions& options) {
  if (probes.empty() || radii.empty()) throw ContractError("omega_profile: probes and radii must be nonempty");
  if (options.per_axis < 8) throw ContractError("omega_profile: need at least 8 quadrature points per axis");
  for (double r : radii) {
    if (!(r > 0.0)) throw ContractError("omega_profile: radii must be positive");
  }
  OscillationProfile out;
  out.radii = radii;
  std::sort(out.radii.begin(), out.radii.end());
  const std::size_t tasks = out.radii.size() * probes.size();
  std::vector<double> fine(tasks);
  std::vector<double> coarse(tasks);
  parallel_for(tasks, [&](std::size_t t) {
    const double r = out.radii[t / probes.size()];
    const Vector& x = probes[t % probes.size()];
    fine[t] = ball_average(field, x, r, options.per_axis).oscillation;
    coarse[t] = ball_average(field, x, r, options.per_axis / 2).oscillation;
  });
  for (std::size_t i = 0; i < out.radii.size(); ++i) {
    double w = 0.0;
    double e = 0.0;
    for (std::size_t p = 0; p < probes.size(); ++p) {
      const std::size_t t = i * probes.size() + p;
      w = std::max(w, fine[t]);
      e = std::max(e, std::abs(fine[t] - coarse[t]));
    }
    out.omega.push_back(w);
    out.error.push_back(e);
  }
  out.kappa_hat = doubling_constant(out.radii, out.omega);
  return out;
}

std::function<double(double)> profile_function(const OscillationProfile& profile) {
  if (profile.radii.empty()) throw ContractError("profile_function: empty profile");
  return [radii = profile.radii, omega = profile.omega](double t) {
    if (t <= radii.front()) return omega.front();
    if (t >= radii.back()) return omega.back();
    const auto it = std::upper_bound(radii.begin(), radii.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - radii.begin());
    const std::size_t lo = hi - 1;
    const double s = std::log(t / radii[lo]) / std::log(radii[hi] / radii[lo]);
    return omega[lo] + s * (omega[hi] - omega[lo]);
  };
}

QuadratureResult dini_small(const std::function<double(double)>& theta, double r, const DiniOptions& options) {
  if (!(r > 0.0)) throw ContractError("dini_small: r must be positive");
  const double t_min = options.t_min_ratio * r;
  const int nodes = node_count(t_min, r, options.nodes_per_decade);
  double peak = 0.0;
  auto g = [&](double t) {
    const double v = theta(t);
    check_theta(v);
    peak = std::max(peak, v);
    return v;
  };
  QuadratureResult out;
  out.value = log_midpoint(g, t_min, r, nodes);
  const double half = log_midpoint(g, t_min, r, nodes / 2);
  out.error = std::abs(out.value - half) / 3.0;
  const double at_min = theta(t_min);
  check_theta(at_min);
  out.divergence_warning = at_min > 1e-3 * peak && at_min > 0.0;
  return out;
}

QuadratureResult dini_large(const std::function<double(double)>& theta, int d, double r, const DiniOptions& options) {
  if (!(r > 0.0)) throw ContractError("dini_large: r must be positive");
  if (d < 0) throw ContractError("dini_large: d must be >= 0");
  const double t_max = options.t_max;
  QuadratureResult out;
  const double at_max = theta(t_max);
  check_theta(at_max);
  if (d == 0) out.truncated = true;
  if (r >= t_max) {
    // Flat region only: r^d theta(t_max) int_r^inf t^{-d-1} dt.
    if (d == 0) return out;
    out.value = at_max / d;
    return out;
  }
  auto g = [&](double t) {
    const double v = theta(t);
    check_theta(v);
    return v * std::pow(r / t, d);
  };
  const int nodes = node_count(r, t_max, options.nodes_per_decade);
  const double full = log_midpoint(g, r, t_max, nodes);
  const double half = log_midpoint(g, r, t_max, nodes / 2);
  const double tail = d == 0 ? 0.0 : at_max * std::pow(r / t_max, d) / d;
  out.value = full + tail;
  out.error = std::abs(full - half) / 3.0;
  return out;
}

TauResult tau_moduli(const OscillationProfile& profile, int n, double r, const DiniOptions& options) {
  if (n < 2) throw ContractError("tau_moduli: n must be >= 2");
  if (profile.radii.empty()) throw ContractError("tau_moduli: empty profile");
  const double lo = options.t_min_ratio * r;
  if (profile.radii.front() > lo * (1.0 + 1e-9) || profile.radii.back() < options.t_max * (1.0 - 1e-9)) {
    throw ContractError("tau_moduli: profile does not cover [t_min, t_max]");
  }
  const auto theta = profile_function(profile);
  TauResult out;
  out.small = dini_small(theta, r, options);
  out.large_tau = dini_large(theta, n - 1, r, options);
  out.large_tau_hat = dini_large(theta, n - 2, r, options);
  out.tau = out.small.value + out.large_tau.value;
  out.tau_hat = out.small.value + out.large_tau_hat.value;
  out.tau_error = out.small.error + out.large_tau.error;
  out.tau_hat_error = out.small.error + out.large_tau_hat.error;
  return out;
}

TauResult tau_moduli(const MatrixField& field, const std::vector<Vector>& probes, double r, const DiniOptions& options,
                     const OmegaOptions& omega_options) {
  const auto radii = log_ladder(options.t_min_ratio * r, options.t_max, 8);
  return tau_moduli(omega_profile(field, probes, radii, omega_options), field.dim, r, options);
}

double doubling_constant(const std::vector<double>& radii, const std::vector<double>& theta) {
  if (radii.size() != theta.size()) throw ContractError("doubling_constant: length mismatch");
  double kappa = 1.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double t = radii[i];
    double low = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < radii.size(); ++j) {
      const double s = radii[j];
      if (s >= 0.5 * t * (1.0 - 1e-12) && s <= t * (1.0 + 1e-12)) low = std::min(low, theta[j]);
    }
    if (!(theta[i] > 0.0)) continue;
    if (!(low > 0.0)) return std::numeric_limits<double>::infinity();
    kappa = std::max(kappa, theta[i] / low);
  }
  return kappa;
}

std::vector<double> log_ladder(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1) throw ContractError("log_ladder: bad arguments");
  std::vector<double> out;
  const int steps = static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade - 1e-9));
  for (int k = 0; k <= steps; ++k) out.push_back(std::min(hi, lo * std::pow(10.0, static_cast<double>(k) / per_decade)));
  return out;
}

}  // namespace gmt
