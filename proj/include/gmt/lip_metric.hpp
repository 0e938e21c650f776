#pragma once

// Bounded-Lipschitz distances between discrete measures:
//
//   F_r(mu, nu) = sup { int f d(mu - nu) : Lip(f) <= 1, f in C_c(B_r) }
//   F(mu, nu)   = sum_{l >= 1} 2^{-l} min{1, F_l(mu, nu)}
//
// For discrete measures the supremum is a finite LP over the values f_i at the
// atoms inside B_r (McShane extension makes it exact). We solve its dual, a
// transport problem in which mass may also be sent to the boundary sphere at
// cost r - |x|, with the simplex solver in gmt/lp.hpp. Potentials are
// recovered from the duals.

#include "gmt/measure.hpp"

namespace gmt {

// Instances with more sites than this are rejected with LpSizeError.
inline constexpr int kMaxLpSites = 500;

// The primal LP of F_r: maximize sum_i signed_mass_i f_i subject to
// f_i - f_j <= |x_i - x_j| and |f_i| <= caps_i = r - |x_i|.
struct LipschitzLP {
  double radius = 0.0;
  Matrix sites;        // dim x N, atoms of mu and nu inside B_r (coincident atoms merged)
  Vector signed_mass;  // mu_i - nu_i, never zero
  Vector caps;         // distance to the complement of B_r
};

LipschitzLP build_lipschitz_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double r);

struct FBallResult {
  double value = 0.0;
  LipschitzLP lp;
  Vector potentials;  // a feasible optimal f, one value per site
  int iterations = 0;
};

FBallResult solve_f_ball(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double r);

double f_ball(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double r);

// F_r(mu) = F_r(mu, 0) for a nonnegative measure, in closed form:
// the optimal f is (r - |x|)_+.
double f_ball_mass(const DiscreteMeasure& mu, double r);

struct FSeriesResult {
  double value = 0.0;       // partial sum through l = terms
  double tail_bound = 0.0;  // 2^{-terms}: the omitted terms sum to at most this
  int terms = 0;
  int lp_solves = 0;  // once F_l >= 1 every later term saturates and is added without solving
};

FSeriesResult f_series(const DiscreteMeasure& mu, const DiscreteMeasure& nu, int max_terms);

// |F_r(mu, nu) - r F_1(T_{0,r}[mu], T_{0,r}[nu])|.
double f_scaling_residual(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double r);

}  // namespace gmt
