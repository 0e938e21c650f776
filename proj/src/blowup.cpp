#include "gmt/blowup.hpp"

#include "gmt/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gmt {

namespace {

// c * T^Lambda_{a,r}[mu] restricted to the closed ball B(0, window), zero atoms dropped.
DiscreteMeasure blowup_at(const DiscreteMeasure& mu, const Vector& a, double r, const EllipseField& field, double c,
                          double window) {
  const DiscreteMeasure moved = lambda_rescale(mu, a, r, field);
  const double limit = window * (1.0 + kTieTolerance);
  Matrix pts(mu.dim(), moved.size());
  Vector wts(moved.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < moved.size(); ++i) {
    if (moved.weight(i) <= 0.0 || moved.point(i).norm() > limit) continue;
    pts.col(k) = moved.point(i);
    wts[k++] = c * moved.weight(i);
  }
  return DiscreteMeasure(pts.leftCols(k), wts.head(k));
}

double unit_mass(const DiscreteMeasure& nu) { return mass_in(nu, Ball::euclidean(Vector::Zero(nu.dim()), 1.0)); }

void check_ladder(const ScaleLadder& ladder) {
  if (ladder.radii.empty()) throw ContractError("scale ladder is empty");
  for (std::size_t i = 1; i < ladder.radii.size(); ++i) {
    if (!(ladder.radii[i] < ladder.radii[i - 1])) throw ContractError("scale ladder must be strictly decreasing");
  }
}

}  // namespace

const char* to_string(Normalization mode) { return mode == Normalization::mass ? "mass" : "power"; }

ScaleLadder ScaleLadder::geometric(double r0, double ratio, int count, double spacing, Normalization mode) {
  if (!(r0 > 0.0) || !(ratio > 0.0 && ratio < 1.0) || count < 1) {
    throw ContractError("ScaleLadder: need r0 > 0, ratio in (0,1), count >= 1");
  }
  if (!(spacing > 0.0)) throw ContractError("ScaleLadder: sample spacing must be positive");
  ScaleLadder ladder;
  ladder.mode = mode;
  ladder.spacing = spacing;
  ladder.ratio = ratio;
  for (int i = 0; i < count; ++i) ladder.radii.push_back(r0 * std::pow(ratio, i));
  if (ladder.smallest() < kGuardSpacings * spacing) {
    throw ResolutionGuardError("ScaleLadder: radius " + std::to_string(ladder.smallest()) + " is below " +
                               std::to_string(kGuardSpacings) + " sample spacings");
  }
  return ladder;
}

ScaleLadder ScaleLadder::down_to(double r0, double ratio, double r_min, double spacing, Normalization mode) {
  if (!(r0 >= r_min) || !(r_min > 0.0)) throw ContractError("ScaleLadder: need r0 >= r_min > 0");
  if (!(ratio > 0.0 && ratio < 1.0)) throw ContractError("ScaleLadder: ratio must lie in (0,1)");
  int count = 1;
  while (r0 * std::pow(ratio, count) >= r_min) ++count;
  return geometric(r0, ratio, count, spacing, mode);
}

DensityScan density_scan(const DiscreteMeasure& mu, const Vector& a, const EllipseField& field, int m,
                         const ScaleLadder& ladder) {
  check_ladder(ladder);
  if (a.size() != mu.dim() || field.dim() != mu.dim()) throw ContractError("density_scan: dimension mismatch");
  if (m < 1 || m > mu.dim()) throw ContractError("density_scan: m must lie in {1, ..., n}");
  DensityScan scan;
  scan.radii = ladder.radii;
  const std::size_t k = ladder.radii.size();
  scan.densities.resize(k);
  parallel_for(k, [&](std::size_t i) {
    const double r = ladder.radii[i];
    scan.densities[i] = unit_mass(blowup_at(mu, a, r, field, std::pow(r, -m), kBlowupWindow));
  });
  double hi = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  scan.all_zero = true;
  for (std::size_t i = 0; i < k; ++i) {
    const double d = scan.densities[i];
    scan.masses.push_back(d * std::pow(ladder.radii[i], m));
    hi = std::max(hi, d);
    lo = std::min(lo, d);
    if (d > 0.0) scan.all_zero = false;
    scan.running_max.push_back(hi);
    scan.running_min.push_back(lo);
    scan.running_gap.push_back(lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity());
  }
  scan.gap_ratio = scan.running_gap.back();
  return scan;
}

const char* to_string(GapVerdict verdict) { return verdict == GapVerdict::small_gap ? "small-gap" : "large-gap"; }

GapVerdict density_gap_verdict(const DensityScan& scan, double threshold) {
  return scan.gap_ratio - 1.0 < threshold ? GapVerdict::small_gap : GapVerdict::large_gap;
}

BlowupSequence blowup_sequence(const DiscreteMeasure& mu, const Vector& a, const EllipseField& field, int m,
                               const ScaleLadder& ladder, double window) {
  check_ladder(ladder);
  if (a.size() != mu.dim() || field.dim() != mu.dim()) throw ContractError("blowup_sequence: dimension mismatch");
  if (!(window > 0.0)) throw ContractError("blowup_sequence: window must be positive");
  const std::size_t k = ladder.radii.size();
  BlowupSequence seq;
  seq.radii = ladder.radii;
  seq.constants.assign(k, 0.0);
  seq.measures.assign(k, DiscreteMeasure(mu.dim()));
  std::vector<char> skipped(k, 0);
  parallel_for(k, [&](std::size_t i) {
    const double r = ladder.radii[i];
    if (ladder.mode == Normalization::power) {
      seq.constants[i] = std::pow(r, -m);
      seq.measures[i] = blowup_at(mu, a, r, field, seq.constants[i], window);
      return;
    }
    const DiscreteMeasure raw = blowup_at(mu, a, r, field, 1.0, window);
    const double mass = unit_mass(raw);
    if (!(mass > 0.0)) {
      skipped[i] = 1;
      return;
    }
    seq.constants[i] = 1.0 / mass;
    seq.measures[i] = raw.scaled(seq.constants[i]);
  });
  for (char s : skipped) seq.skipped.push_back(s != 0);
  return seq;
}

const char* to_string(FlatnessTrend trend) {
  switch (trend) {
    case FlatnessTrend::decreasing:
      return "decreasing";
    case FlatnessTrend::non_vanishing:
      return "non-vanishing";
    case FlatnessTrend::inconclusive:
      return "flat-or-inconclusive";
  }
  return "?";
}

FlatnessProfile flatness_profile(const BlowupSequence& blowups, int m, const ConeOptions& options) {
  if (blowups.measures.empty()) throw ContractError("flatness_profile: no blowups");
  const std::size_t k = blowups.measures.size();
  FlatnessProfile out;
  out.values.assign(k, 1.0);
  out.floors.assign(k, 0.0);
  parallel_for(k, [&](std::size_t i) {
    if (blowups.skipped.size() == k && blowups.skipped[i]) return;
    const ConeDistance d = d_cone_flat(blowups.measures[i], m, 1.0, options);
    out.values[i] = d.value;
    out.floors[i] = d.floor;
  });

  bool monotone = true;
  for (std::size_t i = 1; i < k; ++i) {
    if (out.values[i] > 1.2 * out.values[i - 1] && out.values[i] > out.floors[i]) monotone = false;
  }
  bool large = true;
  for (std::size_t i = 0; i < k; ++i) {
    if (out.values[i] < 2.0 * out.floors[i]) large = false;
  }
  if (k >= 2 && monotone && out.values.back() <= 0.5 * out.values.front()) {
    out.trend = FlatnessTrend::decreasing;
  } else if (large) {
    out.trend = FlatnessTrend::non_vanishing;
  }
  return out;
}

SandwichReport sandwich_check(const DiscreteMeasure& mu, const Vector& a, const EllipseField& field, int m,
                              const ScaleLadder& ladder, const std::vector<double>& r_list) {
  if (ladder.mode != Normalization::power) throw ContractError("sandwich_check: needs a power-mode ladder");
  if (r_list.empty()) throw ContractError("sandwich_check: empty R list");
  for (double R : r_list) {
    if (!(R > 0.0) || R > kBlowupWindow) throw ContractError("sandwich_check: R must lie in (0, window]");
  }
  const DensityScan scan = density_scan(mu, a, field, m, ladder);
  SandwichReport out;
  out.window_min = *std::min_element(scan.densities.begin(), scan.densities.end());
  out.window_max = *std::max_element(scan.densities.begin(), scan.densities.end());
  if (!(out.window_min > 0.0)) throw ContractError("sandwich_check: densities vanish on the window");
  out.slack = 3.0 * ladder.spacing / (ladder.smallest() * ladder.ratio);

  const BlowupSequence seq = blowup_sequence(mu, a, field, m, ladder);
  const std::size_t k = seq.measures.size();
  out.per_scale.assign(k, 0.0);
  parallel_for(k, [&](std::size_t i) {
    double worst = 0.0;
    for (double R : r_list) {
      const double d = mass_in(seq.measures[i], Ball::euclidean(Vector::Zero(mu.dim()), R)) / std::pow(R, m);
      worst = std::max({worst, out.window_min - d, d - out.window_max});
    }
    out.per_scale[i] = worst;
  });
  out.worst_violation = *std::max_element(out.per_scale.begin(), out.per_scale.end());
  out.within_slack = out.worst_violation <= out.slack;
  return out;
}

}  // namespace gmt
