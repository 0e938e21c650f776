#pragma once

// Lambda-blowups c_i T^Lambda_{a, r_i}[mu] along a geometric ladder of radii
// and the per-scale diagnostics built on them.

#include "gmt/cone.hpp"
#include "gmt/measure.hpp"

#include <string>
#include <vector>

namespace gmt {

enum class Normalization { mass, power };
const char* to_string(Normalization mode);

// Resolution guard: every radius must be >= kGuardSpacings sample spacings.
inline constexpr double kGuardSpacings = 20.0;

struct ScaleLadder {
  std::vector<double> radii;  // strictly decreasing
  Normalization mode = Normalization::power;
  double spacing = 0.0;
  double ratio = 0.5;

  // r_i = r0 * ratio^i for i < count. Throws ResolutionGuardError when the
  // smallest radius is below the guard.
  static ScaleLadder geometric(double r0, double ratio, int count, double spacing,
                               Normalization mode = Normalization::power);
  // Same, with count chosen as the largest one keeping every radius >= r_min.
  static ScaleLadder down_to(double r0, double ratio, double r_min, double spacing,
                             Normalization mode = Normalization::power);

  double smallest() const { return radii.back(); }
};

struct DensityScan {
  std::vector<double> radii;
  std::vector<double> masses;     // mu(B_Lambda(a, r))
  std::vector<double> densities;  // mass / r^m
  std::vector<double> running_max;
  std::vector<double> running_min;
  std::vector<double> running_gap;  // running_max / running_min
  double gap_ratio = 1.0;           // over the whole window
  bool all_zero = false;
};

DensityScan density_scan(const DiscreteMeasure& mu, const Vector& a, const EllipseField& field, int m,
                         const ScaleLadder& ladder);

enum class GapVerdict { small_gap, large_gap };
const char* to_string(GapVerdict verdict);

// small_gap iff gap_ratio - 1 < threshold.
GapVerdict density_gap_verdict(const DensityScan& scan, double threshold);

inline constexpr double kBlowupWindow = 4.0;

struct BlowupSequence {
  std::vector<double> radii;
  std::vector<double> constants;          // c_i
  std::vector<DiscreteMeasure> measures;  // restricted to B(0, window), zero atoms dropped
  std::vector<bool> skipped;              // empty ellipse under mass normalization
};

BlowupSequence blowup_sequence(const DiscreteMeasure& mu, const Vector& a, const EllipseField& field, int m,
                               const ScaleLadder& ladder, double window = kBlowupWindow);

enum class FlatnessTrend { decreasing, non_vanishing, inconclusive };
const char* to_string(FlatnessTrend trend);

struct FlatnessProfile {
  std::vector<double> values;
  std::vector<double> floors;
  FlatnessTrend trend = FlatnessTrend::inconclusive;
};

// d_1(blowup_i, M_{n,m}) per scale. Trend: decreasing if the last value is at
// most half the first and no step rises by more than 20%; non_vanishing if
// every value is at least twice its floor; inconclusive otherwise.
FlatnessProfile flatness_profile(const BlowupSequence& blowups, int m, const ConeOptions& options = {});

struct SandwichReport {
  double worst_violation = 0.0;  // density units: max over scales and R of the excess outside [min, max]
  double slack = 0.0;            // 3 h / (r_min * rho)
  double window_min = 0.0;
  double window_max = 0.0;
  std::vector<double> per_scale;  // worst violation at each ladder radius
  bool within_slack = true;
};

// For power-mode blowups nu_i = r_i^{-m} T^Lambda_{a,r_i}[mu] checks
//   (min density) R^m <= nu_i(B_R) <= (max density) R^m,
// the densities taken over the ladder window.
SandwichReport sandwich_check(const DiscreteMeasure& mu, const Vector& a, const EllipseField& field, int m,
                              const ScaleLadder& ladder, const std::vector<double>& r_list);

}  // namespace gmt
