#include "gmt/cone.hpp"
#include "gmt/corpus.hpp"
#include "gmt/lip_metric.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <numbers>

using namespace gmt;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Matrix direction(double angle) {
  Matrix f(2, 1);
  f << std::cos(angle), std::sin(angle);
  return f;
}

}  // namespace

TEST_CASE("sample_flat masses") {
  const double h = 1e-3;
  const DiscreteMeasure line = sample_flat({coordinate_frame(2, 1), 1.0, h}, 1.0);
  CHECK(std::abs(line.total_mass() - 2.0) <= 2 * h);
  const DiscreteMeasure disc = sample_flat({coordinate_frame(3, 2), 1.0, 0.01}, 1.0);
  CHECK(std::abs(disc.total_mass() - std::numbers::pi) <= 0.05);
  const DiscreteMeasure tilted = sample_flat({direction(0.7), 2.0, h}, 0.5);
  CHECK(std::abs(tilted.total_mass() - 2.0) <= 4 * h);
  CHECK_THROWS_AS(sample_flat({coordinate_frame(2, 1), 1.0, 0.2}, 1.0), ContractError);
  CHECK_THROWS_AS(coordinate_frame(2, 0), ContractError);
  Matrix skew(2, 1);
  skew << 1.0, 0.5;
  CHECK_THROWS_AS(sample_flat({skew, 1.0, h}, 1.0), ContractError);
}

TEST_CASE("symmetry defect") {
  const double h = 1e-4;
  const DiscreteMeasure line = gen_flat(coordinate_frame(2, 1), 1.0, 0.2, h).measure;
  CHECK(symmetry_defect(line, Vector::Zero(2), 0.01, 0.1, 1) <= 1e-9);
  const DiscreteMeasure cross = gen_cross(h, 0.2).measure;
  CHECK(symmetry_defect(cross, Vector::Zero(2), 0.01, 0.1, 1) <= 1e-9);
  const DiscreteMeasure half = gen_half_line(2, h, 0.2).measure;
  CHECK(symmetry_defect(half, Vector::Zero(2), 0.01, 0.1, 1) == doctest::Approx(std::log(10.0)).epsilon(0.01));

  // Mass outside the annulus does not matter.
  const DiscreteMeasure extra = line.plus(DiscreteMeasure::dirac(v2(0.5, 0.3), 4.0)).plus(DiscreteMeasure::dirac(v2(0.001, 0.0), 2.0));
  CHECK(symmetry_defect(extra, Vector::Zero(2), 0.01, 0.1, 1) == symmetry_defect(line, Vector::Zero(2), 0.01, 0.1, 1));
}

TEST_CASE("uniformity defect") {
  const DiscreteMeasure line = gen_flat(coordinate_frame(2, 1), 1.0, 1.0, 1e-3).measure;
  const DefectReport flat = uniformity_defect(line, 1, 20, {0.05, 0.1, 0.2}, 3);
  CHECK(flat.value <= 0.02);
  CHECK(flat.power_spread <= 1.05);

  const DiscreteMeasure lumpy = line.plus(DiscreteMeasure::dirac(Vector::Zero(2), 1.0));
  const DefectReport bad = uniformity_defect(lumpy, 1, 40, {0.05, 0.1}, 3);
  CHECK(bad.value >= 0.5);

  const DiscreteMeasure circle = gen_circle(1.0, 1e-3).measure;
  const DefectReport round = uniformity_defect(circle, 1, 20, {0.05, 0.1, 0.2}, 5);
  CHECK(round.value <= 0.03);
  CHECK(round.inner_half_fallback);
}

TEST_CASE("d_cone of flat and atomic measures") {
  const DiscreteMeasure line = gen_flat(direction(0.3), 1.0, 1.5, 1e-3).measure;
  const ConeDistance flat = d_cone_flat(line, 1, 1.0);
  CHECK(flat.value <= 0.02 + flat.floor);
  CHECK(flat.value >= 0.0);
  CHECK(std::abs(std::abs(flat.frame(0, 0) * std::cos(0.3) + flat.frame(1, 0) * std::sin(0.3))) >= 0.99);

  const DiscreteMeasure atom = DiscreteMeasure::dirac(Vector::Zero(2));
  const ConeDistance a = d_cone_flat(atom, 1, 1.0, ConeOptions{0.05, 150, 1e-3, 1});
  CHECK(a.value <= 1.0);

  // Independent evaluation for one direction: every line through 0 gives the
  // same value by symmetry, so the minimum equals it up to the sampling floor.
  const DiscreteMeasure candidate = sample_flat({direction(0.0), 1.0, 0.05}, 1.0);
  const double norm = f_ball_mass(candidate, 1.0);
  const DiscreteMeasure unit(candidate.points(), candidate.weights() / norm);
  const double expected = oracle::brute_f_ball(atom, unit, 1.0);
  CHECK(expected == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(a.value - expected) <= a.floor + 1e-6);

  const ConeDistance empty = d_cone_flat(DiscreteMeasure::dirac(v2(3, 0)), 1, 1.0);
  CHECK(empty.value == 1.0);
  CHECK_THROWS_AS(d_cone_flat(atom, 0, 1.0), ContractError);
}

TEST_CASE("d_cone scale identity") {
  const DiscreteMeasure cross = gen_cross(2e-3, 1.5).measure;
  const ConeDistance unit = d_cone_flat(cross, 1, 1.0);
  const DiscreteMeasure shrunk = pushforward(cross, AffineMap::rescaling(Vector::Zero(2), 1.0 / 0.5));
  const ConeDistance small = d_cone_flat(shrunk, 1, 0.5);
  CHECK(std::abs(unit.value - small.value) <= 1e-3);
  CHECK(unit.value >= 0.3);
}
