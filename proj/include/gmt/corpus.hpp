#pragma once

// Deterministic generators for test measures and coefficient fields. Every
// entry records the parameters it was built from; feeding its manifest
// section back to generate_entry() rebuilds the measure bit for bit.

#include "gmt/cone.hpp"
#include "gmt/config.hpp"
#include "gmt/matrix_field.hpp"
#include "gmt/measure.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace gmt {

enum class CorpusLabel { rectifiable, purely_unrectifiable, atomic, mixed };
const char* to_string(CorpusLabel label);

struct CorpusEntry {
  std::string name;
  std::string kind;
  CorpusLabel label = CorpusLabel::rectifiable;
  std::uint64_t seed = 0;
  double spacing = 0.0;  // sample spacing (0 for atomic entries)
  DiscreteMeasure measure{1};
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::pair<std::string, std::string>> truth;  // known values with a short provenance note

  ConfigSection manifest_section() const;
};

// c H^m on span(frame) inside B(0, radius), lattice spacing h.
CorpusEntry gen_flat(const Matrix& frame, double c, double radius, double h);

// Graph t -> (t, f(t)) of a scalar function on an m-dimensional box.
struct GraphFunction {
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;
  std::function<double(const Vector&)> f;
  std::function<Vector(const Vector&)> gradient;
  double lipschitz = 0.0;
};

GraphFunction graph_zero(int m);
// f(t) = amplitude * sin(frequency * t_1).
GraphFunction graph_sine(int m, double amplitude, double frequency);

// Cell midpoints lo + (k + 1/2) h tiling the box [lo, hi] (each side must be a
// multiple of h), weight h^m sqrt(1 + |grad f|^2) at the midpoint.
CorpusEntry gen_graph(const GraphFunction& f, const Vector& lo, const Vector& hi, double h);

// Centers of the 4^k level-k squares of the four-corner construction on
// [0,1]^2, weight 4^{-k} each. k <= 10.
CorpusEntry gen_four_corner_cantor(int depth);

// Both coordinate axes of R^2 on [-extent, extent], spacing h, origin once.
CorpusEntry gen_cross(double h, double extent);

// {t e_1 : 0 <= t <= length} in R^n, spacing h.
CorpusEntry gen_half_line(int n, double h, double length);

// Circle of the given radius in R^2 centered at 0, about 2 pi radius / h equally spaced points.
CorpusEntry gen_circle(double radius, double h);

// `count` points uniform in B(0, radius) in R^n with weights uniform in [0.1, 1].
CorpusEntry gen_cloud(int n, int count, double radius, std::uint64_t seed);

// Dispatch on section["kind"]: flat | line | graph | cantor | cross | half_line | circle | cloud.
CorpusEntry generate_entry(const ConfigSection& section);

void write_manifest(std::ostream& out, const std::vector<CorpusEntry>& entries);

// Ellipse fields Lambda. Section keys: kind = identity | constant | rotating |
// checkerboard | radial, dim, and per kind:
//   constant:     matrix (row-major)
//   rotating:     eccentricity, rate      R(rate a_1) diag(eccentricity, 1) R^T   (dim 2)
//   checkerboard: matrix1, matrix2, cell  by parity of sum floor(a_i / cell)
//   radial:       amplitude               (1 + amplitude min(|a|, 1)) I
EllipseField lambda_field_from(const ConfigSection& section);
EllipseField rotating_field(double eccentricity, double rate);
EllipseField checkerboard_field(const Matrix& m1, const Matrix& m2, double cell);
EllipseField radial_field(int n, double amplitude);

// Coefficient fields A. Section keys: kind = constant | sine | checkerboard |
// holder | radial, dim, and per kind:
//   constant:     matrix (row-major; default identity)
//   sine:         amplitude               I + amplitude sin(x_1) E_11
//   checkerboard: low, high, cell         low I or high I by cell parity
//   holder:       alpha, amplitude        I + amplitude min(|x|, 1)^alpha E_11
//   radial:       amplitude               (1 + amplitude min(|x|, 1)) I
MatrixField coefficient_field_from(const ConfigSection& section);
MatrixField constant_coefficients(const Matrix& a);
MatrixField sine_coefficients(int n, double amplitude);
MatrixField checkerboard_coefficients(int n, double low, double high, double cell);
MatrixField holder_coefficients(int n, double alpha, double amplitude);
MatrixField radial_coefficients(int n, double amplitude);

// `count` seeded points uniform in [-extent, extent]^n. With snap > 0 the
// first coordinate is rounded to a multiple of snap (cell interfaces of a
// checkerboard).
std::vector<Vector> seeded_probes(int n, int count, double extent, std::uint64_t seed, double snap = 0.0);

// Row-major list of n*n numbers into a matrix.
Matrix matrix_from_list(const std::vector<double>& values, int n);

}  // namespace gmt
