#pragma once

// Matrix-valued coefficient fields x -> A(x) and their ball averages by
// midpoint quadrature.

#include "gmt/measure.hpp"

#include <functional>
#include <string>

namespace gmt {

struct MatrixField {
  int dim = 0;
  std::function<Matrix(const Vector&)> eval;
  std::string name;

  Matrix operator()(const Vector& x) const { return eval(x); }
};

struct BallAverage {
  Matrix mean;
  double oscillation = 0.0;  // mean over the ball of |A(z) - mean|_F
  int nodes = 0;
};

// Midpoint rule on the `per_axis`^n cells of the cube circumscribing
// B(center, radius), keeping the cell midpoints inside the ball. The mean is
// accumulated as A(center) + avg(A(z) - A(center)) so that a constant field
// averages to itself exactly.
BallAverage ball_average(const MatrixField& field, const Vector& center, double radius, int per_axis);

}  // namespace gmt
