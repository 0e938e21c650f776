#pragma once

// Discrete Radon measures (finite weighted point clouds) and the geometric
// primitives the rest of the library is built on: closed balls and ellipses,
// restriction to regions, affine image measures and the rescalings
// T_{a,r}(y) = (y - a) / r and T^Lambda_{a,r}(y) = Lambda(a)^{-1} (y - a) / r.

#include "gmt/errors.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gmt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Closed-ball membership accepts |v| <= r * (1 + kTieTolerance).
inline constexpr double kTieTolerance = 1e-12;

// |det Lambda(a)| below this is treated as singular.
inline constexpr double kDeterminantFloor = 1e-9;

// Finite weighted point set in R^n. Points are stored column-wise.
// Immutable: every operation returns a new measure.
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(int dim);
  DiscreteMeasure(Matrix points, Vector weights);

  static DiscreteMeasure dirac(const Vector& at, double weight = 1.0);

  int dim() const { return static_cast<int>(points_.rows()); }
  Eigen::Index size() const { return points_.cols(); }
  bool empty() const { return points_.cols() == 0; }

  const Matrix& points() const { return points_; }
  const Vector& weights() const { return weights_; }
  Matrix::ConstColXpr point(Eigen::Index i) const { return points_.col(i); }
  double weight(Eigen::Index i) const { return weights_[i]; }

  double total_mass() const;
  // Number of points carrying positive weight.
  Eigen::Index support_size() const;

  DiscreteMeasure scaled(double factor) const;
  // Drops zero-weight points; no operation's output depends on them.
  DiscreteMeasure compacted() const;
  // Sum of two measures (concatenation of atoms).
  DiscreteMeasure plus(const DiscreteMeasure& other) const;

 private:
  Matrix points_;
  Vector weights_;
};

enum class FieldKind { constant, analytic, piecewise };

// a -> Lambda(a) in GL(n, R). Every evaluation is checked against the
// determinant floor.
class EllipseField {
 public:
  using Evaluator = std::function<Matrix(const Vector&)>;

  EllipseField(int dim, FieldKind kind, Evaluator evaluator);

  static EllipseField constant(const Matrix& lambda);
  static EllipseField identity(int dim);

  int dim() const { return dim_; }
  FieldKind kind() const { return kind_; }

  Matrix at(const Vector& a) const;
  Matrix inverse_at(const Vector& a) const;

 private:
  int dim_;
  FieldKind kind_;
  Evaluator evaluator_;
  std::optional<Matrix> constant_;
  std::optional<Matrix> constant_inverse_;
};

// Closed euclidean ball B(a, r) or closed ellipse B_Lambda(a, r) = a + Lambda B(0, r).
class Ball {
 public:
  static Ball euclidean(Vector center, double radius);
  static Ball ellipse(Vector center, double radius, const Matrix& lambda);
  static Ball ellipse(const Vector& center, double radius, const EllipseField& field);

  const Vector& center() const { return center_; }
  double radius() const { return radius_; }
  bool is_ellipse() const { return inverse_.has_value(); }

  // |y - a| (euclidean) or |Lambda^{-1}(y - a)| (ellipse).
  double gauge(const Eigen::Ref<const Vector>& y) const;
  bool contains(const Eigen::Ref<const Vector>& y) const;

 private:
  Ball(Vector center, double radius, std::optional<Matrix> inverse);

  Vector center_;
  double radius_;
  std::optional<Matrix> inverse_;
};

// Half-space {y : <normal, y> <= offset}.
struct HalfSpace {
  Vector normal;
  double offset;
};

// Closed axis-aligned box.
struct Box {
  Vector lower;
  Vector upper;
};

struct AllSpace {};
struct EmptySet {};

// Predicate regions accepted by restrict().
class Region {
 public:
  using Shape = std::variant<AllSpace, EmptySet, Ball, HalfSpace, Box>;

  Region(Shape shape) : shape_(std::move(shape)) {}  // NOLINT(google-explicit-constructor)
  Region(Ball ball) : shape_(std::move(ball)) {}      // NOLINT(google-explicit-constructor)
  Region(HalfSpace half) : shape_(std::move(half)) {}  // NOLINT(google-explicit-constructor)
  Region(Box box) : shape_(std::move(box)) {}          // NOLINT(google-explicit-constructor)

  static Region everything() { return Region(AllSpace{}); }
  static Region nothing() { return Region(EmptySet{}); }

  bool contains(const Eigen::Ref<const Vector>& y) const;

 private:
  Shape shape_;
};

// y -> linear * y + shift.
class AffineMap {
 public:
  AffineMap(Matrix linear, Vector shift);

  static AffineMap identity(int dim);
  static AffineMap linear(const Matrix& m);
  // T_{a,r}(y) = (y - a) / r.
  static AffineMap rescaling(const Vector& a, double r);

  int dim() const { return static_cast<int>(shift_.size()); }
  const Matrix& linear_part() const { return linear_; }
  const Vector& shift() const { return shift_; }

  Vector operator()(const Eigen::Ref<const Vector>& y) const;
  // (this o inner)(y) = this(inner(y)).
  AffineMap after(const AffineMap& inner) const;
  AffineMap inverse() const;

 private:
  Matrix linear_;
  Vector shift_;
};

// mu(ball), closed membership with tie tolerance.
double mass_in(const DiscreteMeasure& mu, const Ball& ball);

// mu restricted to a region: weights outside are zeroed, points are kept.
DiscreteMeasure restrict(const DiscreteMeasure& mu, const Region& region);

// Image measure T[mu]. Throws SingularMatrixError if T is not invertible.
DiscreteMeasure pushforward(const DiscreteMeasure& mu, const AffineMap& map);

// T_{a,r}[mu], evaluated pointwise as (y - a) / r.
DiscreteMeasure rescale(const DiscreteMeasure& mu, const Vector& a, double r);

// T^Lambda_{a,r}[mu], evaluated pointwise as Lambda(a)^{-1} ((y - a) / r).
// Satisfies rescaled(B(0,1)) == mu(B_Lambda(a, r)).
DiscreteMeasure lambda_rescale(const DiscreteMeasure& mu, const Vector& a, double r,
                               const EllipseField& field);

// Smallest eps >= 0 such that
//   B_M(0, (1 - eps) r) c B_N(0, r) c B_M(0, (1 + eps) r)   for all r > 0.
// Two matrices with small nesting eps produce interchangeable ellipses.
double ellipse_nesting_epsilon(const Matrix& m, const Matrix& n);

// Greedy cover of a finite set of GL(n) matrices by buckets whose members all
// satisfy ellipse_nesting_epsilon(representative, member) <= eps.
class EccentricityBuckets {
 public:
  explicit EccentricityBuckets(double eps);

  // Index of the bucket `m` falls into; opens a new bucket when needed.
  std::size_t assign(const Matrix& m);
  std::size_t bucket_count() const { return representatives_.size(); }
  const Matrix& representative(std::size_t bucket) const { return representatives_[bucket]; }

 private:
  double eps_;
  std::vector<Matrix> representatives_;
};

// CSV interchange: header `x1,...,xn,w`, one atom per row. Lines starting
// with '#' are comments.
DiscreteMeasure read_measure_csv(std::istream& in, std::optional<int> expected_dim = std::nullopt);
DiscreteMeasure read_measure_csv(const std::string& path, std::optional<int> expected_dim = std::nullopt);
void write_measure_csv(std::ostream& out, const DiscreteMeasure& mu, const std::string& comment = {});

// Round-trip exact formatting used by every CSV writer.
std::string format_double(double value);

}  // namespace gmt
