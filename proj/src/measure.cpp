#include "gmt/measure.hpp"

#include "gmt/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace gmt {

namespace {

void require_dim(int expected, Eigen::Index got, const char* what) {
  if (got != expected) {
    throw ContractError(std::string(what) + ": dimension mismatch (expected " + std::to_string(expected) +
                        ", got " + std::to_string(got) + ")");
  }
}

Matrix checked_inverse(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) throw ContractError(std::string(what) + ": matrix is not square");
  const double det = m.determinant();
  if (!std::isfinite(det) || std::abs(det) < kDeterminantFloor) {
    throw SingularMatrixError(std::string(what) + ": |det| = " + std::to_string(std::abs(det)) +
                              " is below the floor");
  }
  return m.inverse();
}

bool within(double gauge, double radius) { return gauge <= radius * (1.0 + kTieTolerance); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// DiscreteMeasure

DiscreteMeasure::DiscreteMeasure(int dim) : points_(dim, 0), weights_(0) {
  if (dim < 1) throw ContractError("DiscreteMeasure: dim must be >= 1");
}

DiscreteMeasure::DiscreteMeasure(Matrix points, Vector weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.rows() < 1) throw ContractError("DiscreteMeasure: dim must be >= 1");
  if (weights_.size() != points_.cols()) {
    throw ContractError("DiscreteMeasure: weights and points differ in length");
  }
  for (Eigen::Index i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
      throw ContractError("DiscreteMeasure: weights must be finite and nonnegative");
    }
  }
  if (!points_.allFinite()) throw ContractError("DiscreteMeasure: non-finite coordinate");
}

DiscreteMeasure DiscreteMeasure::dirac(const Vector& at, double weight) {
  Matrix p(at.size(), 1);
  p.col(0) = at;
  Vector w(1);
  w[0] = weight;
  return DiscreteMeasure(std::move(p), std::move(w));
}

double DiscreteMeasure::total_mass() const {
  return pairwise_sum(std::span<const double>(weights_.data(), static_cast<std::size_t>(weights_.size())));
}

Eigen::Index DiscreteMeasure::support_size() const { return (weights_.array() > 0.0).count(); }

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
  if (!(factor >= 0.0)) throw ContractError("DiscreteMeasure::scaled: factor must be nonnegative");
  return DiscreteMeasure(points_, weights_ * factor);
}

DiscreteMeasure DiscreteMeasure::compacted() const {
  const Eigen::Index keep = support_size();
  Matrix p(dim(), keep);
  Vector w(keep);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < size(); ++i) {
    if (weights_[i] > 0.0) {
      p.col(k) = points_.col(i);
      w[k] = weights_[i];
      ++k;
    }
  }
  return DiscreteMeasure(std::move(p), std::move(w));
}

DiscreteMeasure DiscreteMeasure::plus(const DiscreteMeasure& other) const {
  require_dim(dim(), other.dim(), "DiscreteMeasure::plus");
  Matrix p(dim(), size() + other.size());
  p << points_, other.points_;
  Vector w(size() + other.size());
  w << weights_, other.weights_;
  return DiscreteMeasure(std::move(p), std::move(w));
}

// ---------------------------------------------------------------------------
// EllipseField

EllipseField::EllipseField(int dim, FieldKind kind, Evaluator evaluator)
    : dim_(dim), kind_(kind), evaluator_(std::move(evaluator)) {
  if (dim < 1) throw ContractError("EllipseField: dim must be >= 1");
  if (!evaluator_) throw ContractError("EllipseField: empty evaluator");
  if (kind_ == FieldKind::constant) {
    constant_ = evaluator_(Vector::Zero(dim_));
    if (constant_->rows() != dim_ || constant_->cols() != dim_) {
      throw ContractError("EllipseField: evaluator returned a matrix of the wrong shape");
    }
    constant_inverse_ = checked_inverse(*constant_, "EllipseField");
  }
}

EllipseField EllipseField::constant(const Matrix& lambda) {
  return EllipseField(static_cast<int>(lambda.rows()), FieldKind::constant, [lambda](const Vector&) { return lambda; });
}

EllipseField EllipseField::identity(int dim) { return constant(Matrix::Identity(dim, dim)); }

Matrix EllipseField::at(const Vector& a) const {
  require_dim(dim_, a.size(), "EllipseField::at");
  if (constant_) return *constant_;
  Matrix m = evaluator_(a);
  if (m.rows() != dim_ || m.cols() != dim_) throw ContractError("EllipseField: wrong matrix shape");
  const double det = m.determinant();
  if (!std::isfinite(det) || std::abs(det) < kDeterminantFloor) {
    throw SingularMatrixError("EllipseField: Lambda(a) is singular at the queried point");
  }
  return m;
}

Matrix EllipseField::inverse_at(const Vector& a) const {
  require_dim(dim_, a.size(), "EllipseField::inverse_at");
  if (constant_inverse_) return *constant_inverse_;
  return checked_inverse(at(a), "EllipseField");
}

// ---------------------------------------------------------------------------
// Ball / Region

Ball::Ball(Vector center, double radius, std::optional<Matrix> inverse)
    : center_(std::move(center)), radius_(radius), inverse_(std::move(inverse)) {
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) throw ContractError("Ball: radius must be positive");
  if (inverse_) require_dim(static_cast<int>(center_.size()), inverse_->rows(), "Ball");
}

Ball Ball::euclidean(Vector center, double radius) { return Ball(std::move(center), radius, std::nullopt); }

Ball Ball::ellipse(Vector center, double radius, const Matrix& lambda) {
  return Ball(std::move(center), radius, checked_inverse(lambda, "Ball::ellipse"));
}

Ball Ball::ellipse(const Vector& center, double radius, const EllipseField& field) {
  return Ball(center, radius, field.inverse_at(center));
}

double Ball::gauge(const Eigen::Ref<const Vector>& y) const {
  if (inverse_) return (*inverse_ * (y - center_)).norm();
  return (y - center_).norm();
}

bool Ball::contains(const Eigen::Ref<const Vector>& y) const { return within(gauge(y), radius_); }

bool Region::contains(const Eigen::Ref<const Vector>& y) const {
  return std::visit(
      [&](const auto& s) -> bool {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, AllSpace>) {
          return true;
        } else if constexpr (std::is_same_v<S, EmptySet>) {
          return false;
        } else if constexpr (std::is_same_v<S, Ball>) {
          return s.contains(y);
        } else if constexpr (std::is_same_v<S, HalfSpace>) {
          return s.normal.dot(y) <= s.offset;
        } else {
          return (y.array() >= s.lower.array()).all() && (y.array() <= s.upper.array()).all();
        }
      },
      shape_);
}

// ---------------------------------------------------------------------------
// AffineMap

AffineMap::AffineMap(Matrix linear, Vector shift) : linear_(std::move(linear)), shift_(std::move(shift)) {
  if (linear_.rows() != linear_.cols() || linear_.rows() != shift_.size()) {
    throw ContractError("AffineMap: inconsistent shapes");
  }
}

AffineMap AffineMap::identity(int dim) { return AffineMap(Matrix::Identity(dim, dim), Vector::Zero(dim)); }

AffineMap AffineMap::linear(const Matrix& m) { return AffineMap(m, Vector::Zero(m.rows())); }

AffineMap AffineMap::rescaling(const Vector& a, double r) {
  if (!(r > 0.0)) throw ContractError("AffineMap::rescaling: r must be positive");
  const auto n = a.size();
  return AffineMap(Matrix::Identity(n, n) / r, -a / r);
}

Vector AffineMap::operator()(const Eigen::Ref<const Vector>& y) const { return linear_ * y + shift_; }

AffineMap AffineMap::after(const AffineMap& inner) const {
  require_dim(dim(), inner.dim(), "AffineMap::after");
  return AffineMap(linear_ * inner.linear_, linear_ * inner.shift_ + shift_);
}

AffineMap AffineMap::inverse() const {
  Matrix inv = checked_inverse(linear_, "AffineMap::inverse");
  Vector s = -(inv * shift_);
  return AffineMap(std::move(inv), std::move(s));
}

// ---------------------------------------------------------------------------
// Operations

double mass_in(const DiscreteMeasure& mu, const Ball& ball) {
  require_dim(mu.dim(), ball.center().size(), "mass_in");
  std::vector<double> hits(static_cast<std::size_t>(mu.size()));
  parallel_for(hits.size(), [&](std::size_t i) {
    const auto idx = static_cast<Eigen::Index>(i);
    hits[i] = ball.contains(mu.point(idx)) ? mu.weight(idx) : 0.0;
  });
  return pairwise_sum(hits);
}

DiscreteMeasure restrict(const DiscreteMeasure& mu, const Region& region) {
  Vector w = mu.weights();
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (w[i] > 0.0 && !region.contains(mu.point(i))) w[i] = 0.0;
  }
  return DiscreteMeasure(mu.points(), std::move(w));
}

DiscreteMeasure pushforward(const DiscreteMeasure& mu, const AffineMap& map) {
  require_dim(mu.dim(), map.dim(), "pushforward");
  checked_inverse(map.linear_part(), "pushforward");
  Matrix p = (map.linear_part() * mu.points()).colwise() + map.shift();
  return DiscreteMeasure(std::move(p), mu.weights());
}

DiscreteMeasure rescale(const DiscreteMeasure& mu, const Vector& a, double r) {
  require_dim(mu.dim(), a.size(), "rescale");
  if (!(r > 0.0)) throw ContractError("rescale: r must be positive");
  Matrix p = (mu.points().colwise() - a) / r;
  return DiscreteMeasure(std::move(p), mu.weights());
}

DiscreteMeasure lambda_rescale(const DiscreteMeasure& mu, const Vector& a, double r, const EllipseField& field) {
  require_dim(mu.dim(), a.size(), "lambda_rescale");
  if (!(r > 0.0)) throw ContractError("lambda_rescale: r must be positive");
  const Matrix inv = field.inverse_at(a);
  Matrix p = inv * ((mu.points().colwise() - a) / r);
  return DiscreteMeasure(std::move(p), mu.weights());
}

double ellipse_nesting_epsilon(const Matrix& m, const Matrix& n) {
  const Matrix m_inv = checked_inverse(m, "ellipse_nesting_epsilon");
  const Matrix n_inv = checked_inverse(n, "ellipse_nesting_epsilon");
  // N B(0,r) c M B(0,(1+eps) r)  iff  |M^{-1} N| <= 1 + eps.
  const double outer = Eigen::JacobiSVD<Matrix>(m_inv * n).singularValues()[0];
  // M B(0,(1-eps) r) c N B(0,r)  iff  (1 - eps) |N^{-1} M| <= 1.
  const double inner = Eigen::JacobiSVD<Matrix>(n_inv * m).singularValues()[0];
  return std::max({0.0, outer - 1.0, 1.0 - 1.0 / inner});
}

EccentricityBuckets::EccentricityBuckets(double eps) : eps_(eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ContractError("EccentricityBuckets: eps must lie in (0, 1)");
}

std::size_t EccentricityBuckets::assign(const Matrix& m) {
  for (std::size_t b = 0; b < representatives_.size(); ++b) {
    if (ellipse_nesting_epsilon(representatives_[b], m) <= eps_) return b;
  }
  representatives_.push_back(m);
  return representatives_.size() - 1;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

DiscreteMeasure read_measure_csv(std::istream& in, std::optional<int> expected_dim) {
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    header = split_commas(t);
    break;
  }
  if (header.size() < 2 || header.back() != "w") throw IoError("measure csv: missing `x1,...,xn,w` header");
  const int dim = static_cast<int>(header.size()) - 1;
  for (int i = 0; i < dim; ++i) {
    if (header[static_cast<std::size_t>(i)] != "x" + std::to_string(i + 1)) {
      throw IoError("measure csv: unexpected header column '" + header[static_cast<std::size_t>(i)] + "'");
    }
  }
  if (expected_dim && *expected_dim != dim) {
    throw IoError("measure csv: file has dimension " + std::to_string(dim) + ", expected " +
                  std::to_string(*expected_dim));
  }
  std::vector<double> coords;
  std::vector<double> weights;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    ++row;
    const auto cells = split_commas(t);
    if (cells.size() != header.size()) {
      throw IoError("measure csv: row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                    " columns, expected " + std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(cells[c], &used);
        if (used != cells[c].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw IoError("measure csv: row " + std::to_string(row) + " has a malformed number");
      }
      if (c + 1 == cells.size()) {
        weights.push_back(v);
      } else {
        coords.push_back(v);
      }
    }
  }
  Matrix p = Eigen::Map<Matrix>(coords.data(), dim, static_cast<Eigen::Index>(weights.size()));
  Vector w = Eigen::Map<Vector>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  try {
    return DiscreteMeasure(std::move(p), std::move(w));
  } catch (const ContractError& e) {
    throw IoError(std::string("measure csv: ") + e.what());
  }
}

DiscreteMeasure read_measure_csv(const std::string& path, std::optional<int> expected_dim) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open measure file '" + path + "'");
  return read_measure_csv(in, expected_dim);
}

void write_measure_csv(std::ostream& out, const DiscreteMeasure& mu, const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  for (int i = 0; i < mu.dim(); ++i) out << 'x' << (i + 1) << ',';
  out << "w\n";
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    for (int i = 0; i < mu.dim(); ++i) out << format_double(mu.points()(i, j)) << ',';
    out << format_double(mu.weight(j)) << '\n';
  }
}

}  // namespace gmt
