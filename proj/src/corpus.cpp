#include "gmt/corpus.hpp"

#include "gmt/cone.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace gmt {

namespace {

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

std::string join(const Matrix& m) {
  return join(std::vector<double>(m.data(), m.data() + m.size()));
}

std::vector<double> to_list(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

DiscreteMeasure from_points(const std::vector<Vector>& pts, const std::vector<double>& wts, int n) {
  Matrix p(n, static_cast<Eigen::Index>(pts.size()));
  Vector w(static_cast<Eigen::Index>(wts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    p.col(static_cast<Eigen::Index>(i)) = pts[i];
    w[static_cast<Eigen::Index>(i)] = wts[i];
  }
  return DiscreteMeasure(std::move(p), std::move(w));
}

Matrix square_from(const ConfigSection& s, const std::string& key, int n) {
  return matrix_from_list(s.numbers(key), n);
}

int dim_of(const ConfigSection& s, int fallback) {
  const long long n = s.integer("dim", fallback);
  if (n < 1 || n > 16) throw ConfigError("[" + s.name + "] dim must lie in 1..16");
  return static_cast<int>(n);
}

}  // namespace

const char* to_string(CorpusLabel label) {
  switch (label) {
    case CorpusLabel::rectifiable:
      return "rectifiable";
    case CorpusLabel::purely_unrectifiable:
      return "purely-unrectifiable";
    case CorpusLabel::atomic:
      return "atomic";
    case CorpusLabel::mixed:
      return "mixed";
  }
  return "?";
}

ConfigSection CorpusEntry::manifest_section() const {
  ConfigSection s{"entry", {}};
  s.set("name", name);
  s.set("kind", kind);
  s.set("label", to_string(label));
  s.set("seed", std::to_string(seed));
  for (const auto& [k, v] : params) s.set(k, v);
  s.set("points", std::to_string(measure.size()));
  for (const auto& [k, v] : truth) s.set("truth." + k, v);
  return s;
}

CorpusEntry gen_flat(const Matrix& frame, double c, double radius, double h) {
  CorpusEntry e;
  e.kind = "flat";
  e.name = "flat_n" + std::to_string(frame.rows()) + "_m" + std::to_string(frame.cols());
  e.label = CorpusLabel::rectifiable;
  e.spacing = h;
  e.measure = sample_flat({frame, c, h}, radius);
  e.params = {{"dim", std::to_string(frame.rows())},
              {"m", std::to_string(frame.cols())},
              {"frame", join(frame)},
              {"c", format_double(c)},
              {"radius", format_double(radius)},
              {"h", format_double(h)}};
  const double ball = std::pow(std::numbers::pi, 0.5 * frame.cols()) / std::tgamma(0.5 * frame.cols() + 1.0);
  e.truth = {{"density", format_double(c * ball) + " (c times the volume of the unit m-ball)"}};
  return e;
}

GraphFunction graph_zero(int m) {
  GraphFunction g;
  g.name = "zero";
  g.f = [](const Vector&) { return 0.0; };
  g.gradient = [m](const Vector&) { return Vector::Zero(m); };
  g.lipschitz = 0.0;
  return g;
}

GraphFunction graph_sine(int m, double amplitude, double frequency) {
  GraphFunction g;
  g.name = "sine";
  g.params = {{"amplitude", format_double(amplitude)}, {"frequency", format_double(frequency)}};
  g.f = [=](const Vector& t) { return amplitude * std::sin(frequency * t[0]); };
  g.gradient = [=](const Vector& t) {
    Vector d = Vector::Zero(m);
    d[0] = amplitude * frequency * std::cos(frequency * t[0]);
    return d;
  };
  g.lipschitz = std::abs(amplitude * frequency);
  return g;
}

CorpusEntry gen_graph(const GraphFunction& f, const Vector& lo, const Vector& hi, double h) {
  const auto m = static_cast<int>(lo.size());
  if (m < 1 || hi.size() != m) throw ContractError("gen_graph: box bounds must have equal positive length");
  if (!(h > 0.0)) throw ContractError("gen_graph: spacing must be positive");
  std::vector<long long> cells(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double width = hi[i] - lo[i];
    if (!(width > 0.0)) throw ContractError("gen_graph: empty box");
    const long long k = std::llround(width / h);
    if (k < 1 || std::abs(static_cast<double>(k) * h - width) > 1e-9 * width) {
      throw ContractError("gen_graph: box sides must be multiples of h");
    }
    cells[static_cast<std::size_t>(i)] = k;
  }
  std::vector<Vector> pts;
  std::vector<double> wts;
  std::vector<long long> k(static_cast<std::size_t>(m), 0);
  Vector t(m);
  Vector p(m + 1);
  const double cell = std::pow(h, m);
  while (true) {
    for (int i = 0; i < m; ++i) t[i] = lo[i] + (static_cast<double>(k[static_cast<std::size_t>(i)]) + 0.5) * h;
    p.head(m) = t;
    p[m] = f.f(t);
    pts.push_back(p);
    wts.push_back(cell * std::sqrt(1.0 + f.gradient(t).squaredNorm()));
    int i = m - 1;
    while (i >= 0 && k[static_cast<std::size_t>(i)] == cells[static_cast<std::size_t>(i)] - 1) {
      k[static_cast<std::size_t>(i--)] = 0;
    }
    if (i < 0) break;
    ++k[static_cast<std::size_t>(i)];
  }
  CorpusEntry e;
  e.kind = "graph";
  e.name = "graph_" + f.name;
  e.label = CorpusLabel::rectifiable;
  e.spacing = h;
  e.measure = from_points(pts, wts, m + 1);
  e.params = {{"dim", std::to_string(m + 1)}, {"function", f.name}};
  for (const auto& kv : f.params) e.params.push_back(kv);
  e.params.emplace_back("lo", join(to_list(lo)));
  e.params.emplace_back("hi", join(to_list(hi)));
  e.params.emplace_back("h", format_double(h));
  e.params.emplace_back("lipschitz", format_double(f.lipschitz));
  e.truth = {{"density", "2 sqrt(1 + f'(t)^2) per unit length of t at a point (t, f(t)) (m = 1)"}};
  return e;
}

CorpusEntry gen_four_corner_cantor(int depth) {
  if (depth < 0 || depth > 10) throw ContractError("gen_four_corner_cantor: depth must lie in 0..10");
  const long long count = 1LL << (2 * depth);
  const double side = std::ldexp(1.0, -2 * depth);
  std::vector<Vector> pts;
  std::vector<double> wts;
  pts.reserve(static_cast<std::size_t>(count));
  for (long long code = 0; code < count; ++code) {
    // Two bits per level: bit 0 picks the x offset, bit 1 the y offset.
    Vector p = Vector::Constant(2, 0.5 * side);
    for (int j = 1; j <= depth; ++j) {
      const long long digit = (code >> (2 * (depth - j))) & 3;
      const double offset = 0.75 * std::ldexp(1.0, -2 * (j - 1));
      if (digit & 1) p[0] += offset;
      if (digit & 2) p[1] += offset;
    }
    pts.push_back(p);
    wts.push_back(side);
  }
  CorpusEntry e;
  e.kind = "cantor";
  e.name = "four_corner_cantor_k" + std::to_string(depth);
  e.label = CorpusLabel::purely_unrectifiable;
  e.spacing = side;
  e.measure = from_points(pts, wts, 2);
  e.params = {{"dim", "2"}, {"depth", std::to_string(depth)}};
  e.truth = {{"total_mass", "1 (4^k atoms of weight 4^-k)"},
             {"ball_mass", "mu(B(corner, 4^-j)) about 4^-j for j < k (self-similarity)"}};
  return e;
}

CorpusEntry gen_cross(double h, double extent) {
  if (!(h > 0.0) || !(extent >= 10.0 * h)) throw ContractError("gen_cross: need h > 0 and extent >= 10 h");
  const auto reach = static_cast<long long>(std::floor(extent / h * (1.0 + kTieTolerance)));
  std::vector<Vector> pts;
  std::vector<double> wts;
  for (long long k = -reach; k <= reach; ++k) {
    Vector p(2);
    p << static_cast<double>(k) * h, 0.0;
    pts.push_back(p);
    wts.push_back(h);
  }
  for (long long k = -reach; k <= reach; ++k) {
    if (k == 0) continue;
    Vector p(2);
    p << 0.0, static_cast<double>(k) * h;
    pts.push_back(p);
    wts.push_back(h);
  }
  CorpusEntry e;
  e.kind = "cross";
  e.name = "cross";
  e.label = CorpusLabel::mixed;
  e.spacing = h;
  e.measure = from_points(pts, wts, 2);
  e.params = {{"dim", "2"}, {"h", format_double(h)}, {"extent", format_double(extent)}};
  e.truth = {{"symmetry_defect_at_0", "0 (both axes are odd-symmetric about 0)"},
             {"total_mass", "4 extent (+ h from the shared origin node)"}};
  return e;
}

CorpusEntry gen_half_line(int n, double h, double length) {
  if (n < 1) throw ContractError("gen_half_line: n must be >= 1");
  if (!(h > 0.0) || !(length >= 10.0 * h)) throw ContractError("gen_half_line: need h > 0 and length >= 10 h");
  const auto reach = static_cast<long long>(std::floor(length / h * (1.0 + kTieTolerance)));
  Matrix p = Matrix::Zero(n, reach + 1);
  for (long long k = 0; k <= reach; ++k) p(0, k) = static_cast<double>(k) * h;
  CorpusEntry e;
  e.kind = "half_line";
  e.name = "half_line";
  e.label = CorpusLabel::rectifiable;
  e.spacing = h;
  e.measure = DiscreteMeasure(std::move(p), Vector::Constant(reach + 1, h));
  e.params = {{"dim", std::to_string(n)}, {"h", format_double(h)}, {"length", format_double(length)}};
  e.truth = {{"symmetry_defect_0_r_R", "ln(R / r) (m = 1, int_r^R dt / t)"}};
  return e;
}

CorpusEntry gen_circle(double radius, double h) {
  if (!(radius > 0.0) || !(h > 0.0) || h > radius) throw ContractError("gen_circle: need 0 < h <= radius");
  const auto count = static_cast<long long>(std::llround(2.0 * std::numbers::pi * radius / h));
  const double w = 2.0 * std::numbers::pi * radius / static_cast<double>(count);
  Matrix p(2, count);
  for (long long k = 0; k < count; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    p(0, k) = radius * std::cos(t);
    p(1, k) = radius * std::sin(t);
  }
  CorpusEntry e;
  e.kind = "circle";
  e.name = "circle";
  e.label = CorpusLabel::rectifiable;
  e.spacing = w;
  e.measure = DiscreteMeasure(std::move(p), Vector::Constant(count, w));
  e.params = {{"dim", "2"}, {"radius", format_double(radius)}, {"h", format_double(h)}};
  e.truth = {{"ball_mass", "4 R asin(r / (2 R)) for a ball of radius r centered on the circle"}};
  return e;
}

CorpusEntry gen_cloud(int n, int count, double radius, std::uint64_t seed) {
  if (n < 1 || count < 1 || !(radius > 0.0)) throw ContractError("gen_cloud: bad parameters");
  std::mt19937_64 rng(seed);
  Matrix p(n, count);
  Vector w(count);
  for (int i = 0; i < count; ++i) {
    Vector x(n);
    do {
      for (int k = 0; k < n; ++k) x[k] = 2.0 * uniform01(rng) - 1.0;
    } while (x.squaredNorm() > 1.0);
    p.col(i) = radius * x;
    w[i] = 0.1 + 0.9 * uniform01(rng);
  }
  CorpusEntry e;
  e.kind = "cloud";
  e.name = "cloud";
  e.label = CorpusLabel::atomic;
  e.seed = seed;
  e.measure = DiscreteMeasure(std::move(p), std::move(w));
  e.params = {{"dim", std::to_string(n)}, {"count", std::to_string(count)}, {"radius", format_double(radius)}};
  return e;
}

CorpusEntry generate_entry(const ConfigSection& s) {
  const std::string kind = s.text("kind");
  CorpusEntry e = [&]() -> CorpusEntry {
    if (kind == "flat" || kind == "line") {
      const int n = dim_of(s, 2);
      const int m = static_cast<int>(s.integer("m", 1));
      Matrix frame = coordinate_frame(n, m);
      if (s.find("frame")) {
        const auto v = s.numbers("frame");
        if (v.size() != static_cast<std::size_t>(n * m)) throw ConfigError("[" + s.name + "] frame must hold n*m numbers");
        frame = Eigen::Map<const Matrix>(v.data(), n, m);
      }
      return gen_flat(frame, s.number("c", 1.0), s.number("radius", 1.0), s.number("h", 1e-3));
    }
    if (kind == "graph") {
      const int n = dim_of(s, 2);
      const std::string fn = s.text("function", "sine");
      const GraphFunction f = fn == "zero"   ? graph_zero(n - 1)
                              : fn == "sine" ? graph_sine(n - 1, s.number("amplitude", 0.1), s.number("frequency", 1.0))
                                             : throw ConfigError("[" + s.name + "] unknown graph function '" + fn + "'");
      const auto lo = s.numbers("lo", std::vector<double>(static_cast<std::size_t>(n - 1), -2.0));
      const auto hi = s.numbers("hi", std::vector<double>(static_cast<std::size_t>(n - 1), 2.0));
      if (lo.size() != static_cast<std::size_t>(n - 1) || hi.size() != lo.size()) {
        throw ConfigError("[" + s.name + "] lo/hi must have dim - 1 entries");
      }
      return gen_graph(f, Eigen::Map<const Vector>(lo.data(), n - 1), Eigen::Map<const Vector>(hi.data(), n - 1),
                       s.number("h", 1e-3));
    }
    if (kind == "cantor") return gen_four_corner_cantor(static_cast<int>(s.integer("depth", 7)));
    if (kind == "cross") return gen_cross(s.number("h", 1e-3), s.number("extent", 1.0));
    if (kind == "half_line") return gen_half_line(dim_of(s, 2), s.number("h", 1e-3), s.number("length", 2.0));
    if (kind == "circle") return gen_circle(s.number("radius", 1.0), s.number("h", 1e-3));
    if (kind == "cloud") {
      return gen_cloud(dim_of(s, 2), static_cast<int>(s.integer("count", 50)), s.number("radius", 1.0),
                       static_cast<std::uint64_t>(s.integer("seed", 1)));
    }
    throw ConfigError("[" + s.name + "] unknown measure kind '" + kind + "'");
  }();
  if (s.find("name")) e.name = s.text("name");
  return e;
}

void write_manifest(std::ostream& out, const std::vector<CorpusEntry>& entries) {
  out << "# gmt-lab corpus manifest\n";
  for (const auto& e : entries) {
    const ConfigSection s = e.manifest_section();
    out << "[entry]\n";
    for (const auto& [k, v] : s.entries) out << k << '=' << v << '\n';
  }
}

Matrix matrix_from_list(const std::vector<double>& values, int n) {
  if (values.size() != static_cast<std::size_t>(n * n)) {
    throw ConfigError("matrix: expected " + std::to_string(n * n) + " entries");
  }
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = values[static_cast<std::size_t>(i * n + j)];
  }
  return m;
}

EllipseField rotating_field(double eccentricity, double rate) {
  if (!(eccentricity > 0.0)) throw ContractError("rotating_field: eccentricity must be positive");
  return EllipseField(2, FieldKind::analytic, [=](const Vector& a) {
    const double t = rate * a[0];
    Matrix r(2, 2);
    r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    Matrix d = Matrix::Identity(2, 2);
    d(0, 0) = eccentricity;
    return Matrix(r * d * r.transpose());
  });
}

EllipseField checkerboard_field(const Matrix& m1, const Matrix& m2, double cell) {
  if (!(cell > 0.0)) throw ContractError("checkerboard_field: cell must be positive");
  if (m1.rows() != m2.rows() || m1.rows() != m1.cols() || m2.rows() != m2.cols()) {
    throw ContractError("checkerboard_field: matrices must be square and of equal size");
  }
  return EllipseField(static_cast<int>(m1.rows()), FieldKind::piecewise, [=](const Vector& a) {
    long long parity = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) parity += static_cast<long long>(std::floor(a[i] / cell));
    return (parity % 2 == 0) ? m1 : m2;
  });
}

EllipseField radial_field(int n, double amplitude) {
  return EllipseField(n, FieldKind::analytic, [=](const Vector& a) {
    return Matrix((1.0 + amplitude * std::min(a.norm(), 1.0)) * Matrix::Identity(n, n));
  });
}

EllipseField lambda_field_from(const ConfigSection& s) {
  const std::string kind = s.text("kind", "identity");
  const int n = dim_of(s, 2);
  if (kind == "identity") return EllipseField::identity(n);
  if (kind == "constant") return EllipseField::constant(square_from(s, "matrix", n));
  if (kind == "rotating") {
    if (n != 2) throw ConfigError("[" + s.name + "] rotating field needs dim = 2");
    return rotating_field(s.number("eccentricity", 2.0), s.number("rate", 1.0));
  }
  if (kind == "checkerboard") {
    return checkerboard_field(square_from(s, "matrix1", n), square_from(s, "matrix2", n), s.number("cell", 0.5));
  }
  if (kind == "radial") return radial_field(n, s.number("amplitude", 1.0));
  throw ConfigError("[" + s.name + "] unknown ellipse field kind '" + kind + "'");
}

MatrixField constant_coefficients(const Matrix& a) {
  return MatrixField{static_cast<int>(a.rows()), [a](const Vector&) { return a; }, "constant"};
}

MatrixField sine_coefficients(int n, double amplitude) {
  return MatrixField{n,
                     [=](const Vector& x) {
                       Matrix a = Matrix::Identity(n, n);
                       a(0, 0) += amplitude * std::sin(x[0]);
                       return a;
                     },
                     "sine"};
}

MatrixField checkerboard_coefficients(int n, double low, double high, double cell) {
  if (!(cell > 0.0)) throw ContractError("checkerboard_coefficients: cell must be positive");
  return MatrixField{n,
                     [=](const Vector& x) {
                       long long parity = 0;
                       for (Eigen::Index i = 0; i < x.size(); ++i) parity += static_cast<long long>(std::floor(x[i] / cell));
                       return Matrix(((parity % 2 == 0) ? low : high) * Matrix::Identity(n, n));
                     },
                     "checkerboard"};
}

MatrixField holder_coefficients(int n, double alpha, double amplitude) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ContractError("holder_coefficients: alpha must lie in (0, 1]");
  return MatrixField{n,
                     [=](const Vector& x) {
                       Matrix a = Matrix::Identity(n, n);
                       a(0, 0) += amplitude * std::pow(std::min(x.norm(), 1.0), alpha);
                       return a;
                     },
                     "holder"};
}

MatrixField radial_coefficients(int n, double amplitude) {
  return MatrixField{n,
                     [=](const Vector& x) {
                       return Matrix((1.0 + amplitude * std::min(x.norm(), 1.0)) * Matrix::Identity(n, n));
                     },
                     "radial"};
}

MatrixField coefficient_field_from(const ConfigSection& s) {
  const std::string kind = s.text("kind", "constant");
  const int n = dim_of(s, 2);
  if (kind == "constant") {
    return constant_coefficients(s.find("matrix") ? square_from(s, "matrix", n) : Matrix::Identity(n, n));
  }
  if (kind == "sine") return sine_coefficients(n, s.number("amplitude", 0.1));
  if (kind == "checkerboard") {
    return checkerboard_coefficients(n, s.number("low", 1.0), s.number("high", 2.0), s.number("cell", 0.25));
  }
  if (kind == "holder") return holder_coefficients(n, s.number("alpha", 0.5), s.number("amplitude", 0.5));
  if (kind == "radial") return radial_coefficients(n, s.number("amplitude", 1.0));
  throw ConfigError("[" + s.name + "] unknown coefficient field kind '" + kind + "'");
}

std::vector<Vector> seeded_probes(int n, int count, double extent, std::uint64_t seed, double snap) {
  if (n < 1 || count < 1 || !(extent > 0.0)) throw ContractError("seeded_probes: bad parameters");
  std::mt19937_64 rng(seed);
  std::vector<Vector> out;
  for (int i = 0; i < count; ++i) {
    Vector x(n);
    for (int k = 0; k < n; ++k) x[k] = extent * (2.0 * uniform01(rng) - 1.0);
    if (snap > 0.0) x[0] = snap * std::round(x[0] / snap);
    out.push_back(x);
  }
  return out;
}

}  // namespace gmt
