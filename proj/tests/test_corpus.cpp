#include "gmt/corpus.hpp"

#include <doctest.h>

#include <numbers>
#include <sstream>

using namespace gmt;

namespace {

ConfigSection section(const std::string& text) {
  std::istringstream in("[entry]\n" + text);
  return Config::parse(in).section("entry");
}

void check_rebuilds(const CorpusEntry& e) {
  const CorpusEntry again = generate_entry(e.manifest_section());
  CHECK(again.measure.points() == e.measure.points());
  CHECK(again.measure.weights() == e.measure.weights());
  CHECK(again.kind == e.kind);
}

}  // namespace

TEST_CASE("flat and graph generators") {
  const CorpusEntry line = gen_flat(coordinate_frame(2, 1), 1.0, 1.0, 0.01);
  CHECK(line.measure.size() == 201);
  CHECK(line.label == CorpusLabel::rectifiable);
  check_rebuilds(line);

  const GraphFunction sine = graph_sine(1, 0.5, 2.0);
  Vector lo(1), hi(1);
  lo << -1.0;
  hi << 1.0;
  const CorpusEntry graph = gen_graph(sine, lo, hi, 0.01);
  CHECK(graph.measure.size() == 200);
  // Arc length of t -> (t, 0.5 sin 2t) on [-1, 1] by a fine independent sum.
  double arc = 0.0;
  const int k = 200000;
  for (int i = 0; i < k; ++i) {
    const double t = -1.0 + (i + 0.5) * 2.0 / k;
    arc += std::sqrt(1.0 + std::pow(std::cos(2.0 * t), 2)) * 2.0 / k;
  }
  CHECK(graph.measure.total_mass() == doctest::Approx(arc).epsilon(1e-4));
  check_rebuilds(graph);
  Vector bad_hi(1);
  bad_hi << 1.005;
  CHECK_THROWS_AS(gen_graph(sine, lo, bad_hi, 0.01), ContractError);
}

TEST_CASE("cantor, cross, half line, circle, cloud") {
  const CorpusEntry cantor = gen_four_corner_cantor(5);
  CHECK(cantor.measure.size() == 1024);
  CHECK(cantor.measure.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cantor.label == CorpusLabel::purely_unrectifiable);
  CHECK(cantor.measure.points().minCoeff() >= 0.0);
  CHECK(cantor.measure.points().maxCoeff() <= 1.0);
  check_rebuilds(cantor);
  CHECK_THROWS_AS(gen_four_corner_cantor(11), ContractError);

  const CorpusEntry cross = gen_cross(0.01, 1.0);
  CHECK(cross.measure.size() == 401);
  CHECK(cross.measure.total_mass() == doctest::Approx(4.01).epsilon(1e-12));
  check_rebuilds(cross);

  const CorpusEntry half = gen_half_line(3, 0.01, 1.0);
  CHECK(half.measure.size() == 101);
  CHECK(half.measure.dim() == 3);
  check_rebuilds(half);

  const CorpusEntry circle = gen_circle(1.0, 0.001);
  CHECK(circle.measure.total_mass() == doctest::Approx(2 * std::numbers::pi).epsilon(1e-12));
  // A ball of radius r centered on the circle holds arc length 4 asin(r / 2).
  Vector p(2);
  p << 1.0, 0.0;
  const double r = 0.3;
  CHECK(std::abs(mass_in(circle.measure, Ball::euclidean(p, r)) - 4.0 * std::asin(r / 2.0)) <= 2 * circle.spacing);
  check_rebuilds(circle);

  const CorpusEntry cloud = gen_cloud(2, 100, 1.0, 9);
  CHECK(cloud.measure.points().colwise().norm().maxCoeff() <= 1.0);
  CHECK(cloud.measure.weights().minCoeff() >= 0.1);
  check_rebuilds(cloud);
  CHECK(gen_cloud(2, 100, 1.0, 10).measure.points() != cloud.measure.points());
}

TEST_CASE("generate_entry dispatch and manifest") {
  const CorpusEntry e = generate_entry(section("kind = line\nradius = 0.5\nh = 0.01\nname = short\n"));
  CHECK(e.name == "short");
  CHECK(e.measure.size() == 101);
  CHECK_THROWS_AS(generate_entry(section("kind = blob\n")), ConfigError);

  std::ostringstream out;
  write_manifest(out, {e, gen_four_corner_cantor(2)});
  std::istringstream in(out.str());
  const Config manifest = Config::parse(in);
  REQUIRE(manifest.all("entry").size() == 2);
  CHECK(manifest.all("entry")[1]->text("label") == "purely-unrectifiable");
  CHECK(manifest.all("entry")[1]->integer("points") == 16);
}

TEST_CASE("fields and probes") {
  const EllipseField rot = rotating_field(2.0, 1.0);
  Vector a(2);
  a << 0.0, 0.0;
  const Matrix l0 = rot.at(a);
  CHECK(l0(0, 0) == doctest::Approx(2.0));
  CHECK(l0(1, 1) == doctest::Approx(1.0));

  Matrix m1 = Matrix::Identity(2, 2);
  Matrix m2 = 2.0 * m1;
  const EllipseField board = checkerboard_field(m1, m2, 0.5);
  Vector b(2);
  b << 0.75, 0.25;
  CHECK(board.at(a) == m1);
  CHECK(board.at(b) == m2);

  const MatrixField coeff = coefficient_field_from(section("kind = checkerboard\ndim = 2\nlow = 1\nhigh = 3\ncell = 0.5\n"));
  CHECK(coeff(b)(0, 0) == 3.0);

  const auto probes = seeded_probes(2, 10, 1.0, 4, 0.25);
  REQUIRE(probes.size() == 10);
  for (const auto& p : probes) {
    CHECK(std::abs(p[0] / 0.25 - std::round(p[0] / 0.25)) <= 1e-12);
    CHECK(p.cwiseAbs().maxCoeff() <= 1.0);
  }
  CHECK(seeded_probes(2, 3, 1.0, 4)[0] == seeded_probes(2, 3, 1.0, 4)[0]);
  CHECK(matrix_from_list({1, 2, 3, 4}, 2)(0, 1) == 2.0);
  CHECK_THROWS_AS(matrix_from_list({1, 2, 3}, 2), ConfigError);
}
