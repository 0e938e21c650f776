// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "gmt/blowup.hpp"
#include "gmt/cone.hpp"
#include "gmt/corpus.hpp"
#include "gmt/kernels.hpp"
#include "gmt/lip_metric.hpp"
#include "gmt/moduli.hpp"
#include "support/cli_runner.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace gmt;

namespace {

// d_1 of the cross sample (h = 1e-3, extent 1) at the origin, from the first run.
constexpr double kCrossBaseline = 0.415486;
constexpr double kCrossBaselineTolerance = 2e-3;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix random_spd(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix b(n, n);
  for (int i = 0; i < n * n; ++i) b.data()[i] = g(rng);
  return b * b.transpose() + 0.3 * Matrix::Identity(n, n);
}

Vector random_point(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

void metric_suite(Outcome& o) {
  double sym = 0.0, tri = 0.0, scaling = 0.0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const DiscreteMeasure a = gen_cloud(2, 25, 1.5, 1000 + 3 * k).measure;
    const DiscreteMeasure b = gen_cloud(2, 25, 1.5, 1001 + 3 * k).measure;
    const DiscreteMeasure c = gen_cloud(2, 25, 1.5, 1002 + 3 * k).measure;
    const double ab = f_ball(a, b, 1.0);
    sym = std::max(sym, std::abs(ab - f_ball(b, a, 1.0)));
    tri = std::max(tri, ab - f_ball(a, c, 1.0) - f_ball(c, b, 1.0));
    for (double r : {0.5, 2.0, 5.0}) scaling = std::max(scaling, f_scaling_residual(a, b, r));
  }
  o.detail << "symmetry=" << sym << " triangle_excess=" << std::max(tri, 0.0) << " scaling=" << scaling;
  o.require(sym <= 1e-7, "symmetry");
  o.require(tri <= 1e-7, "triangle");
  o.require(scaling <= 1e-7, "scaling identity");
}

void density_truth(Outcome& o) {
  const DiscreteMeasure line = gen_flat(coordinate_frame(2, 1), 1.0, 1.0, 1e-3).measure;
  const ScaleLadder ladder = ScaleLadder::down_to(0.5, 0.8, 0.05, 1e-3);
  Matrix l = Matrix::Identity(2, 2);
  l(0, 0) = 2.0;
  const DensityScan iso = density_scan(line, Vector::Zero(2), EllipseField::identity(2), 1, ladder);
  const DensityScan aniso = density_scan(line, Vector::Zero(2), EllipseField::constant(l), 1, ladder);
  double e_iso = 0.0, e_aniso = 0.0;
  for (double d : iso.densities) e_iso = std::max(e_iso, std::abs(d - 2.0));
  for (double d : aniso.densities) e_aniso = std::max(e_aniso, std::abs(d - 4.0));
  o.detail << "radii=" << iso.radii.size() << " max|d-2|=" << e_iso << " max|d-4|=" << e_aniso;
  o.require(iso.radii.front() == 0.5 && iso.radii.back() >= 0.05 && iso.radii.back() * 0.8 < 0.05, "ladder span");
  o.require(e_iso <= 0.02, "identity field");
  o.require(e_aniso <= 0.04, "diag(2,1) field");
}

void pv_dichotomy(Outcome& o) {
  const KernelSpec riesz = KernelSpec::riesz(EllipseField::identity(2), 1);
  const double h = 1e-3;
  // Tops slightly off dyadic values keep lattice points off the truncation spheres.
  const std::vector<double> smooth_ladder = halving_ladder(0.1 * 1.0137, 5);
  PvScanOptions smooth;
  smooth.spacing = h;
  smooth.outer = 0.25;

  auto smooth_count = [&](const DiscreteMeasure& mu, double& worst) {
    int ok = 0;
    for (Eigen::Index k = 0; k < 20; ++k) {
      const PvScan s = pv_convergence_scan(riesz, mu, mu.point(500 + 150 * k), smooth_ladder, smooth);
      worst = std::max(worst, s.norms.back());
      if (s.verdict == PvVerdict::converged && s.norms.back() <= 0.05) ++ok;
    }
    return ok;
  };
  double line_worst = 0.0, graph_worst = 0.0;
  Vector lo(1), hi(1);
  lo << -2.0;
  hi << 2.0;
  const int line_ok = smooth_count(gen_flat(coordinate_frame(2, 1), 1.0, 2.0, h).measure, line_worst);
  const int graph_ok = smooth_count(gen_graph(graph_sine(1, 0.1, 1.0), lo, hi, h).measure, graph_worst);

  const double hh = 1e-4;
  PvScanOptions half_opts;
  half_opts.spacing = hh;
  const PvScan half = pv_convergence_scan(riesz, gen_half_line(2, hh, 2.0).measure, Vector::Zero(2),
                                          halving_ladder(0.4, 7), half_opts);
  double growth_err = 0.0;
  for (std::size_t i = 1; i < half.norms.size(); ++i) {
    growth_err = std::max(growth_err, std::abs(half.norms[i] - half.norms[i - 1] - std::log(2.0)) / std::log(2.0));
  }

  const CorpusEntry cantor = gen_four_corner_cantor(7);
  PvScanOptions cantor_opts;
  cantor_opts.spacing = cantor.spacing;
  int oscillating = 0;
  for (Eigen::Index k = 0; k < 20; ++k) {
    const Vector x = cantor.measure.point((k * 7919) % cantor.measure.size());
    const PvScan s = pv_convergence_scan(riesz, cantor.measure, x, halving_ladder(0.25 * 1.0137, 9), cantor_opts);
    if (s.verdict == PvVerdict::oscillating) ++oscillating;
  }
  o.detail << "line=" << line_ok << "/20 (max norm " << line_worst << ") graph=" << graph_ok << "/20 (max norm "
           << graph_worst << ") half_line=" << to_string(half.verdict) << " growth_err=" << growth_err
           << " cantor_oscillating=" << oscillating << "/20";
  o.require(line_ok == 20, "line converged");
  o.require(graph_ok == 20, "graph converged");
  o.require(half.verdict == PvVerdict::diverging && growth_err <= 0.05, "half-line diverging at ln 2 per rung");
  o.require(oscillating >= 15, "cantor oscillating");
}

void symmetry_oracle(Outcome& o) {
  const double half = symmetry_defect(gen_half_line(2, 1e-3, 2.0).measure, Vector::Zero(2), 0.1, 1.0, 1);
  const DiscreteMeasure cross = gen_cross(1e-3, 1.0).measure;
  const double cross_defect = symmetry_defect(cross, Vector::Zero(2), 0.1, 1.0, 1);
  const ConeDistance d = d_cone_flat(cross, 1, 1.0);
  o.detail << "half_line=" << half << " (ln 10 = " << std::log(10.0) << ") cross_defect=" << cross_defect
           << " cross_d1=" << d.value << " floor=" << d.floor << " baseline=" << kCrossBaseline;
  o.require(std::abs(half - std::log(10.0)) <= 0.01 * std::log(10.0), "half-line ln 10");
  o.require(cross_defect <= 0.02, "cross symmetric");
  o.require(d.value > 3.0 * d.floor, "cross not flat");
  o.require(std::abs(d.value - kCrossBaseline) <= kCrossBaselineTolerance, "cross baseline");
}

void kernel_identities(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.02, 0.3);
  double layer = 0.0, finsler = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + k % 2;
    const Matrix a = random_spd(n, rng);
    const DiscreteMeasure mu = gen_cloud(n, 80, 1.0, 500 + static_cast<std::uint64_t>(k)).measure;
    layer = std::max(layer, layer_potential_identity_residual(a, mu, 0.3 * random_point(n, rng), u(rng)));
  }
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + k % 2;
    const Matrix a = random_spd(n, rng);
    const int m = 1 + k % (n - 1);
    finsler = std::max(finsler, finsler_factorization_residual(a, m, random_point(n, rng), random_point(n, rng)));
  }
  o.detail << "layer_potential=" << layer << " finsler=" << finsler;
  o.require(layer <= 1e-10, "layer potential identity");
  o.require(finsler <= 1e-10, "finsler factorization");
}

void dmo_suite(Outcome& o) {
  const MatrixField constant = constant_coefficients(matrix_from_list({2.0, 0.5, 0.5, 1.0}, 2));
  const auto probes = seeded_probes(2, 8, 1.0, 7);
  const OscillationProfile zero = omega_profile(constant, probes, {0.8, 0.4, 0.2, 0.1});
  bool all_zero = true;
  for (double w : zero.omega) all_zero = all_zero && w == 0.0;
  for (double r : {0.4, 0.1}) {
    const TauResult t = tau_moduli(constant, probes, r);
    all_zero = all_zero && t.tau == 0.0 && t.tau_hat == 0.0;
  }

  const QuadratureResult l1 = dini_large([](double t) { return std::min(t, 1.0); }, 1, 0.5);
  const double l1_expected = 0.5 * std::log(2.0) + 0.5;

  std::vector<double> dyadic, theta;
  for (int k = 0; k <= 20; ++k) {
    dyadic.push_back(std::ldexp(1.0, -k));
    theta.push_back(std::ldexp(1.0, -k));
  }
  const double kappa = doubling_constant(dyadic, theta);

  const MatrixField holder = holder_coefficients(2, 0.5, 0.5);
  std::vector<double> frozen;
  for (double r : {0.4, 0.2, 0.1}) frozen.push_back(frozen_discrepancy(holder, Vector::Zero(2), r, 0.5, 2.0).value);

  o.detail << "constant_zero=" << (all_zero ? "yes" : "no") << " L1=" << l1.value << " (expected " << l1_expected
           << ") kappa=" << kappa << " frozen=" << frozen[0] << "," << frozen[1] << "," << frozen[2];
  o.require(all_zero, "constant field moduli");
  o.require(std::abs(l1.value - l1_expected) <= 1e-3, "L1 closed form");
  o.require(kappa == 2.0, "kappa for theta(t) = t");
  o.require(frozen[0] > frozen[1] && frozen[1] > frozen[2], "frozen discrepancy decreasing");
}

void blowup_sandwich(Outcome& o) {
  const double h = 1e-3;
  const std::vector<double> r_list = {0.5, 1.0, 2.0};
  const DiscreteMeasure line = gen_flat(coordinate_frame(2, 1), 1.0, 3.0, h).measure;
  const ScaleLadder line_ladder = ScaleLadder::down_to(0.5, 0.8, 0.05, h);
  const SandwichReport sl = sandwich_check(line, Vector::Zero(2), EllipseField::identity(2), 1, line_ladder, r_list);

  const CorpusEntry circle = gen_circle(1.0, h);
  Vector p(2);
  p << 1.0, 0.0;
  const SandwichReport sc = sandwich_check(circle.measure, p, EllipseField::identity(2), 1,
                                           ScaleLadder::down_to(0.2, 0.8, 0.05, circle.spacing), r_list);

  const DensityScan ld = density_scan(line, Vector::Zero(2), EllipseField::identity(2), 1, line_ladder);
  const CorpusEntry cantor = gen_four_corner_cantor(7);
  const DensityScan cd = density_scan(cantor.measure, cantor.measure.point(0), EllipseField::identity(2), 1,
                                      ScaleLadder::down_to(0.25, 0.8, 0.05, cantor.spacing));
  o.detail << "line violation=" << sl.worst_violation << " slack=" << sl.slack << " circle violation=" << sc.worst_violation
           << " slack=" << sc.slack << " line gap-1=" << ld.gap_ratio - 1.0 << " cantor gap-1=" << cd.gap_ratio - 1.0;
  o.require(sl.worst_violation <= sl.slack, "line sandwich");
  o.require(sc.worst_violation <= sc.slack, "circle sandwich");
  o.require(ld.gap_ratio - 1.0 <= 0.02 && density_gap_verdict(ld, 0.05) == GapVerdict::small_gap, "line gap");
  o.require(cd.gap_ratio - 1.0 >= 0.1 && density_gap_verdict(cd, 0.05) == GapVerdict::large_gap, "cantor gap");
}

void determinism(Outcome& o) {
  namespace fs = std::filesystem;
  const fs::path dir = clirun::scratch_dir("acceptance");
  struct Job {
    std::string command;
    std::string config;
  };
  const std::vector<Job> jobs = {
      {"density",
       "[measure]\nkind = line\nradius = 1\nh = 0.001\n[field]\nkind = rotating\neccentricity = 2\nrate = 1\n"
       "[scan]\na = 0, 0\nm = 1\nr0 = 0.5\nratio = 0.8\nr_min = 0.05\nthreshold = 0.05\n"},
      {"pv", "[measure]\nkind = cantor\ndepth = 7\n[pv]\nx = 3.0517578125e-05, 3.0517578125e-05\nm = 1\neps_top = 0.2534\ncount = 8\n"},
      {"blowup", "[measure]\nkind = cross\nh = 0.002\nextent = 2\n[blowup]\na = 0, 0\nm = 1\nr0 = 0.4\nratio = 0.5\ncount = 2\n"},
      {"metric", "[metric]\nquery = d_cone\nm = 1\ns = 1\n[mu]\nkind = graph\nfunction = sine\namplitude = 0.3\nh = 0.002\n"},
      {"dmo", "[coefficients]\nkind = holder\ndim = 2\nalpha = 0.5\namplitude = 0.5\n[probes]\ncount = 16\nseed = 5\n"
              "[dmo]\nradii = 0.4, 0.2, 0.1\n"},
      {"generate", "[entry]\nkind = cantor\nname = cantor\ndepth = 6\n[entry]\nkind = cloud\nname = cloud\ncount = 300\nseed = 9\n"
                   "[entry]\nkind = graph\nh = 0.01\n"},
  };
  int identical = 0;
  for (const Job& job : jobs) {
    const fs::path cfg = dir / (job.command + ".cfg");
    clirun::write_text(cfg, job.config);
    std::string outputs[2];
    bool ran = true;
    for (int i = 0; i < 2; ++i) {
      const std::string threads = i == 0 ? "1" : "4";
      const fs::path out = dir / (job.command + "_" + threads);
      const int code = clirun::run(dir, job.command + " --config \"" + cfg.string() + "\" --threads " + threads +
                                            " --out \"" + out.string() + "\"");
      ran = ran && code == 0;
      if (job.command == "generate") {
        for (const char* name : {"cantor.csv", "cloud.csv", "graph_sine.csv", "manifest.txt"}) {
          outputs[i] += clirun::read_text(out / name);
        }
      } else {
        outputs[i] = clirun::read_text(out);
      }
    }
    const bool same = ran && !outputs[0].empty() && outputs[0] == outputs[1];
    if (same) ++identical;
    o.detail << job.command << "=" << (same ? "identical" : "DIFFERENT") << " ";
    o.require(same, job.command);
  }
  o.detail << "(" << identical << "/" << jobs.size() << ")";
  fs::remove_all(dir);
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget;  // seconds, 0 = none
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"metric suite", 60.0, metric_suite},
      {"density ground truth", 5.0, density_truth},
      {"PV dichotomy", 120.0, pv_dichotomy},
      {"symmetry oracle", 0.0, symmetry_oracle},
      {"kernel identities", 0.0, kernel_identities},
      {"DMO suite", 0.0, dmo_suite},
      {"blowup sandwich", 0.0, blowup_sandwich},
      {"determinism", 0.0, determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    o.detail.precision(6);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double elapsed = seconds_since(t0);
    if (criteria[i].budget > 0.0 && elapsed > criteria[i].budget) o.require(false, "runtime budget");
    if (!o.pass) ++failures;
    std::printf("%s %zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.str().c_str(),
                elapsed);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
