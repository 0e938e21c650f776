#include "commands.hpp"

#include "gmt/blowup.hpp"
#include "gmt/cone.hpp"
#include "gmt/corpus.hpp"
#include "gmt/kernels.hpp"
#include "gmt/lip_metric.hpp"
#include "gmt/moduli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

namespace gmt::cli {

namespace {

struct LoadedMeasure {
  DiscreteMeasure mu{1};
  double spacing = 0.0;
};

LoadedMeasure load_measure(const Config& config, const std::string& name) {
  const ConfigSection& s = config.section(name);
  LoadedMeasure out;
  if (s.find("file")) {
    std::optional<int> dim;
    if (s.find("dim")) dim = static_cast<int>(s.integer("dim"));
    out.mu = read_measure_csv(s.text("file"), dim);
    out.spacing = s.number("spacing", 0.0);
    return out;
  }
  CorpusEntry e = generate_entry(s);
  out.mu = std::move(e.measure);
  out.spacing = s.number("spacing", e.spacing);
  return out;
}

EllipseField load_field(const Config& config, int dim) {
  const ConfigSection* s = config.find("field");
  if (!s) return EllipseField::identity(dim);
  ConfigSection copy = *s;
  if (!copy.find("dim")) copy.set("dim", std::to_string(dim));
  EllipseField f = lambda_field_from(copy);
  if (f.dim() != dim) throw ConfigError("[field] dim does not match the measure");
  return f;
}

Vector point_of(const ConfigSection& s, const std::string& key, int dim) {
  const Vector v = s.vector(key);
  if (v.size() != dim) throw ConfigError("[" + s.name + "] " + key + " must have " + std::to_string(dim) + " entries");
  return v;
}

ScaleLadder ladder_of(const ConfigSection& s, double spacing, Normalization mode) {
  if (!(spacing > 0.0)) throw ConfigError("[" + s.name + "] sample spacing unknown; set spacing");
  const double r0 = s.number("r0", 0.5);
  const double ratio = s.number("ratio", 0.5);
  if (s.find("count")) return ScaleLadder::geometric(r0, ratio, static_cast<int>(s.integer("count")), spacing, mode);
  return ScaleLadder::down_to(r0, ratio, s.number("r_min", kGuardSpacings * spacing), spacing, mode);
}

void header(const RunContext& ctx, std::ostream& out) {
  out << "# gmt-lab " << ctx.command << " config_hash=" << ctx.hash << '\n';
}

const std::string& f(double v) {
  thread_local std::string buf;
  buf = format_double(v);
  return buf;
}

}  // namespace

std::string config_hash(const std::string& command, const Config& config, std::uint64_t seed) {
  const std::string text = "command=" + command + "\nseed=" + std::to_string(seed) + "\n" +
                           config.serialize({"threads", "out", "seed"});
  return hex64(fnv1a64(text));
}

void cmd_density(const RunContext& ctx, std::ostream& out) {
  const LoadedMeasure lm = load_measure(ctx.config, "measure");
  const int n = lm.mu.dim();
  const ConfigSection& s = ctx.config.section("scan");
  const EllipseField field = load_field(ctx.config, n);
  const DensityScan scan = density_scan(lm.mu, point_of(s, "a", n), field, static_cast<int>(s.integer("m", 1)),
                                        ladder_of(s, lm.spacing, Normalization::power));
  header(ctx, out);
  out << "r,density,gap_ratio_so_far\n";
  for (std::size_t i = 0; i < scan.radii.size(); ++i) {
    out << f(scan.radii[i]) << ',' << f(scan.densities[i]) << ',' << f(scan.running_gap[i]) << '\n';
  }
  out << "# gap_ratio=" << f(scan.gap_ratio);
  if (s.find("threshold")) out << " verdict=" << to_string(density_gap_verdict(scan, s.number("threshold")));
  if (scan.all_zero) out << " flag=all-zero";
  out << '\n';
}

void cmd_pv(const RunContext& ctx, std::ostream& out) {
  const LoadedMeasure lm = load_measure(ctx.config, "measure");
  const int n = lm.mu.dim();
  const ConfigSection& s = ctx.config.section("pv");
  const int m = static_cast<int>(s.integer("m", n - 1));
  const ConfigSection* ks = ctx.config.find("kernel");
  const std::string flavor = ks ? ks->text("flavor", "riesz") : "riesz";
  const KernelSpec spec = [&] {
    if (flavor == "riesz") return KernelSpec::riesz(load_field(ctx.config, n), m);
    if (flavor == "theta") return KernelSpec::theta_gradient(matrix_from_list(ks->numbers("matrix"), n), ks->number("c_n", 1.0));
    if (flavor == "finsler") return KernelSpec::finsler(matrix_from_list(ks->numbers("matrix"), n), m);
    throw ConfigError("[kernel] unknown flavor '" + flavor + "'");
  }();
  PvScanOptions options;
  options.spacing = s.number("spacing", lm.spacing);
  options.outer = s.number("outer", std::numeric_limits<double>::infinity());
  const std::string trunc = s.text("truncation", "ellipse");
  if (trunc == "euclidean") {
    options.truncation = Truncation::euclidean;
  } else if (trunc != "ellipse") {
    throw ConfigError("[pv] truncation must be ellipse or euclidean");
  }
  const auto ladder = halving_ladder(s.number("eps_top", 0.1), static_cast<int>(s.integer("count", 6)));
  const PvScan scan = pv_convergence_scan(spec, lm.mu, point_of(s, "x", n), ladder, options);
  header(ctx, out);
  out << "eps";
  for (int k = 1; k <= n; ++k) out << ",v" << k;
  out << ",successive_diff,verdict\n";
  for (std::size_t i = 0; i < scan.eps.size(); ++i) {
    out << f(scan.eps[i]);
    for (int k = 0; k < n; ++k) out << ',' << f(scan.values[i][k]);
    out << ',' << f(scan.diffs[i]) << ',' << to_string(scan.verdict) << '\n';
  }
}

void cmd_blowup(const RunContext& ctx, std::ostream& out) {
  const LoadedMeasure lm = load_measure(ctx.config, "measure");
  const int n = lm.mu.dim();
  const ConfigSection& s = ctx.config.section("blowup");
  const EllipseField field = load_field(ctx.config, n);
  const int m = static_cast<int>(s.integer("m", 1));
  const Vector a = point_of(s, "a", n);
  const ScaleLadder ladder = ladder_of(s, lm.spacing, Normalization::power);
  const BlowupSequence seq = blowup_sequence(lm.mu, a, field, m, ladder);
  const FlatnessProfile flat = flatness_profile(seq, m);
  const SandwichReport sw = sandwich_check(lm.mu, a, field, m, ladder, s.numbers("R", {0.5, 1.0, 2.0}));
  const double sym_r = s.number("sym_r", 0.1);
  const double sym_R = s.number("sym_R", 1.0);
  header(ctx, out);
  out << "r,flatness,symmetry_defect,sandwich_violation\n";
  for (std::size_t i = 0; i < seq.radii.size(); ++i) {
    const double sym = symmetry_defect(seq.measures[i], Vector::Zero(n), sym_r, sym_R, m);
    out << f(seq.radii[i]) << ',' << f(flat.values[i]) << ',' << f(sym) << ',' << f(sw.per_scale[i]) << '\n';
  }
  out << "# flatness_trend=" << to_string(flat.trend) << " floor=" << f(flat.floors.back())
      << " sandwich_slack=" << f(sw.slack) << " sandwich=" << (sw.within_slack ? "ok" : "inconclusive") << '\n';
}

void cmd_metric(const RunContext& ctx, std::ostream& out) {
  const ConfigSection& s = ctx.config.section("metric");
  const std::string query = s.text("query");
  const LoadedMeasure mu = load_measure(ctx.config, "mu");
  const DiscreteMeasure nu = ctx.config.find("nu") ? load_measure(ctx.config, "nu").mu : DiscreteMeasure(mu.mu.dim());
  header(ctx, out);
  if (query == "f_ball") {
    out << "f_ball=" << f(f_ball(mu.mu, nu, s.number("r", 1.0))) << '\n';
  } else if (query == "f_series") {
    const FSeriesResult r = f_series(mu.mu, nu, static_cast<int>(s.integer("max_terms", 20)));
    out << "f_series=" << f(r.value) << " tail_bound=" << f(r.tail_bound) << '\n';
  } else if (query == "scaling_residual") {
    out << "scaling_residual=" << f(f_scaling_residual(mu.mu, nu, s.number("r", 2.0))) << '\n';
  } else if (query == "d_cone") {
    ConeOptions options;
    options.seed = ctx.seed;
    const ConeDistance d = d_cone_flat(mu.mu, static_cast<int>(s.integer("m", 1)), s.number("s", 1.0), options);
    out << "d_cone=" << f(d.value) << " floor=" << f(d.floor) << '\n';
  } else {
    throw ConfigError("[metric] unknown query '" + query + "'");
  }
}

void cmd_dmo(const RunContext& ctx, std::ostream& out) {
  const MatrixField field = coefficient_field_from(ctx.config.section("coefficients"));
  const int n = field.dim;
  const ConfigSection* ps = ctx.config.find("probes");
  ConfigSection probes_cfg = ps ? *ps : ConfigSection{"probes", {}};
  const auto probes = seeded_probes(n, static_cast<int>(probes_cfg.integer("count", 64)), probes_cfg.number("extent", 1.0),
                                    static_cast<std::uint64_t>(probes_cfg.integer("seed", static_cast<long long>(ctx.seed))),
                                    probes_cfg.number("snap", 0.0));
  const ConfigSection& s = ctx.config.section("dmo");
  const auto radii = s.numbers("radii", {0.8, 0.4, 0.2, 0.1});
  DiniOptions dini;
  dini.t_max = s.number("t_max", 10.0);
  OmegaOptions omega;
  omega.per_axis = static_cast<int>(s.integer("per_axis", 16));
  const double r_min = *std::min_element(radii.begin(), radii.end());
  const OscillationProfile full =
      omega_profile(field, probes, log_ladder(dini.t_min_ratio * r_min, dini.t_max, 8), omega);
  const OscillationProfile at = omega_profile(field, probes, radii, omega);
  header(ctx, out);
  out << "r,omega,tau,tau_hat,kappa_hat,divergence_warning\n";
  for (double r : radii) {
    const std::size_t i = static_cast<std::size_t>(std::find(at.radii.begin(), at.radii.end(), r) - at.radii.begin());
    const TauResult t = tau_moduli(full, n, r, dini);
    out << f(r) << ',' << f(at.omega[i]) << ',' << f(t.tau) << ',' << f(t.tau_hat) << ',' << f(full.kappa_hat) << ','
        << (t.small.divergence_warning ? 1 : 0) << '\n';
  }
}

void cmd_generate(const RunContext& ctx, std::ostream& out) {
  const auto sections = ctx.config.all("entry");
  if (sections.empty()) throw ConfigError("generate: no [entry] sections");
  if (ctx.out_path.empty()) throw ConfigError("generate: --out is required");
  std::vector<CorpusEntry> entries;
  for (const ConfigSection* s : sections) entries.push_back(generate_entry(*s));

  namespace fs = std::filesystem;
  auto write_file = [](const fs::path& path, auto&& writer) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write '" + path.string() + "'");
    writer(file);
    if (!file) throw IoError("write failed for '" + path.string() + "'");
  };
  const std::string comment = "gmt-lab generate config_hash=" + ctx.hash;
  fs::path manifest;
  if (entries.size() == 1) {
    write_file(ctx.out_path, [&](std::ostream& o) { write_measure_csv(o, entries.front().measure, comment); });
    manifest = ctx.out_path + ".manifest";
    out << "wrote " << ctx.out_path << " (" << entries.front().measure.size() << " points)\n";
  } else {
    const fs::path dir(ctx.out_path);
    fs::create_directories(dir);
    for (const auto& e : entries) {
      write_file(dir / (e.name + ".csv"), [&](std::ostream& o) { write_measure_csv(o, e.measure, comment); });
      out << "wrote " << (dir / (e.name + ".csv")).string() << " (" << e.measure.size() << " points)\n";
    }
    manifest = dir / "manifest.txt";
  }
  write_file(manifest, [&](std::ostream& o) {
    o << "# " << comment << '\n';
    write_manifest(o, entries);
  });
  out << "wrote " << manifest.string() << '\n';
}

}  // namespace gmt::cli
