#pragma once

// Flat measures c H^m|V, the distance d_s(nu, M_{n,m}) to the cone of
// m-flat measures, and the symmetry / uniformity defect functionals.

#include "gmt/measure.hpp"

#include <cstdint>
#include <vector>

namespace gmt {

// c H^m restricted to the span of `frame` (n x m, orthonormal columns),
// discretized on the lattice h * Z^m of frame coordinates.
struct FlatMeasureSpec {
  Matrix frame;
  double constant = 1.0;
  double spacing = 1e-3;
};

// Frame with orthonormal columns spanning the first m coordinate axes.
Matrix coordinate_frame(int n, int m);

// Lattice nodes of the spec inside the closed ball B(0, radius), weight c h^m each.
DiscreteMeasure sample_flat(const FlatMeasureSpec& spec, double radius);

struct ConeDistance {
  double value = 1.0;
  // Additive uncertainty from the discretizations (candidate flat sample and
  // the binning of nu); compare against value when deciding flatness.
  double floor = 0.0;
  Matrix frame;           // best m-plane found
  double constant = 0.0;  // c with F_s(c H^m|V) = 1, in the coordinates rescaled to s = 1
  int evaluations = 0;    // LP solves
};

struct ConeOptions {
  double flat_spacing = 0.02;  // candidate sample spacing relative to s (m = 1)
  int max_sites = 150;         // nu is binned until it has at most this many atoms in B_s
  double tolerance = 1e-3;
  std::uint64_t seed = 1;  // frames for n > 3
};

// d_s(nu, M_{n,m}) = inf { F_s(nu / F_s(nu), mu) : mu in M_{n,m}, F_s(mu) = 1 },
// minimized over G(n, m) by a coarse grid followed by Nelder-Mead. Returns 1
// when F_s(nu) = 0.
ConeDistance d_cone_flat(const DiscreteMeasure& nu, int m, double s, const ConeOptions& options = {});

// | sum_{r <= |x - z| <= R} w_z (x - z) / |x - z|^{m+1} |.
double symmetry_defect(const DiscreteMeasure& nu, const Vector& x, double r, double R, int m);

struct DefectReport {
  double value = 0.0;
  Vector x;
  Vector y;
  double radius = 0.0;
  // max / min of nu(B(p, r)) / r^m over all probed centers and radii; 1 for an m-uniform measure.
  double power_spread = 1.0;
  bool inner_half_fallback = false;  // no probe fit the inner half of the bounding ball
};

// Max over seeded probe pairs (x, y) in spt nu and radii r of
//   |nu(B(x,r)) - nu(B(y,r))| / max(nu(B(x,r)), nu(B(y,r))).
// Probes are drawn from the support points within half the radius of its
// bounding ball (all support points when none qualify).
DefectReport uniformity_defect(const DiscreteMeasure& nu, int m, int probe_pairs, const std::vector<double>& radii,
                               std::uint64_t seed = 1);

}  // namespace gmt
