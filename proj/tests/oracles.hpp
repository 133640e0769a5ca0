#pragma once

// Slow, independent reference computations used to freeze expected values in
// the unit tests. Everything here works from first principles (parameterized
// minimization, brute-force graph search) rather than closed forms.

#include <teich/hyp2.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <queue>
#include <vector>

namespace oracle {

inline double golden_min(const std::function<double(double)>& f, double lo, double hi,
                         int iters = 200) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - phi * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + phi * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Point on A at arclength coordinate t (A normalized to (0, inf), base i).
inline std::complex<double> point_on(const teich::Geodesic& A, double t) {
  teich::Mobius Minv = teich::map_to_std(A).inverse();
  return Minv.apply(std::complex<double>(0.0, std::exp(t)));
}

// Arclength coordinate of the closest point of A to an interior point z.
inline double project_point(const teich::Geodesic& A, std::complex<double> z,
                            double lo = -60.0, double hi = 60.0) {
  return golden_min([&](double t) { return teich::dist(point_on(A, t), z); }, lo, hi);
}

// Foot of a boundary point x on A: chase the projection of i*s + x upward as
// s grows; the horocyclic limit is the orthogonal projection from x.
inline double project_boundary(const teich::Geodesic& A, double x) {
  double t = 0.0;
  for (double s : {1.0, 1e2, 1e4, 1e6, 1e8}) {
    std::complex<double> z = std::isinf(x) ? std::complex<double>(0.0, 1.0 / s)
                                           : std::complex<double>(x, 1.0 / s);
    // for x = inf approach vertically from above instead
    if (std::isinf(x)) z = std::complex<double>(0.0, s);
    t = project_point(A, z, t - 50.0, t + 50.0);
  }
  return t;
}

// Distance between disjoint geodesics by two-parameter minimization.
inline double geodesic_gap(const teich::Geodesic& A, const teich::Geodesic& B) {
  double s = 0.0, t = 0.0;
  for (int round = 0; round < 80; ++round) {
    t = golden_min([&](double tt) { return teich::dist(point_on(A, s), point_on(B, tt)); },
                   t - 30.0, t + 30.0, 120);
    s = golden_min([&](double ss) { return teich::dist(point_on(A, ss), point_on(B, t)); },
                   s - 30.0, s + 30.0, 120);
  }
  return teich::dist(point_on(A, s), point_on(B, t));
}

}  // namespace oracle
