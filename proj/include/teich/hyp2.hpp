#pragma once

// Upper half-plane kernel. Isometries are real Mobius transformations with
// positive determinant; boundary points live in R together with a single
// point at infinity (any infinite double canonicalizes to +inf).

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace teich {

inline constexpr double kDetTol = 1e-12;
inline constexpr double kParabolicTol = 1e-10;

// Frozen orientation factor for shears. Chosen so that a left Dehn twist
// (earthquake by one full twist coordinate) increases the shear of the
// twisted transversal; pinned by the twist-response harness in the tests.
inline constexpr double kShearOrientation = 1.0;

inline double boundary_inf() { return std::numeric_limits<double>::infinity(); }

inline double canon_boundary(double x) {
  if (std::isnan(x)) throw std::invalid_argument("boundary point is NaN");
  if (std::isinf(x)) return boundary_inf();
  return x;
}

struct Mobius {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  double det() const { return a * d - b * c; }
  double tr() const { return a + d; }

  Mobius normalized() const {
    double dt = det();
    if (!(dt > 0.0))
      throw std::domain_error("mobius determinant must be positive (orientation-preserving)");
    double s = std::sqrt(dt);
    return {a / s, b / s, c / s, d / s};
  }

  Mobius operator*(const Mobius& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d,
            c * o.a + d * o.c, c * o.b + d * o.d};
  }

  Mobius inverse() const {
    double dt = det();
    if (dt == 0.0) throw std::domain_error("mobius is singular");
    return {d / dt, -b / dt, -c / dt, a / dt};
  }

  // Adjugate inverse for maps known to have unit determinant. When entries
  // are large the computed determinant is cancellation noise, so dividing by
  // it corrupts the inverse; the adjugate is exact whenever the true
  // determinant is one.
  Mobius unit_inverse() const { return {d, -b, -c, a}; }

  // Boundary action.
  double apply(double x) const {
    x = canon_boundary(x);
    if (std::isinf(x)) return c == 0.0 ? boundary_inf() : a / c;
    double den = c * x + d;
    if (den == 0.0) return boundary_inf();
    return (a * x + b) / den;
  }

  std::complex<double> apply(std::complex<double> z) const {
    std::complex<double> den = c * z + d;
    return (a * z + b) / den;
  }
};

inline Mobius mobius_identity() { return {1, 0, 0, 1}; }

// Translation by hyperbolic distance t along the geodesic (0, inf), moving
// points toward inf for t > 0.
inline Mobius std_translation(double t) {
  double e = std::exp(t / 2);
  return {e, 0.0, 0.0, 1.0 / e};
}

enum class IsomKind { identity, elliptic, parabolic, hyperbolic };

inline IsomKind classify(const Mobius& m0) {
  Mobius m = m0.normalized();
  double t = std::abs(m.tr());
  if (t > 2.0 + kParabolicTol) return IsomKind::hyperbolic;
  if (t < 2.0 - kParabolicTol) return IsomKind::elliptic;
  if (std::abs(m.b) < kParabolicTol && std::abs(m.c) < kParabolicTol &&
      std::abs(std::abs(m.a) - 1.0) < kParabolicTol)
    return IsomKind::identity;
  return IsomKind::parabolic;
}

inline double translation_length(const Mobius& m) {
  switch (classify(m)) {
    case IsomKind::hyperbolic: {
      double half = std::abs(m.normalized().tr()) / 2.0;
      return 2.0 * std::acosh(half);
    }
    case IsomKind::parabolic:
      return 0.0;
    case IsomKind::identity:
      throw std::domain_error("trivial (identity) holonomy has no geodesic representative");
    case IsomKind::elliptic:
    default:
      throw std::domain_error("non-geodesic conjugacy class (elliptic holonomy)");
  }
}

// Oriented geodesic with distinct ideal endpoints, running from p to q.
struct Geodesic {
  double p, q;
  Geodesic(double p_, double q_) : p(canon_boundary(p_)), q(canon_boundary(q_)) {
    if (p == q) throw std::invalid_argument("geodesic endpoints must be distinct");
  }
  Geodesic reversed() const { return {q, p}; }
};

inline Geodesic transform(const Mobius& g, const Geodesic& A) {
  return {g.apply(A.p), g.apply(A.q)};
}

// Axis of a hyperbolic isometry, oriented from the repelling to the
// attracting fixed point (the direction of translation).
inline Geodesic axis(const Mobius& m0) {
  // Everything here is scale invariant, so the map is only scaled by its
  // largest entry, never divided by the computed determinant: for a long
  // word product that determinant is cancellation noise even though the
  // true value is one, and renormalizing by it corrupts the map.
  double s = std::max(std::max(std::abs(m0.a), std::abs(m0.b)),
                      std::max(std::abs(m0.c), std::abs(m0.d)));
  if (!(s > 0.0) || !std::isfinite(s))
    throw std::domain_error("axis of a degenerate mobius map");
  Mobius m{m0.a / s, m0.b / s, m0.c / s, m0.d / s};
  if (m.c == 0.0) {
    if (std::abs(m.a - m.d) <= kParabolicTol * std::abs(m.tr()))
      throw std::domain_error("axis requires a hyperbolic isometry");
    Geodesic A{boundary_inf(), m.b / (m.d - m.a)};
    // the infinite fixed point attracts when |a| dominates
    return std::abs(m.a) > std::abs(m.d) ? Geodesic{A.q, A.p} : A;
  }
  // roots of c z^2 + (d - a) z - b = 0, stabilized against cancellation;
  // the discriminant equals tr^2 - 4 det but is formed entrywise
  double B = m.d - m.a, disc = B * B + 4.0 * m.b * m.c;
  if (!(disc > 4.0 * kParabolicTol * std::abs(m.det())))
    throw std::domain_error("axis requires a hyperbolic isometry");
  double sq = std::sqrt(disc);
  double qq = -0.5 * (B + (B >= 0 ? sq : -sq));
  double r1, r2;
  if (qq == 0.0) {
    r1 = sq / (2.0 * m.c);
    r2 = -r1;
  } else {
    r1 = qq / m.c;
    r2 = -m.b / qq;
  }
  // the derivative at a fixed point is det / (c z + d)^2 and the two
  // derivatives multiply to one, so the attracting end has the larger |c z + d|
  double t1 = std::abs(m.c * r1 + m.d), t2 = std::abs(m.c * r2 + m.d);
  return t1 > t2 ? Geodesic{r2, r1} : Geodesic{r1, r2};
}

// Mobius carrying (A.p, A.q) to (0, inf).
inline Mobius map_to_std(const Geodesic& A) {
  Mobius M;
  if (std::isinf(A.p)) {
    M = {0.0, 1.0, -1.0, A.q};
  } else if (std::isinf(A.q)) {
    M = {1.0, -A.p, 0.0, 1.0};
  } else if (A.p < A.q) {
    M = {-1.0, A.p, 1.0, -A.q};
  } else {
    M = {1.0, -A.p, 1.0, -A.q};
  }
  return M.normalized();
}

// Translation by distance t along A (toward A.q for t > 0).
inline Mobius translation_along(const Geodesic& A, double t) {
  Mobius M = map_to_std(A);
  return M.inverse() * std_translation(t) * M;
}

inline double dist(std::complex<double> z, std::complex<double> w) {
  double iz = z.imag(), iw = w.imag();
  if (!(iz > 0.0) || !(iw > 0.0))
    throw std::invalid_argument("points must lie in the open upper half-plane");
  double n = std::norm(z - w);
  return std::acosh(1.0 + n / (2.0 * iz * iw));
}

// Orthogonal projection of a boundary point onto A, reported as the signed
// arclength coordinate along A (origin at the point where A meets the
// perpendicular through i after normalizing A to (0, inf)).
inline double foot_coordinate(const Geodesic& A, double x) {
  double u = map_to_std(A).apply(x);
  if (u == 0.0 || std::isinf(u))
    throw std::domain_error("projection undefined for an endpoint of the axis itself");
  return std::log(std::abs(u));
}

struct GeodesicGap {
  double dist = 0.0;
  bool crossing = false;
  bool asymptotic = false;
};

inline GeodesicGap geodesic_distance(const Geodesic& A, const Geodesic& B) {
  Mobius M = map_to_std(A);
  double u = M.apply(B.p), v = M.apply(B.q);
  if (std::isinf(u) || std::isinf(v) || u == 0.0 || v == 0.0) return {0.0, false, true};
  if (u * v < 0.0) return {0.0, true, false};
  double lo = std::min(std::abs(u), std::abs(v));
  double hi = std::max(std::abs(u), std::abs(v));
  return {std::acosh((hi + lo) / (hi - lo)), false, false};
}

inline bool crosses(const Geodesic& A, const Geodesic& B) {
  return geodesic_distance(A, B).crossing;
}

// Signed width, in units of the core length l, of the shadow that B casts on
// A: the distance along A between the orthogonal projections of B's two ideal
// endpoints. B is first oriented to cross A from the negative side, so the
// value does not depend on B's given orientation; it is measured along the
// orientation of A and scaled by kShearOrientation.
inline double shear(const Geodesic& A, double l, const Geodesic& B) {
  if (!(l > 0.0)) throw std::invalid_argument("shear requires a positive core length");
  Mobius M = map_to_std(A);
  double u = M.apply(B.p), v = M.apply(B.q);
  if (std::isinf(u) || std::isinf(v) || u == 0.0 || v == 0.0)
    throw std::domain_error("shear undefined: geodesics share an ideal endpoint");
  if (u * v > 0.0) throw std::domain_error("shear undefined: geodesics do not cross");
  if (u > 0.0) std::swap(u, v);
  return kShearOrientation * (std::log(v) - std::log(-u)) / l;
}

inline double collar_width(double l) {
  if (l < 0.0) throw std::invalid_argument("collar_width requires l >= 0");
  if (l == 0.0) return std::numeric_limits<double>::infinity();
  return std::asinh(1.0 / std::sinh(l / 2.0));
}

// Length of one boundary circle of the standard collar; limits to the
// horocyclic cusp neighborhood of boundary length 2 as l -> 0.
inline double collar_boundary_length(double l) {
  if (l < 0.0) throw std::invalid_argument("collar_boundary_length requires l >= 0");
  if (l == 0.0) return 2.0;
  return l / std::tanh(l / 2.0);
}

}  // namespace teich
