#pragma once

// Hyperbolic pairs of pants with geodesic boundary. Cuff lengths are
// nonnegative; a zero length means the cuff is a cusp. All closed forms
// below are algebraically exact at zero, so cusps never go through an
// epsilon limit.
//
// Indexing: cuffs are 0, 1, 2; for cuff i the other two are j = i+1 and
// k = i+2 mod 3. The seam "opposite" cuff i joins cuffs j and k.

#include <teich/hyp2.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace teich {

using CuffLengths = std::array<double, 3>;

inline void validate_cuffs(const CuffLengths& l) {
  for (double x : l)
    if (!(x >= 0.0) || !std::isfinite(x))
      throw std::invalid_argument("cuff lengths must be finite and >= 0");
}

// Shared symmetric function of the half-lengths: with c_i = cosh(l_i / 2),
// N = c0^2 + c1^2 + c2^2 + 2 c0 c1 c2 - 1. Always >= 3 on valid input.
inline double pants_norm(const CuffLengths& l) {
  validate_cuffs(l);
  double c0 = std::cosh(l[0] / 2), c1 = std::cosh(l[1] / 2), c2 = std::cosh(l[2] / 2);
  return c0 * c0 + c1 * c1 + c2 * c2 + 2.0 * c0 * c1 * c2 - 1.0;
}

// Length of the shortest arc from cuff i back to itself: cosh(p_i / 2) =
// sqrt(N) / sinh(l_i / 2). Infinite when cuff i is a cusp.
inline double self_perp_length(const CuffLengths& l, int i) {
  double N = pants_norm(l);
  double s = std::sinh(l[i] / 2);
  if (s == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * std::acosh(std::sqrt(N) / s);
}

// Length of the common perpendicular between cuffs j and k (the seam
// opposite cuff i). Infinite when either of those cuffs is a cusp.
inline double seam_length(const CuffLengths& l, int i) {
  validate_cuffs(l);
  int j = (i + 1) % 3, k = (i + 2) % 3;
  double ci = std::cosh(l[i] / 2), cj = std::cosh(l[j] / 2), ck = std::cosh(l[k] / 2);
  double sj = std::sinh(l[j] / 2), sk = std::sinh(l[k] / 2);
  if (sj == 0.0 || sk == 0.0) return std::numeric_limits<double>::infinity();
  return std::acosh((ci + cj * ck) / (sj * sk));
}

// p_i minus the two collar excursions at its endpoints, in a cancellation
// free closed form:
//   x_i = 2 log[ (sqrt(N) + sqrt(N - sinh^2 a_i)) / (1 + cosh a_i) ]
// which specializes exactly to 2 log(cosh a_j + cosh a_k) at a cusp cuff.
inline double truncated_self_perp(const CuffLengths& l, int i) {
  double N = pants_norm(l);
  double si = std::sinh(l[i] / 2), ci = std::cosh(l[i] / 2);
  double rad = N - si * si;  // = c_j^2 + c_k^2 + 2 c_i c_j c_k, always > 0
  return 2.0 * std::log((std::sqrt(N) + std::sqrt(rad)) / (1.0 + ci));
}

// q_i minus one collar excursion at each endpoint:
//   y_i = log[ (P + sqrt(P^2 - sinh^2 a_j sinh^2 a_k)) /
//              ((1 + cosh a_j)(1 + cosh a_k)) ],  P = cosh a_i + cosh a_j cosh a_k,
// exact at cusps; the fully cusped case (0,0,0) gives y = 0 on the nose.
inline double truncated_seam(const CuffLengths& l, int i) {
  validate_cuffs(l);
  int j = (i + 1) % 3, k = (i + 2) % 3;
  double ci = std::cosh(l[i] / 2), cj = std::cosh(l[j] / 2), ck = std::cosh(l[k] / 2);
  double sj = std::sinh(l[j] / 2), sk = std::sinh(l[k] / 2);
  double P = ci + cj * ck;
  double rad = P * P - sj * sj * sk * sk;  // >= 0 since P >= cosh a_j cosh a_k
  return std::log((P + std::sqrt(std::max(rad, 0.0))) / ((1.0 + cj) * (1.0 + ck)));
}

// Signed length defect of cuff i against the other two: (l_j + l_k - l_i)/2.
// At most one defect can be negative.
inline double length_defect(const CuffLengths& l, int i) {
  int j = (i + 1) % 3, k = (i + 2) % 3;
  return 0.5 * (l[j] + l[k] - l[i]);
}

struct PantsBoundsReport {
  double slack = 0.0;
  double worst_excess = -std::numeric_limits<double>::infinity();
  int worst_cuff = -1;
  bool ok = true;
};

// Certifies, with the given additive slack a, that for every cuff i
//   max(defect_i, 0) - a <= x_i <= 2 max(defect_i, 0) + a
//   max(-defect_i, 0) - a <= y_i <= max(-defect_i, 0) + a.
// worst_excess reports the largest violation margin (<= 0 when all hold).
inline PantsBoundsReport check_pants_bounds(const CuffLengths& l, double slack) {
  PantsBoundsReport r;
  r.slack = slack;
  for (int i = 0; i < 3; ++i) {
    double d = length_defect(l, i);
    double dpos = std::max(d, 0.0), dneg = std::max(-d, 0.0);
    double x = truncated_self_perp(l, i);
    double y = truncated_seam(l, i);
    double ex = std::max({(dpos - slack) - x, x - (2.0 * dpos + slack),
                          (dneg - slack) - y, y - (dneg + slack)});
    if (ex > r.worst_excess) {
      r.worst_excess = ex;
      r.worst_cuff = i;
    }
  }
  r.ok = r.worst_excess <= 0.0;
  return r;
}

// Section of the cuff-length projection over cuff 0. Below the base triple
// the other two cuffs shrink homothetically, which drives the cuff-0 defect
// linearly to zero; above it they freeze, which only shrinks that defect
// further. Either way max(defect, 0) never exceeds its base value, so the
// truncated self-perpendicular of cuff 0 stays within the certified band
// around 2 max(defect, 0).
struct FirstCuffSection {
  CuffLengths base;
  CuffLengths at(double lam) const {
    if (!(lam >= 0.0) || !std::isfinite(lam))
      throw std::invalid_argument("cuff length must be finite and >= 0");
    double r = base[0] > 0.0 ? std::min(lam / base[0], 1.0) : 1.0;
    return {lam, base[1] * r, base[2] * r};
  }
};

inline FirstCuffSection section_over_first_cuff(const CuffLengths& Y, double s) {
  validate_cuffs(Y);
  if (!(truncated_self_perp(Y, 0) < s))
    throw std::invalid_argument(
        "first-cuff section needs the self-perpendicular of cuff 0 below the bound");
  return {Y};
}

// Section over the lengths of cuffs 1 and 2, with cuff 0 responding. Away
// from the base point cuff 0 carries the sum of the other two, which zeroes
// its defect exactly at the grid vertices; a piecewise-linear hat through
// the base point recovers the base triple on the nose. The floor keeps
// cuff 0 positive and is sized so it never binds at the base point or at
// the defect-free profile.
struct RearCuffsSection {
  CuffLengths base;
  double hat_radius = 1.0;
  double floor_coef = 0.0;
  CuffLengths at(double u, double v) const {
    if (!(u >= 0.0) || !(v >= 0.0) || !std::isfinite(u) || !std::isfinite(v))
      throw std::invalid_argument("cuff lengths must be finite and >= 0");
    if (u == base[1] && v == base[2]) return base;  // through the base, on the nose
    double w =
        1.0 - std::max(std::abs(u - base[1]), std::abs(v - base[2])) / hat_radius;
    w = std::max(w, 0.0);
    double f = std::max(u + v - 2.0 * length_defect(base, 0) * w,
                        floor_coef * (u + v));
    return {f, u, v};
  }
};

inline RearCuffsSection section_over_rear_cuffs(const CuffLengths& Y, double s) {
  validate_cuffs(Y);
  if (!(truncated_seam(Y, 0) < s))
    throw std::invalid_argument(
        "rear-cuff section needs the seam opposite cuff 0 below the bound");
  RearCuffsSection sec;
  sec.base = Y;
  double tot = Y[1] + Y[2];
  sec.floor_coef = tot > 0.0 ? std::min(1e-3, 0.5 * Y[0] / tot) : 1e-3;
  return sec;
}

// Discrete, anchored holonomy of the pants: g0 g1 g2 = 1 with tr gi =
// +-2 cosh(l_i / 2). Cuff 0 is the anchor and must have positive length;
// its holonomy translates along (0, inf) toward inf, and the seam between
// cuffs 0 and 1 meets that axis orthogonally at the point i (height one).
// Cuffs 1 and 2 may be cusps; the formulas degenerate to exact parabolics.
struct PantsGroup {
  Mobius g0, g1, g2;
  Mobius gen(int i) const { return i == 0 ? g0 : (i == 1 ? g1 : g2); }
};

inline PantsGroup anchored_pants_group(const CuffLengths& l) {
  validate_cuffs(l);
  if (!(l[0] > 0.0))
    throw std::invalid_argument("anchor cuff must have positive length");
  double a0 = l[0] / 2, a1 = l[1] / 2, a2 = l[2] / 2;
  double e = std::exp(a0);
  PantsGroup G;
  G.g0 = {e, 0.0, 0.0, 1.0 / e};
  // conjugate of a translation along (0, inf), pushed out to seam distance:
  // with C = cosh(seam) sinh a1 = (c2 + c0 c1)/s0, the off-diagonal entry is
  // sqrt(C^2 - s1^2) = sqrt(N)/s0 and the diagonal entries factor through
  // e^{+-a0}; these forms never difference large cosh products, so the
  // matrix keeps unit determinant at any cuff scale
  double c1 = std::cosh(a1), c2 = std::cosh(a2), s0 = std::sinh(a0);
  double S = std::sqrt(pants_norm(l)) / s0;
  G.g1 = {-(c2 + c1 * std::exp(-a0)) / s0, S, -S, (c2 + c1 * e) / s0};
  G.g2 = (G.g0 * G.g1).unit_inverse();
  return G;
}

}  // namespace teich
