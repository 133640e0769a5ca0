#pragma once

// Time order on annular witnesses between two marked one-holed-torus
// structures. A witness is the annulus about a slope class; its coefficient
// for a pair of points is the relative twisting, around that class, of the
// shortest crossing curves at the two points. When two overlapping witnesses
// both carry a large coefficient, any efficient deformation from X to Y must
// resolve them in a definite order, and the order is read off from how far
// each witness sees the other's core from the endpoints.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <teich/calibration.hpp>
#include <teich/projections.hpp>

namespace teich {

inline constexpr int kWinnerWindowRounds = 16;

inline long long slope_crossing(const Slope& a, const Slope& b) {
  return std::abs(a.p * b.q - a.q * b.p);
}

// Twisting of a crossing class around a core, after carrying the core to 1/0:
// the image p/q wraps p/q times per strand. Exact in integer arithmetic.
inline long long relative_twisting(const Slope& core, const Slope& s1,
                                   const Slope& s2) {
  IntMat M = normalize_to_inf(core);
  Slope a = M.apply(s1), b = M.apply(s2);
  if (a.q == 0 || b.q == 0)
    throw std::domain_error("relative twisting needs classes crossing the core");
  double diff = (static_cast<double>(a.p) * b.q - static_cast<double>(b.p) * a.q) /
                (static_cast<double>(a.q) * b.q);
  return round_half_to_zero(diff);
}

// Annular distance between two crossing classes: 0 for the same class,
// otherwise one more than the twisting offset.
inline long long annular_class_distance(const Slope& core, const Slope& s1,
                                        const Slope& s2) {
  if (s1 == s2) return 0;
  return std::llabs(relative_twisting(core, s1, s2)) + 1;
}

// Classes crossing the core exactly once form one twist orbit: carry the
// core to 1/0, then they are the preimages of (k, 1). The realized length is
// unimodal in k up to bounded wobble, so an expanding window around the best
// value found so far locates the minimum without a global budget.
inline double realized_slope_length(const Surface& S, const Surface::Rep& R,
                                    const Slope& s) {
  try {
    return R.curve_length(S.slope_word(s));
  } catch (const std::overflow_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

inline Slope shortest_once_crossing(const Surface& S, const Surface::Rep& R,
                                    const Slope& core) {
  if (S.kind != Surface::Kind::genus1_1)
    throw std::domain_error("slope winners are a one-holed torus operation");
  IntMat back = normalize_to_inf(core).inverse();
  auto cand = [&](long long k) { return back.apply({k, 1}); };
  long long center = 0, radius = 4;
  long long best_k = 0;
  double best_len = std::numeric_limits<double>::infinity();
  for (int round = 0; round < kWinnerWindowRounds; ++round) {
    for (long long k = center - radius; k <= center + radius; ++k) {
      double l = realized_slope_length(S, R, cand(k));
      if (l < best_len - 1e-12 ||
          (l < best_len + 1e-12 && std::llabs(k) < std::llabs(best_k))) {
        best_len = l;
        best_k = k;
      }
    }
    if (std::isfinite(best_len) && best_k > center - radius + 2 &&
        best_k < center + radius - 2)
      return cand(best_k);
    center = best_k;
    radius *= 2;
  }
  if (!std::isfinite(best_len))
    throw std::runtime_error("no finite once-crossing class near the core");
  return cand(best_k);
}

struct Witness {
  std::string label;
  Slope core;
};

inline bool witnesses_overlap(const Witness& u, const Witness& v) {
  return slope_crossing(u.core, v.core) != 0;
}

// Winners of a witness at the two endpoints of a deformation.
struct WitnessReading {
  Slope at_x, at_y;
};

inline WitnessReading read_witness(const Surface& S, const Surface::Rep& RX,
                                   const Surface::Rep& RY, const Witness& w) {
  return {shortest_once_crossing(S, RX, w.core),
          shortest_once_crossing(S, RY, w.core)};
}

// Coefficient of the witness for a pair of points: twisting between the two
// shortest crossing classes around the core.
inline long long witness_coefficient(const Witness& w, const WitnessReading& r) {
  return annular_class_distance(w.core, r.at_x, r.at_y);
}

inline long long witness_coefficient(const Surface& S, const Surface::Rep& RX,
                                     const Surface::Rep& RY, const Witness& w) {
  return witness_coefficient(w, read_witness(S, RX, RY, w));
}

// Distance from a fixed class to a point, seen in the witness annulus.
inline long long witness_class_distance(const Surface& S,
                                        const Surface::Rep& RZ,
                                        const Witness& w, const Slope& c) {
  return annular_class_distance(w.core, c,
                                shortest_once_crossing(S, RZ, w.core));
}

enum class TimeOrder { unordered, first_earlier, second_earlier };

struct OrderEvidence {
  long long d_u = 0, d_v = 0;        // witness coefficients for (X, Y)
  long long u_core_v_x = 0, u_core_v_y = 0;  // V's core seen in U, from X / Y
  long long v_core_u_x = 0, v_core_u_y = 0;  // U's core seen in V, from X / Y
  TimeOrder verdict = TimeOrder::unordered;
};

// Decide which of two overlapping large-coefficient witnesses is resolved
// first on the way from X to Y. The earlier witness still sees the other's
// core near the far endpoint, because later deformation drags its own winner
// away while the fixed core class stays put.
inline OrderEvidence time_order(const Witness& u, const WitnessReading& ru,
                                const Witness& v, const WitnessReading& rv,
                                const Calibration& cal) {
  OrderEvidence e;
  if (!witnesses_overlap(u, v)) return e;
  e.d_u = witness_coefficient(u, ru);
  e.d_v = witness_coefficient(v, rv);
  e.u_core_v_x = annular_class_distance(u.core, v.core, ru.at_x);
  e.u_core_v_y = annular_class_distance(u.core, v.core, ru.at_y);
  e.v_core_u_x = annular_class_distance(v.core, u.core, rv.at_x);
  e.v_core_u_y = annular_class_distance(v.core, u.core, rv.at_y);
  const double thresh = cal.order_near_threshold;
  if (e.d_u < thresh || e.d_v < thresh) return e;
  bool u_first = e.u_core_v_y >= thresh && e.v_core_u_x >= thresh;
  bool v_first = e.v_core_u_y >= thresh && e.u_core_v_x >= thresh;
  if (u_first && !v_first) e.verdict = TimeOrder::first_earlier;
  if (v_first && !u_first) e.verdict = TimeOrder::second_earlier;
  return e;
}

inline OrderEvidence time_order(const Surface& S, const Surface::Rep& RX,
                                const Surface::Rep& RY, const Witness& u,
                                const Witness& v, const Calibration& cal) {
  if (!witnesses_overlap(u, v)) return {};
  return time_order(u, read_witness(S, RX, RY, u), v,
                    read_witness(S, RX, RY, v), cal);
}

// Pairwise verdicts for a witness family at a pair of points.
inline std::vector<std::vector<TimeOrder>> time_order_matrix(
    const Surface& S, const FNPoint& X, const FNPoint& Y,
    const std::vector<Witness>& ws, const Calibration& cal) {
  Surface::Rep RX = S.represent(X), RY = S.represent(Y);
  size_t n = ws.size();
  std::vector<WitnessReading> rd;
  rd.reserve(n);
  for (const Witness& w : ws) rd.push_back(read_witness(S, RX, RY, w));
  std::vector<std::vector<TimeOrder>> M(n, std::vector<TimeOrder>(n, TimeOrder::unordered));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      OrderEvidence e = time_order(ws[i], rd[i], ws[j], rd[j], cal);
      M[i][j] = e.verdict;
      M[j][i] = e.verdict == TimeOrder::first_earlier ? TimeOrder::second_earlier
                : e.verdict == TimeOrder::second_earlier ? TimeOrder::first_earlier
                                                         : TimeOrder::unordered;
    }
  return M;
}

// Witnesses no other witness precedes: the ones a deformation may resolve
// first. The verdict matrix is antisymmetric by construction, so this is a
// source set of the precedence relation.
inline std::vector<size_t> maximal_elements(
    const std::vector<std::vector<TimeOrder>>& M) {
  std::vector<size_t> out;
  for (size_t j = 0; j < M.size(); ++j) {
    bool preceded = false;
    for (size_t i = 0; i < M.size(); ++i)
      if (i != j && M[i][j] == TimeOrder::first_earlier) preceded = true;
    if (!preceded) out.push_back(j);
  }
  return out;
}

inline bool order_has_cycle(const std::vector<std::vector<TimeOrder>>& M) {
  size_t n = M.size();
  std::vector<int> state(n, 0);
  std::vector<size_t> stack;
  for (size_t root = 0; root < n; ++root) {
    if (state[root]) continue;
    stack.push_back(root);
    while (!stack.empty()) {
      size_t v = stack.back();
      if (state[v] == 0) {
        state[v] = 1;
        for (size_t w = 0; w < n; ++w)
          if (w != v && M[v][w] == TimeOrder::first_earlier) {
            if (state[w] == 1) return true;
            if (state[w] == 0) stack.push_back(w);
          }
      } else {
        if (state[v] == 1) state[v] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

}  // namespace teich
