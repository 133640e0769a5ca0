#pragma once

// Slopes (reduced fractions with infinity = 1/0) and the Farey graph: two
// slopes are joined when the corresponding simple closed curves on a
// one-holed torus or four-holed sphere meet minimally, which happens exactly
// when |p s - q r| = 1. Distances are computed by continued-fraction descent
// and come with explicit geodesics, so they can be certified edge by edge.

#include <cstdlib>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace teich {

struct Slope {
  long long p = 1, q = 0;
  friend bool operator==(const Slope&, const Slope&) = default;
  friend auto operator<=>(const Slope&, const Slope&) = default;
};

inline Slope make_slope(long long p, long long q) {
  if (p == 0 && q == 0) throw std::invalid_argument("0/0 is not a slope");
  long long g = std::gcd(std::abs(p), std::abs(q));
  p /= g;
  q /= g;
  if (q < 0 || (q == 0 && p < 0)) { p = -p; q = -q; }
  return {p, q};
}

inline std::string to_string(const Slope& s) {
  return std::to_string(s.p) + "/" + std::to_string(s.q);
}

inline Slope parse_slope(const std::string& str) {
  auto bar = str.find('/');
  if (bar == std::string::npos) return make_slope(std::stoll(str), 1);
  return make_slope(std::stoll(str.substr(0, bar)), std::stoll(str.substr(bar + 1)));
}

inline bool farey_adjacent(const Slope& a, const Slope& b) {
  return std::abs(a.p * b.q - a.q * b.p) == 1;
}

// Integer unimodular matrix acting on slopes.
struct IntMat {
  long long a = 1, b = 0, c = 0, d = 1;
  Slope apply(const Slope& s) const { return make_slope(a * s.p + b * s.q, c * s.p + d * s.q); }
  IntMat operator*(const IntMat& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  IntMat inverse() const {
    long long det = a * d - b * c;
    if (det == 1) return {d, -b, -c, a};
    if (det == -1) return {-d, b, c, -a};
    throw std::domain_error("matrix is not unimodular");
  }
};

// Unimodular matrix carrying s to 1/0.
inline IntMat normalize_to_inf(const Slope& s) {
  // extended gcd: find x, y with p x + q y = 1
  long long old_r = s.p, r = s.q, old_x = 1, x = 0, old_y = 0, y = 1;
  while (r != 0) {
    long long qq = old_r / r;
    old_r = std::exchange(r, old_r - qq * r);
    old_x = std::exchange(x, old_x - qq * x);
    old_y = std::exchange(y, old_y - qq * y);
  }
  if (old_r < 0) { old_r = -old_r; old_x = -old_x; old_y = -old_y; }
  // old_r == 1 since the slope is reduced; rows: (x, y) and (-q, p)
  return {old_x, old_y, -s.q, s.p};
}

inline long long floordiv(long long a, long long b) {
  long long q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

namespace detail {

// Distance from 1/0 to p/q, by descending through the integer neighbors of
// infinity: some geodesic leaves 1/0 toward floor(p/q) or ceil(p/q).
inline int farey_dist_from_inf(Slope s, std::map<Slope, int>& memo) {
  if (s.q == 0) return 0;
  if (s.q == 1) return 1;
  auto it = memo.find(s);
  if (it != memo.end()) return it->second;
  long long f = floordiv(s.p, s.q);
  int best = -1;
  for (long long n : {f, f + 1}) {
    // move n to infinity: shift by -n, then invert
    Slope t = make_slope(-s.q, s.p - n * s.q);
    int d = 1 + farey_dist_from_inf(t, memo);
    if (best < 0 || d < best) best = d;
  }
  memo[s] = best;
  return best;
}

}  // namespace detail

inline int farey_distance(const Slope& a, const Slope& b) {
  std::map<Slope, int> memo;
  return detail::farey_dist_from_inf(normalize_to_inf(a).apply(b), memo);
}

// An explicit geodesic (endpoints included); consecutive entries are Farey
// adjacent, so the result certifies the distance.
inline std::vector<Slope> farey_geodesic(const Slope& a, const Slope& b) {
  if (a == b) return {a};
  if (farey_adjacent(a, b)) return {a, b};
  IntMat M = normalize_to_inf(a);
  Slope t = M.apply(b);  // denominator >= 2 here
  long long f = floordiv(t.p, t.q);
  std::map<Slope, int> memo;
  Slope pick = make_slope(f, 1);
  Slope alt = make_slope(f + 1, 1);
  auto tail_len = [&](const Slope& n) {
    return detail::farey_dist_from_inf(
        normalize_to_inf(n).apply(t), memo);
  };
  if (tail_len(alt) < tail_len(pick)) pick = alt;
  std::vector<Slope> rest = farey_geodesic(pick, t);
  std::vector<Slope> out = {a};
  IntMat Minv = M.inverse();
  for (const Slope& s : rest) out.push_back(Minv.apply(s));
  return out;
}

// Farey parents of p/q for q >= 2: the unique adjacent pair with smaller
// denominators whose mediant is p/q. Used to build curve words recursively.
inline std::pair<Slope, Slope> farey_parents(const Slope& s) {
  if (s.q < 2) throw std::domain_error("farey parents need denominator >= 2");
  IntMat M = normalize_to_inf(s);
  // second row is (-q, p); first row (x, y) satisfies p x + q y = 1, so
  // (y', x') with x' = x mod q gives one parent
  long long x = ((M.a % s.q) + s.q) % s.q;  // p*x = 1 mod q, x in [0, q)
  if (x == 0) throw std::logic_error("parent computation degenerate");
  long long r = (s.p * x - 1) / s.q;
  Slope p1 = make_slope(r, x);
  Slope p2 = make_slope(s.p - r, s.q - x);
  return {p1, p2};
}

}  // namespace teich
