#pragma once

// Deterministic generators and independent oracles shared by the verify
// suites of the front end and by the acceptance harness. Everything here is
// driven by an explicit engine so that a seed pins the whole run.

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include <teich/farey.hpp>
#include <teich/pants.hpp>
#include <teich/surface.hpp>

namespace teich {

inline FNPoint random_point(const Surface& S, std::mt19937_64& gen,
                            double len_lo = 0.3, double len_hi = 6.0,
                            double twist_span = 8.0) {
  std::uniform_real_distribution<double> len(len_lo, len_hi);
  std::uniform_real_distribution<double> tw(-twist_span, twist_span);
  FNPoint X;
  for (int c = 0; c < S.num_curves; ++c) {
    X.length.push_back(len(gen));
    X.twist.push_back(tw(gen));
  }
  return X;
}

inline CuffLengths random_cuffs(std::mt19937_64& gen, double lo = 0.05,
                                double hi = 15.0) {
  std::uniform_real_distribution<double> len(lo, hi);
  return {len(gen), len(gen), len(gen)};
}

// One solution of p*y - q*x = 1 for coprime (p, q), by the extended
// Euclidean algorithm on (p, q).
inline std::pair<long long, long long> bezout_pair(long long p, long long q) {
  long long r0 = p, r1 = q, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    long long k = r0 / r1;
    r0 -= k * r1; std::swap(r0, r1);
    s0 -= k * s1; std::swap(s0, s1);
    t0 -= k * t1; std::swap(t0, t1);
  }
  if (r0 < 0) { r0 = -r0; s0 = -s0; t0 = -t0; }
  if (r0 != 1) throw std::invalid_argument("bezout pair needs coprime entries");
  // p*s0 + q*t0 = 1, so (x, y) = (-t0, s0)
  return {-t0, s0};
}

// Farey neighbors of a slope whose entries stay within the grid. Every
// neighbor r/s of p/q satisfies |ps - qr| = 1, and the solutions of one sign
// form the line (x + k p, y + k q); the other sign gives the same projective
// classes, so one line exhausts the neighbors. The k range is cut exactly
// against the entry bound, never scanned.
inline std::vector<Slope> farey_neighbors_in_grid(const Slope& u, long long grid) {
  auto [x, y] = bezout_pair(u.p, u.q);
  long long lo = std::numeric_limits<long long>::min();
  long long hi = std::numeric_limits<long long>::max();
  auto cut = [&](long long base, long long step) {
    if (step == 0) return;  // this entry is constant along the line
    // |base + k step| <= grid, solved with floor and ceiling division
    long long L = -grid - base, U = grid - base;
    long long k_lo = step > 0 ? -floordiv(-L, step) : -floordiv(-U, step);
    long long k_hi = step > 0 ? floordiv(U, step) : floordiv(L, step);
    lo = std::max(lo, k_lo);
    hi = std::min(hi, k_hi);
  };
  cut(x, u.p);
  cut(y, u.q);
  std::vector<Slope> out;
  for (long long k = lo; k <= hi; ++k) {
    long long p = x + k * u.p, q = y + k * u.q;
    if (std::abs(p) > grid || std::abs(q) > grid) continue;
    out.push_back(make_slope(p, q));
  }
  return out;
}

// Distances from a by breadth-first search over the subgraph of slopes with
// entries bounded by the grid; an oracle for the continued-fraction distance.
// Subgraph distances can only overestimate, so agreement certifies that the
// computed value is realized by a concrete path.
inline std::map<Slope, int> farey_bfs_ball(const Slope& a, int max_radius,
                                           long long grid) {
  std::map<Slope, int> depth{{a, 0}};
  std::deque<Slope> frontier{a};
  while (!frontier.empty()) {
    Slope u = frontier.front();
    frontier.pop_front();
    int d = depth[u];
    if (d >= max_radius) continue;
    for (const Slope& v : farey_neighbors_in_grid(u, grid)) {
      if (depth.count(v)) continue;
      depth[v] = d + 1;
      frontier.push_back(v);
    }
  }
  return depth;
}

}  // namespace teich
