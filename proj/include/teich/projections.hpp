#pragma once

// Coarse projection data between marked hyperbolic structures: relative
// twisting about a decomposition curve read off from shadow shears, the
// annular distance |tw| + 1, slope tags for the embedded one-holed-torus and
// four-holed-sphere pieces, and the per-curve obstruction value combining
// short-curve reciprocals with witness distances.

#include <teich/farey.hpp>
#include <teich/surface.hpp>

#include <cstdlib>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace teich {

// Multiplies the oriented shear gap so that a positive earthquake about the
// curve produces a positive relative twist. Frozen against the earthquake
// parameter; flipping it would silently negate every reported twist.
inline constexpr double kTwistSign = 1.0;

inline constexpr int kCrossingBudget = 64;
inline constexpr int kSlopeBudget = 12;

inline long long round_half_to_zero(double x) {
  double r = (x >= 0.0) ? std::ceil(x - 0.5) : std::floor(x + 0.5);
  return static_cast<long long>(r);
}

// Piece of the decomposition having the given curve as its core. Every curve
// cores exactly one piece.
inline int piece_of_curve(const Surface& S, int curve) {
  for (size_t i = 0; i < S.pieces.size(); ++i)
    if (S.pieces[i].core == curve) return static_cast<int>(i);
  throw std::out_of_range("curve is not the core of any piece");
}

// Axis of some lift of the w-geodesic that crosses the given lift of the
// core. Tries the rotations of the cyclic word first, then translates their
// axes by short group elements in a fixed order. First hit wins, which makes
// the choice deterministic; any crossing lift gives the same shear up to the
// bounded ambiguity the coarse constants already absorb.
inline Geodesic crossing_lift(const Surface& S, const Surface::Rep& R,
                              const Geodesic& core, const Word& w) {
  Word cyc = cyclic_reduced(w);
  if (cyc.empty()) throw std::domain_error("crossing lift of a trivial word");
  std::vector<Geodesic> axes;
  for (size_t j = 0; j < cyc.size(); ++j) {
    Word rot(cyc.begin() + j, cyc.end());
    rot.insert(rot.end(), cyc.begin(), cyc.begin() + j);
    Geodesic ax = [&]() -> Geodesic {
      try {
        return axis(R.eval(rot));
      } catch (const std::domain_error&) {
        throw std::domain_error("crossing lift of a non-hyperbolic word");
      }
    }();
    if (crosses(core, ax)) return ax;
    axes.push_back(ax);
  }
  std::vector<Word> conj{{}};
  for (int len = 1; len <= 3; ++len) {
    std::vector<Word> next;
    for (const Word& u : conj) {
      if (static_cast<int>(u.size()) != len - 1) continue;
      for (int g = 1; g <= S.num_gens; ++g)
        for (int s : {g, -g}) {
          if (!u.empty() && u.back() == -s) continue;
          Word v = u;
          v.push_back(s);
          next.push_back(v);
        }
    }
    for (const Word& u : next) {
      Mobius gu = R.eval(u);
      for (const Geodesic& ax : axes) {
        Geodesic moved = transform(gu, ax);
        if (crosses(core, moved)) return moved;
      }
    }
    conj.insert(conj.end(), next.begin(), next.end());
  }
  throw std::runtime_error("no crossing lift found within the conjugator budget");
}

// Shear of the w-geodesic against the core of the given curve, both realized
// in one holonomy representation, in units of full twists about that curve.
inline double annulus_shear(const Surface& S, const Surface::Rep& R, int curve,
                            const Word& w) {
  Mobius cm = R.eval(S.curve_word[curve]);
  Geodesic core = axis(cm);
  double l = translation_length(cm);
  Geodesic lift = crossing_lift(S, R, core, w);
  return shear(core, l, lift);
}

struct AnnulusReport {
  int curve = 0;
  Word wx, wy;                // crossing curves nominated at the reduced points
  long long turns_x = 0;      // integer full twists folded out of each point
  long long turns_y = 0;
  double shear_x = 0.0;       // both nominees realized at the first point
  double shear_y = 0.0;
  double raw = 0.0;           // oriented gap in full-twist units
  long long tw = 0;           // nearest integer, ties toward zero
  bool same = false;          // identical projection classes
  long long dist() const { return same ? 0 : std::llabs(tw) + 1; }
};

// Relative twisting of Y against X about a decomposition curve: each point
// nominates its shortest crossing curve, both nominees are realized in X's
// holonomy, and the twist is the rounded gap between their shadow shears.
// Both points are first folded into the fundamental twist band, where every
// holonomy entry stays moderate, and the folded-out full twists are restored
// as an exact integer shift; without the folding the entries grow like
// exp(|twist|) and the axis extraction drowns in rounding noise.
inline AnnulusReport annulus_projection(const Surface& S, const FNPoint& X,
                                        const FNPoint& Y, int curve,
                                        int budget = kCrossingBudget) {
  Surface::TwistReduction rx = S.reduce_twists(X);
  Surface::TwistReduction ry = S.reduce_twists(Y);
  Surface::Rep RX = S.represent(rx.reduced);
  Surface::Rep RY = S.represent(ry.reduced);
  int piece = piece_of_curve(S, curve);
  AnnulusReport rep;
  rep.curve = curve;
  rep.turns_x = rx.turns[curve];
  rep.turns_y = ry.turns[curve];
  rep.wx = shortest_crossing(S, RX, piece, budget).w;
  rep.wy = shortest_crossing(S, RY, piece, budget).w;
  rep.same = rep.turns_x == rep.turns_y &&
             canonical_curve(rep.wx) == canonical_curve(rep.wy);
  rep.shear_x = annulus_shear(S, RX, curve, rep.wx);
  rep.shear_y = annulus_shear(S, RX, curve, rep.wy);
  rep.raw = kTwistSign * (rep.shear_y - rep.shear_x) +
            static_cast<double>(rep.turns_y - rep.turns_x);
  rep.tw = round_half_to_zero(rep.raw);
  return rep;
}

// Slope tag of a point's projection to a piece: the core's own slope when the
// core is shortest, otherwise the tag of the winning crossing curve. The
// one-holed torus searches the full slope grid; the other pieces tag along
// their twist lattice, where the tags only ever certify bounded distances.
inline Slope piece_tag(const Surface& S, const Surface::Rep& R, int piece,
                       int crossing_budget = kCrossingBudget,
                       int slope_budget = kSlopeBudget) {
  if (S.kind == Surface::Kind::genus1_1)
    return shortest_slope(S, R, slope_budget);
  PoolPick pick = shortest_crossing(S, R, piece, crossing_budget);
  double core_len = R.curve_length(S.curve_word[S.pieces[piece].core]);
  if (core_len < pick.len) return Slope{1, 0};
  return make_slope(pick.offset, 1);
}

// Lattice step that one full core twist induces on a piece's tag family.
inline long long family_twist_step(const Surface& S, int piece) {
  (void)piece;
  return S.kind == Surface::Kind::genus0_4 ? 2 : 1;
}

// Tag of the same projection seen before folding out n full core twists.
inline Slope shift_tag(const Surface& S, int piece, const Slope& tag, long long n) {
  if (tag.q == 0) return tag;  // the core itself is fixed by its own twist
  if (S.kind == Surface::Kind::genus1_1)
    return make_slope(tag.p + n * tag.q, tag.q);
  return make_slope(tag.p + n * family_twist_step(S, piece), tag.q);
}

struct PieceReport {
  int piece = 0;
  Slope tag_x{1, 0};
  Slope tag_y{1, 0};
  long long dist = 0;
};

inline PieceReport piece_projection(const Surface& S, const FNPoint& X,
                                    const FNPoint& Y, int piece,
                                    int crossing_budget = kCrossingBudget,
                                    int slope_budget = kSlopeBudget) {
  Surface::TwistReduction rx = S.reduce_twists(X);
  Surface::TwistReduction ry = S.reduce_twists(Y);
  int core = S.pieces[piece].core;
  PieceReport rep;
  rep.piece = piece;
  rep.tag_x = shift_tag(
      S, piece,
      piece_tag(S, S.represent(rx.reduced), piece, crossing_budget, slope_budget),
      rx.turns[core]);
  rep.tag_y = shift_tag(
      S, piece,
      piece_tag(S, S.represent(ry.reduced), piece, crossing_budget, slope_budget),
      ry.turns[core]);
  rep.dist = farey_distance(rep.tag_x, rep.tag_y);
  return rep;
}

struct MMReport {
  int curve = 0;
  double inv_len_x = 0.0;
  double inv_len_y = 0.0;
  AnnulusReport annulus;
  PieceReport piece;
  double value = 0.0;  // max of the four contributions
};

// Per-curve obstruction between two marked structures: the curve is short at
// one end, or some witness with that core sees the points far apart.
inline MMReport mm_curve(const Surface& S, const FNPoint& X, const FNPoint& Y,
                         int curve, int crossing_budget = kCrossingBudget,
                         int slope_budget = kSlopeBudget) {
  MMReport rep;
  rep.curve = curve;
  rep.inv_len_x = 1.0 / X.length[curve];
  rep.inv_len_y = 1.0 / Y.length[curve];
  rep.annulus = annulus_projection(S, X, Y, curve, crossing_budget);
  rep.piece = piece_projection(S, X, Y, piece_of_curve(S, curve),
                               crossing_budget, slope_budget);
  rep.value = std::max(
      {rep.inv_len_x, rep.inv_len_y, static_cast<double>(rep.annulus.dist()),
       static_cast<double>(rep.piece.dist)});
  return rep;
}

}  // namespace teich
