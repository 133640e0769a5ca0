#pragma once

// Marked hyperbolic surfaces in Fenchel-Nielsen coordinates, with exact
// holonomy representations. A surface is described by a fixed pants
// decomposition; a point assigns each decomposition curve a length and a
// twist (in length units along the curve). The holonomy is developed from
// an anchor pants: the first curve's holonomy translates along (0, inf) and
// the adjacent seam meets that axis at height one, so representations of
// different points are directly comparable.
//
// Gluing convention: every cuff carries a frame, a Mobius map taking the
// standard data (geodesic (0, inf) oriented upward, marked point i) to the
// cuff's axis and the foot of its seam to the next cuff. Across a curve with
// twist tau the far side is attached by frame * T(tau) * K with
// K: z -> -1/z, which reverses the axis and fixes the marked point. With
// this convention a twist shift by one full curve length acts on the
// presentation generators as an exact word substitution (recorded below per
// topology), which is what makes earthquakes exact coordinate shifts.

#include <teich/farey.hpp>
#include <teich/hyp2.hpp>
#include <teich/pants.hpp>
#include <teich/words.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace teich {

struct FNPoint {
  std::vector<double> length, twist;
};

// K-flip used in every gluing: swaps the ends of (0, inf), fixes i.
inline Mobius glue_flip() { return {0.0, -1.0, 1.0, 0.0}; }

// Frame of cuff j of a pants anchored at cuff 0: U maps (0, inf) to the
// cuff's axis (oriented along its holonomy) and i to the foot of the seam
// toward cuff j+1. The anchor cuff's frame is the identity.
inline Mobius cuff_frame(const PantsGroup& G, const CuffLengths& l, int j) {
  if (!(l[j] > 0.0)) throw std::invalid_argument("cuff frame needs a closed cuff");
  Geodesic A = axis(G.gen(j));
  Mobius M = map_to_std(A);
  int nxt = (j + 1) % 3;
  double t;
  if (l[nxt] > 0.0) {
    Geodesic B = axis(G.gen(nxt));
    double u = M.apply(B.p), v = M.apply(B.q);
    t = 0.5 * std::log(u * v);
  } else {
    // seam degenerates to the perpendicular toward the cusp's fixed point
    Mobius P = G.gen(nxt);
    double x = P.c == 0.0 ? boundary_inf() : (P.a - P.d) / (2.0 * P.c);
    t = std::log(std::abs(M.apply(x)));
  }
  return M.unit_inverse() * std_translation(t);
}

class Surface {
 public:
  enum class Kind { genus1_1, genus0_4, genus1_2, genus2_0 };

  Kind kind;
  std::string name;
  int num_curves = 0;
  int num_gens = 0;
  int num_cusps = 0;
  std::vector<Word> curve_word;    // decomposition curve i as a word
  std::vector<Word> transversal;   // a curve crossing curve i, seeding pools
  std::vector<Word> peripheral;    // cusp classes
  std::vector<Word> relator;       // defining relations (closed case)
  // Word action of shifting twist i by one full curve length: the holonomy
  // of w at the shifted point equals the holonomy of twist_up[i](w) at the
  // original point, exactly.
  std::vector<Substitution> twist_up, twist_dn;

  // Farey-type witnesses: subsurfaces whose curves are tracked as tagged
  // slope families. For one-curve surfaces the piece is the surface itself;
  // for the larger ones, the four-holed pieces cut out by the other curves.
  struct Piece {
    std::string label;
    int core;  // decomposition curve index inside the piece
  };
  std::vector<Piece> pieces;

  struct Rep {
    const Surface* S = nullptr;
    FNPoint X;
    std::vector<Mobius> gen;

    // The generators are unit determinant, so the product is too; never
    // renormalize by the computed determinant of a long product, which is a
    // catastrophic cancellation of huge entries.
    Mobius eval(const Word& w) const {
      Mobius m;
      for (int x : w) {
        size_t i = static_cast<size_t>(std::abs(x)) - 1;
        if (i >= gen.size()) throw std::out_of_range("letter outside representation");
        m = x > 0 ? m * gen[i] : m * gen[i].unit_inverse();
      }
      if (!std::isfinite(m.a) || !std::isfinite(m.b) || !std::isfinite(m.c) ||
          !std::isfinite(m.d))
        throw std::overflow_error("holonomy overflow while evaluating word");
      return m;
    }

    double curve_length(const Word& w) const {
      double tr = std::abs(eval(w).tr());
      if (tr <= 2.0 + kParabolicTol) return 0.0;  // peripheral or trivial class
      return 2.0 * std::acosh(0.5 * tr);
    }
  };

  void validate(const FNPoint& X) const {
    if (static_cast<int>(X.length.size()) != num_curves ||
        static_cast<int>(X.twist.size()) != num_curves)
      throw std::invalid_argument("coordinate count does not match the surface");
    for (double l : X.length)
      if (!(l > 0.0) || !(l < 700.0))
        throw std::invalid_argument("curve lengths must lie in (0, 700)");
    for (double t : X.twist)
      if (!std::isfinite(t)) throw std::invalid_argument("twists must be finite");
  }

  Rep represent(const FNPoint& X) const {
    validate(X);
    Rep R;
    R.S = this;
    R.X = X;
    const Mobius K = glue_flip();
    auto finish = [&R]() {
      for (Mobius& g : R.gen) {
        double s = std::max(std::max(std::abs(g.a), std::abs(g.b)),
                            std::max(std::abs(g.c), std::abs(g.d)));
        // unit determinant by construction; renormalizing is hygiene that
        // only helps while the computed determinant is trustworthy
        if (s < 1e6) g = g.normalized();
      }
    };
    switch (kind) {
      case Kind::genus1_1: {
        double l = X.length[0], t = X.twist[0];
        CuffLengths L{l, l, 0.0};
        PantsGroup G = anchored_pants_group(L);
        Mobius U1 = cuff_frame(G, L, 1);
        Mobius A = G.g0;
        Mobius B = std_translation(t) * K * U1.unit_inverse();
        R.gen = {A, B};
        break;
      }
      case Kind::genus0_4: {
        double l = X.length[0], t = X.twist[0];
        CuffLengths L{l, 0.0, 0.0};
        PantsGroup G0 = anchored_pants_group(L);
        PantsGroup G1 = anchored_pants_group(L);
        Mobius Phi1 = std_translation(t) * K;
        R.gen = {G0.g0, G0.g1, Phi1 * G1.g1 * Phi1.unit_inverse()};
        break;
      }
      case Kind::genus1_2: {
        double l1 = X.length[0], l2 = X.length[1];
        CuffLengths L{l1, l2, 0.0};
        PantsGroup G0 = anchored_pants_group(L);
        PantsGroup G1 = anchored_pants_group(L);
        Mobius U01 = cuff_frame(G0, L, 1);
        Mobius U11 = cuff_frame(G1, L, 1);
        Mobius Phi1 = std_translation(X.twist[0]) * K;
        Mobius t = U01 * std_translation(X.twist[1]) * K * (Phi1 * U11).unit_inverse();
        R.gen = {G0.g0, G0.g1, t};
        break;
      }
      case Kind::genus2_0: {
        CuffLengths L{X.length[0], X.length[1], X.length[2]};
        PantsGroup G0 = anchored_pants_group(L);
        PantsGroup G1 = anchored_pants_group(L);
        Mobius U01 = cuff_frame(G0, L, 1), U02 = cuff_frame(G0, L, 2);
        Mobius U11 = cuff_frame(G1, L, 1), U12 = cuff_frame(G1, L, 2);
        Mobius Phi1 = std_translation(X.twist[0]) * K;
        Mobius s = U01 * std_translation(X.twist[1]) * K * (Phi1 * U11).unit_inverse();
        Mobius t = U02 * std_translation(X.twist[2]) * K * (Phi1 * U12).unit_inverse();
        R.gen = {G0.g0, G0.g1, s, t};
        break;
      }
    }
    finish();
    return R;
  }

  double curve_length(const FNPoint& X, const Word& w) const {
    return represent(X).curve_length(w);
  }

  FNPoint earthquake(const FNPoint& X0, int curve, double s) const {
    validate(X0);
    if (curve < 0 || curve >= num_curves) throw std::out_of_range("curve index");
    FNPoint X = X0;
    X.twist[curve] += s;
    return X;
  }

  // The point with every twist folded into [-l/2, l/2) plus the integer turn
  // counts that restore the original: X equals the reduced point after
  // turns[i] full twists about each curve. Large twists make holonomy entries
  // exponentially large and numerically hopeless; since full twists act as
  // exact word substitutions, coarse quantities can be computed at the
  // reduced point and shifted back exactly.
  struct TwistReduction {
    FNPoint reduced;
    std::vector<long long> turns;
  };

  TwistReduction reduce_twists(const FNPoint& X) const {
    validate(X);
    TwistReduction r;
    r.reduced = X;
    for (int i = 0; i < num_curves; ++i) {
      double l = X.length[i];
      long long n = static_cast<long long>(std::floor(X.twist[i] / l + 0.5));
      r.reduced.twist[i] = X.twist[i] - static_cast<double>(n) * l;
      r.turns.push_back(n);
    }
    return r;
  }

  // Family of crossing curves of piece p, indexed by twist offset n; member
  // zero is the seeded transversal. Tags use the twist-lattice slope (n, 1)
  // with the core at 1/0.
  Word family_word(int piece, int n) const {
    const Piece& P = pieces[piece];
    switch (kind) {
      case Kind::genus1_1:
        return slope_word(make_slope(n, 1));
      case Kind::genus0_4: {
        int p = n >= 0 ? (n + 1) / 2 : n / 2;
        int q = n - p;
        // B a^p c a^{-q}
        Word w = inv(Word{2});
        w = concat(w, word_pow(Word{1}, p));
        w = concat(w, Word{3});
        w = concat(w, word_pow(Word{1}, -q));
        return w;
      }
      case Kind::genus1_2:
      case Kind::genus2_0: {
        int k = n;
        const Substitution& up = twist_up[P.core];
        const Substitution& dn = twist_dn[P.core];
        return up.power(k, dn)(transversal_in_piece(piece));
      }
    }
    throw std::logic_error("unreachable");
  }

  // Transversal of the piece's core staying inside the piece.
  Word transversal_in_piece(int piece) const {
    const Piece& P = pieces[piece];
    switch (kind) {
      case Kind::genus1_1:
      case Kind::genus0_4:
        return transversal[P.core];
      case Kind::genus1_2:
        // c^-1 a^-1 c a (core b) and c b c^-1 b^-1 (core a)
        return P.core == 1 ? parse_word("CAca") : parse_word("cbCB");
      case Kind::genus2_0:
        if (P.core == 0) return parse_word("cbCB");
        if (P.core == 1) return parse_word("CAca");
        return parse_word("DAda");
    }
    throw std::logic_error("unreachable");
  }

  // Simple closed curve of a given slope on the one-holed torus, by the
  // mediant recursion: W(1/0) = a, W(0/1) = b, W(mediant) = W(lo) W(hi),
  // mirrored through a -> a^-1 for negative slopes.
  Word slope_word(const Slope& s) const {
    if (kind != Kind::genus1_1)
      throw std::domain_error("slope words are defined on the one-holed torus");
    return slope_word_rec(s);
  }

  static Word slope_word_rec(const Slope& s) {
    if (s.q == 0) return {1};
    if (s.p < 0) {
      Word w = slope_word_rec(make_slope(-s.p, s.q));
      Substitution mirror{{inv(Word{1}), Word{2}}};
      return mirror(w);
    }
    if (s.q == 1) return concat(Word{2}, word_pow(Word{1}, static_cast<int>(s.p)));
    auto [u, v] = farey_parents(s);
    // order parents by value (both have positive denominators here)
    if (u.p * v.q > v.p * u.q) std::swap(u, v);
    return concat(slope_word_rec(u), slope_word_rec(v));
  }
};

inline Surface make_surface(const std::string& which) {
  Surface S;
  auto sub = [](std::vector<std::string> images) {
    Substitution s;
    for (const std::string& im : images) s.im.push_back(parse_word(im));
    return s;
  };
  if (which == "genus1_1") {
    S.kind = Surface::Kind::genus1_1;
    S.name = which;
    S.num_curves = 1;
    S.num_gens = 2;
    S.num_cusps = 1;
    S.curve_word = {parse_word("a")};
    S.transversal = {parse_word("b")};
    S.peripheral = {parse_word("BabA")};
    S.twist_up = {sub({"a", "ab"})};
    S.twist_dn = {sub({"a", "Ab"})};
    S.pieces = {{"torus", 0}};
  } else if (which == "genus0_4") {
    S.kind = Surface::Kind::genus0_4;
    S.name = which;
    S.num_curves = 1;
    S.num_gens = 3;
    S.num_cusps = 4;
    S.curve_word = {parse_word("a")};
    S.transversal = {parse_word("Bc")};
    S.peripheral = {parse_word("b"), parse_word("BA"), parse_word("c"), parse_word("Ca")};
    S.twist_up = {sub({"a", "b", "acA"})};
    S.twist_dn = {sub({"a", "b", "Aca"})};
    S.pieces = {{"sphere", 0}};
  } else if (which == "genus1_2") {
    S.kind = Surface::Kind::genus1_2;
    S.name = which;
    S.num_curves = 2;
    S.num_gens = 3;
    S.num_cusps = 2;
    S.curve_word = {parse_word("a"), parse_word("b")};
    S.transversal = {parse_word("c"), parse_word("c")};
    S.peripheral = {parse_word("BA"), parse_word("Cbca")};
    S.twist_up = {sub({"a", "b", "cA"}), sub({"a", "b", "bc"})};
    S.twist_dn = {sub({"a", "b", "ca"}), sub({"a", "b", "Bc"})};
    S.pieces = {{"F1", 1}, {"F2", 0}};
  } else if (which == "genus2_0") {
    S.kind = Surface::Kind::genus2_0;
    S.name = which;
    S.num_curves = 3;
    S.num_gens = 4;
    S.num_cusps = 0;
    S.curve_word = {parse_word("a"), parse_word("b"), parse_word("BA")};
    S.transversal = {parse_word("c"), parse_word("c"), parse_word("d")};
    S.relator = {parse_word("ACBcDabd")};
    S.twist_up = {sub({"a", "b", "cA", "dA"}), sub({"a", "b", "bc", "d"}),
                  sub({"a", "b", "c", "BAd"})};
    S.twist_dn = {sub({"a", "b", "ca", "da"}), sub({"a", "b", "Bc", "d"}),
                  sub({"a", "b", "c", "abd"})};
    S.pieces = {{"W1", 0}, {"W2", 1}, {"W3", 2}};
  } else {
    throw std::invalid_argument("unknown surface kind: " + which);
  }
  return S;
}

inline std::vector<std::string> surface_kinds() {
  return {"genus1_1", "genus0_4", "genus1_2", "genus2_0"};
}

// Report of the structural identities a representation must satisfy; used by
// tests and by the verify subcommand.
struct RepCheck {
  double worst_length_error = 0.0;      // curve words vs coordinates
  double worst_peripheral_error = 0.0;  // |tr| - 2 over cusps
  double worst_relator_error = 0.0;     // distance from +-identity
  bool ok(double tol) const {
    return worst_length_error < tol && worst_peripheral_error < tol &&
           worst_relator_error < tol;
  }
};

inline RepCheck check_representation(const Surface& S, const Surface::Rep& R) {
  RepCheck C;
  for (int i = 0; i < S.num_curves; ++i) {
    double li = R.curve_length(S.curve_word[i]);
    C.worst_length_error = std::max(C.worst_length_error, std::abs(li - R.X.length[i]));
  }
  for (const Word& p : S.peripheral) {
    Mobius m = R.eval(p).normalized();
    C.worst_peripheral_error =
        std::max(C.worst_peripheral_error, std::abs(std::abs(m.tr()) - 2.0));
  }
  for (const Word& r : S.relator) {
    Mobius m = R.eval(r).normalized();
    double s = m.a < 0 ? -1.0 : 1.0;
    double e = std::max({std::abs(s * m.a - 1.0), std::abs(m.b), std::abs(m.c),
                         std::abs(s * m.d - 1.0)});
    C.worst_relator_error = std::max(C.worst_relator_error, e);
  }
  return C;
}

// Shortest member of a piece's crossing family at X, by unimodal descent
// over the twist offset. Returns the offset, word, and length.
struct PoolPick {
  int offset = 0;
  Word w;
  double len = 0.0;
};

inline PoolPick shortest_crossing(const Surface& S, const Surface::Rep& R, int piece,
                                  int budget = 64) {
  auto f = [&](int n) { return R.curve_length(S.family_word(piece, n)); };
  std::map<int, double> memo;
  auto val = [&](int n) {
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    double v = f(n);
    memo[n] = v;
    return v;
  };
  int lo = -budget, hi = budget;
  while (hi - lo > 2) {
    int m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (m1 == m2) ++m2;
    if (val(m1) < val(m2)) hi = m2 - 1;
    else lo = m1 + 1;
  }
  PoolPick best;
  best.offset = lo;
  best.len = val(lo);
  for (int n = lo + 1; n <= hi; ++n)
    if (val(n) < best.len) { best.offset = n; best.len = val(n); }
  // guard against a shallow local plateau
  for (int n : {best.offset - 1, best.offset + 1})
    if (val(n) < best.len) { best.offset = n; best.len = val(n); }
  best.w = S.family_word(piece, best.offset);
  return best;
}

// Slope of a shortest simple closed curve on a one-holed torus point, over a
// deterministic slope budget.
inline Slope shortest_slope(const Surface& S, const Surface::Rep& R, int budget = 12) {
  if (S.kind != Surface::Kind::genus1_1)
    throw std::domain_error("shortest_slope is a one-holed torus operation");
  Slope best{1, 0};
  double best_len = R.curve_length(S.curve_word[0]);
  for (int q = 1; q <= budget; ++q)
    for (int p = -budget; p <= budget; ++p) {
      if (std::gcd(std::abs(p), q) != 1) continue;
      Slope s = make_slope(p, q);
      double l = R.curve_length(S.slope_word(s));
      if (l < best_len - 1e-12 ||
          (std::abs(l - best_len) <= 1e-12 && s < best)) {
        best = s;
        best_len = l;
      }
    }
  return best;
}

// Remarking: the point whose coordinates describe X seen through the mapping
// class phi, characterized by len_w(result) = len_phi(w)(X) for every word.
// One-curve surfaces only. The curve length transports directly; the twist is
// recovered by matching the lengths of two transversal words, which pin the
// twist flow uniquely. The grid-plus-refine search is deterministic.
inline FNPoint pullback(const Surface& S, const FNPoint& X, const Substitution& phi,
                        double radius = 0.0) {
  if (S.num_curves != 1)
    throw std::domain_error("pullback is implemented for one-curve surfaces");
  Surface::Rep RX = S.represent(X);
  double La = RX.curve_length(phi(S.curve_word[0]));
  double Lb = RX.curve_length(phi(S.transversal[0]));
  double Lb2 = RX.curve_length(phi(S.twist_up[0](S.transversal[0])));
  // twist solutions can sit a full transversal length away from zero
  if (radius <= 0.0)
    radius = Lb + Lb2 + 3.0 * (La + X.length[0]) + std::abs(X.twist[0]) + 8.0;
  const Word tb = S.transversal[0];
  const Word tb2 = S.twist_up[0](tb);
  auto g = [&](double t) {
    try {
      Surface::Rep R = S.represent({{La}, {t}});
      double e1 = R.curve_length(tb) - Lb;
      double e2 = R.curve_length(tb2) - Lb2;
      return e1 * e1 + e2 * e2;
    } catch (const std::overflow_error&) {
      // trial twists far from the solution can push transversal holonomies
      // past double range; score them out instead of aborting the search
      return 1e300;
    }
  };
  double step = std::max(std::min(La, 2.0), 0.05) / 8.0;
  std::vector<double> ts, gs;
  for (double t = -radius; t <= radius; t += step) {
    ts.push_back(t);
    gs.push_back(g(t));
  }
  // the objective can dip in several separated basins (the transversal
  // length is nearly even in the twist); refine each local minimum and keep
  // the best polished value
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double best_t = 0.0, best_g = 1e301;
  for (size_t i = 0; i < ts.size(); ++i) {
    bool local = (i == 0 || gs[i] <= gs[i - 1]) &&
                 (i + 1 == ts.size() || gs[i] <= gs[i + 1]);
    if (!local) continue;
    double lo = ts[i] - step, hi = ts[i] + step;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = g(x1), f2 = g(x2);
    for (int k = 0; k < 160; ++k) {
      if (f1 < f2) { hi = x2; x2 = x1; f2 = f1; x1 = hi - gr * (hi - lo); f1 = g(x1); }
      else { lo = x1; x1 = x2; f1 = f2; x2 = lo + gr * (hi - lo); f2 = g(x2); }
    }
    double t_star = 0.5 * (lo + hi);
    double v = g(t_star);
    if (v < best_g) { best_g = v; best_t = t_star; }
  }
  if (best_g > 1e-6)
    throw std::runtime_error("pullback failed to match transversal lengths");
  return {{La}, {best_t}};
}

}  // namespace teich
