#include <catch_amalgamated.hpp>

#include <teich/order.hpp>

#include <random>

using namespace teich;

namespace {

std::mt19937_64 rng(0x0c0ffeeu);

double uni(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

Substitution sub(const std::vector<std::string>& images) {
  std::vector<Word> im;
  for (const auto& s : images) im.push_back(parse_word(s));
  return Substitution{im};
}

IntMat ipow(IntMat m, int n) {
  if (n < 0) return ipow(m.inverse(), -n);
  IntMat r;
  for (int i = 0; i < n; ++i) r = r * m;
  return r;
}

// stage of a composite deformation: twist substitution, its slope action,
// and the core it twists about
struct Stage {
  Substitution phi;
  IntMat act;
  Slope core;
};

Stage a_stage(const Surface& S, int n) {
  return {S.twist_up[0].power(n, S.twist_dn[0]), ipow(IntMat{1, 1, 0, 1}, n),
          Slope{1, 0}};
}

Stage b_stage(int n) {
  static const Substitution upB = sub({"ab", "b"});
  static const Substitution dnB = sub({"aB", "b"});
  return {upB.power(n, dnB), ipow(IntMat{1, 0, 1, 1}, n), Slope{0, 1}};
}

// Apply the stages in order by iterated remarking and return the endpoint
// plus the witness family: each stage's core dragged through every later
// stage's slope action.
struct Composite {
  FNPoint Y;
  std::vector<Witness> witnesses;  // in stage order
};

Composite compose(const Surface& S, const FNPoint& X, const std::vector<Stage>& st) {
  Composite c;
  c.Y = X;
  for (const Stage& s : st) c.Y = pullback(S, c.Y, s.phi);
  for (size_t i = 0; i < st.size(); ++i) {
    IntMat drag;
    for (size_t j = i + 1; j < st.size(); ++j) drag = drag * st[j].act;
    c.witnesses.push_back(
        {"stage" + std::to_string(i), drag.inverse().apply(st[i].core)});
  }
  return c;
}

}  // namespace

TEST_CASE("relative twisting between slope classes is exact") {
  // around 1/0 the twisting of p/q is p/q itself
  CHECK(relative_twisting({1, 0}, {3, 1}, {-2, 1}) == 5);
  CHECK(relative_twisting({1, 0}, {-2, 1}, {3, 1}) == -5);
  CHECK(relative_twisting({1, 0}, {7, 2}, {0, 1}) == 3);  // the 7/2 tie rounds toward zero
  CHECK(annular_class_distance({1, 0}, {3, 1}, {3, 1}) == 0);
  CHECK(annular_class_distance({1, 0}, {3, 1}, {-2, 1}) == 6);
  // around 0/1 the classes transport through (p, q) -> (q, -p)
  CHECK(relative_twisting({0, 1}, {1, 3}, {1, -2}) == -5);
  CHECK(annular_class_distance({0, 1}, {1, 3}, {1, -2}) == 6);
  CHECK_THROWS(relative_twisting({1, 0}, {1, 0}, {0, 1}));
}

TEST_CASE("winner search finds the shortest once-crossing class") {
  Surface S = make_surface("genus1_1");
  for (int trial = 0; trial < 8; ++trial) {
    FNPoint X{{uni(0.5, 1.6)}, {uni(-0.45, 0.45)}};
    Surface::Rep RX = S.represent(X);
    for (Slope core : {Slope{1, 0}, Slope{0, 1}, Slope{1, 2}}) {
      Slope w = shortest_once_crossing(S, RX, core);
      REQUIRE(slope_crossing(w, core) == 1);
      double wlen = RX.curve_length(S.slope_word(w));
      // every once-crossing class in a wide brute window is at least as long
      IntMat back = normalize_to_inf(core).inverse();
      for (long long k = -40; k <= 40; ++k) {
        double l = realized_slope_length(S, RX, back.apply({k, 1}));
        CHECK(l >= wlen - 1e-9);
      }
    }
  }
}

TEST_CASE("winners track earthquakes exactly") {
  Surface S = make_surface("genus1_1");
  for (int trial = 0; trial < 8; ++trial) {
    FNPoint X{{uni(0.5, 1.6)}, {uni(-0.45, 0.45)}};
    Surface::Rep RX = S.represent(X);
    Slope wx = shortest_once_crossing(S, RX, {1, 0});
    for (int n : {-7, -3, 4, 9}) {
      FNPoint Y = S.earthquake(X, 0, n * X.length[0]);
      Surface::Rep RY = S.represent(Y);
      Slope wy = shortest_once_crossing(S, RY, {1, 0});
      // a full twist substitutes words exactly, so the winner shifts on the
      // twist lattice
      CHECK(wy == make_slope(wx.p - n * wx.q, wx.q));
      Witness U{"core", {1, 0}};
      CHECK(witness_coefficient(S, RX, RY, U) == std::abs(n) + 1);
    }
  }
}

TEST_CASE("remarking matches lengths through the substitution") {
  Surface S = make_surface("genus1_1");
  std::vector<Substitution> phis = {sub({"b", "A"}), sub({"ab", "b"}),
                                    S.twist_up[0].power(3, S.twist_dn[0])};
  std::vector<Word> probes = {parse_word("a"), parse_word("b"), parse_word("ab"),
                              parse_word("abb"), parse_word("aab")};
  for (const Substitution& phi : phis) {
    FNPoint X{{uni(0.6, 1.4)}, {uni(-0.5, 0.5)}};
    FNPoint Xp = pullback(S, X, phi);
    Surface::Rep RX = S.represent(X), RP = S.represent(Xp);
    for (const Word& w : probes)
      CHECK(RP.curve_length(w) == Catch::Approx(RX.curve_length(phi(w))).margin(1e-5));
  }
}

TEST_CASE("two-stage composites are ordered as constructed") {
  Surface S = make_surface("genus1_1");
  const Calibration& cal = Calibration::active();
  struct Pair { int n, m; };
  for (Pair pm : {Pair{5, 7}, Pair{-6, 8}, Pair{7, -5}, Pair{-8, -6}, Pair{9, 4},
                  Pair{4, 9}}) {
    FNPoint X{{uni(0.55, 0.8)}, {uni(-0.4, 0.4)}};
    for (int order = 0; order < 2; ++order) {
      std::vector<Stage> st;
      if (order == 0)
        st = {a_stage(S, pm.n), b_stage(pm.m)};
      else
        st = {b_stage(pm.m), a_stage(S, pm.n)};
      Composite c = compose(S, X, st);
      Surface::Rep RX = S.represent(X), RY = S.represent(c.Y);
      const Witness& U = c.witnesses[0];
      const Witness& V = c.witnesses[1];
      INFO("n=" << pm.n << " m=" << pm.m << " order=" << order);
      REQUIRE(witnesses_overlap(U, V));
      OrderEvidence e = time_order(S, RX, RY, U, V, cal);
      // coefficients read back the stage magnitudes to realization slack
      long long exp_u = order == 0 ? std::abs(pm.n) : std::abs(pm.m);
      long long exp_v = order == 0 ? std::abs(pm.m) : std::abs(pm.n);
      CHECK(std::llabs(e.d_u - (exp_u + 1)) <= 1);
      CHECK(std::llabs(e.d_v - (exp_v + 1)) <= 1);
      // the first stage is detected as earlier, with clean margins
      CHECK(e.verdict == TimeOrder::first_earlier);
      CHECK(e.u_core_v_x <= 2);
      CHECK(e.v_core_u_y <= 2);
      CHECK(e.u_core_v_y >= cal.order_near_threshold);
      CHECK(e.v_core_u_x >= cal.order_near_threshold);
      // the brick wall between the two far sides: at each endpoint at most
      // one witness can see the other's core far away
      CHECK(std::min(e.u_core_v_x, e.v_core_u_x) <= 2);
      CHECK(std::min(e.u_core_v_y, e.v_core_u_y) <= 2);
      // exchanging the endpoints reverses the order
      OrderEvidence r = time_order(S, RY, RX, U, V, cal);
      CHECK(r.verdict == TimeOrder::second_earlier);
    }
  }
}

TEST_CASE("small coefficients refuse an order") {
  Surface S = make_surface("genus1_1");
  const Calibration& cal = Calibration::active();
  FNPoint X{{uni(0.6, 1.0)}, {uni(-0.4, 0.4)}};
  // a single big twist leaves every other witness small
  FNPoint Y = S.earthquake(X, 0, 8.0 * X.length[0]);
  Surface::Rep RX = S.represent(X), RY = S.represent(Y);
  Witness U{"core", {1, 0}}, V{"cross", {0, 1}};
  OrderEvidence e = time_order(S, RX, RY, U, V, cal);
  CHECK(e.d_u >= 8);
  CHECK(e.d_v < cal.order_near_threshold);
  CHECK(e.verdict == TimeOrder::unordered);
  // non-overlapping witnesses are never compared
  OrderEvidence same = time_order(S, RX, RY, U, U, cal);
  CHECK(same.verdict == TimeOrder::unordered);
}

TEST_CASE("three-stage composites give an acyclic chain in construction order") {
  Surface S = make_surface("genus1_1");
  const Calibration& cal = Calibration::active();
  struct Triple { int n1, n2, n3; };
  for (Triple t : {Triple{5, 5, 6}, Triple{-5, 6, -5}, Triple{6, -5, 5}}) {
    FNPoint X{{uni(0.5, 0.65)}, {uni(-0.3, 0.3)}};
    std::vector<Stage> st = {a_stage(S, t.n1), b_stage(t.n2), a_stage(S, t.n3)};
    Composite c = compose(S, X, st);
    INFO("stages " << t.n1 << " " << t.n2 << " " << t.n3);
    auto M = time_order_matrix(S, X, c.Y, c.witnesses, cal);
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = i + 1; j < 3; ++j) {
        INFO("pair " << i << "," << j);
        CHECK(M[i][j] == TimeOrder::first_earlier);
      }
    CHECK_FALSE(order_has_cycle(M));
    auto sources = maximal_elements(M);
    REQUIRE(sources.size() == 1);
    CHECK(sources[0] == 0);
  }
}
