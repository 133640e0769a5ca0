#include <catch_amalgamated.hpp>

#include <teich/farey.hpp>
#include <teich/words.hpp>

#include <map>
#include <queue>
#include <random>
#include <set>

using namespace teich;

TEST_CASE("word reduction and cyclic forms") {
  REQUIRE(reduced(parse_word("abBA")).empty());
  REQUIRE(format_word(reduced(parse_word("abBc"))) == "ac");
  REQUIRE(format_word(cyclic_reduced(parse_word("Cabc"))) == "ab");
  REQUIRE(format_word(cyclic_reduced(parse_word("Babca"))) == "Babca");
  REQUIRE(canonical_cyclic(parse_word("bca")) == canonical_cyclic(parse_word("abc")));
  REQUIRE(canonical_cyclic(parse_word("ab")) != canonical_cyclic(parse_word("ba" "B" "ab" "b")));
  // conjugates share the canonical form
  Word w = parse_word("abAB");
  Word g = parse_word("bba");
  REQUIRE(canonical_cyclic(conj(g, w)) == canonical_cyclic(w));
  // unoriented identity merges a curve with its inverse
  REQUIRE(canonical_curve(w) == canonical_curve(inv(w)));
  REQUIRE(same_curve(parse_word("ab"), conj(parse_word("aaab"), parse_word("BA"))));
  REQUIRE_FALSE(same_curve(parse_word("ab"), parse_word("aab")));
}

TEST_CASE("substitutions compose and take powers") {
  // right twist template: a -> a, b -> ba
  Substitution t{{parse_word("a"), parse_word("ba")}};
  Substitution tinv{{parse_word("a"), parse_word("bA")}};
  REQUIRE(format_word(t(parse_word("b"))) == "ba");
  REQUIRE(format_word(t(t(parse_word("b")))) == "baa");
  REQUIRE(format_word(t.after(t)(parse_word("b"))) == "baa");
  REQUIRE(format_word(t.power(3, tinv)(parse_word("b"))) == "baaa");
  REQUIRE(format_word(t.power(-2, tinv)(parse_word("b"))) == "bAA");
  REQUIRE(t.power(0, tinv)(parse_word("ab")) == parse_word("ab"));
  // inverse really inverts
  REQUIRE(tinv(t(parse_word("babA"))) == parse_word("babA"));
}

TEST_CASE("slope canonicalization") {
  REQUIRE(make_slope(-2, -4) == make_slope(1, 2));
  REQUIRE(make_slope(3, -6) == make_slope(-1, 2));
  REQUIRE(make_slope(-5, 0) == make_slope(1, 0));
  REQUIRE(make_slope(0, 7) == make_slope(0, 1));
  REQUIRE(parse_slope("3/5") == make_slope(3, 5));
  REQUIRE(parse_slope("-4") == make_slope(-4, 1));
  REQUIRE(to_string(make_slope(7, -14)) == "-1/2");
  REQUIRE_THROWS_AS(make_slope(0, 0), std::invalid_argument);
}

TEST_CASE("farey adjacency basics") {
  REQUIRE(farey_adjacent(make_slope(1, 0), make_slope(0, 1)));
  REQUIRE(farey_adjacent(make_slope(1, 0), make_slope(5, 1)));
  REQUIRE(farey_adjacent(make_slope(1, 2), make_slope(1, 1)));
  REQUIRE(farey_adjacent(make_slope(1, 2), make_slope(0, 1)));
  REQUIRE_FALSE(farey_adjacent(make_slope(1, 2), make_slope(1, 0)));
  REQUIRE_FALSE(farey_adjacent(make_slope(2, 5), make_slope(1, 0)));
}

TEST_CASE("frozen small distances") {
  REQUIRE(farey_distance(make_slope(1, 0), make_slope(1, 0)) == 0);
  REQUIRE(farey_distance(make_slope(1, 0), make_slope(0, 1)) == 1);
  REQUIRE(farey_distance(make_slope(1, 2), make_slope(1, 0)) == 2);
  REQUIRE(farey_distance(make_slope(2, 5), make_slope(1, 0)) == 3);
  REQUIRE(farey_distance(make_slope(5, 2), make_slope(0, 1)) == 3);
}

TEST_CASE("farey parents are adjacent with the right mediant") {
  std::mt19937_64 gen(11ULL);
  std::uniform_int_distribution<long long> num(-60, 60), den(2, 60);
  int done = 0;
  while (done < 300) {
    long long p = num(gen), q = den(gen);
    if (std::gcd(std::abs(p), q) != 1) continue;
    Slope s = make_slope(p, q);
    auto [u, v] = farey_parents(s);
    REQUIRE(farey_adjacent(u, v));
    REQUIRE(farey_adjacent(u, s));
    REQUIRE(farey_adjacent(v, s));
    REQUIRE(make_slope(u.p + v.p, u.q + v.q) == s);
    REQUIRE(u.q < s.q);
    REQUIRE(v.q < s.q);
    ++done;
  }
}

namespace {

// All Farey neighbors of s with both coordinates bounded by cap. The
// neighbors of p/q form a single integer family n_k = n_0 + k (p, q), so the
// admissible k range is solved directly instead of scanned.
std::vector<Slope> neighbors_capped(const Slope& s, long long cap) {
  IntMat M = normalize_to_inf(s).inverse();  // columns: s and one neighbor
  long long r = M.b, t = M.d;
  long long klo = -4 * cap, khi = 4 * cap;
  auto clamp_range = [&](long long base, long long step) {
    if (step == 0) return;
    double lo = (-cap - static_cast<double>(base)) / step;
    double hi = (cap - static_cast<double>(base)) / step;
    if (step < 0) std::swap(lo, hi);
    klo = std::max(klo, static_cast<long long>(std::floor(lo)));
    khi = std::min(khi, static_cast<long long>(std::ceil(hi)));
  };
  clamp_range(r, s.p);
  clamp_range(t, s.q);
  std::vector<Slope> out;
  for (long long k = klo; k <= khi; ++k) {
    long long np = r + k * s.p, nq = t + k * s.q;
    if (np == 0 && nq == 0) continue;
    Slope n = make_slope(np, nq);
    if (std::abs(n.p) <= cap && std::abs(n.q) <= cap) out.push_back(n);
  }
  return out;
}

int bfs_distance(const Slope& a, const Slope& b, long long cap, int radius) {
  if (a == b) return 0;
  std::map<Slope, int> dist{{a, 0}};
  std::queue<Slope> q;
  q.push(a);
  while (!q.empty()) {
    Slope s = q.front();
    q.pop();
    int d = dist[s];
    if (d >= radius) continue;
    for (const Slope& n : neighbors_capped(s, cap)) {
      if (dist.count(n)) continue;
      if (n == b) return d + 1;
      dist[n] = d + 1;
      q.push(n);
    }
  }
  return -1;
}

}  // namespace

TEST_CASE("descent distance is certified by an explicit geodesic and BFS") {
  std::mt19937_64 gen(12ULL);
  std::uniform_int_distribution<long long> coord(-12, 12);
  int done = 0;
  while (done < 200) {
    long long p1 = coord(gen), q1 = coord(gen), p2 = coord(gen), q2 = coord(gen);
    if ((p1 == 0 && q1 == 0) || (p2 == 0 && q2 == 0)) continue;
    Slope a = make_slope(p1, q1), b = make_slope(p2, q2);
    int d = farey_distance(a, b);
    // explicit path: endpoints right, consecutive vertices adjacent
    std::vector<Slope> path = farey_geodesic(a, b);
    REQUIRE(path.front() == a);
    REQUIRE(path.back() == b);
    REQUIRE(static_cast<int>(path.size()) == d + 1);
    for (size_t i = 0; i + 1 < path.size(); ++i)
      REQUIRE(farey_adjacent(path[i], path[i + 1]));
    // BFS in the subgraph with both coordinates capped: a tessellation
    // geodesic stays between its endpoints, so the cap is generous
    long long cap = 8 * (std::abs(a.p) + std::abs(a.q) + std::abs(b.p) + std::abs(b.q)) + 16;
    int bfs = bfs_distance(a, b, cap, d);
    REQUIRE(bfs == d);
    ++done;
  }
}

TEST_CASE("distance is symmetric and unimodular invariant") {
  std::mt19937_64 gen(13ULL);
  std::uniform_int_distribution<long long> coord(-9, 9);
  std::uniform_int_distribution<int> step(0, 2);
  int done = 0;
  while (done < 150) {
    long long p1 = coord(gen), q1 = coord(gen), p2 = coord(gen), q2 = coord(gen);
    if ((p1 == 0 && q1 == 0) || (p2 == 0 && q2 == 0)) continue;
    Slope a = make_slope(p1, q1), b = make_slope(p2, q2);
    int d = farey_distance(a, b);
    REQUIRE(farey_distance(b, a) == d);
    // random unimodular matrix as a short product of elementary moves
    IntMat M;
    for (int i = 0; i < 6; ++i) {
      int s = step(gen);
      IntMat E = s == 0 ? IntMat{1, 1, 0, 1} : (s == 1 ? IntMat{1, 0, 1, 1} : IntMat{0, -1, 1, 0});
      M = M * E;
    }
    REQUIRE(farey_distance(M.apply(a), M.apply(b)) == d);
    ++done;
  }
}
