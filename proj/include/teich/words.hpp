#pragma once

// Words in a finitely generated free group. A word is a sequence of nonzero
// letters: +k is generator k (1-based), -k its inverse. Curves on a surface
// are carried by conjugacy classes, compared through canonical cyclic forms.

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace teich {

using Word = std::vector<int>;

inline Word reduced(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (int x : w) {
    if (x == 0) throw std::invalid_argument("word letters must be nonzero");
    if (!out.empty() && out.back() == -x) out.pop_back();
    else out.push_back(x);
  }
  return out;
}

inline Word inv(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
  return out;
}

inline Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return reduced(out);
}

inline Word conj(const Word& g, const Word& w) { return concat(concat(g, w), inv(g)); }

inline Word word_pow(const Word& w, int n) {
  Word out;
  Word base = n >= 0 ? w : inv(w);
  for (int i = 0; i < std::abs(n); ++i) out = concat(out, base);
  return out;
}

inline Word cyclic_reduced(const Word& w0) {
  Word w = reduced(w0);
  size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && w[lo] == -w[hi - 1]) { ++lo; --hi; }
  return Word(w.begin() + lo, w.begin() + hi);
}

// Least rotation of the cyclic reduction: a canonical representative of the
// conjugacy class (oriented curve).
inline Word canonical_cyclic(const Word& w0) {
  Word w = cyclic_reduced(w0);
  if (w.size() <= 1) return w;
  Word best = w;
  Word rot = w;
  for (size_t i = 1; i < w.size(); ++i) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (std::lexicographical_compare(rot.begin(), rot.end(), best.begin(), best.end()))
      best = rot;
  }
  return best;
}

// Canonical representative of the unoriented curve: least over both
// traversal directions.
inline Word canonical_curve(const Word& w) {
  Word f = canonical_cyclic(w), b = canonical_cyclic(inv(w));
  return std::lexicographical_compare(f.begin(), f.end(), b.begin(), b.end()) ? f : b;
}

inline bool same_curve(const Word& a, const Word& b) {
  return canonical_curve(a) == canonical_curve(b);
}

inline std::string format_word(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (int x : w) {
    int i = std::abs(x) - 1;
    if (i > 25) throw std::out_of_range("cannot format generator beyond z");
    s += static_cast<char>((x > 0 ? 'a' : 'A') + i);
  }
  return s;
}

inline Word parse_word(const std::string& s) {
  if (s == "1") return {};
  Word w;
  for (char c : s) {
    if (std::islower(static_cast<unsigned char>(c))) w.push_back(c - 'a' + 1);
    else if (std::isupper(static_cast<unsigned char>(c))) w.push_back(-(c - 'A' + 1));
    else throw std::invalid_argument("bad word character");
  }
  return w;
}

// Endomorphism of the free group given by generator images (0-based index:
// generator k+1 maps to im[k]).
struct Substitution {
  std::vector<Word> im;

  Word operator()(const Word& w) const {
    Word out;
    for (int x : w) {
      size_t i = static_cast<size_t>(std::abs(x)) - 1;
      if (i >= im.size()) throw std::out_of_range("letter outside substitution domain");
      const Word& g = im[i];
      if (x > 0) out.insert(out.end(), g.begin(), g.end());
      else {
        Word gi = inv(g);
        out.insert(out.end(), gi.begin(), gi.end());
      }
    }
    return reduced(out);
  }

  // (this after other): apply other first.
  Substitution after(const Substitution& other) const {
    Substitution r;
    r.im.reserve(other.im.size());
    for (const Word& g : other.im) r.im.push_back((*this)(g));
    return r;
  }

  Substitution power(int n, const Substitution& inverse_sub) const {
    size_t ngen = im.size();
    Substitution r;
    for (size_t k = 0; k < ngen; ++k) r.im.push_back(Word{static_cast<int>(k) + 1});
    const Substitution& step = n >= 0 ? *this : inverse_sub;
    for (int i = 0; i < std::abs(n); ++i) r = step.after(r);
    return r;
  }
};

inline Substitution identity_substitution(size_t ngen) {
  Substitution s;
  for (size_t k = 0; k < ngen; ++k) s.im.push_back(Word{static_cast<int>(k) + 1});
  return s;
}

}  // namespace teich
