#ifndef DECOLAB_LIEALG_NCPOLY_HPP
#define DECOLAB_LIEALG_NCPOLY_HPP

// Elements of the universal enveloping algebra: linear combinations of words
// in the generators. The canonical (PBW) form has every word nondecreasing in
// generator declaration order.

#include "decolab/liealg/algebra.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace decolab::liealg {

using Word = std::vector<std::size_t>;

class NcPoly {
public:
  NcPoly() = default;
  NcPoly(Word w, Scalar c = Scalar(1)) { add(std::move(w), c); }
  static NcPoly constant(Scalar c) { return NcPoly(Word{}, std::move(c)); }
  static NcPoly generator(std::size_t i) { return NcPoly(Word{i}); }
  static NcPoly generator(const LieAlgebra &alg, const std::string &name) { return generator(alg.index(name)); }

  const std::map<Word, Scalar> &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add(Word w, const Scalar &c) {
    if (c.is_zero())
      return;
    auto [it, inserted] = terms_.emplace(std::move(w), c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero())
        terms_.erase(it);
    }
  }

  NcPoly operator+(const NcPoly &o) const {
    NcPoly out = *this;
    for (const auto &[w, c] : o.terms_)
      out.add(w, c);
    return out;
  }
  NcPoly operator-() const { return *this * Scalar(-1); }
  NcPoly operator-(const NcPoly &o) const { return *this + (-o); }
  NcPoly operator*(const Scalar &s) const {
    NcPoly out;
    for (const auto &[w, c] : terms_)
      out.add(w, c * s);
    return out;
  }
  /// Concatenation product (not normalized).
  NcPoly operator*(const NcPoly &o) const {
    NcPoly out;
    for (const auto &[w1, c1] : terms_)
      for (const auto &[w2, c2] : o.terms_) {
        Word w = w1;
        w.insert(w.end(), w2.begin(), w2.end());
        out.add(std::move(w), c1 * c2);
      }
    return out;
  }

  bool is_ordered() const {
    for (const auto &[w, c] : terms_)
      if (!std::is_sorted(w.begin(), w.end()))
        return false;
    return true;
  }

  friend bool operator==(const NcPoly &, const NcPoly &) = default;

  std::string to_string(const LieAlgebra &alg) const {
    if (terms_.empty())
      return "0";
    std::string out;
    bool first = true;
    for (const auto &[w, c] : terms_) {
      if (!first)
        out += " + ";
      first = false;
      out += "(" + c.to_string() + ")";
      for (auto g : w)
        out += "*" + alg.generators().at(g);
    }
    return out;
  }

private:
  std::map<Word, Scalar> terms_;
};

namespace detail {

inline void check_alphabet(const NcPoly &p, const LieAlgebra &alg) {
  for (const auto &[w, c] : p.terms())
    for (auto g : w)
      if (g >= alg.dim())
        throw UnknownGeneratorError("polynomial references generator index " + std::to_string(g));
}

/// Rewrites the descent at position i: ... X_b X_a ... (b > a) becomes
/// ... X_a X_b ... + ... [X_b, X_a] ...
inline void rewrite_at(const Word &w, const Scalar &c, std::size_t i, const LieAlgebra &alg, NcPoly &pending) {
  Word swapped = w;
  std::swap(swapped[i], swapped[i + 1]);
  pending.add(std::move(swapped), c);
  const auto br = alg.bracket(w[i], w[i + 1]);
  for (const auto &[g, s] : br.terms()) {
    Word shorter(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
    shorter.push_back(g);
    shorter.insert(shorter.end(), w.begin() + static_cast<std::ptrdiff_t>(i + 2), w.end());
    pending.add(std::move(shorter), c * s);
  }
}

inline std::vector<std::size_t> descents(const Word &w) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] > w[i + 1])
      out.push_back(i);
  return out;
}

template <class Pick> NcPoly reduce(const NcPoly &p, const LieAlgebra &alg, Pick &&pick) {
  check_alphabet(p, alg);
  NcPoly pending = p;
  NcPoly done;
  while (!pending.is_zero()) {
    auto [word, coeff, pos] = pick(pending);
    Word w = word;
    Scalar c = coeff;
    pending.add(w, -c);
    if (pos < 0)
      done.add(std::move(w), c);
    else
      rewrite_at(w, c, static_cast<std::size_t>(pos), alg, pending);
  }
  return done;
}

} // namespace detail

/// PBW normal form, always rewriting the leftmost descent of the smallest
/// pending word.
inline NcPoly nc_normal_form(const NcPoly &p, const LieAlgebra &alg) {
  return detail::reduce(p, alg, [](const NcPoly &pending) {
    const auto &[w, c] = *pending.terms().begin();
    const auto d = detail::descents(w);
    return std::make_tuple(w, c, d.empty() ? std::ptrdiff_t{-1} : static_cast<std::ptrdiff_t>(d.front()));
  });
}

/// PBW normal form with the pending word and the descent to rewrite both
/// chosen at random. Same result as the deterministic order when the
/// rewriting system is confluent.
template <class Rng> NcPoly nc_normal_form(const NcPoly &p, const LieAlgebra &alg, Rng &rng) {
  return detail::reduce(p, alg, [&rng](const NcPoly &pending) {
    std::uniform_int_distribution<std::size_t> pick_term(0, pending.size() - 1);
    auto it = pending.terms().begin();
    std::advance(it, static_cast<std::ptrdiff_t>(pick_term(rng)));
    const auto d = detail::descents(it->first);
    std::ptrdiff_t pos = -1;
    if (!d.empty()) {
      std::uniform_int_distribution<std::size_t> pick_pos(0, d.size() - 1);
      pos = static_cast<std::ptrdiff_t>(d[pick_pos(rng)]);
    }
    return std::make_tuple(it->first, it->second, pos);
  });
}

/// [X, p] = X p - p X for a generator X.
inline NcPoly commutator(std::size_t x, const NcPoly &p) {
  const auto g = NcPoly::generator(x);
  return g * p - p * g;
}

inline bool is_casimir(const NcPoly &p, const LieAlgebra &alg) {
  for (std::size_t x = 0; x < alg.dim(); ++x)
    if (!nc_normal_form(commutator(x, p), alg).is_zero())
      return false;
  return true;
}

/// Replaces generator i by images[i] everywhere.
inline NcPoly substitute(const NcPoly &p, const std::vector<NcPoly> &images) {
  NcPoly out;
  for (const auto &[w, c] : p.terms()) {
    NcPoly term = NcPoly::constant(c);
    for (auto g : w)
      term = term * images.at(g);
    out = out + term;
  }
  return out;
}

/// Rewrites p, written in alg's generators, in the new basis of `change`
/// (old_j = sum_l Tinv_jl new_l), then normalizes in `target`.
inline NcPoly express_in_basis(const NcPoly &p, const LieAlgebra &alg, const BasisChange &change,
                               const LieAlgebra &target) {
  const auto n = alg.dim();
  detail::ScalarMatrix t(n, std::vector<Scalar>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (const auto &[old, c] : change.new_generators.at(k).second)
      t[k][alg.index(old)] = t[k][alg.index(old)] + c;
  const auto tinv = detail::invert(t);
  std::vector<NcPoly> images(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l)
      if (!tinv[j][l].is_zero())
        images[j] = images[j] + NcPoly::generator(l) * tinv[j][l];
  return nc_normal_form(substitute(p, images), target);
}

struct EpsComponent {
  int power;
  NcPoly poly;
};

/// Substitutes X = eps^{-k_X} X' (indices unchanged) and splits the result
/// into eps-homogeneous parts, ascending in power. Component polynomials have
/// eps-free coefficients.
inline std::vector<EpsComponent> contract_casimir(const NcPoly &p, const LieAlgebra &alg,
                                                  const std::map<std::string, int> &schedule) {
  std::vector<int> k(alg.dim());
  for (std::size_t i = 0; i < alg.dim(); ++i) {
    auto it = schedule.find(alg.generators()[i]);
    if (it == schedule.end())
      throw std::invalid_argument("contract_casimir: schedule does not cover '" + alg.generators()[i] + "'");
    k[i] = it->second;
  }
  detail::check_alphabet(p, alg);
  std::map<int, NcPoly> by_power;
  for (const auto &[w, c] : p.terms()) {
    int shift = 0;
    for (auto g : w)
      shift -= k[g];
    for (const auto &[pw, coeff] : c.terms())
      by_power[pw + shift].add(w, Scalar(coeff));
  }
  std::vector<EpsComponent> out;
  for (auto &[pw, poly] : by_power)
    if (!poly.is_zero())
      out.push_back({pw, std::move(poly)});
  return out;
}

} // namespace decolab::liealg

#endif
