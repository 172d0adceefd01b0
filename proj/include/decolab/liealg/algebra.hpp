#ifndef DECOLAB_LIEALG_ALGEBRA_HPP
#define DECOLAB_LIEALG_ALGEBRA_HPP

// Finite-dimensional Lie algebras given by structure constants over Scalar,
// together with the operations of an Inonu-Wigner contraction: trivial central
// extension, change of basis, eps-rescaling and the eps -> 0 limit.

#include "decolab/liealg/scalar.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace decolab::liealg {

/// Linear combination of generators (by index).
class LieElement {
public:
  LieElement() = default;
  static LieElement basis(std::size_t i, Scalar c = Scalar(1)) {
    LieElement e;
    e.add(i, c);
    return e;
  }

  const std::map<std::size_t, Scalar> &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Scalar coeff(std::size_t i) const {
    auto it = terms_.find(i);
    return it == terms_.end() ? Scalar() : it->second;
  }

  void add(std::size_t i, const Scalar &c) {
    if (c.is_zero())
      return;
    auto [it, inserted] = terms_.emplace(i, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero())
        terms_.erase(it);
    }
  }

  LieElement operator+(const LieElement &o) const {
    LieElement out = *this;
    for (const auto &[i, c] : o.terms_)
      out.add(i, c);
    return out;
  }
  LieElement operator-() const { return *this * Scalar(-1); }
  LieElement operator-(const LieElement &o) const { return *this + (-o); }
  LieElement operator*(const Scalar &s) const {
    LieElement out;
    for (const auto &[i, c] : terms_)
      out.add(i, c * s);
    return out;
  }

  friend bool operator==(const LieElement &, const LieElement &) = default;

private:
  std::map<std::size_t, Scalar> terms_;
};

class UnknownGeneratorError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class JacobiError : public std::runtime_error {
public:
  JacobiError(std::string a, std::string b, std::string c)
      : std::runtime_error("Jacobi identity fails for (" + a + ", " + b + ", " + c + ")"), a(std::move(a)),
        b(std::move(b)), c(std::move(c)) {}
  std::string a, b, c;
};

/// One entry of a bracket table: [a, b] = sum of coeff * generator.
struct BracketSpec {
  std::string a;
  std::string b;
  std::vector<std::pair<std::string, Scalar>> result;
};

class LieAlgebra {
public:
  using Table = std::map<std::pair<std::size_t, std::size_t>, LieElement>;

  /// Validating constructor: rejects unknown names, inconsistent duplicates
  /// and any Jacobi violation.
  LieAlgebra(std::vector<std::string> generators, const std::vector<BracketSpec> &brackets)
      : gens_(std::move(generators)) {
    index_names();
    for (const auto &br : brackets) {
      const auto a = index(br.a);
      const auto b = index(br.b);
      LieElement val;
      for (const auto &[name, c] : br.result)
        val.add(index(name), c);
      if (a == b) {
        if (!val.is_zero())
          throw std::invalid_argument("bracket [" + br.a + ", " + br.a + "] must vanish");
        continue;
      }
      const auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
      if (a > b)
        val = -val;
      if (table_.count(key))
        throw std::invalid_argument("bracket [" + br.a + ", " + br.b + "] given twice");
      if (!val.is_zero())
        table_.emplace(key, std::move(val));
    }
    validate();
  }

  /// Same, from an index-keyed table with a < b keys.
  LieAlgebra(std::vector<std::string> generators, Table table) : gens_(std::move(generators)) {
    index_names();
    for (auto &[key, val] : table) {
      if (key.first >= key.second || key.second >= gens_.size())
        throw std::invalid_argument("bracket table keys must satisfy a < b < dim");
      for (const auto &[i, c] : val.terms())
        if (i >= gens_.size())
          throw UnknownGeneratorError("bracket result references generator index " + std::to_string(i));
      if (!val.is_zero())
        table_.emplace(key, std::move(val));
    }
    validate();
  }

  const std::vector<std::string> &generators() const { return gens_; }
  std::size_t dim() const { return gens_.size(); }
  const Table &table() const { return table_; }

  std::size_t index(const std::string &name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end())
      throw UnknownGeneratorError("unknown generator '" + name + "'");
    return it->second;
  }
  bool has(const std::string &name) const { return by_name_.count(name) > 0; }

  LieElement bracket(std::size_t a, std::size_t b) const {
    if (a == b)
      return {};
    if (a < b) {
      auto it = table_.find({a, b});
      return it == table_.end() ? LieElement() : it->second;
    }
    return -bracket(b, a);
  }
  LieElement bracket(const std::string &a, const std::string &b) const { return bracket(index(a), index(b)); }

  LieElement bracket(const LieElement &x, const LieElement &y) const {
    LieElement out;
    for (const auto &[i, ci] : x.terms())
      for (const auto &[j, cj] : y.terms())
        out = out + bracket(i, j) * (ci * cj);
    return out;
  }

  /// First distinct triple (a < b < c) whose Jacobi sum is nonzero.
  std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> jacobi_violation() const {
    const auto n = dim();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        for (std::size_t c = b + 1; c < n; ++c) {
          const auto ea = LieElement::basis(a), eb = LieElement::basis(b), ec = LieElement::basis(c);
          const auto sum = bracket(ea, bracket(b, c)) + bracket(eb, bracket(c, a)) + bracket(ec, bracket(a, b));
          if (!sum.is_zero())
            return std::make_tuple(a, b, c);
        }
    return std::nullopt;
  }

  /// Human-readable form of one element, e.g. "-i*H + M".
  std::string format(const LieElement &e) const {
    if (e.is_zero())
      return "0";
    std::string out;
    bool first = true;
    for (const auto &[i, c] : e.terms()) {
      if (!first)
        out += " + ";
      first = false;
      out += (c == Scalar(1) ? std::string() : "(" + c.to_string() + ")*") + gens_[i];
    }
    return out;
  }

private:
  void index_names() {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (!by_name_.emplace(gens_[i], i).second)
        throw std::invalid_argument("duplicate generator name '" + gens_[i] + "'");
    if (gens_.empty())
      throw std::invalid_argument("a Lie algebra needs at least one generator");
  }

  void validate() const {
    if (auto bad = jacobi_violation())
      throw JacobiError(gens_[std::get<0>(*bad)], gens_[std::get<1>(*bad)], gens_[std::get<2>(*bad)]);
  }

  std::vector<std::string> gens_;
  std::map<std::string, std::size_t> by_name_;
  Table table_;
};

inline LieAlgebra algebra_from_brackets(std::vector<std::string> gens, const std::vector<BracketSpec> &brackets) {
  return LieAlgebra(std::move(gens), brackets);
}

//------------------------------------------------------------------------------
// Contraction pipeline
//------------------------------------------------------------------------------

/// Appends a generator that commutes with everything.
inline LieAlgebra extend_trivially(const LieAlgebra &alg, const std::string &name) {
  if (alg.has(name))
    throw std::invalid_argument("extend_trivially: generator '" + name + "' already exists");
  auto gens = alg.generators();
  gens.push_back(name);
  return LieAlgebra(std::move(gens), alg.table());
}

/// New basis: new_k = sum_j T_kj old_j, listed in the new generator order.
struct BasisChange {
  std::vector<std::pair<std::string, std::map<std::string, Scalar>>> new_generators;
};

/// Identity change except that `old_name` is replaced in place by
/// `new_name` = combination of old generators.
inline BasisChange replace_generator(const LieAlgebra &alg, const std::string &old_name, const std::string &new_name,
                                     std::map<std::string, Scalar> combination) {
  alg.index(old_name);
  BasisChange ch;
  for (const auto &g : alg.generators()) {
    if (g == old_name)
      ch.new_generators.emplace_back(new_name, combination);
    else
      ch.new_generators.emplace_back(g, std::map<std::string, Scalar>{{g, Scalar(1)}});
  }
  return ch;
}

namespace detail {

using ScalarMatrix = std::vector<std::vector<Scalar>>;

/// Gauss-Jordan inverse over the Laurent ring; every pivot must be a unit
/// (monomial). Throws for singular or non-unit-pivot maps.
inline ScalarMatrix invert(ScalarMatrix a) {
  const auto n = a.size();
  ScalarMatrix inv(n, std::vector<Scalar>(n));
  for (std::size_t i = 0; i < n; ++i)
    inv[i][i] = Scalar(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    for (std::size_t r = col; r < n; ++r)
      if (a[r][col].is_monomial()) {
        piv = r;
        break;
      }
    if (piv == n)
      throw std::domain_error("change_basis: map is singular over the scalar ring");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const Scalar p = a[col][col].inverse();
    for (std::size_t k = 0; k < n; ++k) {
      a[col][k] *= p;
      inv[col][k] *= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero())
        continue;
      const Scalar f = a[r][col];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] = a[r][k] - f * a[col][k];
        inv[r][k] = inv[r][k] - f * inv[col][k];
      }
    }
  }
  return inv;
}

} // namespace detail

inline LieAlgebra change_basis(const LieAlgebra &alg, const BasisChange &change) {
  const auto n = alg.dim();
  if (change.new_generators.size() != n)
    throw std::invalid_argument("change_basis: need exactly one new generator per old generator");
  detail::ScalarMatrix t(n, std::vector<Scalar>(n));
  std::vector<std::string> names;
  for (std::size_t k = 0; k < n; ++k) {
    names.push_back(change.new_generators[k].first);
    for (const auto &[old, c] : change.new_generators[k].second)
      t[k][alg.index(old)] = t[k][alg.index(old)] + c;
  }
  const auto tinv = detail::invert(t);

  // old_j = sum_l tinv[j][l] new_l
  auto to_new = [&](const LieElement &old) {
    LieElement out;
    for (const auto &[j, c] : old.terms())
      for (std::size_t l = 0; l < n; ++l)
        out.add(l, c * tinv[j][l]);
    return out;
  };
  auto as_old = [&](std::size_t k) {
    LieElement e;
    for (std::size_t j = 0; j < n; ++j)
      e.add(j, t[k][j]);
    return e;
  };

  LieAlgebra::Table table;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      auto val = to_new(alg.bracket(as_old(a), as_old(b)));
      if (!val.is_zero())
        table.emplace(std::make_pair(a, b), std::move(val));
    }
  return LieAlgebra(std::move(names), std::move(table));
}

/// Primed generators X' = eps^{k_X} X. Structure constants pick up
/// eps^{k_a + k_b - k_c}; names gain `suffix`.
inline LieAlgebra rescale(const LieAlgebra &alg, const std::map<std::string, int> &schedule,
                          const std::string &suffix = "'") {
  std::vector<int> k(alg.dim());
  for (std::size_t i = 0; i < alg.dim(); ++i) {
    auto it = schedule.find(alg.generators()[i]);
    if (it == schedule.end())
      throw std::invalid_argument("rescale: schedule does not cover generator '" + alg.generators()[i] + "'");
    k[i] = it->second;
  }
  for (const auto &[name, pw] : schedule)
    alg.index(name);
  LieAlgebra::Table table;
  for (const auto &[key, val] : alg.table()) {
    LieElement out;
    for (const auto &[c, s] : val.terms())
      out.add(c, s * Scalar::eps(k[key.first] + k[key.second] - k[c]));
    table.emplace(key, std::move(out));
  }
  auto names = alg.generators();
  for (auto &n : names)
    n += suffix;
  return LieAlgebra(std::move(names), std::move(table));
}

/// eps -> 0 in every structure constant; throws if any constant has a pole.
inline LieAlgebra contract(const LieAlgebra &alg) {
  LieAlgebra::Table table;
  for (const auto &[key, val] : alg.table()) {
    LieElement out;
    for (const auto &[c, s] : val.terms()) {
      if (s.min_power() < 0)
        throw std::domain_error("contract: [" + alg.generators()[key.first] + ", " + alg.generators()[key.second] +
                                "] has negative eps power; the limit is undefined");
      out.add(c, Scalar(s.at_zero()));
    }
    if (!out.is_zero())
      table.emplace(key, std::move(out));
  }
  return LieAlgebra(alg.generators(), std::move(table));
}

/// Exact equality of structure constants after renaming a's generators via
/// `mapping` (a-name -> b-name).
inline bool same_structure(const LieAlgebra &a, const LieAlgebra &b, const std::map<std::string, std::string> &mapping) {
  if (mapping.size() != a.dim() || a.dim() != b.dim())
    throw std::invalid_argument("same_structure: mapping must be a bijection between the generator sets");
  std::vector<std::size_t> to_b(a.dim());
  std::set<std::size_t> hit;
  for (const auto &[from, to] : mapping) {
    const auto ia = a.index(from);
    const auto ib = b.index(to);
    if (!hit.insert(ib).second)
      throw std::invalid_argument("same_structure: mapping is not injective");
    to_b[ia] = ib;
  }
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i + 1; j < a.dim(); ++j) {
      LieElement mapped;
      const auto br = a.bracket(i, j);
      for (const auto &[c, s] : br.terms())
        mapped.add(to_b[c], s);
      if (!(mapped == b.bracket(to_b[i], to_b[j])))
        return false;
    }
  return true;
}

/// Positional mapping: a's i-th generator -> targets[i].
inline std::map<std::string, std::string> name_mapping(const LieAlgebra &a, const std::vector<std::string> &targets) {
  if (targets.size() != a.dim())
    throw std::invalid_argument("name_mapping: size mismatch");
  std::map<std::string, std::string> m;
  for (std::size_t i = 0; i < a.dim(); ++i)
    m[a.generators()[i]] = targets[i];
  return m;
}

} // namespace decolab::liealg

#endif
