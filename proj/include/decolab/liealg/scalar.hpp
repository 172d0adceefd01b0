#ifndef DECOLAB_LIEALG_SCALAR_HPP
#define DECOLAB_LIEALG_SCALAR_HPP

// Exact scalars for structure constants: Laurent polynomials in a formal
// symbol eps with Gaussian-rational coefficients. No floating point.

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace decolab::liealg {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

class GaussianRational {
public:
  GaussianRational() = default;
  GaussianRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {}
  GaussianRational(long long re) : re_(re) {}

  static GaussianRational i() { return {0, 1}; }

  const Rational &re() const { return re_; }
  const Rational &im() const { return im_; }
  bool is_zero() const { return re_ == 0 && im_ == 0; }

  GaussianRational conj() const { return {re_, -im_}; }
  Rational norm() const { return re_ * re_ + im_ * im_; }

  GaussianRational operator-() const { return {-re_, -im_}; }
  GaussianRational operator+(const GaussianRational &o) const { return {re_ + o.re_, im_ + o.im_}; }
  GaussianRational operator-(const GaussianRational &o) const { return {re_ - o.re_, im_ - o.im_}; }
  GaussianRational operator*(const GaussianRational &o) const {
    return {re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_};
  }
  GaussianRational inverse() const {
    if (is_zero())
      throw std::domain_error("division by zero Gaussian rational");
    const Rational n = norm();
    return {re_ / n, -im_ / n};
  }
  GaussianRational operator/(const GaussianRational &o) const { return *this * o.inverse(); }
  GaussianRational &operator+=(const GaussianRational &o) { return *this = *this + o; }
  GaussianRational &operator*=(const GaussianRational &o) { return *this = *this * o; }

  friend bool operator==(const GaussianRational &a, const GaussianRational &b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  std::string to_string() const {
    auto r = [](const Rational &q) {
      std::ostringstream os;
      os << q;
      return os.str();
    };
    if (im_ == 0)
      return r(re_);
    std::string imag;
    if (im_ == 1)
      imag = "i";
    else if (im_ == -1)
      imag = "-i";
    else
      imag = r(im_) + "i";
    if (re_ == 0)
      return imag;
    return "(" + r(re_) + (im_ > 0 ? "+" : "") + imag + ")";
  }

private:
  Rational re_{0};
  Rational im_{0};
};

/// sum_k c_k eps^k with only nonzero c_k stored.
class Scalar {
public:
  Scalar() = default;
  Scalar(GaussianRational c, int power = 0) {
    if (!c.is_zero())
      terms_.emplace(power, std::move(c));
  }
  Scalar(long long c) : Scalar(GaussianRational(c)) {}

  static Scalar i() { return Scalar(GaussianRational::i()); }
  static Scalar eps(int power) { return Scalar(GaussianRational(1), power); }
  static Scalar rational(long long num, long long den) { return Scalar(GaussianRational(Rational(num, den))); }

  const std::map<int, GaussianRational> &terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }
  bool is_monomial() const { return terms_.size() == 1; }
  int min_power() const { return terms_.empty() ? 0 : terms_.begin()->first; }
  int max_power() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

  GaussianRational coeff(int power) const {
    auto it = terms_.find(power);
    return it == terms_.end() ? GaussianRational() : it->second;
  }

  /// Value at eps = 0; undefined if any negative power is present.
  GaussianRational at_zero() const {
    if (min_power() < 0)
      throw std::domain_error("scalar " + to_string() + " has a pole at eps = 0");
    return coeff(0);
  }

  Scalar operator-() const {
    Scalar out;
    for (const auto &[k, c] : terms_)
      out.terms_.emplace(k, -c);
    return out;
  }
  Scalar operator+(const Scalar &o) const {
    Scalar out = *this;
    out += o;
    return out;
  }
  Scalar operator-(const Scalar &o) const { return *this + (-o); }
  Scalar &operator+=(const Scalar &o) {
    for (const auto &[k, c] : o.terms_)
      add_term(k, c);
    return *this;
  }
  Scalar operator*(const Scalar &o) const {
    Scalar out;
    for (const auto &[k1, c1] : terms_)
      for (const auto &[k2, c2] : o.terms_)
        out.add_term(k1 + k2, c1 * c2);
    return out;
  }
  Scalar &operator*=(const Scalar &o) { return *this = *this * o; }

  /// Only monomials c eps^k are units of the Laurent ring.
  Scalar inverse() const {
    if (!is_monomial())
      throw std::domain_error("scalar " + to_string() + " is not invertible");
    const auto &[k, c] = *terms_.begin();
    return Scalar(c.inverse(), -k);
  }

  friend bool operator==(const Scalar &a, const Scalar &b) { return a.terms_ == b.terms_; }

  std::string to_string() const {
    if (terms_.empty())
      return "0";
    std::string out;
    bool first = true;
    for (const auto &[k, c] : terms_) {
      if (!first)
        out += " + ";
      first = false;
      out += c.to_string();
      if (k == 1)
        out += "*eps";
      else if (k != 0)
        out += "*eps^" + std::to_string(k);
    }
    return out;
  }

private:
  void add_term(int k, const GaussianRational &c) {
    if (c.is_zero())
      return;
    auto [it, inserted] = terms_.emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero())
        terms_.erase(it);
    }
  }

  std::map<int, GaussianRational> terms_;
};

} // namespace decolab::liealg

#endif
