#pragma once

// Binary forms in (s, t) over Q.
//
// Coefficients are stored for s^d, s^(d-1) t, ..., t^d.

#include <algorithm>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "biconic/factor.hpp"
#include "biconic/linalg.hpp"

namespace biconic {

class BinaryForm {
 public:
  BinaryForm() = default;
  BinaryForm(int degree, std::vector<Rational> coeffs) : d_(degree), c_(std::move(coeffs)) {
    require(d_ >= 0 && static_cast<int>(c_.size()) == d_ + 1, ErrorKind::InvalidArgument,
            "binary form needs degree+1 coefficients");
  }

  static BinaryForm zero(int degree) { return BinaryForm(degree, std::vector<Rational>(static_cast<size_t>(degree) + 1)); }
  static BinaryForm s() { return BinaryForm(1, {1, 0}); }
  static BinaryForm t() { return BinaryForm(1, {0, 1}); }
  static BinaryForm constant(const Rational& a) { return BinaryForm(0, {a}); }

  /// Homogenization of p to degree d >= deg p.
  static BinaryForm homogenize(const QPoly& p, int degree) {
    require(p.degree() <= degree, ErrorKind::InvalidArgument, "homogenize: degree too small");
    std::vector<Rational> c(static_cast<size_t>(degree) + 1);
    for (int k = 0; k <= p.degree(); ++k) c[static_cast<size_t>(degree - k)] = p.coeff(k);
    return BinaryForm(degree, std::move(c));
  }

  /// The form of degree d through the values f(k, 1), k = 0..d.
  static BinaryForm interpolate(int degree, const std::function<Rational(const Rational&, const Rational&)>& f) {
    std::vector<Rational> xs, ys;
    for (int k = 0; k <= degree; ++k) {
      xs.emplace_back(k);
      ys.push_back(f(Rational(k), Rational(1)));
    }
    return homogenize(biconic::interpolate(xs, ys), degree);
  }

  int degree() const { return d_; }
  const std::vector<Rational>& coeffs() const { return c_; }
  /// Coefficient of s^(d-i) t^i.
  const Rational& coeff(int i) const { return c_[static_cast<size_t>(i)]; }
  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& r) { return sgn(r) == 0; });
  }

  Rational eval(const Rational& s, const Rational& t) const {
    Rational acc = 0, tp = 1;
    for (int i = 0; i <= d_; ++i) {
      acc += c_[static_cast<size_t>(i)] * tp * power(s, d_ - i);
      tp *= t;
    }
    return acc;
  }

  /// F(s, 1) as a polynomial in s.
  QPoly dehomogenize() const {
    std::vector<Rational> p(static_cast<size_t>(d_) + 1);
    for (int i = 0; i <= d_; ++i) p[static_cast<size_t>(d_ - i)] = c_[static_cast<size_t>(i)];
    return QPoly(std::move(p));
  }

  BinaryForm scale(const Rational& a) const {
    BinaryForm r = *this;
    for (auto& v : r.c_) v *= a;
    return r;
  }

  friend BinaryForm operator+(const BinaryForm& a, const BinaryForm& b) {
    require(a.d_ == b.d_, ErrorKind::InvalidArgument, "adding binary forms of different degree");
    BinaryForm r = a;
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
    return r;
  }
  friend BinaryForm operator-(const BinaryForm& a, const BinaryForm& b) { return a + b.scale(-1); }
  friend BinaryForm operator*(const BinaryForm& a, const BinaryForm& b) {
    BinaryForm r = zero(a.d_ + b.d_);
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    return r;
  }
  friend bool operator==(const BinaryForm& a, const BinaryForm& b) { return a.d_ == b.d_ && a.c_ == b.c_; }

  BinaryForm ds() const {
    if (d_ == 0) return zero(0);
    BinaryForm r = zero(d_ - 1);
    for (int i = 0; i < d_; ++i) r.c_[static_cast<size_t>(i)] = c_[static_cast<size_t>(i)] * (d_ - i);
    return r;
  }
  BinaryForm dt() const {
    if (d_ == 0) return zero(0);
    BinaryForm r = zero(d_ - 1);
    for (int i = 1; i <= d_; ++i) r.c_[static_cast<size_t>(i - 1)] = c_[static_cast<size_t>(i)] * i;
    return r;
  }

  /// Exact division by a form known to divide this one.
  BinaryForm divide(const BinaryForm& g) const {
    require(!g.is_zero(), ErrorKind::ZeroInput, "binary form division by zero");
    QPoly a = dehomogenize(), b = g.dehomogenize();
    // Match powers of t that the dehomogenization drops.
    int ta = d_ - a.degree(), tb = g.d_ - b.degree();
    require(ta >= tb, ErrorKind::InvalidArgument, "binary form division is not exact");
    auto [q, r] = divmod(a, b);
    require(r.is_zero(), ErrorKind::InvalidArgument, "binary form division is not exact");
    return homogenize(q, d_ - g.d_);
  }

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i <= d_; ++i) {
      const Rational& c = c_[static_cast<size_t>(i)];
      if (sgn(c) == 0) continue;
      Rational a = abs(c);
      os << (first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + "));
      first = false;
      std::string mono;
      int es = d_ - i, et = i;
      if (es > 0) mono += es == 1 ? "s" : "s^" + std::to_string(es);
      if (et > 0) mono += std::string(mono.empty() ? "" : "*") + (et == 1 ? "t" : "t^" + std::to_string(et));
      if (mono.empty()) {
        os << a.get_str();
      } else {
        if (a != 1) os << a.get_str() << "*";
        os << mono;
      }
    }
    return first ? "0" : os.str();
  }

 private:
  static Rational power(const Rational& x, int e) {
    Rational r = 1;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
  }

  int d_ = 0;
  std::vector<Rational> c_{Rational(0)};
};

/// Homogeneous (Sylvester) resultant; zero iff F and G share a root in P^1.
inline Rational resultant_binary(const BinaryForm& F, const BinaryForm& G) {
  require(!F.is_zero() && !G.is_zero(), ErrorKind::ZeroForm, "resultant of a zero form");
  return sylvester_resultant(F.dehomogenize(), F.degree(), G.dehomogenize(), G.degree());
}

struct BinaryFactorization {
  Rational content;
  std::vector<std::pair<BinaryForm, int>> factors;  // s-monic, or the form t

  BinaryForm expand() const {
    BinaryForm r = BinaryForm::constant(content);
    for (const auto& [f, e] : factors)
      for (int i = 0; i < e; ++i) r = r * f;
    return r;
  }
};

/// Irreducible factorization over Q; a root [1:0] appears as the factor t.
inline BinaryFactorization factor_binary(const BinaryForm& F) {
  require(!F.is_zero(), ErrorKind::ZeroForm, "factoring a zero form");
  QPoly p = F.dehomogenize();
  int tpow = F.degree() - p.degree();
  Factorization fac = factor_unipoly(p);
  BinaryFactorization out;
  out.content = fac.content;
  if (tpow > 0) out.factors.emplace_back(BinaryForm::t(), tpow);
  for (const auto& [g, e] : fac.factors) out.factors.emplace_back(BinaryForm::homogenize(g, g.degree()), e);
  return out;
}

/// Root [s:t] of a linear form a s + b t, as a primitive integer pair.
inline std::pair<Integer, Integer> linear_root(const BinaryForm& L) {
  require(L.degree() == 1 && !L.is_zero(), ErrorKind::InvalidArgument, "linear_root: not a linear form");
  Rational s = -L.coeff(1), t = L.coeff(0);
  Integer den = lcm(s.get_den(), t.get_den());
  Integer si = s.get_num() * (den / s.get_den()), ti = t.get_num() * (den / t.get_den());
  Integer g = gcd(si, ti);
  si /= g;
  ti /= g;
  if (si < 0 || (si == 0 && ti < 0)) {
    si = -si;
    ti = -ti;
  }
  return {si, ti};
}

}  // namespace biconic
