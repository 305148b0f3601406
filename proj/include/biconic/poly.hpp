#pragma once

// Dense univariate polynomials over an exact field.
//
// The coefficient type F must provide F(int), the field operations and ==.
// Rational (mpq_class) and NfElem both qualify.

#include <algorithm>
#include <cctype>
#include <sstream>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "biconic/errors.hpp"
#include "biconic/integer.hpp"

namespace biconic {

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

template <class F>
bool coeff_is_zero(const F& x) {
  return x == F(0);
}

template <class F>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly(std::initializer_list<F> coeffs) : c_(coeffs) { trim(); }

  static Poly constant(const F& a) { return Poly(std::vector<F>{a}); }
  static Poly monomial(const F& a, int k) {
    std::vector<F> c(static_cast<size_t>(k) + 1, F(0));
    c[static_cast<size_t>(k)] = a;
    return Poly(std::move(c));
  }
  static Poly x() { return monomial(F(1), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<F>& coeffs() const { return c_; }
  F coeff(int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)] : F(0); }
  const F& leading() const {
    require(!c_.empty(), ErrorKind::ZeroInput, "leading coefficient of zero polynomial");
    return c_.back();
  }

  F eval(const F& x) const {
    F acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = F(acc * x + *it);
    return acc;
  }

  Poly derivative() const {
    std::vector<F> d;
    for (size_t i = 1; i < c_.size(); ++i) d.push_back(F(c_[i] * F(static_cast<int>(i))));
    return Poly(std::move(d));
  }

  Poly monic() const {
    if (is_zero()) return *this;
    F inv = F(F(1) / leading());
    return scale(inv);
  }

  Poly scale(const F& a) const {
    std::vector<F> r;
    r.reserve(c_.size());
    for (const auto& v : c_) r.push_back(F(v * a));
    return Poly(std::move(r));
  }

  Poly operator-() const { return scale(F(-1)); }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<F> r(std::max(a.c_.size(), b.c_.size()), F(0));
    for (size_t i = 0; i < a.c_.size(); ++i) r[i] = a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) r[i] = F(r[i] + b.c_[i]);
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<F> r(a.c_.size() + b.c_.size() - 1, F(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (coeff_is_zero(a.c_[i])) continue;
      for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] = F(r[i + j] + a.c_[i] * b.c_[j]);
    }
    return Poly(std::move(r));
  }
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (size_t i = 0; i < a.c_.size(); ++i)
      if (!(a.c_[i] == b.c_[i])) return false;
    return true;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Quotient and remainder; b must be nonzero.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    require(!b.is_zero(), ErrorKind::ZeroInput, "polynomial division by zero");
    if (a.degree() < b.degree()) return {Poly(), a};
    std::vector<F> rem = a.c_;
    std::vector<F> q(static_cast<size_t>(a.degree() - b.degree() + 1), F(0));
    F inv = F(F(1) / b.leading());
    for (int i = a.degree(); i >= b.degree(); --i) {
      F coef = F(rem[static_cast<size_t>(i)] * inv);
      if (coeff_is_zero(coef)) continue;
      size_t shift = static_cast<size_t>(i - b.degree());
      q[shift] = coef;
      for (size_t j = 0; j < b.c_.size(); ++j) rem[shift + j] = F(rem[shift + j] - coef * b.c_[j]);
    }
    rem.resize(static_cast<size_t>(b.degree()));
    return {Poly(std::move(q)), Poly(std::move(rem))};
  }
  friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
  friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

  std::vector<F>& mutable_coeffs() { return c_; }
  void trim() {
    while (!c_.empty() && coeff_is_zero(c_.back())) c_.pop_back();
  }

 private:
  std::vector<F> c_;
};

/// Monic gcd (zero only if both inputs are zero).
template <class F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
  while (!b.is_zero()) {
    auto r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Returns (g, s, t) with s*a + t*b = g, g monic.
template <class F>
std::tuple<Poly<F>, Poly<F>, Poly<F>> ext_gcd(const Poly<F>& a, const Poly<F>& b) {
  Poly<F> r0 = a, r1 = b, s0 = Poly<F>::constant(F(1)), s1, t0, t1 = Poly<F>::constant(F(1));
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    auto s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    auto t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  F inv = F(F(1) / r0.leading());
  return {r0.scale(inv), s0.scale(inv), t0.scale(inv)};
}

template <class F>
Poly<F> pow(const Poly<F>& b, unsigned e) {
  Poly<F> r = Poly<F>::constant(F(1)), base = b;
  while (e) {
    if (e & 1u) r *= base;
    base *= base;
    e >>= 1u;
  }
  return r;
}

/// a(b(x)).
template <class F>
Poly<F> compose(const Poly<F>& a, const Poly<F>& b) {
  Poly<F> r;
  for (int i = a.degree(); i >= 0; --i) r = r * b + Poly<F>::constant(a.coeff(i));
  return r;
}

using QPoly = Poly<Rational>;

inline std::string to_string(const QPoly& p, const std::string& var = "x") {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.degree(); i >= 0; --i) {
    Rational c = p.coeff(i);
    if (sgn(c) == 0) continue;
    bool neg = sgn(c) < 0;
    Rational a = neg ? Rational(-c) : c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    if (i == 0) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

/// Least common multiple of coefficient denominators.
inline Integer denominator_lcm(const QPoly& p) {
  Integer l = 1;
  for (const auto& c : p.coeffs()) l = lcm(l, c.get_den());
  return l;
}

/// Integer coefficients of the primitive part (positive leading coefficient).
inline std::vector<Integer> primitive_integer_coeffs(const QPoly& p) {
  require(!p.is_zero(), ErrorKind::ZeroInput, "primitive part of zero polynomial");
  Integer l = denominator_lcm(p);
  std::vector<Integer> out;
  Integer g = 0;
  for (const auto& c : p.coeffs()) {
    Integer v = c.get_num() * (l / c.get_den());
    out.push_back(v);
    g = gcd(g, v);
  }
  if (out.back() < 0) g = -g;
  for (auto& v : out) v /= g;
  return out;
}

inline QPoly from_integers(const std::vector<Integer>& c) {
  std::vector<Rational> r;
  r.reserve(c.size());
  for (const auto& v : c) r.emplace_back(v);
  return QPoly(std::move(r));
}

/// Exact Lagrange interpolation through (xs[i], ys[i]) with distinct xs.
inline QPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  require(xs.size() == ys.size() && !xs.empty(), ErrorKind::InvalidArgument, "interpolate: bad sizes");
  QPoly result;
  for (size_t i = 0; i < xs.size(); ++i) {
    QPoly basis = QPoly::constant(Rational(1));
    Rational denom = 1;
    for (size_t j = 0; j < xs.size(); ++j) {
      if (j == i) continue;
      basis *= QPoly{Rational(-xs[j]), Rational(1)};
      denom *= xs[i] - xs[j];
    }
    result += basis.scale(Rational(ys[i] / denom));
  }
  return result;
}

/// Canonical order: degree first, then coefficients from the constant term up.
inline bool canonical_less(const QPoly& a, const QPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = 0; i <= a.degree(); ++i) {
    if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
  }
  return false;
}

}  // namespace biconic
