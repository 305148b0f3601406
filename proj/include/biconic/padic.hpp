#pragma once

// p-adic numbers known to finite precision, and Hensel lifting of simple roots.

#include <climits>
#include <string>

#include "biconic/integer.hpp"
#include "biconic/poly.hpp"

namespace biconic {

/// p^v * u with u a unit known modulo p^m (relative precision m), or zero known
/// modulo p^N (N = kExact for an exact zero).
class PadicValue {
 public:
  static constexpr int kExact = INT_MAX;

  static PadicValue zero(const Integer& p, int abs_prec = kExact) {
    PadicValue r;
    r.p_ = p;
    r.zero_ = true;
    r.abs_ = abs_prec;
    return r;
  }

  /// Image of a rational number with relative precision m.
  static PadicValue from_rational(const Rational& x, const Integer& p, int m) {
    require(m >= 1, ErrorKind::InvalidArgument, "padic precision must be >= 1");
    require(is_probable_prime(p), ErrorKind::InvalidArgument, "padic: p not prime");
    if (sgn(x) == 0) return zero(p);
    int v = biconic::valuation(x, p);
    Integer num = x.get_num(), den = x.get_den();
    if (v > 0) num /= pow_int(p, static_cast<unsigned long>(v));
    if (v < 0) den /= pow_int(p, static_cast<unsigned long>(-v));
    Integer pm = pow_int(p, static_cast<unsigned long>(m));
    return make(p, v, mod(num * *inv_mod(den, pm), pm), m);
  }

  /// Integer residue known modulo p^N (N >= 1); the valuation is extracted.
  static PadicValue from_residue(const Integer& a, const Integer& p, int N) {
    require(N >= 1, ErrorKind::InvalidArgument, "padic precision must be >= 1");
    Integer pn = pow_int(p, static_cast<unsigned long>(N));
    Integer r = mod(a, pn);
    if (r == 0) return zero(p, N);
    int v = biconic::valuation(r, p);
    return make(p, v, Integer(r / pow_int(p, static_cast<unsigned long>(v))), N - v);
  }

  const Integer& prime() const { return p_; }
  bool is_zero() const { return zero_; }
  bool is_exact_zero() const { return zero_ && abs_ == kExact; }
  int valuation() const { return zero_ ? abs_ : v_; }
  int relative_precision() const { return zero_ ? 0 : m_; }
  int absolute_precision() const { return zero_ ? abs_ : v_ + m_; }
  const Integer& unit() const { return u_; }

  /// Residue modulo p^j; requires an integral value known to at least j digits.
  Integer residue(int j) const {
    if (j <= 0) return 0;
    if (j > absolute_precision()) fail(ErrorKind::PrecisionExhausted, "residue beyond known precision");
    if (zero_) return 0;
    require(v_ >= 0, ErrorKind::InvalidArgument, "residue of a non-integral p-adic value");
    Integer pj = pow_int(p_, static_cast<unsigned long>(j));
    if (v_ >= j) return 0;
    return mod(u_ * pow_int(p_, static_cast<unsigned long>(v_)), pj);
  }

  friend PadicValue operator-(const PadicValue& a) {
    if (a.zero_) return a;
    Integer pm = pow_int(a.p_, static_cast<unsigned long>(a.m_));
    return make(a.p_, a.v_, mod(Integer(-a.u_), pm), a.m_);
  }

  friend PadicValue operator+(const PadicValue& a, const PadicValue& b) {
    check_same(a, b);
    int N = std::min(a.absolute_precision(), b.absolute_precision());
    if (a.is_exact_zero()) return b;
    if (b.is_exact_zero()) return a;
    if (a.zero_ || b.zero_) {
      const PadicValue& other = a.zero_ ? b : a;
      if (other.zero_) return zero(a.p_, N);
      if (other.v_ >= N) return zero(a.p_, N);
      return truncated(other, N);
    }
    int v = std::min(a.v_, b.v_);
    if (N <= v) return zero(a.p_, N);
    Integer pn = pow_int(a.p_, static_cast<unsigned long>(N - v));
    Integer s = a.u_ * pow_int(a.p_, static_cast<unsigned long>(a.v_ - v)) +
                b.u_ * pow_int(a.p_, static_cast<unsigned long>(b.v_ - v));
    s = mod(s, pn);
    if (s == 0) return zero(a.p_, N);
    int k = biconic::valuation(s, a.p_);
    return make(a.p_, v + k, Integer(s / pow_int(a.p_, static_cast<unsigned long>(k))), N - v - k);
  }

  friend PadicValue operator-(const PadicValue& a, const PadicValue& b) { return a + (-b); }

  friend PadicValue operator*(const PadicValue& a, const PadicValue& b) {
    check_same(a, b);
    if (a.is_exact_zero() || b.is_exact_zero()) return zero(a.p_);
    if (a.zero_ && b.zero_) return zero(a.p_, a.abs_ + b.abs_);
    if (a.zero_) return zero(a.p_, a.abs_ + b.v_);
    if (b.zero_) return zero(a.p_, b.abs_ + a.v_);
    int m = std::min(a.m_, b.m_);
    Integer pm = pow_int(a.p_, static_cast<unsigned long>(m));
    return make(a.p_, a.v_ + b.v_, mod(a.u_ * b.u_, pm), m);
  }

  friend PadicValue operator/(const PadicValue& a, const PadicValue& b) {
    check_same(a, b);
    if (b.is_exact_zero()) fail(ErrorKind::ZeroInput, "p-adic division by zero");
    if (b.zero_) fail(ErrorKind::PrecisionExhausted, "division by a value indistinguishable from zero");
    if (a.is_exact_zero()) return a;
    if (a.zero_) return zero(a.p_, a.abs_ - b.v_);
    int m = std::min(a.m_, b.m_);
    Integer pm = pow_int(a.p_, static_cast<unsigned long>(m));
    return make(a.p_, a.v_ - b.v_, mod(a.u_ * *inv_mod(b.u_, pm), pm), m);
  }

  /// Agreement to the common absolute precision.
  friend bool operator==(const PadicValue& a, const PadicValue& b) {
    if (a.p_ != b.p_) return false;
    if (a.zero_ != b.zero_) return false;
    if (a.zero_) return a.abs_ == b.abs_;
    return a.v_ == b.v_ && a.m_ == b.m_ && a.u_ == b.u_;
  }

  std::string to_string() const {
    if (zero_) return abs_ == kExact ? "0" : "O(" + p_.get_str() + "^" + std::to_string(abs_) + ")";
    return p_.get_str() + "^" + std::to_string(v_) + "*" + u_.get_str() + " + O(" + p_.get_str() + "^" +
           std::to_string(v_ + m_) + ")";
  }

 private:
  static PadicValue make(const Integer& p, int v, Integer u, int m) {
    if (m <= 0) fail(ErrorKind::PrecisionExhausted, "p-adic result has no significant digits");
    PadicValue r;
    r.p_ = p;
    r.v_ = v;
    r.u_ = std::move(u);
    r.m_ = m;
    return r;
  }
  static PadicValue truncated(const PadicValue& x, int N) {
    int m = std::min(x.m_, N - x.v_);
    return make(x.p_, x.v_, mod(x.u_, pow_int(x.p_, static_cast<unsigned long>(m))), m);
  }
  static void check_same(const PadicValue& a, const PadicValue& b) {
    require(a.p_ == b.p_, ErrorKind::IncompatiblePrime, "p-adic operands at different primes");
  }

  Integer p_ = 2;
  bool zero_ = false;
  int abs_ = 0;
  int v_ = 0;
  Integer u_ = 1;
  int m_ = 1;
};

/// Value of g at an integer, reduced modulo M; g must be p-integral.
inline Integer eval_mod(const std::vector<Integer>& g, const Integer& x, const Integer& M) {
  Integer acc = 0;
  for (auto it = g.rbegin(); it != g.rend(); ++it) acc = mod(acc * x + *it, M);
  return acc;
}

/// Lifts a simple root r0 of g modulo p to a root modulo p^m.
inline PadicValue hensel_lift_root(const QPoly& g, const Integer& p, const Integer& r0, int m) {
  require(!g.is_zero(), ErrorKind::ZeroInput, "hensel_lift_root: zero polynomial");
  require(m >= 1, ErrorKind::InvalidArgument, "hensel_lift_root: precision must be >= 1");
  require(is_probable_prime(p), ErrorKind::InvalidArgument, "hensel_lift_root: p not prime");
  // Scale to integer coefficients and drop common powers of p.
  std::vector<Integer> c = primitive_integer_coeffs(g);
  std::vector<Integer> dc;
  for (size_t i = 1; i < c.size(); ++i) dc.push_back(c[i] * static_cast<unsigned long>(i));
  Integer r = mod(r0, p);
  if (eval_mod(c, r, p) != 0) fail(ErrorKind::NotARoot, "g(r0) is not 0 mod p");
  if (eval_mod(dc, r, p) == 0) fail(ErrorKind::NonsimpleRoot, "g'(r0) is 0 mod p");
  Integer pm = pow_int(p, static_cast<unsigned long>(m));
  for (int prec = 1; prec < m;) {
    prec = std::min(2 * prec, m);
    Integer pk = pow_int(p, static_cast<unsigned long>(prec));
    Integer gv = eval_mod(c, r, pk), dv = eval_mod(dc, r, pk);
    r = mod(r - gv * *inv_mod(dv, pk), pk);
  }
  return PadicValue::from_residue(r, p, m);
}

}  // namespace biconic
