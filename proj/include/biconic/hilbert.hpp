#pragma once

// Places of Q and the quadratic Hilbert symbol.

#include <string>

#include "biconic/integer.hpp"

namespace biconic {

/// A place of Q: the real place, or a finite prime.
struct Place {
  Integer p = 0;  // 0 encodes the real place

  static Place real() { return Place{}; }
  static Place prime(const Integer& q) {
    require(is_probable_prime(q), ErrorKind::InvalidArgument, "place: not a prime");
    return Place{q};
  }
  bool is_real() const { return p == 0; }
  std::string to_string() const { return is_real() ? "inf" : p.get_str(); }
  friend bool operator==(const Place& a, const Place& b) { return a.p == b.p; }
  friend bool operator<(const Place& a, const Place& b) {
    // Real place first, then primes ascending.
    if (a.is_real() != b.is_real()) return a.is_real();
    return a.p < b.p;
  }
};

/// (a,b)_v: +1 iff z^2 = a x^2 + b y^2 has a nonzero solution over Q_v.
inline int hilbert_symbol(const Rational& a_in, const Rational& b_in, const Place& v) {
  require(sgn(a_in) != 0 && sgn(b_in) != 0, ErrorKind::ZeroInput, "hilbert_symbol: zero argument");
  if (v.is_real()) return (sgn(a_in) < 0 && sgn(b_in) < 0) ? -1 : 1;
  // Same square class, integral.
  Integer a = a_in.get_num() * a_in.get_den();
  Integer b = b_in.get_num() * b_in.get_den();
  const Integer& p = v.p;
  int alpha = valuation(a, p), beta = valuation(b, p);
  Integer u = a / pow_int(p, static_cast<unsigned long>(alpha));
  Integer w = b / pow_int(p, static_cast<unsigned long>(beta));
  if (p == 2) {
    auto eps = [](const Integer& x) { return mod(Integer((x - 1) / 2), 2) == 0 ? 0 : 1; };
    auto omega = [](const Integer& x) { return mod(Integer((x * x - 1) / 8), 2) == 0 ? 0 : 1; };
    int e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u);
    return e % 2 ? -1 : 1;
  }
  auto legendre = [&](const Integer& x) {
    Integer r = mod(x, p);
    return mpz_jacobi(r.get_mpz_t(), p.get_mpz_t());
  };
  int s = 1;
  if ((alpha * beta) % 2 && mod(p, 4) == 3) s = -s;
  if (beta % 2) s *= legendre(u);
  if (alpha % 2) s *= legendre(w);
  return s;
}

}  // namespace biconic
