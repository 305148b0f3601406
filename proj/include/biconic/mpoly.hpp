#pragma once

// Sparse multivariate polynomials over Q in a fixed number of variables.

#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "biconic/integer.hpp"

namespace biconic {

template <size_t N>
class MPoly {
 public:
  using Exponent = std::array<int, N>;

  MPoly() = default;
  MPoly(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (sgn(c) != 0) t_[Exponent{}] = c;
  }
  MPoly(int c) : MPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  static MPoly var(size_t i) {
    Exponent e{};
    e[i] = 1;
    return monomial(Rational(1), e);
  }
  static MPoly monomial(const Rational& c, const Exponent& e) {
    MPoly r;
    if (sgn(c) != 0) r.t_[e] = c;
    return r;
  }

  bool is_zero() const { return t_.empty(); }
  const std::map<Exponent, Rational>& terms() const { return t_; }

  Rational coeff(const Exponent& e) const {
    auto it = t_.find(e);
    return it == t_.end() ? Rational(0) : it->second;
  }

  int total_degree() const {
    int d = -1;
    for (const auto& [e, c] : t_) {
      int s = 0;
      for (int v : e) s += v;
      d = std::max(d, s);
    }
    return d;
  }

  friend MPoly operator+(MPoly a, const MPoly& b) {
    for (const auto& [e, c] : b.t_) a.add_term(e, c);
    return a;
  }
  friend MPoly operator-(MPoly a, const MPoly& b) {
    for (const auto& [e, c] : b.t_) a.add_term(e, -c);
    return a;
  }
  MPoly operator-() const { return MPoly() - *this; }
  friend MPoly operator*(const MPoly& a, const MPoly& b) {
    MPoly r;
    for (const auto& [ea, ca] : a.t_)
      for (const auto& [eb, cb] : b.t_) {
        Exponent e;
        for (size_t i = 0; i < N; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  MPoly& operator+=(const MPoly& o) { return *this = *this + o; }
  MPoly& operator-=(const MPoly& o) { return *this = *this - o; }
  MPoly& operator*=(const MPoly& o) { return *this = *this * o; }
  friend bool operator==(const MPoly& a, const MPoly& b) { return a.t_ == b.t_; }
  friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

  MPoly derivative(size_t i) const {
    MPoly r;
    for (const auto& [e, c] : t_) {
      if (e[i] == 0) continue;
      Exponent f = e;
      --f[i];
      r.add_term(f, c * e[i]);
    }
    return r;
  }

  template <class F>
  F eval(const std::array<F, N>& x) const {
    F acc(0);
    for (const auto& [e, c] : t_) {
      F m = F(c);
      for (size_t i = 0; i < N; ++i)
        for (int k = 0; k < e[i]; ++k) m = F(m * x[i]);
      acc = F(acc + m);
    }
    return acc;
  }

  /// Substitutes each variable by a polynomial in M variables.
  template <size_t M>
  MPoly<M> substitute(const std::array<MPoly<M>, N>& x) const {
    MPoly<M> acc;
    for (const auto& [e, c] : t_) {
      MPoly<M> m(c);
      for (size_t i = 0; i < N; ++i)
        for (int k = 0; k < e[i]; ++k) m *= x[i];
      acc += m;
    }
    return acc;
  }

 private:
  void add_term(const Exponent& e, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = t_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) t_.erase(it);
    }
  }

  std::map<Exponent, Rational> t_;
};

template <size_t N>
MPoly<N> pow(const MPoly<N>& b, unsigned e) {
  MPoly<N> r(1);
  for (unsigned i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace biconic
