#pragma once

// Exact integer and rational helpers on top of GMP.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "biconic/errors.hpp"

namespace biconic {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
  require(den != 0, ErrorKind::InvalidArgument, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// "num/den", with the denominator omitted when it is 1.
inline std::string to_string(const Rational& r) { return r.get_str(); }
inline std::string to_string(const Integer& n) { return n.get_str(); }

inline std::optional<Rational> parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) return std::nullopt;
  auto valid_int = [](const std::string& t) {
    size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i >= t.size()) return false;
    return std::all_of(t.begin() + static_cast<long>(i), t.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  auto strip_plus = [](std::string t) { return (!t.empty() && t[0] == '+') ? t.substr(1) : t; };
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (!valid_int(s)) return std::nullopt;
    return Rational(Integer(strip_plus(s)));
  }
  std::string n = s.substr(0, slash), d = s.substr(slash + 1);
  if (!valid_int(n) || !valid_int(d) || d[0] == '-' || d[0] == '+') return std::nullopt;
  Integer den(d);
  if (den == 0) return std::nullopt;
  return make_rational(Integer(strip_plus(n)), den);
}

inline Integer abs_int(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

/// Least non-negative residue.
inline Integer mod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

/// Representative in (-m/2, m/2].
inline Integer symmetric_mod(const Integer& a, const Integer& m) {
  Integer r = mod(a, m);
  if (2 * r > m) r -= m;
  return r;
}

inline std::optional<Integer> inv_mod(const Integer& a, const Integer& m) {
  Integer r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) return std::nullopt;
  return r;
}

inline Integer pow_int(const Integer& b, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline Integer pow_mod(const Integer& b, const Integer& e, const Integer& m) {
  Integer r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline bool is_probable_prime(const Integer& n) {
  return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

inline Integer next_prime(const Integer& n) {
  Integer r;
  mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

/// Exponent of p in n (n != 0).
inline int valuation(const Integer& n, const Integer& p) {
  require(n != 0, ErrorKind::ZeroInput, "valuation of zero");
  Integer t = n;
  int v = 0;
  while (mpz_divisible_p(t.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

inline int valuation(const Rational& r, const Integer& p) {
  return valuation(r.get_num(), p) - valuation(r.get_den(), p);
}

inline bool is_perfect_square(const Integer& n) {
  return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline Integer isqrt(const Integer& n) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool is_rational_square(const Rational& r) {
  return r >= 0 && is_perfect_square(r.get_num()) && is_perfect_square(r.get_den());
}

inline std::optional<Rational> rational_sqrt(const Rational& r) {
  if (!is_rational_square(r)) return std::nullopt;
  return Rational(isqrt(r.get_num()), isqrt(r.get_den()));
}

namespace detail {

inline Integer pollard_brent(const Integer& n, unsigned long seed) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  Integer y = 2 + seed, c = 1 + seed, m = 64, g = 1, r = 1, q = 1, x, ys;
  auto f = [&](const Integer& v) { return mod(v * v + c, n); };
  while (g == 1) {
    x = y;
    for (Integer i = 0; i < r; ++i) y = f(y);
    Integer k = 0;
    while (k < r && g == 1) {
      ys = y;
      Integer rem = r - k;
      Integer lim = m < rem ? m : rem;
      for (Integer i = 0; i < lim; ++i) {
        y = f(y);
        q = mod(q * abs_int(x - y), n);
      }
      g = gcd(q, n);
      k += m;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = gcd(abs_int(x - ys), n);
    } while (g == 1);
  }
  return g;
}

inline void factor_into(const Integer& n, std::vector<Integer>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    out.push_back(n);
    return;
  }
  for (unsigned long seed = 0;; ++seed) {
    Integer d = pollard_brent(n, seed);
    if (d != n && d != 1) {
      factor_into(d, out);
      factor_into(Integer(n / d), out);
      return;
    }
  }
}

}  // namespace detail

/// Prime factorization of |n| (n != 0), ascending primes.
inline std::vector<std::pair<Integer, int>> factor_integer(const Integer& n) {
  require(n != 0, ErrorKind::ZeroInput, "factor_integer(0)");
  Integer m = abs_int(n);
  std::vector<Integer> primes;
  for (unsigned long p = 2; p < 10000 && m > 1; p += (p == 2 ? 1 : 2)) {
    if (Integer(p) * p > m) break;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      primes.emplace_back(p);
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
    }
  }
  detail::factor_into(m, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<Integer, int>> out;
  for (const auto& p : primes) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1);
    }
  }
  return out;
}

/// Squarefree integer in the same square class as n (sign kept).
inline Integer squarefree_part(const Integer& n) {
  require(n != 0, ErrorKind::ZeroInput, "squarefree_part(0)");
  Integer r = n < 0 ? -1 : 1;
  for (const auto& [p, e] : factor_integer(n))
    if (e % 2) r *= p;
  return r;
}

/// Squarefree integer in the square class of a nonzero rational.
inline Integer squarefree_part(const Rational& r) {
  return squarefree_part(Integer(r.get_num() * r.get_den()));
}

/// Square root of a modulo an odd prime p (Tonelli-Shanks); nullopt for non-residues.
inline std::optional<Integer> sqrt_mod_prime(const Integer& a_in, const Integer& p) {
  Integer a = mod(a_in, p);
  if (a == 0) return Integer(0);
  if (p == 2) return a;
  if (mpz_legendre(a.get_mpz_t(), p.get_mpz_t()) != 1) return std::nullopt;
  Integer q = p - 1;
  unsigned long s = 0;
  while (mpz_even_p(q.get_mpz_t())) {
    q /= 2;
    ++s;
  }
  Integer z = 2;
  while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
  Integer c = pow_mod(z, q, p);
  Integer r = pow_mod(a, (q + 1) / 2, p);
  Integer t = pow_mod(a, q, p);
  unsigned long m = s;
  while (t != 1) {
    unsigned long i = 0;
    Integer tt = t;
    while (tt != 1) {
      tt = mod(tt * tt, p);
      ++i;
    }
    Integer b = c;
    for (unsigned long j = 0; j + i + 1 < m; ++j) b = mod(b * b, p);
    r = mod(r * b, p);
    c = mod(b * b, p);
    t = mod(t * c, p);
    m = i;
  }
  return r;
}

/// Square root of a modulo a squarefree odd-or-2 modulus n with known
/// factorization; nullopt if a is a non-residue at some prime factor.
inline std::optional<Integer> sqrt_mod_squarefree(const Integer& a, const Integer& n) {
  Integer m = abs_int(n);
  if (m == 1) return Integer(0);
  Integer x = 0, modulus = 1;
  for (const auto& [p, e] : factor_integer(m)) {
    require(e == 1, ErrorKind::InvalidArgument, "sqrt_mod_squarefree: modulus not squarefree");
    auto r = sqrt_mod_prime(a, p);
    if (!r) return std::nullopt;
    // CRT combine x (mod modulus) with r (mod p).
    Integer inv = *inv_mod(modulus, p);
    Integer k = mod((*r - x) * inv, p);
    x += k * modulus;
    modulus *= p;
  }
  return mod(x, modulus);
}

/// SplitMix64 finalizer; used to derive independent deterministic streams.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) { return mix64(h ^ mix64(v)); }

inline std::uint64_t hash_integer(std::uint64_t h, const Integer& n) {
  for (char c : n.get_str(16)) h = hash_combine(h, static_cast<unsigned char>(c));
  return hash_combine(h, 0xabcdefULL);
}

}  // namespace biconic
