#pragma once

// Factorization of univariate polynomials over the rationals:
// squarefree decomposition, factorization modulo a good prime
// (distinct-degree + Cantor-Zassenhaus), Hensel lifting, and
// Zassenhaus subset recombination.

#include <algorithm>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "biconic/poly.hpp"

namespace biconic {

/// Supported input degree for factor_unipoly.
inline constexpr int kMaxFactorDegree = 12;

struct Factorization {
  Rational content;                           // leading coefficient of the input
  std::vector<std::pair<QPoly, int>> factors;  // monic irreducible, multiplicity

  QPoly expand() const {
    QPoly r = QPoly::constant(content);
    for (const auto& [f, e] : factors) r *= pow(f, static_cast<unsigned>(e));
    return r;
  }
};

namespace zp {

// Polynomials with coefficients in Z/M, little-endian, trailing zeros trimmed.
using ZPoly = std::vector<Integer>;

inline void trim(ZPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline ZPoly reduce(const ZPoly& a, const Integer& m) {
  ZPoly r;
  r.reserve(a.size());
  for (const auto& c : a) r.push_back(mod(c, m));
  trim(r);
  return r;
}

inline int degree(const ZPoly& a) { return static_cast<int>(a.size()) - 1; }

inline ZPoly add(const ZPoly& a, const ZPoly& b, const Integer& m) {
  ZPoly r(std::max(a.size(), b.size()), Integer(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return reduce(r, m);
}

inline ZPoly sub(const ZPoly& a, const ZPoly& b, const Integer& m) {
  ZPoly r(std::max(a.size(), b.size()), Integer(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return reduce(r, m);
}

inline ZPoly mul_raw(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, Integer(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

inline ZPoly mul(const ZPoly& a, const ZPoly& b, const Integer& m) { return reduce(mul_raw(a, b), m); }

inline ZPoly scale(const ZPoly& a, const Integer& c, const Integer& m) {
  ZPoly r;
  for (const auto& v : a) r.push_back(v * c);
  return reduce(r, m);
}

/// Division by b whose leading coefficient is a unit mod m.
inline std::pair<ZPoly, ZPoly> divmod(const ZPoly& a, const ZPoly& b, const Integer& m) {
  require(!b.empty(), ErrorKind::ZeroInput, "zp::divmod by zero");
  auto inv = inv_mod(b.back(), m);
  require(inv.has_value(), ErrorKind::InvalidArgument, "zp::divmod: leading coefficient not a unit");
  ZPoly rem = reduce(a, m);
  if (degree(rem) < degree(b)) return {{}, rem};
  ZPoly q(static_cast<size_t>(degree(rem) - degree(b) + 1), Integer(0));
  for (int i = degree(rem); i >= degree(b); --i) {
    Integer c = mod(rem[static_cast<size_t>(i)] * *inv, m);
    if (c == 0) continue;
    size_t shift = static_cast<size_t>(i - degree(b));
    q[shift] = c;
    for (size_t j = 0; j < b.size(); ++j) rem[shift + j] = mod(rem[shift + j] - c * b[j], m);
  }
  trim(q);
  rem.resize(static_cast<size_t>(std::max(0, degree(b))));
  trim(rem);
  return {q, rem};
}

inline ZPoly monic(const ZPoly& a, const Integer& m) {
  if (a.empty()) return a;
  return scale(a, *inv_mod(a.back(), m), m);
}

/// Monic gcd over the prime field F_p.
inline ZPoly gcd(ZPoly a, ZPoly b, const Integer& p) {
  a = reduce(a, p);
  b = reduce(b, p);
  while (!b.empty()) {
    auto r = divmod(a, b, p).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, p);
}

/// (g, s, t) with s a + t b = g over F_p.
inline std::tuple<ZPoly, ZPoly, ZPoly> ext_gcd(const ZPoly& a, const ZPoly& b, const Integer& p) {
  ZPoly r0 = reduce(a, p), r1 = reduce(b, p), s0{1}, s1, t0, t1{1};
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1, p);
    r0 = std::move(r1);
    r1 = std::move(r);
    auto s2 = sub(s0, mul(q, s1, p), p);
    s0 = std::move(s1);
    s1 = std::move(s2);
    auto t2 = sub(t0, mul(q, t1, p), p);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  Integer inv = *inv_mod(r0.back(), p);
  return {scale(r0, inv, p), scale(s0, inv, p), scale(t0, inv, p)};
}

inline ZPoly powmod(ZPoly base, Integer e, const ZPoly& f, const Integer& p) {
  ZPoly r{1};
  base = divmod(base, f, p).second;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = divmod(mul(r, base, p), f, p).second;
    base = divmod(mul(base, base, p), f, p).second;
    e >>= 1;
  }
  return r;
}

inline ZPoly derivative(const ZPoly& a, const Integer& m) {
  ZPoly d;
  for (size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<unsigned long>(i));
  return reduce(d, m);
}

/// Distinct-degree factorization of a monic squarefree polynomial over F_p.
inline std::vector<std::pair<ZPoly, int>> distinct_degree(ZPoly f, const Integer& p) {
  std::vector<std::pair<ZPoly, int>> out;
  ZPoly x{0, 1};
  ZPoly h = x;
  int i = 0;
  while (degree(f) >= 2 * (i + 1)) {
    ++i;
    h = powmod(h, p, f, p);
    ZPoly g = gcd(f, sub(h, x, p), p);
    if (degree(g) > 0) {
      out.emplace_back(g, i);
      f = divmod(f, g, p).first;
      h = divmod(h, f, p).second;
    }
  }
  if (degree(f) > 0) out.emplace_back(f, degree(f));
  return out;
}

/// Cantor-Zassenhaus equal-degree splitting (p odd).
inline void equal_degree(const ZPoly& g, int d, const Integer& p, std::mt19937_64& rng,
                         std::vector<ZPoly>& out) {
  if (degree(g) == d) {
    out.push_back(g);
    return;
  }
  const Integer e = (pow_int(p, static_cast<unsigned long>(d)) - 1) / 2;
  for (;;) {
    ZPoly a;
    for (int i = 0; i < degree(g); ++i) a.push_back(mod(Integer(static_cast<unsigned long>(rng() >> 1)), p));
    trim(a);
    if (degree(a) < 1) continue;
    ZPoly b = sub(powmod(a, e, g, p), ZPoly{1}, p);
    ZPoly u = gcd(g, b, p);
    if (degree(u) > 0 && degree(u) < degree(g)) {
      equal_degree(u, d, p, rng, out);
      equal_degree(divmod(g, u, p).first, d, p, rng, out);
      return;
    }
  }
}

/// Monic irreducible factors of a monic squarefree polynomial over F_p, p odd.
inline std::vector<ZPoly> factor_squarefree_modp(const ZPoly& f, const Integer& p) {
  std::mt19937_64 rng(0x5eed);
  std::vector<ZPoly> out;
  for (const auto& [g, d] : distinct_degree(f, p)) equal_degree(g, d, p, rng, out);
  std::sort(out.begin(), out.end(), [](const ZPoly& a, const ZPoly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  });
  return out;
}

/// Lifts f ≡ g*h (mod p) to mod p^k, where g is monic and gcd(g,h)=1 mod p.
/// The returned h has leading coefficient exactly lc(f).
inline std::pair<ZPoly, ZPoly> hensel_binary(const ZPoly& f, ZPoly g, ZPoly h, const Integer& p, unsigned k) {
  auto [one, s, t] = ext_gcd(g, h, p);
  require(degree(one) == 0, ErrorKind::Internal, "hensel_binary: factors not coprime mod p");
  h.back() = f.back();
  Integer q = p;
  for (unsigned j = 1; j < k; ++j) {
    ZPoly diff = f;
    ZPoly gh = mul_raw(g, h);
    diff.resize(std::max(diff.size(), gh.size()), Integer(0));
    for (size_t i = 0; i < gh.size(); ++i) diff[i] -= gh[i];
    for (auto& c : diff) {
      require(mpz_divisible_p(c.get_mpz_t(), q.get_mpz_t()) != 0, ErrorKind::Internal, "hensel_binary: lift lost");
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), q.get_mpz_t());
    }
    ZPoly e = reduce(diff, p);
    auto [quot, rem] = divmod(mul(t, e, p), g, p);
    ZPoly dh = add(mul(s, e, p), mul(quot, h, p), p);
    g.resize(std::max(g.size(), rem.size()), Integer(0));
    for (size_t i = 0; i < rem.size(); ++i) g[i] += q * rem[i];
    h.resize(std::max(h.size(), dh.size()), Integer(0));
    for (size_t i = 0; i < dh.size(); ++i) h[i] += q * dh[i];
    q *= p;
  }
  return {reduce(g, q), reduce(h, q)};
}

}  // namespace zp

namespace detail {

inline zp::ZPoly to_zpoly(const std::vector<Integer>& c) {
  zp::ZPoly r(c.begin(), c.end());
  zp::trim(r);
  return r;
}

/// Exact division of integer polynomials; nullopt unless b divides a over Z.
inline std::optional<std::vector<Integer>> exact_divide(const std::vector<Integer>& a, const std::vector<Integer>& b) {
  QPoly qa = from_integers(a), qb = from_integers(b);
  auto [q, r] = divmod(qa, qb);
  if (!r.is_zero()) return std::nullopt;
  std::vector<Integer> out;
  for (const auto& c : q.coeffs()) {
    if (c.get_den() != 1) return std::nullopt;
    out.push_back(c.get_num());
  }
  return out;
}

inline std::vector<Integer> primitive(std::vector<Integer> c) {
  Integer g = 0;
  for (const auto& v : c) g = gcd(g, v);
  if (c.back() < 0) g = -g;
  for (auto& v : c) v /= g;
  return c;
}

/// Irreducible factors over Z of a primitive squarefree integer polynomial.
inline std::vector<std::vector<Integer>> zassenhaus(const std::vector<Integer>& h) {
  const int n = static_cast<int>(h.size()) - 1;
  if (n <= 1) return {h};
  const Integer lc = h.back();

  // Pick the good prime with fewest modular factors among the first few.
  Integer best_p = 0;
  std::vector<zp::ZPoly> best_factors;
  int good_seen = 0;
  for (Integer p = 3; good_seen < 5; p = next_prime(p)) {
    if (mpz_divisible_p(lc.get_mpz_t(), p.get_mpz_t())) continue;
    zp::ZPoly hp = zp::reduce(to_zpoly(h), p);
    if (zp::degree(zp::gcd(hp, zp::derivative(hp, p), p)) > 0) continue;
    ++good_seen;
    auto fac = zp::factor_squarefree_modp(zp::monic(hp, p), p);
    if (best_p == 0 || fac.size() < best_factors.size()) {
      best_p = p;
      best_factors = std::move(fac);
    }
    if (best_factors.size() == 1) break;
  }
  if (best_factors.size() == 1) return {h};
  const Integer p = best_p;

  // Landau-Mignotte style bound on coefficients of lc-scaled factors.
  Integer norm2 = 0, maxc = 0;
  for (const auto& c : h) {
    norm2 += c * c;
    maxc = std::max(maxc, abs_int(c));
  }
  Integer bound = pow_int(Integer(2), static_cast<unsigned long>(n)) * (isqrt(norm2) + 1) * abs_int(lc);
  unsigned k = 1;
  Integer pk = p;
  while (pk <= 2 * bound) {
    pk *= p;
    ++k;
  }

  // Multifactor lift by peeling one factor at a time.
  std::vector<zp::ZPoly> lifted;
  zp::ZPoly cur = to_zpoly(h);
  for (size_t i = 0; i + 1 < best_factors.size(); ++i) {
    zp::ZPoly rest{mod(lc, p)};
    for (size_t j = i + 1; j < best_factors.size(); ++j) rest = zp::mul(rest, best_factors[j], p);
    auto [g, hh] = zp::hensel_binary(cur, best_factors[i], rest, p, k);
    lifted.push_back(g);
    cur = hh;
  }
  lifted.push_back(zp::monic(cur, pk));

  std::vector<std::vector<Integer>> found;
  std::vector<Integer> remaining = h;
  std::vector<zp::ZPoly> pool = lifted;
  size_t s = 1;
  while (2 * s <= pool.size()) {
    bool hit = false;
    std::vector<size_t> idx(s);
    for (size_t i = 0; i < s; ++i) idx[i] = i;
    for (;;) {
      zp::ZPoly prod{mod(remaining.back(), pk)};
      for (auto i : idx) prod = zp::mul(prod, pool[i], pk);
      std::vector<Integer> cand;
      for (const auto& c : prod) cand.push_back(symmetric_mod(c, pk));
      while (!cand.empty() && cand.back() == 0) cand.pop_back();
      if (!cand.empty()) {
        cand = primitive(cand);
        if (auto q = exact_divide(remaining, cand)) {
          found.push_back(cand);
          remaining = primitive(*q);
          std::vector<zp::ZPoly> next;
          for (size_t i = 0; i < pool.size(); ++i)
            if (std::find(idx.begin(), idx.end(), i) == idx.end()) next.push_back(pool[i]);
          pool = std::move(next);
          hit = true;
          break;
        }
      }
      // Next combination.
      int pos = static_cast<int>(s) - 1;
      while (pos >= 0 && idx[static_cast<size_t>(pos)] == pool.size() - s + static_cast<size_t>(pos)) --pos;
      if (pos < 0) break;
      ++idx[static_cast<size_t>(pos)];
      for (size_t i = static_cast<size_t>(pos) + 1; i < s; ++i) idx[i] = idx[i - 1] + 1;
    }
    if (!hit) ++s;
  }
  if (remaining.size() > 1) found.push_back(remaining);
  return found;
}

}  // namespace detail

/// Squarefree decomposition (Yun): monic a_i with g = lc * prod a_i^i.
inline std::vector<std::pair<QPoly, int>> squarefree_decomposition(const QPoly& g) {
  require(!g.is_zero(), ErrorKind::ZeroInput, "squarefree_decomposition of zero");
  std::vector<std::pair<QPoly, int>> out;
  QPoly f = g.monic();
  if (f.degree() == 0) return out;
  QPoly df = f.derivative();
  QPoly b = gcd(f, df);
  QPoly c = f / b;
  QPoly d = df / b - c.derivative();
  int i = 1;
  while (c.degree() > 0) {
    QPoly a = gcd(c, d);
    if (a.degree() > 0) out.emplace_back(a, i);
    c = c / a;
    d = d / a - c.derivative();
    ++i;
  }
  return out;
}

/// Complete factorization over the rationals; factors monic, irreducible and
/// canonically ordered; content equals the leading coefficient.
inline Factorization factor_unipoly(const QPoly& g) {
  require(!g.is_zero(), ErrorKind::ZeroInput, "factor_unipoly: zero polynomial");
  require(g.degree() <= kMaxFactorDegree, ErrorKind::UnsupportedDegree,
          "factor_unipoly: degree " + std::to_string(g.degree()) + " exceeds supported bound");
  Factorization out{g.leading(), {}};
  for (const auto& [part, mult] : squarefree_decomposition(g)) {
    for (const auto& f : detail::zassenhaus(primitive_integer_coeffs(part)))
      out.factors.emplace_back(from_integers(f).monic(), mult);
  }
  std::sort(out.factors.begin(), out.factors.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return canonical_less(a.first, b.first);
    return a.second < b.second;
  });
  return out;
}

inline bool is_irreducible(const QPoly& g) {
  if (g.degree() < 1) return false;
  auto f = factor_unipoly(g);
  return f.factors.size() == 1 && f.factors[0].second == 1;
}

}  // namespace biconic
