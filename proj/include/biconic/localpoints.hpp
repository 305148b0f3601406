#pragma once

// Points of X over Z/p^m: enumeration mod p, Hensel lifting, p-adic distance.
//
// A weighted point mod p^m always has a unit among x, y, z (if p divides all
// three then p^2 divides w), so the canonical chart is the first unit
// coordinate, scaled to 1. The w = 1 chart is never needed.

#include <array>
#include <climits>
#include <string>
#include <vector>

#include "biconic/padic.hpp"
#include "biconic/surface.hpp"

namespace biconic {

struct ResidueTarget {
  Integer p;
  int m = 1;
  std::array<Integer, 4> c{};  // x, y, z, w reduced mod p^m
  bool smooth = false;

  Integer modulus() const { return pow_int(p, static_cast<unsigned long>(m)); }
  /// Index of the coordinate normalized to 1.
  size_t chart() const {
    for (size_t i = 0; i < 3; ++i)
      if (mod(c[i], p) != 0) return i;
    return 3;
  }
  std::string to_string() const {
    return p.get_str() + "^" + std::to_string(m) + " : " + c[0].get_str() + "," + c[1].get_str() + "," +
           c[2].get_str() + "," + c[3].get_str();
  }
  friend bool operator==(const ResidueTarget& a, const ResidueTarget& b) {
    return a.p == b.p && a.m == b.m && a.c == b.c;
  }
  friend bool operator<(const ResidueTarget& a, const ResidueTarget& b) {
    return std::tie(a.p, a.m, a.c) < std::tie(b.p, b.m, b.c);
  }
};

namespace detail {

/// Exact reduction of a rational with unit denominator.
inline Integer rat_mod(const Rational& r, const Integer& M) {
  auto inv = inv_mod(r.get_den(), M);
  if (!inv) fail(ErrorKind::BadPrime, "denominator " + r.get_den().get_str() + " is not a unit mod " + M.get_str());
  return mod(r.get_num() * *inv, M);
}

using ModForm = std::array<Integer, 6>;

inline ModForm form_mod(const TernaryQuadraticForm& Q, const Integer& M) {
  ModForm out;
  for (size_t i = 0; i < 6; ++i) out[i] = rat_mod(Q.c[i], M);
  return out;
}

inline Integer eval_mod(const ModForm& c, const std::array<Integer, 3>& v, const Integer& M) {
  const Integer &x = v[0], &y = v[1], &z = v[2];
  return mod(c[0] * x * x + c[1] * y * y + c[2] * z * z + c[3] * x * y + c[4] * x * z + c[5] * y * z, M);
}

inline std::array<Integer, 3> grad_mod(const ModForm& c, const std::array<Integer, 3>& v, const Integer& M) {
  const Integer &x = v[0], &y = v[1], &z = v[2];
  return {mod(2 * c[0] * x + c[3] * y + c[4] * z, M), mod(2 * c[1] * y + c[3] * x + c[5] * z, M),
          mod(2 * c[2] * z + c[4] * x + c[5] * y, M)};
}

/// q, r1, r2 reduced mod M.
struct SurfaceMod {
  Integer M;
  ModForm q, r1, r2;

  SurfaceMod(const BiConicSurface& S, const Integer& modulus)
      : M(modulus), q(form_mod(S.q(), modulus)), r1(form_mod(S.r1(), modulus)), r2(form_mod(S.r2(), modulus)) {}

  Integer f4(const std::array<Integer, 3>& v) const {
    Integer a = eval_mod(q, v, M);
    return mod(a * a + eval_mod(r1, v, M) * eval_mod(r2, v, M), M);
  }
  std::array<Integer, 3> f4_grad(const std::array<Integer, 3>& v) const {
    Integer a = eval_mod(q, v, M), b = eval_mod(r1, v, M), c = eval_mod(r2, v, M);
    auto dq = grad_mod(q, v, M), d1 = grad_mod(r1, v, M), d2 = grad_mod(r2, v, M);
    std::array<Integer, 3> g;
    for (size_t i = 0; i < 3; ++i) g[i] = mod(2 * a * dq[i] + d1[i] * c + b * d2[i], M);
    return g;
  }
  bool on_surface(const std::array<Integer, 4>& P) const {
    return mod(P[3] * P[3] - f4({P[0], P[1], P[2]}), M) == 0;
  }
  /// Pencil member s^2 r1 + 2 s t q - t^2 r2.
  ModForm pencil(const Integer& s, const Integer& t) const {
    ModForm D;
    for (size_t i = 0; i < 6; ++i) D[i] = mod(s * s * r1[i] + 2 * s * t * q[i] - t * t * r2[i], M);
    return D;
  }
};

inline void check_prime(const BiConicSurface& S, const Integer& p) {
  require(p > 2 && is_probable_prime(p), ErrorKind::BadPrime, "p = " + p.get_str() + " is not an odd prime");
  for (const auto* Q : {&S.q(), &S.r1(), &S.r2()})
    for (const auto& c : Q->c)
      if (mpz_divisible_p(c.get_den().get_mpz_t(), p.get_mpz_t()))
        fail(ErrorKind::BadPrime, "p = " + p.get_str() + " divides a coefficient denominator");
  bool unit = false;
  for (const auto& [e, c] : S.f4().terms()) {
    (void)e;
    unit = unit || valuation(c, p) <= 0;
  }
  if (!unit) fail(ErrorKind::BadPrime, "p = " + p.get_str() + " divides the content of f4");
}

/// Canonical form of a weighted point mod M = p^m; nullopt if x, y, z are all non-units.
inline std::optional<std::array<Integer, 4>> normalize_mod(const std::array<Integer, 4>& P, const Integer& p,
                                                           const Integer& M) {
  for (size_t i = 0; i < 3; ++i) {
    if (mod(P[i], p) == 0) continue;
    Integer l = *inv_mod(P[i], M);
    return std::array<Integer, 4>{mod(P[0] * l, M), mod(P[1] * l, M), mod(P[2] * l, M), mod(P[3] * l * l, M)};
  }
  return std::nullopt;
}

inline bool smooth_mod_p(const SurfaceMod& Sp, const std::array<Integer, 4>& P) {
  if (mod(P[3], Sp.M) != 0) return true;
  for (const auto& g : Sp.f4_grad({P[0], P[1], P[2]}))
    if (g != 0) return true;
  return false;
}

}  // namespace detail

inline ResidueTarget make_target(const BiConicSurface& S, const Integer& p, int m, const std::array<Integer, 4>& P) {
  require(m >= 1, ErrorKind::InvalidArgument, "precision must be >= 1");
  Integer M = pow_int(p, static_cast<unsigned long>(m));
  auto n = detail::normalize_mod(P, p, M);
  require(n.has_value(), ErrorKind::InvalidArgument, "x, y, z all divisible by p");
  ResidueTarget t{p, m, *n, false};
  detail::SurfaceMod Sp(S, p);
  t.smooth = detail::smooth_mod_p(Sp, {mod(t.c[0], p), mod(t.c[1], p), mod(t.c[2], p), mod(t.c[3], p)});
  return t;
}

inline ResidueTarget reduce_point(const BiConicSurface& S, const SurfacePoint& P, const Integer& p, int m) {
  return make_target(S, p, m, {P.x, P.y, P.z, P.w});
}

inline std::vector<ResidueTarget> enumerate_residues(const BiConicSurface& S, const Integer& p) {
  detail::check_prime(S, p);
  detail::SurfaceMod Sp(S, p);
  std::vector<ResidueTarget> out;
  auto add = [&](const Integer& x, const Integer& y, const Integer& z) {
    Integer f = Sp.f4({x, y, z});
    std::vector<Integer> ws;
    if (f == 0) {
      ws.push_back(0);
    } else if (mpz_jacobi(f.get_mpz_t(), p.get_mpz_t()) == 1) {
      Integer r = *sqrt_mod_prime(f, p);
      ws.push_back(std::min(r, Integer(p - r)));
      ws.push_back(std::max(r, Integer(p - r)));
    }
    for (const auto& w : ws) {
      ResidueTarget t{p, 1, {x, y, z, w}, false};
      t.smooth = detail::smooth_mod_p(Sp, t.c);
      out.push_back(t);
    }
  };
  for (Integer y = 0; y < p; ++y)
    for (Integer z = 0; z < p; ++z) add(1, y, z);
  for (Integer z = 0; z < p; ++z) add(0, 1, z);
  add(0, 0, 1);
  return out;
}

/// Hensel lift of a smooth residue point; the chart coordinate stays 1 and a
/// single coordinate (w when w is a unit) is refined by Newton iteration.
inline ResidueTarget lift_point(const BiConicSurface& S, const ResidueTarget& t, int m_target) {
  require(m_target >= 1, ErrorKind::InvalidArgument, "precision must be >= 1");
  if (!t.smooth) fail(ErrorKind::NotSmoothModP, t.to_string() + " is not a smooth point mod p");
  const Integer& p = t.p;
  if (m_target <= t.m) {
    Integer M = pow_int(p, static_cast<unsigned long>(m_target));
    ResidueTarget r = t;
    r.m = m_target;
    for (auto& c : r.c) c = mod(c, M);
    return r;
  }
  detail::SurfaceMod Sp(S, p);
  require(detail::SurfaceMod(S, t.modulus()).on_surface(t.c), ErrorKind::InvalidArgument,
          t.to_string() + " does not satisfy the equation");
  // Coordinate to refine: w if it is a unit, else a free coordinate with nonzero partial.
  size_t j = 3;
  if (mod(t.c[3], p) == 0) {
    auto g = Sp.f4_grad({mod(t.c[0], p), mod(t.c[1], p), mod(t.c[2], p)});
    size_t k = t.chart();
    j = 4;
    for (size_t i = 0; i < 3 && j == 4; ++i)
      if (i != k && g[i] != 0) j = i;
    require(j != 4, ErrorKind::Internal, "smooth point without a usable partial");
  }
  std::vector<Rational> xs, ys;
  for (int u = 0; u <= 4; ++u) {
    std::array<Rational, 4> v{Rational(t.c[0]), Rational(t.c[1]), Rational(t.c[2]), Rational(t.c[3])};
    v[j] = u;
    xs.push_back(u);
    ys.push_back(v[3] * v[3] - S.f4_at(v[0], v[1], v[2]));
  }
  PadicValue root = hensel_lift_root(interpolate(xs, ys), p, t.c[j], m_target);
  ResidueTarget r = t;
  r.m = m_target;
  r.c[j] = root.residue(m_target);
  Integer M = r.modulus();
  for (auto& c : r.c) c = mod(c, M);
  return r;
}

constexpr int kAgreeFully = INT_MAX;

inline int padic_distance(const ResidueTarget& P, const ResidueTarget& Q) {
  if (P.p != Q.p) fail(ErrorKind::IncompatiblePrime, "points reduced at different primes");
  int j = std::min(P.m, Q.m);
  if (P.chart() != Q.chart()) return 0;
  int agree = j;
  for (size_t i = 0; i < 4; ++i) {
    Integer d = P.c[i] - Q.c[i];
    if (d != 0) agree = std::min(agree, valuation(d, P.p));
  }
  return agree >= j ? kAgreeFully : agree;
}

inline int padic_distance(const BiConicSurface& S, const SurfacePoint& P, const ResidueTarget& Q) {
  return padic_distance(reduce_point(S, P, Q.p, Q.m), Q);
}

}  // namespace biconic
