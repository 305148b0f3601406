#pragma once

// The surface X: w^2 = q^2 + r1 r2 in P(1,1,1,2) with its two conic fibrations
//   pi1 = [w - q : r1] = [r2 : w + q],   pi2 = [-(w + q) : r1] = [-r2 : w - q].
// Both fibrations share the pencil D(s,t) = s^2 r1 + 2 s t q - t^2 r2; the
// fiber of pi_i over [s:t] is D = 0 lifted by t w = e_i (t q + s r1), or
// equivalently s w = e_i (t r2 - s q), with e_1 = +1 and e_2 = -1.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "biconic/binary_form.hpp"
#include "biconic/conic.hpp"
#include "biconic/mpoly.hpp"
#include "biconic/number_field.hpp"

namespace biconic {

/// Integer point (x, y, z, w) of P(1,1,1,2), primitive under
/// (x,y,z,w) -> (l x, l y, l z, l^2 w), first nonzero of x, y, z positive.
struct SurfacePoint {
  Integer x, y, z, w;

  static SurfacePoint from_rationals(const Rational& x, const Rational& y, const Rational& z, const Rational& w) {
    require(sgn(x) != 0 || sgn(y) != 0 || sgn(z) != 0, ErrorKind::ZeroInput, "surface point with x = y = z = 0");
    Integer l = lcm(lcm(x.get_den(), y.get_den()), z.get_den());
    Rational w2 = w * l * l;
    l *= w2.get_den();
    std::array<Integer, 3> v{x.get_num() * (l / x.get_den()), y.get_num() * (l / y.get_den()),
                             z.get_num() * (l / z.get_den())};
    Rational wl = w * l * l;
    Integer W = wl.get_num();
    Integer g = gcd(gcd(v[0], v[1]), v[2]);
    if (g != 1) {
      for (const auto& [p, e] : factor_integer(g)) {
        (void)e;
        Integer p2 = p * p;
        while (mpz_divisible_p(v[0].get_mpz_t(), p.get_mpz_t()) && mpz_divisible_p(v[1].get_mpz_t(), p.get_mpz_t()) &&
               mpz_divisible_p(v[2].get_mpz_t(), p.get_mpz_t()) && mpz_divisible_p(W.get_mpz_t(), p2.get_mpz_t())) {
          for (auto& c : v) c /= p;
          W /= p2;
        }
      }
    }
    for (const auto& c : v) {
      if (c == 0) continue;
      if (c < 0)
        for (auto& d : v) d = -d;
      break;
    }
    return {v[0], v[1], v[2], W};
  }

  std::array<Rational, 3> plane() const { return {Rational(x), Rational(y), Rational(z)}; }
  ProjPoint2 plane_point() const { return ProjPoint2::from_rationals(x, y, z); }
  Integer height() const { return std::max({abs_int(x), abs_int(y), abs_int(z), abs_int(w)}); }
  SurfacePoint involution() const { return {x, y, z, Integer(-w)}; }
  std::string to_string() const {
    return "[" + x.get_str() + ":" + y.get_str() + ":" + z.get_str() + ":" + w.get_str() + "]";
  }
  friend bool operator==(const SurfacePoint& a, const SurfacePoint& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z && a.w == b.w;
  }
  friend bool operator!=(const SurfacePoint& a, const SurfacePoint& b) { return !(a == b); }
  friend bool operator<(const SurfacePoint& a, const SurfacePoint& b) {
    return std::tie(a.x, a.y, a.z, a.w) < std::tie(b.x, b.y, b.z, b.w);
  }
};

/// Primitive integer pair [s:t], first nonzero positive.
struct BaseParam {
  Integer s, t;

  static BaseParam make(const Rational& a, const Rational& b) {
    require(sgn(a) != 0 || sgn(b) != 0, ErrorKind::ZeroInput, "base parameter [0:0]");
    ProjPoint2 p = ProjPoint2::from_rationals(a, b, 0);
    return {p.x, p.y};
  }
  std::string to_string() const { return "[" + s.get_str() + ":" + t.get_str() + "]"; }
  friend bool operator==(const BaseParam& a, const BaseParam& b) { return a.s == b.s && a.t == b.t; }
  friend bool operator!=(const BaseParam& a, const BaseParam& b) { return !(a == b); }
  friend bool operator<(const BaseParam& a, const BaseParam& b) { return std::tie(a.s, a.t) < std::tie(b.s, b.t); }
};

inline int fibration_sign(int i) {
  require(i == 1 || i == 2, ErrorKind::InvalidArgument, "fibration id must be 1 or 2");
  return i == 1 ? 1 : -1;
}

/// Fiber of pi_i over [s:t].
struct Fiber {
  int fibration = 1;
  BaseParam param;
  TernaryQuadraticForm D;
  int sign = 1;
  int rank = 3;
  bool smooth() const { return rank == 3; }
};

enum class FiberClass { Split, Nonsplit, PseudoSplitOnly, Rank1Degenerate };

inline const char* fiber_class_name(FiberClass c) {
  switch (c) {
    case FiberClass::Split: return "split";
    case FiberClass::Nonsplit: return "nonsplit";
    case FiberClass::PseudoSplitOnly: return "pseudo-split-only";
    case FiberClass::Rank1Degenerate: return "rank1-degenerate";
  }
  return "?";
}

/// A point of X over a number field: (x, y, z) normalized with first nonzero 1.
struct FieldPoint {
  NumberField field;
  std::array<NfElem, 4> coords;  // x, y, z, w

  bool is_rational() const { return field.is_rationals(); }
  SurfacePoint rational() const {
    require(is_rational(), ErrorKind::FieldMismatch, "point is not rational");
    return SurfacePoint::from_rationals(coords[0].rational_value(), coords[1].rational_value(),
                                        coords[2].rational_value(), coords[3].rational_value());
  }
  std::string to_string() const {
    if (is_rational()) return rational().to_string();
    std::string out = "[";
    for (size_t i = 0; i < 4; ++i) out += (i ? ":" : "") + coords[i].to_string();
    return out + "] over " + field.label();
  }
};

struct SingularFiberReport {
  int fibration = 1;
  BinaryForm factor;            // irreducible factor of the discriminant
  int multiplicity = 1;
  NumberField field;            // residue field kappa of the parameter
  std::array<NfElem, 2> param;  // [s:t] over kappa
  int rank = 2;
  std::array<NfElem, 3> node{};
  FieldPoint node_lift;         // rank 2 only
  NfElem delta;                 // rank 2: discriminant on a complement of the node
  std::string splitting_field;
  FiberClass classification = FiberClass::Nonsplit;
};

struct SingularPoint {
  NumberField field;
  std::array<NfElem, 3> plane;  // point of f4 = 0 with vanishing gradient
  std::string to_string() const {
    std::string out = "[";
    for (size_t i = 0; i < 3; ++i) out += (i ? ":" : "") + plane[i].to_string();
    out += "]";
    return field.is_rationals() ? out : out + " over " + field.label();
  }
  std::string surface_string() const {
    std::string out = "[";
    for (size_t i = 0; i < 3; ++i) out += (i ? ":" : "") + plane[i].to_string();
    out += ":0]";
    return field.is_rationals() ? out : out + " over " + field.label();
  }
};

struct SmoothnessReport {
  bool smooth = true;
  bool reduced = true;  // false: f4 has a repeated factor, singular along a curve
  std::vector<SingularPoint> points;
};

namespace detail {

using M3 = MPoly<3>;
using M5 = MPoly<5>;

inline M3 to_mpoly(const TernaryQuadraticForm& Q) {
  M3 x = M3::var(0), y = M3::var(1), z = M3::var(2);
  return M3(Q.c[0]) * x * x + M3(Q.c[1]) * y * y + M3(Q.c[2]) * z * z + M3(Q.c[3]) * x * y + M3(Q.c[4]) * x * z +
         M3(Q.c[5]) * y * z;
}

/// Coefficients in z of F(x0, y0, z).
template <class F>
Poly<F> z_poly(const M3& f, const F& x0, const F& y0) {
  std::vector<F> c;
  for (const auto& [e, coef] : f.terms()) {
    if (c.size() <= static_cast<size_t>(e[2])) c.resize(static_cast<size_t>(e[2]) + 1, F(0));
    F m = F(coef);
    for (int k = 0; k < e[0]; ++k) m = F(m * x0);
    for (int k = 0; k < e[1]; ++k) m = F(m * y0);
    c[static_cast<size_t>(e[2])] = F(c[static_cast<size_t>(e[2])] + m);
  }
  return Poly<F>(std::move(c));
}

}  // namespace detail

class BiConicSurface {
 public:
  BiConicSurface(TernaryQuadraticForm q, TernaryQuadraticForm r1, TernaryQuadraticForm r2, std::string name = "")
      : q_(std::move(q)), r1_(std::move(r1)), r2_(std::move(r2)), name_(std::move(name)) {
    require(!r1_.is_zero() && !r2_.is_zero(), ErrorKind::DegenerateData, "r1 and r2 must be nonzero");
    using detail::M3;
    M3 Q = detail::to_mpoly(q_), R1 = detail::to_mpoly(r1_), R2 = detail::to_mpoly(r2_);
    f4_ = Q * Q + R1 * R2;
    require(!f4_.is_zero(), ErrorKind::DegenerateData, "f4 = q^2 + r1 r2 vanishes identically");
    verify_sheet_identity(Q, R1, R2);
    disc_ = BinaryForm::interpolate(6, [this](const Rational& s, const Rational& t) -> Rational {
      return determinant(pencil(s, t).gram());
    });
    require(!disc_.is_zero(), ErrorKind::DegenerateData, "the conic pencil is identically singular");
  }

  const TernaryQuadraticForm& q() const { return q_; }
  const TernaryQuadraticForm& r1() const { return r1_; }
  const TernaryQuadraticForm& r2() const { return r2_; }
  const std::string& name() const { return name_; }
  const MPoly<3>& f4() const { return f4_; }
  const BinaryForm& discriminant() const { return disc_; }

  /// s^2 r1 + 2 s t q - t^2 r2.
  TernaryQuadraticForm pencil(const Rational& s, const Rational& t) const {
    TernaryQuadraticForm D;
    for (size_t i = 0; i < 6; ++i) D.c[i] = s * s * r1_.c[i] + 2 * s * t * q_.c[i] - t * t * r2_.c[i];
    return D;
  }
  TernaryForm<NfElem> pencil(const NfElem& s, const NfElem& t) const {
    TernaryForm<NfElem> D;
    for (size_t i = 0; i < 6; ++i)
      D.c[i] = s * s * NfElem(r1_.c[i]) + NfElem(2) * s * t * NfElem(q_.c[i]) - t * t * NfElem(r2_.c[i]);
    return D;
  }

  Rational f4_at(const Rational& x, const Rational& y, const Rational& z) const {
    return f4_.eval<Rational>({x, y, z});
  }
  bool contains(const SurfacePoint& P) const {
    return Rational(P.w * P.w) == f4_at(Rational(P.x), Rational(P.y), Rational(P.z));
  }

 private:
  void verify_sheet_identity(const detail::M3& Q, const detail::M3& R1, const detail::M3& R2) const {
    using detail::M5;
    std::array<M5, 3> xyz{M5::var(0), M5::var(1), M5::var(2)};
    M5 q = Q.substitute(xyz), r1 = R1.substitute(xyz), r2 = R2.substitute(xyz);
    M5 s = M5::var(3), t = M5::var(4);
    M5 D = s * s * r1 + M5(2) * s * t * q - t * t * r2;
    M5 f = q * q + r1 * r2;
    bool ok = pow(t * q + s * r1, 2) - t * t * f == r1 * D && pow(t * r2 - s * q, 2) - s * s * f == -(r2 * D);
    require(ok, ErrorKind::Internal, "sheet identity failed");
  }

  TernaryQuadraticForm q_, r1_, r2_;
  std::string name_;
  MPoly<3> f4_;
  BinaryForm disc_;
};

inline BiConicSurface build_surface(const TernaryQuadraticForm& q, const TernaryQuadraticForm& r1,
                                    const TernaryQuadraticForm& r2, const std::string& name = "") {
  return BiConicSurface(q, r1, r2, name);
}

inline BinaryForm discriminant_sextic(const BiConicSurface& S) {
  require(!S.discriminant().is_zero(), ErrorKind::IdenticallySingularPencil, "pencil is identically singular");
  return S.discriminant();
}

// ---------------------------------------------------------------------------
// Fibrations and fibers

/// w on the sheet of pi_i over [s:t] at a plane point, over any field.
template <class F>
F sheet_w(const BiConicSurface& S, int i, const F& s, const F& t, const std::array<F, 3>& n) {
  int e = fibration_sign(i);
  auto ev = [&](const TernaryQuadraticForm& Q) -> F {
    TernaryForm<F> G;
    for (size_t k = 0; k < 6; ++k) G.c[k] = F(Q.c[k]);
    return G.eval(n);
  };
  if (!is_zero(t)) return F(F(e) * (ev(S.q()) + s / t * ev(S.r1())));
  return F(F(-e) * ev(S.q()));
}

/// The pair representing pi_i at P, falling back to the second chart.
template <class F>
std::optional<std::array<F, 2>> fibration_pair(const BiConicSurface& S, int i, const std::array<F, 4>& P) {
  fibration_sign(i);
  auto ev = [&](const TernaryQuadraticForm& Q) -> F {
    TernaryForm<F> G;
    for (size_t k = 0; k < 6; ++k) G.c[k] = F(Q.c[k]);
    return G.eval({P[0], P[1], P[2]});
  };
  F q = ev(S.q()), r1 = ev(S.r1()), r2 = ev(S.r2()), w = P[3];
  F g1 = F(w - q), g2 = F(w + q);
  std::array<F, 2> a = i == 1 ? std::array<F, 2>{g1, r1} : std::array<F, 2>{F(-g2), r1};
  if (!is_zero(a[0]) || !is_zero(a[1])) return a;
  std::array<F, 2> b = i == 1 ? std::array<F, 2>{r2, g2} : std::array<F, 2>{F(-r2), g1};
  if (!is_zero(b[0]) || !is_zero(b[1])) return b;
  return std::nullopt;
}

inline BaseParam eval_fibration(const BiConicSurface& S, int i, const SurfacePoint& P) {
  require(S.contains(P), ErrorKind::PointNotOnSurface, P.to_string() + " is not on the surface");
  auto pair = fibration_pair<Rational>(S, i, {Rational(P.x), Rational(P.y), Rational(P.z), Rational(P.w)});
  if (!pair)
    fail(ErrorKind::IndeterminatePoint,
         "g1, g2, h1, h2 all vanish at " + P.to_string() + " (a singular point of the surface)");
  return BaseParam::make((*pair)[0], (*pair)[1]);
}

inline Fiber fiber_at(const BiConicSurface& S, int i, const BaseParam& u) {
  Fiber F;
  F.fibration = i;
  F.sign = fibration_sign(i);
  F.param = BaseParam::make(u.s, u.t);
  F.D = S.pencil(Rational(F.param.s), Rational(F.param.t));
  F.rank = static_cast<int>(rank(F.D.gram()));
  return F;
}

/// Lift of a rational plane point on the fiber's conic to the surface.
inline SurfacePoint lift_to_surface(const BiConicSurface& S, const Fiber& F, const ProjPoint2& n) {
  require(sgn(F.D.eval(n.rationals())) == 0, ErrorKind::PointNotOnConic, "plane point is not on the fiber conic");
  Rational w = sheet_w<Rational>(S, F.fibration, Rational(F.param.s), Rational(F.param.t), n.rationals());
  return SurfacePoint::from_rationals(n.x, n.y, n.z, w);
}

// ---------------------------------------------------------------------------
// Singular fibers and bad loci

inline FieldPoint make_field_point(const NumberField& K, const std::array<NfElem, 3>& n, const NfElem& w) {
  FieldPoint P;
  P.field = K;
  NfElem lead = n[first_nonzero(n)];
  NfElem inv = K.elem(Rational(1)) / lead;
  for (size_t i = 0; i < 3; ++i) P.coords[i] = K.elem((n[i] * inv).residue());
  P.coords[3] = K.elem((w * inv * inv).residue());
  return P;
}

inline std::vector<SingularFiberReport> singular_fiber_table(const BiConicSurface& S, int i) {
  fibration_sign(i);
  std::vector<SingularFiberReport> out;
  for (const auto& [g, mult] : factor_binary(discriminant_sextic(S)).factors) {
    SingularFiberReport rep;
    rep.fibration = i;
    rep.factor = g;
    rep.multiplicity = mult;
    if (g.degree() == 1) {
      auto [s, t] = linear_root(g);
      rep.field = NumberField::rationals();
      rep.param = {rep.field.elem(Rational(s)), rep.field.elem(Rational(t))};
    } else {
      rep.field = NumberField(g.dehomogenize());
      rep.param = {rep.field.gen(), rep.field.elem(Rational(1))};
    }
    const NumberField& K = rep.field;
    TernaryForm<NfElem> D = S.pencil(rep.param[0], rep.param[1]);
    ConicClassification c = classify_form(D, K);
    require(c.rank < 3, ErrorKind::Internal, "discriminant root with a smooth pencil member");
    rep.rank = c.rank;
    if (c.rank == 1) {
      rep.classification = FiberClass::Rank1Degenerate;
      out.push_back(rep);
      continue;
    }
    rep.node = c.node;
    rep.delta = c.delta;
    rep.splitting_field = c.splitting_field;
    if (K.is_rationals()) {
      auto et = classify_multiquadratic({squarefree_part(c.delta.rational_value())});
      rep.classification = et.split ? FiberClass::Split : et.pseudo_split ? FiberClass::PseudoSplitOnly : FiberClass::Nonsplit;
    } else {
      rep.classification = c.split ? FiberClass::Split : FiberClass::Nonsplit;
    }
    NfElem w = sheet_w<NfElem>(S, i, rep.param[0], rep.param[1], c.node);
    rep.node_lift = make_field_point(K, c.node, w);
    out.push_back(rep);
  }
  return out;
}

struct BadLocus {
  std::vector<FieldPoint> points;
  std::vector<std::string> warnings;
};

inline BadLocus bad_locus(const BiConicSurface& S, int i) {
  BadLocus out;
  for (const auto& rep : singular_fiber_table(S, i)) {
    if (rep.rank == 1) {
      std::string where = rep.field.is_rationals()
                              ? BaseParam::make(rep.param[0].rational_value(), rep.param[1].rational_value()).to_string()
                              : "root of " + rep.factor.to_string();
      out.warnings.push_back("SurfaceSingular: rank-1 member of the pencil at " + where);
      continue;
    }
    out.points.push_back(rep.node_lift);
  }
  return out;
}

/// Whether a point of X (over its field) is a singular point of a singular fiber of pi_i.
inline bool in_bad_locus(const BiConicSurface& S, int i, const FieldPoint& P) {
  const NumberField& K = P.field;
  auto pair = fibration_pair<NfElem>(S, i, P.coords);
  if (!pair) return false;
  TernaryForm<NfElem> D = S.pencil((*pair)[0], (*pair)[1]);
  Matrix<NfElem> M = D.gram();
  for (auto& row : M)
    for (auto& v : row) v = K.elem(v.residue());
  if (rank(M) != 2) return false;
  std::vector<NfElem> n{P.coords[0], P.coords[1], P.coords[2]};
  for (const auto& v : mat_vec(M, n))
    if (!v.is_zero()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Smoothness of the branch quartic

inline SmoothnessReport check_smooth(const BiConicSurface& S) {
  using detail::M3;
  SmoothnessReport out;
  const M3& f = S.f4();
  for (const auto& [a, b] : detail::shear_candidates()) {
    // New coordinates (X, Y, Z) with x = X + a Z, y = Y + b Z, z = Z.
    std::array<M3, 3> sub{M3::var(0) + M3(a) * M3::var(2), M3::var(1) + M3(b) * M3::var(2), M3::var(2)};
    M3 g = f.substitute(sub);
    std::array<M3, 3> d{g.derivative(0), g.derivative(1), g.derivative(2)};
    auto zcoef = [](const M3& h, int k) { return h.coeff({0, 0, k}); };
    if (sgn(zcoef(g, 4)) == 0) continue;
    auto back = [&](const std::array<NfElem, 3>& P) {
      std::array<NfElem, 3> r{P[0] + NfElem(a) * P[2], P[1] + NfElem(b) * P[2], P[2]};
      NfElem lead = r[first_nonzero(r)];
      for (auto& v : r) v = v / lead;
      return r;
    };
    // Repeated factor: the discriminant in z is a degree-12 form; 13 zeros force it to vanish.
    bool reduced = false;
    for (int k = 0; k <= 12 && !reduced; ++k) {
      QPoly gz = detail::z_poly<Rational>(g, Rational(k), Rational(1));
      reduced = sgn(sylvester_resultant(gz, 4, gz.derivative(), 3)) != 0;
    }
    if (!reduced) {
      out.smooth = false;
      out.reduced = false;
      for (int k = 0; k <= 20; ++k) {
        QPoly gz = detail::z_poly<Rational>(g, Rational(k), Rational(1));
        QPoly h = gcd(gz, gz.derivative());
        if (h.degree() < 1) continue;
        QPoly fac = factor_unipoly(h).factors.front().first;
        NumberField K = fac.degree() == 1 ? NumberField::rationals() : NumberField(fac);
        NfElem z = fac.degree() == 1 ? NfElem(-fac.coeff(0)) : K.gen();
        out.points.push_back({K, back({K.elem(Rational(k)), K.elem(Rational(1)), K.elem(z.residue())})});
        break;
      }
      return out;
    }
    // Invertible combinations of the partials, each of full degree in Z.
    for (int c = 1; c <= 6; ++c) {
      M3 e0 = d[0] + M3(c) * d[2], e1 = d[1] + M3(c + 1) * d[2];
      if (sgn(zcoef(e0, 3)) == 0 || sgn(zcoef(e1, 3)) == 0) continue;
      M3 h1 = e0 + M3(c) * e1;
      if (sgn(zcoef(h1, 3)) == 0) continue;
      auto res = [&](const M3& A, const M3& B) {
        return BinaryForm::interpolate(9, [&](const Rational& x, const Rational& y) -> Rational {
          return sylvester_resultant(detail::z_poly<Rational>(A, x, y), 3, detail::z_poly<Rational>(B, x, y), 3);
        });
      };
      BinaryForm R1 = res(h1, d[2]), R2 = res(e1, d[2]);
      if (R1.is_zero() || R2.is_zero()) continue;
      // Common factors of R1 and R2.
      QPoly p1 = R1.dehomogenize(), p2 = R2.dehomogenize();
      QPoly G = gcd(p1, p2);
      int tpow = std::min(R1.degree() - p1.degree(), R2.degree() - p2.degree());
      std::vector<std::pair<NumberField, std::array<NfElem, 2>>> roots;
      if (tpow > 0) roots.push_back({NumberField::rationals(), {NfElem(1), NfElem(0)}});
      if (G.degree() > 0) {
        for (const auto& [fac, m] : factor_unipoly(G).factors) {
          (void)m;
          if (fac.degree() == 1) {
            roots.push_back({NumberField::rationals(), {NfElem(-fac.coeff(0)), NfElem(1)}});
          } else {
            NumberField K(fac);
            roots.push_back({K, {K.gen(), K.elem(Rational(1))}});
          }
        }
      }
      bool retry = false;
      std::vector<SingularPoint> pts;
      for (const auto& [K, xy] : roots) {
        NfElem x = K.elem(xy[0].residue()), y = K.elem(xy[1].residue());
        Poly<NfElem> a = detail::z_poly<NfElem>(d[0], x, y), b = detail::z_poly<NfElem>(d[1], x, y),
                     e = detail::z_poly<NfElem>(d[2], x, y);
        Poly<NfElem> h = gcd(gcd(a, b), e);
        if (h.degree() <= 0) continue;
        if (h.degree() >= 2) h = h / gcd(h, h.derivative());
        if (h.degree() >= 2) {
          retry = true;
          break;
        }
        NfElem z = -(h.coeff(0) / h.coeff(1));
        pts.push_back({K, back({x, y, K.elem(z.residue())})});
      }
      if (retry) break;
      out.points = pts;
      out.smooth = pts.empty();
      return out;
    }
  }
  fail(ErrorKind::Internal, "check_smooth: no generic coordinate change found");
}

// ---------------------------------------------------------------------------
// Hypotheses and certificates

struct Certificate {
  SurfacePoint P;
  BaseParam t1, t2;
  std::string L1, L2;
  std::string verdict = "f'_n not arithmetically surjective for all n ≥ 3";
};

struct CertificateResult {
  std::optional<Certificate> certificate;
  std::string failed_condition;  // set when no certificate is issued
};

inline CertificateResult obstruction_certificate(const BiConicSurface& S, const SurfacePoint& P) {
  require(S.contains(P), ErrorKind::PointNotOnSurface, P.to_string() + " is not on the surface");
  CertificateResult out;
  std::array<BaseParam, 2> t;
  std::array<ConicClassification, 2> cls;
  for (int i = 1; i <= 2; ++i) {
    try {
      t[static_cast<size_t>(i - 1)] = eval_fibration(S, i, P);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::IndeterminatePoint) throw;
      out.failed_condition = "condition (1): " + P.to_string() + " is a singular point of the surface";
      return out;
    }
    Fiber F = fiber_at(S, i, t[static_cast<size_t>(i - 1)]);
    bool bad = F.rank == 2;
    if (bad) {
      auto c = classify_form(F.D);
      auto n = P.plane();
      for (size_t k = 0; k < 3; ++k)
        bad = bad && c.node[k] == NfElem(n[k] / n[first_nonzero(n)]);
      cls[static_cast<size_t>(i - 1)] = c;
    }
    if (!bad) {
      out.failed_condition = "condition (1): " + P.to_string() + " is not in Bad(pi" + std::to_string(i) + ")";
      return out;
    }
  }
  for (int i = 1; i <= 2; ++i) {
    if (cls[static_cast<size_t>(i - 1)].split) {
      out.failed_condition = "condition (2): the fiber of pi" + std::to_string(i) + " through " + P.to_string() +
                             " is split";
      return out;
    }
  }
  Certificate c;
  c.P = P;
  c.t1 = t[0];
  c.t2 = t[1];
  c.L1 = cls[0].splitting_field;
  c.L2 = cls[1].splitting_field;
  out.certificate = c;
  return out;
}

struct IntersectionSample {
  BaseParam u1, u2;
  int count = 0;
};

struct ViolatingPoint {
  FieldPoint point;
  int eckardt = 0;
};

struct HypothesisReport {
  std::vector<IntersectionSample> samples;
  int intersection_number = 0;
  bool condition_a = false;
  BadLocus bad1, bad2;
  std::vector<ViolatingPoint> violating;
  bool condition_b = true;
  std::vector<Certificate> certificates;
};

/// Number of points, with multiplicity, where the fiber of pi1 over u1 meets
/// the fiber of pi2 over u2 on the surface.
inline int fiber_intersection_number(const BiConicSurface& S, const BaseParam& u1, const BaseParam& u2) {
  Fiber F1 = fiber_at(S, 1, u1), F2 = fiber_at(S, 2, u2);
  int count = 0;
  for (const auto& pt : intersect_conics(F1.D, F2.D)) {
    const NumberField& K = pt.field;
    NfElem w1 = sheet_w<NfElem>(S, 1, NfElem(Rational(u1.s)), NfElem(Rational(u1.t)), pt.coords);
    NfElem w2 = sheet_w<NfElem>(S, 2, NfElem(Rational(u2.s)), NfElem(Rational(u2.t)), pt.coords);
    if (K.elem((w1 - w2).residue()).is_zero()) count += pt.degree() * pt.multiplicity;
  }
  return count;
}

namespace detail {

/// Distinct exceptional curves through a point lying on a singular fiber of
/// each fibration: the four lines, minus the lines the two fibers share on X.
inline int eckardt_count(const BiConicSurface& S, const FieldPoint& P) {
  const NumberField& K = P.field;
  auto u1 = *fibration_pair<NfElem>(S, 1, P.coords);
  auto u2 = *fibration_pair<NfElem>(S, 2, P.coords);
  TernaryForm<NfElem> D1 = S.pencil(u1[0], u1[1]), D2 = S.pencil(u2[0], u2[1]);
  std::array<NfElem, 3> n{P.coords[0], P.coords[1], P.coords[2]};
  size_t k = first_nonzero(n);
  std::array<std::array<NfElem, 3>, 2> E;
  size_t idx = 0;
  for (size_t i = 0; i < 3; ++i) {
    if (i == k) continue;
    E[idx] = {NfElem(0), NfElem(0), NfElem(0)};
    E[idx][i] = NfElem(1);
    ++idx;
  }
  auto binary = [&](const TernaryForm<NfElem>& D) {
    return std::array<NfElem, 3>{K.elem(D.eval(E[0]).residue()), K.elem((NfElem(2) * D.bilinear(E[0], E[1])).residue()),
                                 K.elem(D.eval(E[1]).residue())};
  };
  auto b1 = binary(D1), b2 = binary(D2);
  // Resultant of two binary quadratics a u^2 + b uv + c v^2.
  auto res = (b1[0] * b2[2] - b2[0] * b1[2]) * (b1[0] * b2[2] - b2[0] * b1[2]) -
             (b1[0] * b2[1] - b2[0] * b1[1]) * (b1[1] * b2[2] - b2[1] * b1[2]);
  if (!K.elem(res.residue()).is_zero()) return 4;
  // Shared plane lines; they are shared curves on X when the two sheets agree on them.
  bool proportional = (b1[0] * b2[1] - b2[0] * b1[1]).is_zero() && (b1[0] * b2[2] - b2[0] * b1[2]).is_zero() &&
                      (b1[1] * b2[2] - b2[1] * b1[2]).is_zero();
  // The difference of the two w-lifts is a quadratic form E; a shared line
  // n + mu d lies on both sheets iff E vanishes along it.
  auto lift_difference = [&](const std::array<NfElem, 3>& v) {
    return K.elem((sheet_w<NfElem>(S, 1, u1[0], u1[1], v) - sheet_w<NfElem>(S, 2, u2[0], u2[1], v)).residue());
  };
  auto vanishes_on_line = [&](const std::array<NfElem, 3>& d) {
    for (int mu = 0; mu <= 2; ++mu) {
      std::array<NfElem, 3> v{n[0] + NfElem(mu) * d[0], n[1] + NfElem(mu) * d[1], n[2] + NfElem(mu) * d[2]};
      if (!lift_difference(v).is_zero()) return false;
    }
    return true;
  };
  if (proportional) {
    // Both lines shared. E vanishes on their union iff E(n) = 0 and its
    // restriction to the complement is proportional to that of D1.
    if (!lift_difference(n).is_zero()) return 4;
    for (const auto& v : {E[0], E[1]}) {
      std::array<NfElem, 3> m{n[0] + v[0], n[1] + v[1], n[2] + v[2]};
      if (!(lift_difference(m) - lift_difference(v)).is_zero()) return 4;
    }
    std::array<NfElem, 3> e01{E[0][0] + E[1][0], E[0][1] + E[1][1], E[0][2] + E[1][2]};
    NfElem c0 = lift_difference(E[0]), c2 = lift_difference(E[1]);
    NfElem c1 = lift_difference(e01) - c0 - c2;
    std::array<NfElem, 3> e{c0, c1, c2};
    for (size_t a = 0; a < 3; ++a)
      for (size_t b = a + 1; b < 3; ++b)
        if (!K.elem((e[a] * b1[b] - e[b] * b1[a]).residue()).is_zero()) return 4;
    return 2;
  }
  // One shared line: eliminate u^2 to find its direction.
  NfElem lb = b2[0] * b1[1] - b1[0] * b2[1], lc = b2[0] * b1[2] - b1[0] * b2[2];
  std::array<NfElem, 2> dir;
  if (!lb.is_zero()) {
    dir = {-lc, lb};
  } else {
    dir = {NfElem(1), NfElem(0)};
  }
  std::array<NfElem, 3> d{dir[0] * E[0][0] + dir[1] * E[1][0], dir[0] * E[0][1] + dir[1] * E[1][1],
                          dir[0] * E[0][2] + dir[1] * E[1][2]};
  return vanishes_on_line(d) ? 3 : 4;
}

}  // namespace detail

struct HypothesisOptions {
  int samples = 3;
  std::uint64_t seed = 0x5eed;
  int param_bound = 12;
};

inline HypothesisReport check_hypotheses(const BiConicSurface& S, const HypothesisOptions& opt = {}) {
  HypothesisReport out;
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> coord(-opt.param_bound, opt.param_bound);
  const BinaryForm& disc = S.discriminant();
  auto random_param = [&]() {
    for (;;) {
      int s = coord(rng), t = coord(rng);
      if (s == 0 && t == 0) continue;
      if (sgn(disc.eval(s, t)) == 0) continue;
      return BaseParam::make(s, t);
    }
  };
  out.condition_a = true;
  for (int k = 0; k < opt.samples; ++k) {
    BaseParam u1 = random_param(), u2 = random_param();
    while (u2 == u1) u2 = random_param();
    IntersectionSample smp{u1, u2, fiber_intersection_number(S, u1, u2)};
    out.samples.push_back(smp);
    out.condition_a = out.condition_a && smp.count > 0;
  }
  out.intersection_number = out.samples.empty() ? 0 : out.samples.front().count;
  for (const auto& smp : out.samples)
    if (smp.count != out.intersection_number) out.condition_a = false;
  out.bad1 = bad_locus(S, 1);
  out.bad2 = bad_locus(S, 2);
  for (const auto& P : out.bad1.points) {
    if (!in_bad_locus(S, 2, P)) continue;
    out.violating.push_back({P, detail::eckardt_count(S, P)});
  }
  out.condition_b = out.violating.empty();
  for (const auto& v : out.violating) {
    if (!v.point.is_rational()) continue;
    auto c = obstruction_certificate(S, v.point.rational());
    if (c.certificate) out.certificates.push_back(*c.certificate);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ramification of a fiber over the base of the other fibration

struct RamificationReport {
  int fibration = 1;  // fibration of the source fiber
  BaseParam param;
  SurfacePoint base_point;
  ConicParametrization parametrization;
  BinaryForm A, B;          // the map to the other base, in lowest terms
  BinaryForm wronskian;     // ramification divisor on the source line
  BinaryFactorization ramification;
  BinaryForm branch;        // branch divisor on the target line
  int map_degree() const { return A.degree(); }
};

namespace detail {

inline BinaryForm substitute_form(const TernaryQuadraticForm& Q, const std::array<BinaryForm, 3>& p) {
  BinaryForm r = BinaryForm::zero(2 * p[0].degree());
  const std::array<std::pair<size_t, size_t>, 6> mono{{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};
  for (size_t i = 0; i < 6; ++i) r = r + (p[mono[i].first] * p[mono[i].second]).scale(Q.c[i]);
  return r;
}

inline BinaryForm binary_gcd(const BinaryForm& a, const BinaryForm& b) {
  QPoly pa = a.dehomogenize(), pb = b.dehomogenize();
  int tpow = std::min(a.degree() - pa.degree(), b.degree() - pb.degree());
  QPoly g = gcd(pa, pb);
  BinaryForm r = BinaryForm::homogenize(g, g.degree());
  for (int k = 0; k < tpow; ++k) r = r * BinaryForm::t();
  return r;
}

}  // namespace detail

inline RamificationReport ramification_of_restriction(const BiConicSurface& S, const Fiber& F,
                                                      std::optional<SurfacePoint> P = std::nullopt) {
  if (!F.smooth()) fail(ErrorKind::SingularFiber, "fiber over " + F.param.to_string() + " is singular");
  ProjPoint2 base;
  if (P) {
    require(S.contains(*P), ErrorKind::PointNotOnSurface, P->to_string() + " is not on the surface");
    base = P->plane_point();
    require(sgn(F.D.eval(base.rationals())) == 0, ErrorKind::PointNotOnConic, "point is not on the fiber");
  } else {
    auto r = find_rational_point(F.D);
    if (!r.point) fail(ErrorKind::NoRationalPoint, "fiber over " + F.param.to_string() + " has no rational point");
    base = *r.point;
  }
  RamificationReport out;
  out.fibration = F.fibration;
  out.param = F.param;
  out.base_point = lift_to_surface(S, F, base);
  out.parametrization = parametrize(F.D, base);
  const auto& p = out.parametrization.forms;
  BinaryForm qf = detail::substitute_form(S.q(), p), r1f = detail::substitute_form(S.r1(), p),
             r2f = detail::substitute_form(S.r2(), p);
  // alpha w = beta on the fiber, alpha a nonzero constant.
  Rational s = F.param.s, t = F.param.t;
  Rational alpha = sgn(t) != 0 ? t : s;
  BinaryForm beta = sgn(t) != 0 ? (qf.scale(t) + r1f.scale(s)).scale(F.sign) : (r2f.scale(t) - qf.scale(s)).scale(F.sign);
  BinaryForm aq = qf.scale(alpha), ar1 = r1f.scale(alpha), ar2 = r2f.scale(alpha);
  int j = 3 - F.fibration;
  BinaryForm A = j == 1 ? beta - aq : (beta + aq).scale(-1), B = ar1;
  if (A.is_zero() && B.is_zero()) {
    A = j == 1 ? ar2 : ar2.scale(-1);
    B = j == 1 ? beta + aq : beta - aq;
  }
  require(!(A.is_zero() && B.is_zero()), ErrorKind::Internal, "fibration undefined along a whole fiber");
  if (A.is_zero() || B.is_zero()) fail(ErrorKind::DegenerateData, "the other fibration is constant on this fiber");
  BinaryForm g = detail::binary_gcd(A, B);
  out.A = A.divide(g);
  out.B = B.divide(g);
  out.wronskian = out.A.ds() * out.B.dt() - out.A.dt() * out.B.ds();
  require(!out.wronskian.is_zero(), ErrorKind::Internal, "vanishing Wronskian");
  out.ramification = factor_binary(out.wronskian);
  const BinaryForm &W = out.wronskian, &Af = out.A, &Bf = out.B;
  out.branch = BinaryForm::interpolate(W.degree(), [&](const Rational& a, const Rational& b) -> Rational {
    return resultant_binary(W, Af.scale(b) - Bf.scale(a));
  });
  return out;
}

}  // namespace biconic
