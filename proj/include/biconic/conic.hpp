#pragma once

// Plane conics: classification, local and global solvability, rational points,
// parametrization, and intersection of two conics as a zero-cycle.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "biconic/binary_form.hpp"
#include "biconic/hilbert.hpp"
#include "biconic/linalg.hpp"
#include "biconic/number_field.hpp"

namespace biconic {

/// a x^2 + b y^2 + c z^2 + d xy + e xz + f yz.
template <class F>
struct TernaryForm {
  std::array<F, 6> c{F(0), F(0), F(0), F(0), F(0), F(0)};

  TernaryForm() = default;
  explicit TernaryForm(std::array<F, 6> coeffs) : c(std::move(coeffs)) {}

  static TernaryForm from_gram(const Matrix<F>& M) {
    return TernaryForm({M[0][0], M[1][1], M[2][2], F(M[0][1] * F(2)), F(M[0][2] * F(2)), F(M[1][2] * F(2))});
  }

  bool is_zero() const {
    return std::all_of(c.begin(), c.end(), [](const F& v) { return biconic::is_zero(v); });
  }

  Matrix<F> gram() const {
    F h = F(F(1) / F(2));
    return {{c[0], F(c[3] * h), F(c[4] * h)}, {F(c[3] * h), c[1], F(c[5] * h)}, {F(c[4] * h), F(c[5] * h), c[2]}};
  }

  F operator()(const F& x, const F& y, const F& z) const {
    return F(c[0] * x * x + c[1] * y * y + c[2] * z * z + c[3] * x * y + c[4] * x * z + c[5] * y * z);
  }
  F eval(const std::array<F, 3>& v) const { return (*this)(v[0], v[1], v[2]); }

  /// Symmetric bilinear form with B(v, v) = Q(v).
  F bilinear(const std::array<F, 3>& u, const std::array<F, 3>& v) const {
    Matrix<F> M = gram();
    F acc(0);
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) acc = F(acc + u[i] * M[i][j] * v[j]);
    return acc;
  }

  /// The form v -> Q(T v).
  TernaryForm transform(const Matrix<F>& T) const {
    Matrix<F> M = gram(), R(3, std::vector<F>(3, F(0)));
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) {
        F acc(0);
        for (size_t k = 0; k < 3; ++k)
          for (size_t l = 0; l < 3; ++l) acc = F(acc + T[k][i] * M[k][l] * T[l][j]);
        R[i][j] = acc;
      }
    return from_gram(R);
  }

  friend TernaryForm operator+(const TernaryForm& a, const TernaryForm& b) {
    TernaryForm r;
    for (size_t i = 0; i < 6; ++i) r.c[i] = F(a.c[i] + b.c[i]);
    return r;
  }
  TernaryForm scale(const F& k) const {
    TernaryForm r;
    for (size_t i = 0; i < 6; ++i) r.c[i] = F(c[i] * k);
    return r;
  }
  friend bool operator==(const TernaryForm& a, const TernaryForm& b) { return a.c == b.c; }
};

using TernaryQuadraticForm = TernaryForm<Rational>;

inline TernaryForm<NfElem> lift_form(const TernaryQuadraticForm& Q) {
  TernaryForm<NfElem> r;
  for (size_t i = 0; i < 6; ++i) r.c[i] = NfElem(Q.c[i]);
  return r;
}

inline std::string to_string(const TernaryQuadraticForm& Q) {
  static const char* mono[6] = {"x^2", "y^2", "z^2", "x*y", "x*z", "y*z"};
  std::string out;
  for (size_t i = 0; i < 6; ++i) {
    if (sgn(Q.c[i]) == 0) continue;
    Rational a = abs(Q.c[i]);
    if (out.empty()) {
      if (sgn(Q.c[i]) < 0) out += "-";
    } else {
      out += sgn(Q.c[i]) < 0 ? " - " : " + ";
    }
    if (a != 1) out += a.get_str() + "*";
    out += mono[i];
  }
  return out.empty() ? "0" : out;
}

/// Primitive integer point of P^2, first nonzero coordinate positive.
struct ProjPoint2 {
  Integer x, y, z;

  static ProjPoint2 from_rationals(const Rational& a, const Rational& b, const Rational& c) {
    require(sgn(a) != 0 || sgn(b) != 0 || sgn(c) != 0, ErrorKind::ZeroInput, "projective point with all zero coordinates");
    Integer den = lcm(lcm(a.get_den(), b.get_den()), c.get_den());
    std::array<Integer, 3> v{a.get_num() * (den / a.get_den()), b.get_num() * (den / b.get_den()),
                             c.get_num() * (den / c.get_den())};
    Integer g = gcd(gcd(v[0], v[1]), v[2]);
    for (auto& e : v) e /= g;
    for (const auto& e : v) {
      if (e == 0) continue;
      if (e < 0)
        for (auto& f : v) f = -f;
      break;
    }
    return {v[0], v[1], v[2]};
  }
  static ProjPoint2 from_array(const std::array<Rational, 3>& v) { return from_rationals(v[0], v[1], v[2]); }

  std::array<Rational, 3> rationals() const { return {Rational(x), Rational(y), Rational(z)}; }
  Integer height() const { return std::max({abs_int(x), abs_int(y), abs_int(z)}); }
  std::string to_string() const { return "[" + x.get_str() + ":" + y.get_str() + ":" + z.get_str() + "]"; }
  friend bool operator==(const ProjPoint2& a, const ProjPoint2& b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
  friend bool operator<(const ProjPoint2& a, const ProjPoint2& b) {
    return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
  }
};

// ---------------------------------------------------------------------------
// Classification

enum class ConicKind { Smooth, Split, Nonsplit, Double };

inline const char* conic_kind_name(ConicKind k) {
  switch (k) {
    case ConicKind::Smooth: return "smooth";
    case ConicKind::Split: return "split";
    case ConicKind::Nonsplit: return "nonsplit";
    case ConicKind::Double: return "double-line";
  }
  return "?";
}

struct ConicClassification {
  int rank = 0;
  ConicKind kind = ConicKind::Smooth;
  std::array<NfElem, 3> node{};  // rank 2: spans the radical
  NfElem delta;                  // rank 2: discriminant of the form on a complement of the radical
  bool split = false;
  std::string splitting_field;   // rank 2: label of kappa(sqrt(delta))
  std::array<NfElem, 3> line{};  // rank 1: Q = c * (line . v)^2
};

/// Index of the first nonzero entry.
template <class F>
size_t first_nonzero(const std::array<F, 3>& v) {
  for (size_t i = 0; i < 3; ++i)
    if (!is_zero(v[i])) return i;
  fail(ErrorKind::ZeroInput, "zero vector");
}

/// M_ij^2 - M_ii M_jj on the span of two vectors; its square class decides splitness.
template <class F>
F binary_discriminant_on(const TernaryForm<F>& Q, const std::array<F, 3>& u, const std::array<F, 3>& v) {
  F buv = Q.bilinear(u, v);
  return F(buv * buv - Q.eval(u) * Q.eval(v));
}

/// Label of kappa(sqrt(delta)).
inline std::string quadratic_extension_label(const NumberField& K, const NfElem& delta) {
  if (K.is_rationals()) return "Q(sqrt(" + squarefree_part(K.elem(delta.residue()).rational_value()).get_str() + "))";
  return K.label() + "(sqrt(" + delta.to_string() + "))";
}

inline ConicClassification classify_form(const TernaryForm<NfElem>& Q, const NumberField& K) {
  require(!Q.is_zero(), ErrorKind::ZeroForm, "classify_form: zero form");
  ConicClassification out;
  Matrix<NfElem> M = Q.gram();
  for (auto& row : M)
    for (auto& e : row) e = K.elem(e.residue());
  out.rank = static_cast<int>(rank(M));
  if (out.rank == 3) {
    out.kind = ConicKind::Smooth;
    return out;
  }
  if (out.rank == 1) {
    out.kind = ConicKind::Double;
    for (const auto& row : M) {
      std::array<NfElem, 3> r{row[0], row[1], row[2]};
      bool nz = std::any_of(r.begin(), r.end(), [](const NfElem& e) { return !e.is_zero(); });
      if (!nz) continue;
      NfElem lead = r[first_nonzero(r)];
      for (size_t i = 0; i < 3; ++i) out.line[i] = r[i] / lead;
      break;
    }
    return out;
  }
  auto ker = kernel(M);
  require(ker.size() == 1, ErrorKind::Internal, "rank-2 form without a one-dimensional radical");
  std::array<NfElem, 3> n{ker[0][0], ker[0][1], ker[0][2]};
  NfElem lead = n[first_nonzero(n)];
  for (auto& e : n) e = e / lead;
  out.node = n;
  size_t k = first_nonzero(n);
  std::array<std::array<NfElem, 3>, 2> comp;
  size_t idx = 0;
  for (size_t i = 0; i < 3; ++i) {
    if (i == k) continue;
    comp[idx] = {NfElem(0), NfElem(0), NfElem(0)};
    comp[idx][i] = K.elem(Rational(1));
    ++idx;
  }
  out.delta = binary_discriminant_on(Q, comp[0], comp[1]);
  out.delta = K.elem(out.delta.residue());
  require(!out.delta.is_zero(), ErrorKind::Internal, "degenerate complement of the radical");
  out.split = is_square_in_numberfield(K, out.delta);
  out.kind = out.split ? ConicKind::Split : ConicKind::Nonsplit;
  out.splitting_field = out.split ? K.label() : quadratic_extension_label(K, out.delta);
  return out;
}

inline ConicClassification classify_form(const TernaryQuadraticForm& Q) {
  return classify_form(lift_form(Q), NumberField::rationals());
}

/// Finite étale algebra prod Q(sqrt(d_i)) given by its radicands: split iff some
/// component is rational; pseudo-split iff every Galois element fixes a
/// component, i.e. some d_i is a square or an odd number of them multiply to a square.
struct EtaleClassification {
  bool split = false;
  bool pseudo_split = false;
};

inline EtaleClassification classify_multiquadratic(const std::vector<Integer>& radicands) {
  EtaleClassification out;
  std::vector<Integer> classes;
  for (const auto& d : radicands) {
    require(d != 0, ErrorKind::ZeroInput, "zero radicand");
    classes.push_back(squarefree_part(d));
  }
  for (const auto& d : classes)
    if (d == 1) out.split = true;
  if (out.split) {
    out.pseudo_split = true;
    return out;
  }
  // Enumerate odd subsets; the radicand lists here are tiny.
  require(classes.size() <= 20, ErrorKind::InvalidArgument, "too many radicands");
  const size_t n = classes.size();
  for (unsigned long mask = 1; mask < (1UL << n); ++mask) {
    if (__builtin_popcountl(mask) % 2 == 0) continue;
    Integer prod = 1;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1UL << i)) prod *= classes[i];
    if (is_perfect_square(prod)) {
      out.pseudo_split = true;
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Diagonalization and local solvability over Q

struct Diagonalization {
  std::array<Rational, 3> diag;
  Matrix<Rational> T;  // columns are an orthogonal basis: Q(T u) = sum diag_i u_i^2
};

inline Diagonalization diagonalize(const TernaryQuadraticForm& Q) {
  using V = std::array<Rational, 3>;
  Matrix<Rational> M = Q.gram();
  require(rank(M) == 3, ErrorKind::DegenerateConic, "diagonalize: form is not of rank 3");
  auto B = [&](const V& u, const V& v) { return Q.bilinear(u, v); };
  std::vector<V> candidates{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
  V v1{};
  for (const auto& c : candidates)
    if (sgn(B(c, c)) != 0) {
      v1 = c;
      break;
    }
  // Orthogonal complement of v1.
  auto w = mat_vec(M, std::vector<Rational>(v1.begin(), v1.end()));
  auto ker = kernel(Matrix<Rational>{w});
  V a{ker[0][0], ker[0][1], ker[0][2]}, b{ker[1][0], ker[1][1], ker[1][2]};
  V v2, v3;
  auto add = [](const V& x, const V& y) { return V{x[0] + y[0], x[1] + y[1], x[2] + y[2]}; };
  if (sgn(B(a, a)) != 0) {
    v2 = a;
  } else if (sgn(B(b, b)) != 0) {
    v2 = b;
  } else {
    v2 = add(a, b);
  }
  // v3 in span(a, b) orthogonal to v2.
  Rational ba = B(v2, a), bb = B(v2, b);
  v3 = {bb * a[0] - ba * b[0], bb * a[1] - ba * b[1], bb * a[2] - ba * b[2]};
  Diagonalization out;
  Matrix<Rational> T(3, std::vector<Rational>(3));
  std::array<V, 3> cols{v1, v2, v3};
  for (size_t j = 0; j < 3; ++j) {
    // Integral primitive columns keep the coefficients small.
    ProjPoint2 p = ProjPoint2::from_array(cols[j]);
    cols[j] = p.rationals();
    for (size_t i = 0; i < 3; ++i) T[i][j] = cols[j][i];
    out.diag[j] = B(cols[j], cols[j]);
  }
  out.T = T;
  require(sgn(out.diag[0]) != 0 && sgn(out.diag[1]) != 0 && sgn(out.diag[2]) != 0, ErrorKind::Internal,
          "diagonalization produced a zero coefficient");
  return out;
}

inline bool diagonal_local_solvable(const std::array<Rational, 3>& d, const Place& v) {
  return hilbert_symbol(Rational(-d[0] / d[2]), Rational(-d[1] / d[2]), v) == 1;
}

inline bool local_solvable(const TernaryQuadraticForm& Q, const Place& v) {
  return diagonal_local_solvable(diagonalize(Q).diag, v);
}

// ---------------------------------------------------------------------------
// Rational points

struct PointSearchOptions {
  bool use_descent = true;
  long search_bound = 200;  // height bound of the fallback search
};

struct RationalPointResult {
  std::optional<ProjPoint2> point;
  std::optional<Place> witness;  // failing place when there is no point
};

namespace detail {

struct Triple {
  Integer x, y, z;
};

/// Nontrivial solution of z^2 = A x^2 + B y^2 for squarefree A, B, if one exists.
inline std::optional<Triple> lagrange_descent(const Integer& A, const Integer& B, int depth = 0) {
  require(depth < 4096, ErrorKind::Internal, "descent did not terminate");
  if (A == 1) return Triple{1, 0, 1};
  if (B == 1) return Triple{0, 1, 1};
  if (abs_int(A) > abs_int(B)) {
    auto r = lagrange_descent(B, A, depth + 1);
    if (!r) return std::nullopt;
    return Triple{r->y, r->x, r->z};
  }
  Integer modulus = abs_int(B);
  if (modulus == 1) return std::nullopt;  // B = -1 and A = -1
  auto t0 = sqrt_mod_squarefree(A, modulus);
  if (!t0) return std::nullopt;
  Integer t = symmetric_mod(*t0, modulus);
  Integer Bp = (t * t - A) / B;
  require(Bp != 0, ErrorKind::Internal, "descent hit a square coefficient");
  Integer Bs = squarefree_part(Bp);
  Integer k = isqrt(Integer(Bp / Bs));
  auto r = lagrange_descent(A, Bs, depth + 1);
  if (!r) return std::nullopt;
  return Triple{r->z + t * r->x, Bs * k * r->y, r->z * t + A * r->x};
}

/// Least point of height <= bound, ordered by (height, lexicographic).
inline std::optional<ProjPoint2> bounded_search(const TernaryQuadraticForm& Q, long bound) {
  for (long h = 0; h <= bound; ++h) {
    std::vector<ProjPoint2> found;
    for (long x = -h; x <= h; ++x)
      for (long y = -h; y <= h; ++y) {
        // Solve c z^2 + (e x + f y) z + (a x^2 + b y^2 + d x y) = 0 for integer |z| <= h.
        Rational qa = Q.c[2], qb = Q.c[4] * x + Q.c[5] * y, qc = Q.c[0] * x * x + Q.c[1] * y * y + Q.c[3] * x * y;
        std::vector<Rational> zs;
        if (sgn(qa) == 0) {
          if (sgn(qb) != 0) zs.push_back(-qc / qb);
          else if (sgn(qc) == 0) for (long z = -h; z <= h; ++z) zs.emplace_back(z);
        } else {
          Rational disc = qb * qb - 4 * qa * qc;
          auto r = rational_sqrt(disc);
          if (r) {
            zs.push_back((-qb + *r) / (2 * qa));
            zs.push_back((-qb - *r) / (2 * qa));
          }
        }
        for (const auto& z : zs) {
          if (z.get_den() != 1 || abs(z) > h) continue;
          if (x == 0 && y == 0 && sgn(z) == 0) continue;
          long m = std::max({std::labs(x), std::labs(y), std::labs(z.get_num().get_si())});
          if (m != h) continue;
          if (gcd(gcd(Integer(x), Integer(y)), z.get_num()) != 1) continue;
          found.push_back(ProjPoint2::from_rationals(x, y, z));
        }
      }
    if (!found.empty()) return *std::min_element(found.begin(), found.end());
  }
  return std::nullopt;
}

}  // namespace detail

/// Rational point via diagonalization, reduction to a squarefree pairwise coprime
/// diagonal form, local checks, and Lagrange descent.
inline RationalPointResult find_rational_point(const TernaryQuadraticForm& Q, const PointSearchOptions& opt = {}) {
  require(!Q.is_zero(), ErrorKind::ZeroForm, "find_rational_point: zero form");
  Diagonalization D = diagonalize(Q);
  // Integral coefficients; scale[i] maps reduced variables back: x_i = scale[i] * X_i.
  std::array<Integer, 3> a;
  std::array<Rational, 3> scale{1, 1, 1};
  Integer den = lcm(lcm(D.diag[0].get_den(), D.diag[1].get_den()), D.diag[2].get_den());
  for (size_t i = 0; i < 3; ++i) a[i] = D.diag[i].get_num() * (den / D.diag[i].get_den());
  for (bool changed = true; changed;) {
    changed = false;
    Integer g = gcd(gcd(a[0], a[1]), a[2]);
    if (g != 1) {
      for (auto& v : a) v /= g;
      changed = true;
    }
    for (size_t i = 0; i < 3; ++i) {
      Integer s = squarefree_part(a[i]);
      if (s != a[i]) {
        Integer sq = isqrt(Integer(a[i] / s));
        a[i] = s;
        scale[i] /= sq;
        changed = true;
      }
    }
    for (size_t i = 0; i < 3 && !changed; ++i)
      for (size_t j = i + 1; j < 3 && !changed; ++j) {
        Integer h = gcd(a[i], a[j]);
        if (h == 1) continue;
        size_t k = 3 - i - j;
        a[i] /= h;
        a[j] /= h;
        a[k] *= h;
        scale[k] *= h;
        changed = true;
      }
  }
  RationalPointResult out;
  std::array<Rational, 3> d{Rational(a[0]), Rational(a[1]), Rational(a[2])};
  std::vector<Place> places{Place::real(), Place::prime(2)};
  std::map<Integer, bool> seen{{Integer(2), true}};
  for (const auto& v : a)
    for (const auto& [p, e] : factor_integer(v))
      if (!seen.count(p)) {
        seen[p] = true;
        places.push_back(Place::prime(p));
      }
  // Failures come in pairs (reciprocity); odd primes are reported first.
  std::sort(places.begin(), places.end(), [](const Place& x, const Place& y) {
    auto key = [](const Place& v) { return v.is_real() ? 2 : v.p == 2 ? 1 : 0; };
    if (key(x) != key(y)) return key(x) < key(y);
    return x.p < y.p;
  });
  for (const auto& v : places) {
    if (!diagonal_local_solvable(d, v)) {
      out.witness = v;
      return out;
    }
  }
  if (!opt.use_descent) {
    auto p = detail::bounded_search(Q, opt.search_bound);
    if (!p) fail(ErrorKind::SearchBudgetExceeded, "no point of height <= " + std::to_string(opt.search_bound));
    out.point = p;
    return out;
  }
  // a0 X^2 + a1 Y^2 + a2 Z^2 = 0  <=>  (a2 Z)^2 = (-a0 a2) X^2 + (-a1 a2) Y^2.
  auto sol = detail::lagrange_descent(Integer(-a[0] * a[2]), Integer(-a[1] * a[2]));
  require(sol.has_value(), ErrorKind::Internal, "descent failed on a locally solvable conic");
  std::array<Rational, 3> X{Rational(a[2] * sol->x), Rational(a[2] * sol->y), Rational(sol->z)};
  std::array<Rational, 3> u;
  for (size_t i = 0; i < 3; ++i) u[i] = X[i] * scale[i];
  std::array<Rational, 3> P{0, 0, 0};
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 3; ++j) P[i] += D.T[i][j] * u[j];
  ProjPoint2 pt = ProjPoint2::from_array(P);
  require(sgn(Q.eval(pt.rationals())) == 0, ErrorKind::Internal, "descent produced a point off the conic");
  out.point = pt;
  return out;
}

// ---------------------------------------------------------------------------
// Parametrization

/// Projection from a base point P: the parameter (u, v) names the point
/// V = u E1 + v E2 on the line x_k = 0 (k the first nonzero coordinate of P),
/// and maps to Q(V) P - 2 B(P, V) V, the second intersection of line PV.
struct ConicParametrization {
  std::array<BinaryForm, 3> forms;  // p_x, p_y, p_z in (u, v)
  ProjPoint2 base;
  std::array<size_t, 2> basis{};    // coordinate indices of E1, E2
  std::pair<Integer, Integer> base_parameter;

  ProjPoint2 point(const Rational& u, const Rational& v) const {
    return ProjPoint2::from_rationals(forms[0].eval(u, v), forms[1].eval(u, v), forms[2].eval(u, v));
  }

  /// Parameter of a point R on the conic (inverse of point()).
  std::pair<Integer, Integer> parameter_of(const ProjPoint2& R) const {
    auto P = base.rationals(), Rr = R.rationals();
    size_t k = 3 - basis[0] - basis[1];
    std::array<Rational, 3> V;
    for (size_t i = 0; i < 3; ++i) V[i] = Rr[k] * P[i] - P[k] * Rr[i];
    if (sgn(V[basis[0]]) == 0 && sgn(V[basis[1]]) == 0) return base_parameter;
    ProjPoint2 q = ProjPoint2::from_rationals(V[basis[0]], V[basis[1]], 0);
    return {q.x, q.y};
  }
};

inline ConicParametrization parametrize(const TernaryQuadraticForm& Q, const ProjPoint2& P) {
  require(sgn(Q.eval(P.rationals())) == 0, ErrorKind::PointNotOnConic, "parametrize: base point not on the conic");
  require(rank(Q.gram()) == 3, ErrorKind::DegenerateConic, "parametrize: conic is not smooth");
  ConicParametrization out;
  out.base = P;
  auto p = P.rationals();
  size_t k = first_nonzero(p);
  size_t idx = 0;
  for (size_t i = 0; i < 3; ++i)
    if (i != k) out.basis[idx++] = i;
  std::array<Rational, 3> E1{0, 0, 0}, E2{0, 0, 0};
  E1[out.basis[0]] = 1;
  E2[out.basis[1]] = 1;
  // Q(uE1 + vE2) = q11 u^2 + 2 q12 uv + q22 v^2 and B(P, uE1 + vE2) = b1 u + b2 v.
  Rational q11 = Q.eval(E1), q22 = Q.eval(E2), q12 = Q.bilinear(E1, E2);
  Rational b1 = Q.bilinear(p, E1), b2 = Q.bilinear(p, E2);
  BinaryForm QV(2, {q11, 2 * q12, q22});
  BinaryForm BV(1, {b1, b2});
  for (size_t i = 0; i < 3; ++i) {
    BinaryForm Vi(1, {E1[i], E2[i]});
    out.forms[i] = QV.scale(p[i]) - (BV * Vi).scale(2);
  }
  ProjPoint2 anchor = ProjPoint2::from_rationals(b2, -b1, 0);
  out.base_parameter = {anchor.x, anchor.y};
  return out;
}

// ---------------------------------------------------------------------------
// Intersection of two conics

struct ZeroCyclePoint {
  NumberField field;              // field of definition
  std::array<NfElem, 3> coords;   // projective coordinates over the field
  int multiplicity = 1;
  int degree() const { return field.degree(); }
};

using ZeroCycle = std::vector<ZeroCyclePoint>;

inline int total_degree(const ZeroCycle& Z) {
  int n = 0;
  for (const auto& p : Z) n += p.degree() * p.multiplicity;
  return n;
}

namespace detail {

/// Resultant-based intersection after moving the projection centre to T(0,0,1).
/// Returns nullopt when the chart is not generic enough.
inline std::optional<ZeroCycle> intersect_in_chart(const TernaryQuadraticForm& Q1, const TernaryQuadraticForm& Q2,
                                                   const Matrix<Rational>& T) {
  TernaryQuadraticForm A = Q1.transform(T), B = Q2.transform(T);
  if (sgn(A.c[2]) == 0 || sgn(B.c[2]) == 0) return std::nullopt;
  // Each form as a z^2 + b(x,y) z + c(x,y).
  auto parts = [](const TernaryQuadraticForm& F, const Rational& x, const Rational& y) {
    return std::array<Rational, 3>{F.c[2], F.c[4] * x + F.c[5] * y, F.c[0] * x * x + F.c[1] * y * y + F.c[3] * x * y};
  };
  auto res = [&](const Rational& x, const Rational& y) -> Rational {
    auto [a1, b1, c1] = parts(A, x, y);
    auto [a2, b2, c2] = parts(B, x, y);
    Rational u = a1 * c2 - a2 * c1;
    return u * u - (a1 * b2 - a2 * b1) * (b1 * c2 - b2 * c1);
  };
  BinaryForm R = BinaryForm::interpolate(4, res);
  if (R.is_zero()) fail(ErrorKind::CommonComponent, "conics share a component");
  ZeroCycle out;
  for (const auto& [g, e] : factor_binary(R).factors) {
    NumberField K;
    NfElem x, y;
    if (g == BinaryForm::t()) {
      x = NfElem(1);
      y = NfElem(0);
    } else {
      K = NumberField(g.dehomogenize());
      x = K.gen();
      y = K.elem(Rational(1));
    }
    auto nparts = [&](const TernaryQuadraticForm& F) {
      std::array<NfElem, 3> r{K.elem(F.c[2]), NfElem(F.c[4]) * x + NfElem(F.c[5]) * y,
                              NfElem(F.c[0]) * x * x + NfElem(F.c[1]) * y * y + NfElem(F.c[3]) * x * y};
      return r;
    };
    auto [a1, b1, c1] = nparts(A);
    auto [a2, b2, c2] = nparts(B);
    NfElem den = a2 * b1 - a1 * b2;
    if (den.is_zero()) return std::nullopt;
    NfElem z = -(a2 * c1 - a1 * c2) / den;
    std::array<NfElem, 3> local{K.elem(x.residue()), K.elem(y.residue()), z};
    ZeroCyclePoint pt;
    pt.field = K;
    for (size_t i = 0; i < 3; ++i) {
      NfElem acc = K.elem(Rational(0));
      for (size_t j = 0; j < 3; ++j) acc += NfElem(T[i][j]) * local[j];
      pt.coords[i] = acc;
    }
    // Normalize: first nonzero coordinate 1.
    NfElem lead = pt.coords[first_nonzero(pt.coords)];
    for (auto& c : pt.coords) c = c / lead;
    pt.multiplicity = e;
    out.push_back(pt);
  }
  return out;
}

inline Matrix<Rational> shear(const Rational& alpha, const Rational& beta) {
  return {{1, 0, alpha}, {0, 1, beta}, {0, 0, 1}};
}

inline std::vector<std::pair<int, int>> shear_candidates() {
  std::vector<std::pair<int, int>> out;
  for (int h = 0; h <= 6; ++h)
    for (int a = -h; a <= h; ++a)
      for (int b = -h; b <= h; ++b)
        if (std::max(std::abs(a), std::abs(b)) == h) out.emplace_back(a, b);
  return out;
}

}  // namespace detail

/// Zero-cycle of Q1 = Q2 = 0. Multiplicities come from the resultant and are
/// cross-checked in a second chart.
inline ZeroCycle intersect_conics(const TernaryQuadraticForm& Q1, const TernaryQuadraticForm& Q2) {
  require(!Q1.is_zero() && !Q2.is_zero(), ErrorKind::ZeroForm, "intersect_conics: zero form");
  std::vector<ZeroCycle> charts;
  for (const auto& [a, b] : detail::shear_candidates()) {
    auto Z = detail::intersect_in_chart(Q1, Q2, detail::shear(a, b));
    if (!Z) continue;
    charts.push_back(std::move(*Z));
    if (charts.size() == 2) break;
  }
  require(!charts.empty(), ErrorKind::Internal, "no generic projection centre found");
  auto signature = [](const ZeroCycle& Z) {
    std::vector<std::pair<int, int>> s;
    for (const auto& p : Z) s.emplace_back(p.degree(), p.multiplicity);
    std::sort(s.begin(), s.end());
    return s;
  };
  require(total_degree(charts[0]) == 4, ErrorKind::Internal, "intersection cycle does not have degree 4");
  if (charts.size() == 2)
    require(signature(charts[0]) == signature(charts[1]), ErrorKind::Internal, "intersection multiplicities depend on the chart");
  return charts[0];
}

}  // namespace biconic
