#pragma once

// Number fields Q[a]/(f) and their elements, with square testing.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "biconic/factor.hpp"
#include "biconic/linalg.hpp"

namespace biconic {

struct NumberFieldData {
  QPoly f;  // monic, irreducible
};

class NfElem;

class NumberField {
 public:
  /// The rationals, as Q[a]/(a).
  NumberField() : d_(std::make_shared<NumberFieldData>(NumberFieldData{QPoly{0, 1}})) {}

  /// Q[a]/(f); f is made monic and certified irreducible.
  explicit NumberField(const QPoly& f) {
    require(f.degree() >= 1, ErrorKind::InvalidArgument, "number field needs a polynomial of degree >= 1");
    require(f.degree() <= kMaxFactorDegree, ErrorKind::UnsupportedDegree, "number field degree above 12");
    require(is_irreducible(f), ErrorKind::NotIrreducible, "defining polynomial is reducible: " + to_string(f));
    d_ = std::make_shared<NumberFieldData>(NumberFieldData{f.monic()});
  }

  static NumberField rationals() { return NumberField(); }

  int degree() const { return d_->f.degree(); }
  bool is_rationals() const { return degree() == 1; }
  const QPoly& defining() const { return d_->f; }
  const std::shared_ptr<const NumberFieldData>& data() const { return d_; }

  NfElem elem(const QPoly& r) const;
  NfElem elem(const Rational& a) const;
  NfElem gen() const;

  /// "Q", "Q(sqrt(d))" for quadratic fields, else "Q[a]/(f)".
  std::string label(const std::string& var = "a") const;

  friend bool operator==(const NumberField& a, const NumberField& b) {
    return a.d_ == b.d_ || a.d_->f == b.d_->f;
  }

 private:
  std::shared_ptr<const NumberFieldData> d_;
};

/// Element of a number field. A null field pointer marks a bare rational that
/// adapts to whichever field it is combined with.
class NfElem {
 public:
  NfElem() = default;
  NfElem(int a) : r_(QPoly::constant(Rational(a))) {}  // NOLINT(google-explicit-constructor)
  NfElem(const Rational& a) : r_(QPoly::constant(a)) {}  // NOLINT(google-explicit-constructor)
  NfElem(std::shared_ptr<const NumberFieldData> K, const QPoly& r) : K_(std::move(K)) {
    r_ = K_ ? r % K_->f : r;
  }

  const std::shared_ptr<const NumberFieldData>& field() const { return K_; }
  const QPoly& residue() const { return r_; }
  bool is_zero() const { return r_.is_zero(); }
  bool is_rational() const { return r_.degree() <= 0; }
  Rational rational_value() const {
    require(is_rational(), ErrorKind::FieldMismatch, "element is not rational");
    return r_.coeff(0);
  }

  friend NfElem operator+(const NfElem& a, const NfElem& b) { return NfElem(join(a, b), a.r_ + b.r_); }
  friend NfElem operator-(const NfElem& a, const NfElem& b) { return NfElem(join(a, b), a.r_ - b.r_); }
  friend NfElem operator*(const NfElem& a, const NfElem& b) { return NfElem(join(a, b), a.r_ * b.r_); }
  friend NfElem operator/(const NfElem& a, const NfElem& b) { return a * b.inverse(); }
  NfElem operator-() const { return NfElem(K_, -r_); }
  NfElem& operator+=(const NfElem& o) { return *this = *this + o; }
  NfElem& operator-=(const NfElem& o) { return *this = *this - o; }
  NfElem& operator*=(const NfElem& o) { return *this = *this * o; }

  NfElem inverse() const {
    require(!is_zero(), ErrorKind::ZeroInput, "inverse of zero field element");
    if (!K_ || r_.degree() == 0) return NfElem(K_, QPoly::constant(Rational(1) / r_.coeff(0)));
    auto [g, s, t] = ext_gcd(r_, K_->f);
    require(g.degree() == 0, ErrorKind::Internal, "defining polynomial not irreducible");
    return NfElem(K_, s);
  }

  friend bool operator==(const NfElem& a, const NfElem& b) {
    (void)join(a, b);
    return a.r_ == b.r_;
  }
  friend bool operator!=(const NfElem& a, const NfElem& b) { return !(a == b); }

  std::string to_string(const std::string& var = "a") const { return biconic::to_string(r_, var); }

 private:
  static std::shared_ptr<const NumberFieldData> join(const NfElem& a, const NfElem& b) {
    if (!a.K_) return b.K_;
    if (!b.K_) return a.K_;
    if (a.K_ != b.K_ && !(a.K_->f == b.K_->f)) fail(ErrorKind::FieldMismatch, "elements of different fields");
    return a.K_;
  }

  std::shared_ptr<const NumberFieldData> K_;
  QPoly r_;
};

inline bool is_zero(const NfElem& a) { return a.is_zero(); }

inline NfElem NumberField::elem(const QPoly& r) const { return NfElem(d_, r); }
inline NfElem NumberField::elem(const Rational& a) const { return NfElem(d_, QPoly::constant(a)); }
inline NfElem NumberField::gen() const { return NfElem(d_, QPoly::x()); }

/// Matrix of multiplication by a on the power basis.
inline Matrix<Rational> multiplication_matrix(const NumberField& K, const NfElem& a) {
  const int n = K.degree();
  Matrix<Rational> M(static_cast<size_t>(n), std::vector<Rational>(static_cast<size_t>(n)));
  NfElem col = K.elem(a.residue());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) M[static_cast<size_t>(i)][static_cast<size_t>(j)] = col.residue().coeff(i);
    col = col * K.gen();
  }
  return M;
}

inline Rational norm(const NumberField& K, const NfElem& a) { return determinant(multiplication_matrix(K, a)); }

/// Characteristic polynomial of multiplication by a.
inline QPoly characteristic_polynomial(const NumberField& K, const NfElem& a) {
  const int n = K.degree();
  std::vector<Rational> xs, ys;
  for (int k = 0; k <= n; ++k) {
    xs.emplace_back(k);
    ys.push_back(norm(K, K.elem(Rational(k)) - a));
  }
  return interpolate(xs, ys);
}

/// Minimal polynomial of a over Q (monic).
inline QPoly minimal_polynomial(const NumberField& K, const NfElem& a) {
  QPoly cp = characteristic_polynomial(K, a);
  Factorization fac = factor_unipoly(cp);
  require(fac.factors.size() == 1, ErrorKind::Internal, "characteristic polynomial is not a prime power");
  return fac.factors.front().first;
}

/// Whether a is a square in K. Degree 1 tests rationals directly; otherwise
/// the norm N(X) = Res_a(f(a), (X - k a)^2 - v(a)) is computed for k = 0, 1, ...
/// until squarefree, and v is a square iff N(X) is reducible over Q.
inline bool is_square_in_numberfield(const NumberField& K, const NfElem& v) {
  if (v.is_zero()) return true;
  if (K.is_rationals()) return is_rational_square(K.elem(v.residue()).rational_value());
  const int n = K.degree();
  NfElem a = K.elem(v.residue());
  for (int k = 0; k < 64; ++k) {
    std::vector<Rational> xs, ys;
    for (int j = 0; j <= 2 * n; ++j) {
      NfElem x = K.elem(Rational(j)) - K.gen() * NfElem(k);
      xs.emplace_back(j);
      ys.push_back(norm(K, x * x - a));
    }
    QPoly N = interpolate(xs, ys);
    if (gcd(N, N.derivative()).degree() > 0) continue;
    Factorization fac = factor_unipoly(N);
    return fac.factors.size() > 1;
  }
  fail(ErrorKind::Internal, "no squarefree norm found");
}

inline std::string NumberField::label(const std::string& var) const {
  const QPoly& f = d_->f;
  if (f.degree() == 1) return "Q";
  if (f.degree() == 2) {
    Rational disc = f.coeff(1) * f.coeff(1) - 4 * f.coeff(0);
    return "Q(sqrt(" + squarefree_part(disc).get_str() + "))";
  }
  return "Q[" + var + "]/(" + to_string(f, var) + ")";
}

}  // namespace biconic
