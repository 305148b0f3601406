#include <gtest/gtest.h>

#include <random>
#include <set>

#include "biconic/binary_form.hpp"
#include "biconic/factor.hpp"
#include "biconic/hilbert.hpp"
#include "biconic/mpoly.hpp"
#include "biconic/number_field.hpp"
#include "biconic/padic.hpp"

using namespace biconic;

namespace {

// Brute-force local solvability of z^2 = a x^2 + b y^2 (a, b squarefree integers).
bool oracle_local_solvable(const Integer& a, const Integer& b, const Place& v) {
  if (v.is_real()) return !(a < 0 && b < 0);
  const long p = v.p.get_si();
  if (p == 2) {
    for (long x = 0; x < 16; ++x)
      for (long y = 0; y < 16; ++y)
        for (long z = 0; z < 16; ++z) {
          if (x % 2 == 0 && y % 2 == 0 && z % 2 == 0) continue;
          if (mod(Integer(z * z) - a * x * x - b * y * y, 16) == 0) return true;
        }
    return false;
  }
  const long M = p * p * p;
  std::vector<bool> square(static_cast<size_t>(M), false);
  for (long z = 0; z < M; ++z) square[static_cast<size_t>(z * z % M)] = true;
  // Primitive (x, y) up to units; (x, y) both divisible by p forces z divisible by p
  // and then z^2 = a x^2 + b y^2 cannot hold primitively since a, b are squarefree.
  auto test = [&](long x, long y) {
    return square[mod(a * x * x + b * y * y, M).get_ui()];
  };
  for (long y = 0; y < M; ++y)
    if (test(1, y)) return true;
  for (long x = 0; x < M; x += p)
    if (test(x, 1)) return true;
  return false;
}

Rational random_rational(std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> num(-bound, bound), den(1, bound);
  int n = 0;
  while (n == 0) n = num(rng);
  return make_rational(n, den(rng));
}

std::vector<Place> places_for(const Rational& a, const Rational& b) {
  std::set<Integer> primes{2};
  for (const Integer& n : {a.get_num(), a.get_den(), b.get_num(), b.get_den()}) {
    for (const auto& [p, e] : factor_integer(n)) primes.insert(p);
  }
  std::vector<Place> out{Place::real()};
  for (const auto& p : primes) out.push_back(Place::prime(p));
  return out;
}

Rational paper_dp2_det(const Rational& s, const Rational& t) {
  // Gram matrix of s^2 r1 + 2 s t q - t^2 r2 is diagonal for the paper-dp2 data.
  return (2 * s * t) * (-2 * (s - t) * (s - t)) * ((s - t) * (s + t));
}

}  // namespace

TEST(Integer, ParseRational) {
  EXPECT_EQ(*parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(*parse_rational(" -4 "), Rational(-4));
  EXPECT_FALSE(parse_rational("1/0"));
  EXPECT_FALSE(parse_rational("x"));
  EXPECT_FALSE(parse_rational("1/-2"));
  EXPECT_EQ(to_string(Rational(-3, 4)), "-3/4");
  EXPECT_EQ(to_string(Rational(5)), "5");
}

TEST(Integer, FactorAndSquarefree) {
  auto f = factor_integer(Integer(-360));
  ASSERT_EQ(f.size(), 3u);
  EXPECT_EQ(f[0], std::make_pair(Integer(2), 3));
  EXPECT_EQ(squarefree_part(Integer(-72)), Integer(-2));
  EXPECT_EQ(squarefree_part(Rational(8, 3)), Integer(6));
  Integer big = Integer("1000000007") * Integer("998244353");
  auto g = factor_integer(big);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].first, Integer("998244353"));
}

TEST(Integer, SqrtMod) {
  for (long p : {3L, 5L, 7L, 13L, 17L, 97L}) {
    for (long a = 0; a < p; ++a) {
      auto r = sqrt_mod_prime(Integer(a), Integer(p));
      bool residue = false;
      for (long x = 0; x < p; ++x) residue |= (x * x - a) % p == 0;
      EXPECT_EQ(r.has_value(), residue);
      if (r) {
        EXPECT_EQ(mod(*r * *r - a, p), 0);
      }
    }
  }
  auto r = sqrt_mod_squarefree(Integer(4), Integer(105));
  ASSERT_TRUE(r);
  EXPECT_EQ(mod(*r * *r - 4, 105), 0);
}

TEST(Hilbert, Examples) {
  EXPECT_EQ(hilbert_symbol(1, 7, Place::prime(7)), 1);
  EXPECT_EQ(hilbert_symbol(1, -3, Place::real()), 1);
  EXPECT_EQ(hilbert_symbol(-1, -1, Place::real()), -1);
  EXPECT_EQ(hilbert_symbol(-1, -1, Place::prime(2)), -1);
  EXPECT_EQ(hilbert_symbol(2, 5, Place::prime(5)), oracle_local_solvable(2, 5, Place::prime(5)) ? 1 : -1);
  EXPECT_THROW(hilbert_symbol(0, 1, Place::prime(3)), Error);
}

TEST(Hilbert, BruteForceOracle) {
  std::mt19937_64 rng(11);
  std::vector<Place> places{Place::real(), Place::prime(2), Place::prime(3), Place::prime(5), Place::prime(7),
                            Place::prime(11)};
  for (int trial = 0; trial < 200; ++trial) {
    Rational a = random_rational(rng, 30), b = random_rational(rng, 30);
    const Place& v = places[rng() % places.size()];
    bool expected = oracle_local_solvable(squarefree_part(a), squarefree_part(b), v);
    EXPECT_EQ(hilbert_symbol(a, b, v), expected ? 1 : -1) << a << " " << b << " at " << v.to_string();
  }
}

TEST(Hilbert, Bimultiplicative) {
  std::mt19937_64 rng(5);
  std::vector<long> primes{2, 3, 5, 7, 11, 13, 17, 19};
  for (int trial = 0; trial < 500; ++trial) {
    Rational a = random_rational(rng, 50), b = random_rational(rng, 50), c = random_rational(rng, 50);
    Place v = Place::prime(primes[rng() % primes.size()]);
    EXPECT_EQ(hilbert_symbol(a, b, v) * hilbert_symbol(a, c, v), hilbert_symbol(a, b * c, v));
  }
}

TEST(Hilbert, ProductFormula) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    Rational a = random_rational(rng, 60), b = random_rational(rng, 60);
    int prod = 1;
    for (const auto& v : places_for(a, b)) prod *= hilbert_symbol(a, b, v);
    EXPECT_EQ(prod, 1) << a << " " << b;
  }
}

TEST(Padic, HenselExamples) {
  PadicValue r = hensel_lift_root(QPoly{-1, 0, 1}, 7, 1, 3);
  EXPECT_EQ(r.residue(3), 1);
  // Oracle: the residues mod 49 squaring to 2 and reducing to 3 mod 7.
  std::vector<long> roots;
  for (long x = 0; x < 49; ++x)
    if ((x * x - 2) % 49 == 0 && x % 7 == 3) roots.push_back(x);
  ASSERT_EQ(roots.size(), 1u);
  PadicValue s = hensel_lift_root(QPoly{-2, 0, 1}, 7, 3, 2);
  EXPECT_EQ(s.residue(2), roots[0]);
  EXPECT_EQ(s.residue(2), 10);
  try {
    hensel_lift_root(QPoly{-2, 0, 1}, 2, 0, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonsimpleRoot);
  }
  try {
    hensel_lift_root(QPoly{-2, 0, 1}, 7, 2, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotARoot);
  }
}

TEST(Padic, HenselPrecisionConsistency) {
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 60; ++trial) {
    QPoly g{Rational(static_cast<long>(rng() % 41) - 20), Rational(static_cast<long>(rng() % 21) - 10),
            Rational(static_cast<long>(rng() % 11) - 5), Rational(1)};
    for (long p : {3L, 5L, 7L, 11L}) {
      for (long r0 = 0; r0 < p; ++r0) {
        PadicValue full(PadicValue::zero(p));
        try {
          full = hensel_lift_root(g, p, r0, 6);
        } catch (const Error&) {
          continue;
        }
        ++checked;
        Integer pm = pow_int(Integer(p), 6);
        Integer r = full.residue(6);
        Integer val = 0;
        for (int i = g.degree(); i >= 0; --i) val = mod(val * r + g.coeff(i).get_num(), pm);
        EXPECT_EQ(val, 0);
        for (int j = 1; j <= 6; ++j) {
          PadicValue part = hensel_lift_root(g, p, r0, j);
          EXPECT_EQ(part.residue(j), mod(r, pow_int(Integer(p), static_cast<unsigned long>(j))));
        }
      }
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(Padic, Arithmetic) {
  PadicValue a = PadicValue::from_rational(Rational(3, 5), 3, 4);
  PadicValue b = PadicValue::from_rational(Rational(6), 3, 4);
  PadicValue c = a * b;
  EXPECT_EQ(c.valuation(), 2);  // 18/5
  EXPECT_EQ(c.relative_precision(), 4);
  PadicValue d = c / b;
  EXPECT_EQ(d, a);
  PadicValue e = PadicValue::from_rational(Rational(1), 3, 3) - PadicValue::from_rational(Rational(10), 3, 3);
  // 1 - 10 = -9: valuation 2, only one significant digit left.
  EXPECT_EQ(e.valuation(), 2);
  EXPECT_EQ(e.relative_precision(), 1);
  PadicValue z = PadicValue::from_rational(Rational(1), 3, 2) - PadicValue::from_rational(Rational(10), 3, 2);
  EXPECT_TRUE(z.is_zero());
  EXPECT_THROW((void)(a / z), Error);
  EXPECT_THROW(z.residue(5), Error);
}

TEST(Factor, Examples) {
  auto f = factor_unipoly(QPoly{-1, 0, 1});
  ASSERT_EQ(f.factors.size(), 2u);
  EXPECT_EQ(f.factors[0].first, (QPoly{-1, 1}));
  EXPECT_EQ(f.factors[1].first, (QPoly{1, 1}));
  EXPECT_TRUE(is_irreducible(QPoly{1, 0, 1}));
  EXPECT_THROW(factor_unipoly(QPoly{}), Error);
  // x^4 + 1 is reducible modulo every prime.
  EXPECT_TRUE(is_irreducible(QPoly{1, 0, 0, 0, 1}));
  EXPECT_THROW(factor_unipoly(QPoly::monomial(1, 13) + QPoly{1}), Error);
}

TEST(Factor, DiscriminantOfPaperSurface) {
  // Oracle: interpolate the pencil determinant at 7 parameters.
  std::vector<Rational> xs, ys;
  for (int k = -3; k <= 3; ++k) {
    xs.emplace_back(k);
    ys.push_back(paper_dp2_det(k, 1));
  }
  QPoly d = interpolate(xs, ys);
  EXPECT_EQ(d.degree(), 5);  // the root t = 0 drops one degree
  auto f = factor_unipoly(d);
  EXPECT_EQ(f.expand(), d);
  std::vector<std::pair<QPoly, int>> expected{{QPoly{-1, 1}, 3}, {QPoly{0, 1}, 1}, {QPoly{1, 1}, 1}};
  EXPECT_EQ(f.factors, expected);
  EXPECT_EQ(f.content, Rational(-4));
}

TEST(Factor, RoundTrip) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (int trial = 0; trial < 60; ++trial) {
    int count = 1 + static_cast<int>(rng() % 4);
    std::vector<QPoly> parts;
    QPoly prod = QPoly::constant(Rational(1 + static_cast<int>(rng() % 3)));
    for (int i = 0; i < count; ++i) {
      QPoly g;
      do {
        int deg = 1 + static_cast<int>(rng() % 3);
        std::vector<Rational> c;
        for (int k = 0; k < deg; ++k) c.emplace_back(coef(rng));
        c.emplace_back(1);
        g = QPoly(c);
      } while (!is_irreducible(g));
      parts.push_back(g);
      prod *= g;
    }
    auto f = factor_unipoly(prod);
    EXPECT_EQ(f.expand(), prod);
    std::multiset<std::vector<Rational>> want, got;
    for (const auto& g : parts) want.insert(g.coeffs());
    for (const auto& [g, e] : f.factors)
      for (int i = 0; i < e; ++i) got.insert(g.coeffs());
    EXPECT_EQ(want, got);
  }
}

TEST(Factor, HarderInputs) {
  // Swinnerton-Dyer style: minimal polynomial of sqrt2 + sqrt3 times shifted copies.
  QPoly m{1, 0, -10, 0, 1};
  QPoly g = m * compose(m, QPoly{1, 1}) * QPoly{-3, 0, 1};
  auto f = factor_unipoly(g);
  EXPECT_EQ(f.expand(), g);
  EXPECT_EQ(f.factors.size(), 3u);
  QPoly h = pow(QPoly{2, 0, 1}, 3) * QPoly{Rational(1, 2), 3};
  auto fh = factor_unipoly(h);
  EXPECT_EQ(fh.expand(), h);
  ASSERT_EQ(fh.factors.size(), 2u);
  EXPECT_EQ(fh.factors[1].second, 3);
}

TEST(NumberField, ElementArithmetic) {
  NumberField K(QPoly{-2, 0, 1});
  NfElem a = K.gen();
  EXPECT_EQ(a * a, NfElem(2));
  NfElem b = K.elem(QPoly{1, 1});
  EXPECT_EQ(b * b.inverse(), NfElem(1));
  EXPECT_EQ(minimal_polynomial(K, b), (QPoly{-1, -2, 1}));
  EXPECT_EQ(norm(K, b), Rational(-1));
  EXPECT_THROW(NumberField(QPoly{-1, 0, 1}), Error);
  EXPECT_EQ(K.label(), "Q(sqrt(2))");
  NumberField L(QPoly{2, 0, 1});
  EXPECT_THROW((void)(K.gen() + L.gen()), Error);
}

TEST(NumberField, SquareTesting) {
  NumberField Q;
  EXPECT_TRUE(is_square_in_numberfield(Q, NfElem(4)));
  EXPECT_FALSE(is_square_in_numberfield(Q, NfElem(-1)));
  NumberField K(QPoly{-2, 0, 1});
  EXPECT_TRUE(is_square_in_numberfield(K, NfElem(2)));
  NumberField L(QPoly{2, 0, 1});
  EXPECT_FALSE(is_square_in_numberfield(L, NfElem(2)));
  // Oracle: Res_a(a^2 + 2, X^2 - 2) = (X^2 - 2)^2 has no rational root.
  QPoly N = pow(QPoly{-2, 0, 1}, 2);
  for (const auto& [g, e] : factor_unipoly(N).factors) EXPECT_GT(g.degree(), 1);
  // Cross-check at p = 3, where a^2 = -2 = 1 splits but 2 is a non-residue.
  EXPECT_FALSE(sqrt_mod_prime(2, 3).has_value());
  EXPECT_TRUE(sqrt_mod_prime(-2, 3).has_value());
  // Cubic field: a is not a square, a^4 is.
  NumberField C(QPoly{-2, 0, 0, 1});
  EXPECT_FALSE(is_square_in_numberfield(C, C.gen()));
  EXPECT_TRUE(is_square_in_numberfield(C, C.gen() * C.gen() * C.gen() * C.gen()));
  EXPECT_TRUE(is_square_in_numberfield(C, NfElem(0)));
}

TEST(NumberField, SquaresAreSquares) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> coef(-9, 9);
  for (int trial = 0; trial < 100; ++trial) {
    QPoly f;
    do {
      f = QPoly{Rational(coef(rng)), Rational(coef(rng)), Rational(1)};
    } while (!is_irreducible(f));
    NumberField K(f);
    NfElem a = K.elem(QPoly{Rational(coef(rng)), Rational(coef(rng), 1 + (rng() % 3))});
    EXPECT_TRUE(is_square_in_numberfield(K, a * a));
  }
}

TEST(BinaryForm, Resultant) {
  EXPECT_NE(resultant_binary(BinaryForm::s(), BinaryForm::t()), 0);
  BinaryForm st = BinaryForm::s() - BinaryForm::t();
  EXPECT_EQ(resultant_binary(st, st), 0);
  BinaryForm F(2, {1, 0, -2}), G(2, {1, 0, 1});
  // Oracle: product of G over the roots of F, each root sqrt(+-2) giving 3.
  Rational prod = 1;
  for (int sign : {1, -1}) {
    (void)sign;
    prod *= Rational(2) + 1;
  }
  EXPECT_EQ(resultant_binary(F, G), prod);
  EXPECT_EQ(resultant_binary(F, G), 9);
  EXPECT_THROW(resultant_binary(BinaryForm::zero(2), G), Error);
}

TEST(BinaryForm, FactorWithRootAtInfinity) {
  BinaryForm D = BinaryForm::interpolate(6, paper_dp2_det);
  EXPECT_EQ(D.degree(), 6);
  auto f = factor_binary(D);
  EXPECT_EQ(f.expand(), D);
  int total = 0;
  std::set<std::pair<Integer, Integer>> roots;
  for (const auto& [g, e] : f.factors) {
    total += g.degree() * e;
    roots.insert(linear_root(g));
  }
  EXPECT_EQ(total, 6);
  std::set<std::pair<Integer, Integer>> expected{{0, 1}, {1, 0}, {1, 1}, {1, -1}};
  EXPECT_EQ(roots, expected);
  for (int s = -3; s <= 3; ++s)
    for (int t = -2; t <= 2; ++t) EXPECT_EQ(D.eval(s, t), paper_dp2_det(s, t));
}

TEST(MPoly, SheetIdentity) {
  // (t q + s r1)^2 - t^2 (q^2 + r1 r2) = r1 (s^2 r1 + 2 s t q - t^2 r2) for symbols q, r1, r2, s, t.
  using P = MPoly<5>;
  P q = P::var(0), r1 = P::var(1), r2 = P::var(2), s = P::var(3), t = P::var(4);
  P D = s * s * r1 + P(2) * s * t * q - t * t * r2;
  EXPECT_EQ(pow(t * q + s * r1, 2) - t * t * (q * q + r1 * r2), r1 * D);
  EXPECT_EQ(pow(t * r2 - s * q, 2) - s * s * (q * q + r1 * r2), -(r2 * D));
}
