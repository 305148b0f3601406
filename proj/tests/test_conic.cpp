#include <gtest/gtest.h>

#include <random>
#include <set>

#include "biconic/conic.hpp"

using namespace biconic;

namespace biconic {
inline void PrintTo(const ProjPoint2& p, std::ostream* os) { *os << p.to_string(); }
}  // namespace biconic

namespace {

TernaryQuadraticForm form(std::array<long, 6> c) {
  TernaryQuadraticForm Q;
  for (size_t i = 0; i < 6; ++i) Q.c[i] = c[i];
  return Q;
}

// Any rational point with x, y in [-H, H] (z solved exactly), plus [0:0:1].
bool brute_force_has_point(const TernaryQuadraticForm& Q, long H) {
  if (sgn(Q.c[2]) == 0) return true;
  for (long x = -H; x <= H; ++x)
    for (long y = -H; y <= H; ++y) {
      if (x == 0 && y == 0) continue;
      Rational b = Q.c[4] * x + Q.c[5] * y, c = Q.c[0] * x * x + Q.c[1] * y * y + Q.c[3] * x * y;
      Rational disc = b * b - 4 * Q.c[2] * c;
      if (sgn(disc) >= 0 && is_rational_square(disc)) return true;
    }
  return false;
}

// Primitive solutions modulo p^e; e = 2 decides p-adic solvability when every
// coefficient has valuation at most 1.
bool has_primitive_solution_mod(const TernaryQuadraticForm& Q, long p, int e) {
  long M = 1;
  for (int i = 0; i < e; ++i) M *= p;
  for (long x = 0; x < M; ++x)
    for (long y = 0; y < M; ++y)
      for (long z = 0; z < M; ++z) {
        if (x % p == 0 && y % p == 0 && z % p == 0) continue;
        Rational v = Q(x, y, z);
        if (mod(v.get_num(), M) == 0) return true;
      }
  return false;
}

// Q composed with three binary quadratics, as a quartic form.
BinaryForm substitute(const TernaryQuadraticForm& Q, const std::array<BinaryForm, 3>& p) {
  BinaryForm r = BinaryForm::zero(4);
  const std::array<std::pair<size_t, size_t>, 6> mono{{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};
  for (size_t i = 0; i < 6; ++i) r = r + (p[mono[i].first] * p[mono[i].second]).scale(Q.c[i]);
  return r;
}

TernaryQuadraticForm random_rank3(std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> coef(-bound, bound);
  for (;;) {
    TernaryQuadraticForm Q;
    for (auto& c : Q.c) c = coef(rng);
    if (rank(Q.gram()) == 3) return Q;
  }
}

}  // namespace

TEST(Classify, Examples) {
  EXPECT_EQ(classify_form(form({1, 1, -1, 0, 0, 0})).rank, 3);
  auto c1 = classify_form(form({0, -2, 1, 0, 0, 0}));
  EXPECT_EQ(c1.rank, 2);
  EXPECT_EQ(c1.node[0], NfElem(1));
  EXPECT_EQ(c1.node[1], NfElem(0));
  EXPECT_EQ(c1.node[2], NfElem(0));
  EXPECT_FALSE(c1.split);
  EXPECT_EQ(c1.splitting_field, "Q(sqrt(2))");
  auto c2 = classify_form(form({0, 2, 1, 0, 0, 0}));
  EXPECT_FALSE(c2.split);
  EXPECT_EQ(c2.splitting_field, "Q(sqrt(-2))");
  // Oracle for the non-squareness: X^2 + 2 has no rational factor.
  EXPECT_TRUE(is_irreducible(QPoly{2, 0, 1}));
  auto c3 = classify_form(form({1, -1, 0, 0, 0, 0}));
  EXPECT_TRUE(c3.split);
  EXPECT_EQ(c3.kind, ConicKind::Split);
  auto c4 = classify_form(form({1, 1, 0, 2, 0, 0}));  // (x + y)^2
  EXPECT_EQ(c4.rank, 1);
  EXPECT_EQ(c4.line[0], NfElem(1));
  EXPECT_EQ(c4.line[1], NfElem(1));
  EXPECT_THROW(classify_form(TernaryQuadraticForm{}), Error);
}

TEST(Classify, OverQuadraticField) {
  // x^2 - 2 y^2 splits over Q(sqrt 2) but not over Q.
  NumberField K(QPoly{-2, 0, 1});
  auto c = classify_form(lift_form(form({1, -2, 0, 0, 0, 0})), K);
  EXPECT_EQ(c.rank, 2);
  EXPECT_TRUE(c.split);
  // x^2 - a y^2 with a the generator: nonsplit since sqrt(a) is not in K.
  TernaryForm<NfElem> Q;
  Q.c = {NfElem(1), -K.gen(), NfElem(0), NfElem(0), NfElem(0), NfElem(0)};
  auto d = classify_form(Q, K);
  EXPECT_FALSE(d.split);
}

TEST(Classify, RankIsCongruenceInvariant) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    TernaryQuadraticForm Q;
    // Mix of ranks: build from up to three squares of linear forms.
    int terms = 1 + trial % 3;
    for (int k = 0; k < terms; ++k) {
      std::array<Rational, 3> l{coef(rng), coef(rng), coef(rng)};
      Rational w = coef(rng);
      TernaryQuadraticForm sq;
      sq.c = {l[0] * l[0], l[1] * l[1], l[2] * l[2], 2 * l[0] * l[1], 2 * l[0] * l[2], 2 * l[1] * l[2]};
      Q = Q + sq.scale(w);
    }
    if (Q.is_zero()) continue;
    Matrix<Rational> T;
    do {
      T = Matrix<Rational>(3, std::vector<Rational>(3));
      for (auto& row : T)
        for (auto& e : row) e = coef(rng);
    } while (sgn(determinant(T)) == 0);
    EXPECT_EQ(classify_form(Q).rank, classify_form(Q.transform(T)).rank);
  }
}

TEST(Classify, ComplementChoiceDoesNotMatter) {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> coef(-4, 4);
  int checked = 0;
  while (checked < 50) {
    // Rank-2 forms l1 * l2 or a l1^2 + b l2^2.
    std::array<Rational, 3> l1{coef(rng), coef(rng), coef(rng)}, l2{coef(rng), coef(rng), coef(rng)};
    Rational a = coef(rng), b = coef(rng);
    TernaryQuadraticForm Q;
    Q.c = {a * l1[0] * l1[0] + b * l2[0] * l2[0], a * l1[1] * l1[1] + b * l2[1] * l2[1],
           a * l1[2] * l1[2] + b * l2[2] * l2[2], 2 * (a * l1[0] * l1[1] + b * l2[0] * l2[1]),
           2 * (a * l1[0] * l1[2] + b * l2[0] * l2[2]), 2 * (a * l1[1] * l1[2] + b * l2[1] * l2[2])};
    if (rank(Q.gram()) != 2) continue;
    auto c = classify_form(Q);
    Rational delta = c.delta.rational_value();
    std::array<Rational, 3> n{c.node[0].rational_value(), c.node[1].rational_value(), c.node[2].rational_value()};
    for (int k = 0; k < 5; ++k) {
      std::array<Rational, 3> u{coef(rng), coef(rng), coef(rng)}, v{coef(rng), coef(rng), coef(rng)};
      Matrix<Rational> B{{n[0], u[0], v[0]}, {n[1], u[1], v[1]}, {n[2], u[2], v[2]}};
      if (sgn(determinant(B)) == 0) continue;
      Rational other = binary_discriminant_on(Q, u, v);
      EXPECT_TRUE(is_rational_square(other / delta));
    }
    ++checked;
  }
}

TEST(Etale, PseudoSplit) {
  auto a = classify_multiquadratic({2, 3, 6});
  EXPECT_FALSE(a.split);
  EXPECT_TRUE(a.pseudo_split);
  auto b = classify_multiquadratic({2, 3});
  EXPECT_FALSE(b.pseudo_split);
  auto c = classify_multiquadratic({2, 8});
  EXPECT_FALSE(c.pseudo_split);
  auto d = classify_multiquadratic({5, 4});
  EXPECT_TRUE(d.split);
  auto e = classify_multiquadratic({-2});
  EXPECT_FALSE(e.pseudo_split);
}

TEST(LocalSolvable, Examples) {
  auto Q = form({1, 1, -1, 0, 0, 0});
  for (long p : {0L, 2L, 3L, 5L, 7L}) EXPECT_TRUE(local_solvable(Q, p == 0 ? Place::real() : Place::prime(p)));
  EXPECT_FALSE(local_solvable(form({1, 1, 1, 0, 0, 0}), Place::real()));
  auto R = form({1, 1, -3, 0, 0, 0});
  EXPECT_FALSE(has_primitive_solution_mod(R, 3, 2));
  EXPECT_FALSE(local_solvable(R, Place::prime(3)));
  EXPECT_THROW(local_solvable(form({1, 1, 0, 0, 0, 0}), Place::real()), Error);
}

TEST(LocalSolvable, AgreesWithSearchModPSquared) {
  // Odd p not dividing 2 det: a primitive solution mod p always exists, so test
  // the interesting primes dividing the coefficients.
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<int> coef(-6, 6);
  for (int trial = 0; trial < 40; ++trial) {
    TernaryQuadraticForm Q = form({coef(rng), coef(rng), coef(rng), 0, 0, 0});
    if (rank(Q.gram()) != 3) continue;
    for (long p : {3L, 5L}) {
      bool expect = has_primitive_solution_mod(Q, p, 2);
      EXPECT_EQ(local_solvable(Q, Place::prime(p)), expect) << to_string(Q) << " at " << p;
    }
  }
}

TEST(FindPoint, Examples) {
  auto r = find_rational_point(form({1, 1, -1, 0, 0, 0}));
  ASSERT_TRUE(r.point);
  EXPECT_EQ(form({1, 1, -1, 0, 0, 0})(r.point->x, r.point->y, r.point->z), 0);
  auto n = find_rational_point(form({1, 1, -3, 0, 0, 0}));
  EXPECT_FALSE(n.point);
  ASSERT_TRUE(n.witness);
  EXPECT_EQ(n.witness->p, 3);
  auto s = find_rational_point(form({2, 3, -5, 0, 0, 0}));
  ASSERT_TRUE(s.point);
  EXPECT_EQ(form({2, 3, -5, 0, 0, 0})(s.point->x, s.point->y, s.point->z), 0);
  EXPECT_THROW(find_rational_point(form({1, -1, 0, 0, 0, 0})), Error);
}

TEST(FindPoint, LargeCoefficients) {
  // 1009 x^2 + 1013 y^2 - 2022 * 4 z^2 has the point [2:...]? Use a planted point instead.
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<long> coef(-5000, 5000);
  for (int trial = 0; trial < 20; ++trial) {
    long x = coef(rng), y = coef(rng), z = coef(rng);
    long a = coef(rng), b = coef(rng);
    // c chosen so that (x, y, z) lies on a x^2 + b y^2 + c z^2 + xy.
    if (z == 0) continue;
    Rational c = Rational(-(a * x * x + b * y * y + x * y)) / Rational(z * z);
    TernaryQuadraticForm Q;
    Q.c = {a, b, c, 1, 0, 0};
    if (rank(Q.gram()) != 3) continue;
    auto r = find_rational_point(Q);
    ASSERT_TRUE(r.point);
    EXPECT_EQ(Q(r.point->x, r.point->y, r.point->z), 0);
  }
}

TEST(FindPoint, BruteForceEquivalence) {
  std::mt19937_64 rng(59);
  int found = 0;
  for (int trial = 0; trial < 300; ++trial) {
    TernaryQuadraticForm Q = random_rank3(rng, 20);
    auto r = find_rational_point(Q);
    bool brute = brute_force_has_point(Q, 60);
    if (brute) {
      ASSERT_TRUE(r.point) << to_string(Q);
    }
    if (r.point) {
      ++found;
      EXPECT_EQ(Q(r.point->x, r.point->y, r.point->z), 0);
    } else {
      EXPECT_FALSE(brute) << to_string(Q);
      ASSERT_TRUE(r.witness);
      EXPECT_FALSE(local_solvable(Q, *r.witness));
    }
  }
  EXPECT_GT(found, 50);
}

TEST(FindPoint, FallbackSearch) {
  PointSearchOptions opt;
  opt.use_descent = false;
  opt.search_bound = 10;
  auto r = find_rational_point(form({1, 1, -1, 0, 0, 0}), opt);
  ASSERT_TRUE(r.point);
  // Least point by (height, lexicographic) among primitive points.
  EXPECT_EQ(*r.point, (ProjPoint2{0, 1, -1}));
  // x^2 + y^2 - 65 z^2: the least point [4:-7:-1] has height 7.
  opt.search_bound = 3;
  EXPECT_THROW(find_rational_point(form({1, 1, -65, 0, 0, 0}), opt), Error);
  opt.search_bound = 7;
  EXPECT_EQ(*find_rational_point(form({1, 1, -65, 0, 0, 0}), opt).point, (ProjPoint2{4, -7, -1}));
}

TEST(Parametrize, Pythagorean) {
  auto Q = form({1, 1, -1, 0, 0, 0});
  auto par = parametrize(Q, ProjPoint2{1, 0, 1});
  // Up to scaling and a change of parameter, (u^2 - v^2, 2uv, u^2 + v^2).
  std::set<ProjPoint2> pts, expect;
  for (int u = -4; u <= 4; ++u)
    for (int v = -4; v <= 4; ++v) {
      if (u == 0 && v == 0) continue;
      pts.insert(par.point(u, v));
      expect.insert(ProjPoint2::from_rationals(u * u - v * v, 2 * u * v, u * u + v * v));
    }
  EXPECT_EQ(substitute(Q, par.forms), BinaryForm::zero(4));
  auto [bu, bv] = par.base_parameter;
  EXPECT_EQ(par.point(bu, bv), (ProjPoint2{1, 0, 1}));
  for (const auto& p : pts) EXPECT_EQ(Q(p.x, p.y, p.z), 0);
  EXPECT_EQ(pts.size(), expect.size());
}

TEST(Parametrize, Properties) {
  std::mt19937_64 rng(61);
  int done = 0;
  while (done < 30) {
    TernaryQuadraticForm Q = random_rank3(rng, 9);
    auto r = find_rational_point(Q);
    if (!r.point) continue;
    auto par = parametrize(Q, *r.point);
    EXPECT_EQ(substitute(Q, par.forms), BinaryForm::zero(4));
    std::set<ProjPoint2> pts;
    int samples = 0;
    for (int u = -7; u <= 7 && samples < 50; ++u)
      for (int v = 1; v <= 7 && samples < 50; ++v) {
        if (gcd(Integer(u), Integer(v)) != 1) continue;
        ProjPoint2 p = par.point(u, v);
        EXPECT_EQ(Q(p.x, p.y, p.z), 0);
        auto back = par.parameter_of(p);
        EXPECT_EQ(par.point(back.first, back.second), p);
        pts.insert(p);
        ++samples;
      }
    EXPECT_EQ(static_cast<int>(pts.size()), samples);
    auto [bu, bv] = par.base_parameter;
    EXPECT_EQ(par.point(bu, bv), *r.point);
    ++done;
  }
  EXPECT_THROW(parametrize(form({1, 1, -1, 0, 0, 0}), ProjPoint2{1, 1, 1}), Error);
}

TEST(Parametrize, NonDiagonalBasePoint) {
  auto Q = form({2, 3, -5, 0, 0, 0});
  auto par = parametrize(Q, ProjPoint2{1, 1, 1});
  EXPECT_EQ(substitute(Q, par.forms), BinaryForm::zero(4));
}

TEST(Intersect, TwoParabolas) {
  auto Z = intersect_conics(form({1, 0, 0, 0, 0, -1}), form({0, 1, 0, 0, -1, 0}));
  EXPECT_EQ(total_degree(Z), 4);
  // Oracle: in the chart z = 1, y = x^2 and x = y^2 give x^4 - x = 0; no points at z = 0.
  auto fac = factor_unipoly(QPoly{0, -1, 0, 0, 1});
  std::multiset<int> expect_deg, got_deg;
  for (const auto& [g, e] : fac.factors) expect_deg.insert(g.degree());
  std::set<ProjPoint2> rational;
  for (const auto& p : Z) {
    got_deg.insert(p.degree());
    EXPECT_EQ(p.multiplicity, 1);
    if (p.degree() == 1)
      rational.insert(ProjPoint2::from_rationals(p.coords[0].rational_value(), p.coords[1].rational_value(),
                                                 p.coords[2].rational_value()));
    else
      EXPECT_EQ(minimal_polynomial(p.field, p.coords[0] / p.coords[2]), (QPoly{1, 1, 1}));
  }
  EXPECT_EQ(expect_deg, got_deg);
  std::set<ProjPoint2> want{{0, 0, 1}, {1, 1, 1}};
  EXPECT_EQ(rational, want);
}

TEST(Intersect, ConjugatePairWithMultiplicityTwo) {
  auto Z = intersect_conics(form({1, 1, -1, 0, 0, 0}), form({1, 1, -4, 0, 0, 0}));
  EXPECT_EQ(total_degree(Z), 4);
  // Oracle: subtracting gives 3 z^2 = 0, then x^2 + y^2 = 0 at z = 0.
  ASSERT_EQ(Z.size(), 1u);
  EXPECT_EQ(Z[0].degree(), 2);
  EXPECT_EQ(Z[0].multiplicity, 2);
  EXPECT_TRUE(Z[0].coords[2].is_zero());
  NfElem r = Z[0].coords[1] / Z[0].coords[0];
  EXPECT_EQ(r * r, NfElem(-1));
}

TEST(Intersect, CommonComponent) {
  auto Q = form({1, 1, -1, 0, 0, 0});
  try {
    intersect_conics(Q, Q);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CommonComponent);
  }
  // Sharing a line: x y and x z.
  EXPECT_THROW(intersect_conics(form({0, 0, 0, 1, 0, 0}), form({0, 0, 0, 0, 1, 0})), Error);
}

TEST(Intersect, TangentConics) {
  // y z = x^2 and y z = x^2 + y^2 meet only at [0:0:1] with multiplicity 4.
  auto Z = intersect_conics(form({1, 0, 0, 0, 0, -1}), form({1, 1, 0, 0, 0, -1}));
  ASSERT_EQ(Z.size(), 1u);
  EXPECT_EQ(Z[0].multiplicity, 4);
  EXPECT_EQ(Z[0].coords[2], NfElem(1));
}

TEST(Intersect, RandomPairsHaveDegreeFour) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    TernaryQuadraticForm A = random_rank3(rng, 5), B = random_rank3(rng, 5);
    ZeroCycle Z;
    try {
      Z = intersect_conics(A, B);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::CommonComponent);
      continue;
    }
    EXPECT_EQ(total_degree(Z), 4);
    for (const auto& p : Z) {
      EXPECT_TRUE(lift_form(A).eval(p.coords).is_zero());
      EXPECT_TRUE(lift_form(B).eval(p.coords).is_zero());
    }
  }
}
