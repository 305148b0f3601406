#include <gtest/gtest.h>

#include <random>
#include <set>

#include "biconic/surface.hpp"
#include "test_util.hpp"

using namespace biconic;

namespace biconic {
inline void PrintTo(const SurfacePoint& p, std::ostream* os) { *os << p.to_string(); }
inline void PrintTo(const BaseParam& p, std::ostream* os) { *os << p.to_string(); }
}  // namespace biconic

namespace {

TernaryQuadraticForm form(std::array<long, 6> c) {
  TernaryQuadraticForm Q;
  for (size_t i = 0; i < 6; ++i) Q.c[i] = c[i];
  return Q;
}

BiConicSurface paper_dp2() {
  return build_surface(form({1, 2, 0, 0, 0, 0}), form({0, -2, 1, 0, 0, 0}), form({0, 2, 1, 0, 0, 0}), "paper-dp2");
}

SurfacePoint pt(long x, long y, long z, long w) { return {Integer(x), Integer(y), Integer(z), Integer(w)}; }

BiConicSurface random_surface(std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> c(-bound, bound);
  for (;;) {
    std::array<TernaryQuadraticForm, 3> f;
    for (auto& Q : f)
      for (auto& v : Q.c) v = c(rng);
    try {
      return build_surface(f[0], f[1], f[2]);
    } catch (const Error&) {
    }
  }
}

// Discriminant of a binary quartic through the resultant of its partials.
Rational quartic_discriminant_oracle(const BinaryForm& F) {
  return resultant_binary(F.ds(), F.dt());
}

bool proportional(const BinaryForm& a, const BinaryForm& b) {
  if (a.degree() != b.degree()) return false;
  for (int i = 0; i <= a.degree(); ++i)
    for (int j = 0; j <= a.degree(); ++j)
      if (a.coeff(i) * b.coeff(j) != a.coeff(j) * b.coeff(i)) return false;
  return !a.is_zero() && !b.is_zero();
}

}  // namespace

TEST(Surface, PointNormalization) {
  SurfacePoint P = SurfacePoint::from_rationals(Rational(2), Rational(0), Rational(0), Rational(4));
  EXPECT_EQ(P, pt(1, 0, 0, 1));
  // Weight two: 2 | x, y, z but 4 does not divide w keeps the point primitive.
  EXPECT_EQ(SurfacePoint::from_rationals(2, 0, 0, 2), pt(2, 0, 0, 2));
  EXPECT_EQ(SurfacePoint::from_rationals(-1, 1, 0, 3), pt(1, -1, 0, 3));
  EXPECT_EQ(SurfacePoint::from_rationals(Rational(1, 2), 0, 0, Rational(1, 3)), pt(3, 0, 0, 12));
  EXPECT_EQ(pt(1, -7, 2, 3).height(), 7);
}

TEST(Surface, BuildAndDiscriminant) {
  BiConicSurface S = paper_dp2();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(-9, 9);
  for (int k = 0; k < 50; ++k) {
    Rational x = c(rng), y = c(rng), z = c(rng);
    EXPECT_EQ(S.f4_at(x, y, z), x * x * x * x + 4 * x * x * y * y + z * z * z * z);
  }
  // The pencil is diagonal with entries 2st, -2(s-t)^2, (s-t)(s+t).
  for (int s = -4; s <= 4; ++s)
    for (int t = -4; t <= 4; ++t) {
      Rational oracle = Rational(-4 * s * t) * (s - t) * (s - t) * (s - t) * (s + t);
      EXPECT_EQ(discriminant_sextic(S).eval(s, t), oracle);
    }
}

TEST(Surface, DegenerateData) {
  auto expect_kind = [](auto f, ErrorKind k) {
    try {
      f();
      ADD_FAILURE() << "no error";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), k) << e.what();
    }
  };
  expect_kind([] { build_surface(form({0, 0, 0, 0, 0, 0}), form({1, 0, 0, 0, 0, 0}), form({0, 1, 0, 0, 0, 0})); },
              ErrorKind::DegenerateData);
  expect_kind([] { build_surface(form({1, 0, 0, 0, 0, 0}), form({0, 0, 0, 0, 0, 0}), form({0, 1, 0, 0, 0, 0})); },
              ErrorKind::DegenerateData);
  // q = 0, r1 = -r2 = x^2 gives f4 = -x^4 with a rank-one pencil.
  expect_kind([] { build_surface(form({0, 0, 0, 0, 0, 0}), form({1, 0, 0, 0, 0, 0}), form({-1, 0, 0, 0, 0, 0})); },
              ErrorKind::DegenerateData);
}

TEST(Surface, EvalFibration) {
  BiConicSurface S = paper_dp2();
  EXPECT_EQ(eval_fibration(S, 1, pt(0, 1, 1, -1)), (BaseParam{3, 1}));
  EXPECT_EQ(eval_fibration(S, 1, pt(1, 0, 0, 1)), (BaseParam{0, 1}));
  EXPECT_EQ(eval_fibration(S, 2, pt(1, 0, 0, 1)), (BaseParam{1, 0}));
  EXPECT_EQ(eval_fibration(S, 1, pt(1, 0, 0, -1)), (BaseParam{1, 0}));
  EXPECT_EQ(eval_fibration(S, 2, pt(1, 0, 0, -1)), (BaseParam{0, 1}));
  // X is singular at [0:1:0:0] but pi1 is still defined there.
  EXPECT_EQ(eval_fibration(S, 1, pt(0, 1, 0, 0)), (BaseParam{1, 1}));
  // q = r1 = r2 = 0 at [0:0:1], so all four forms vanish at [0:0:1:0].
  BiConicSurface T = build_surface(form({0, 0, 0, 0, 1, 0}), form({1, 0, 0, 0, 0, 0}), form({0, 1, 0, 0, 1, 0}));
  try {
    eval_fibration(T, 1, pt(0, 0, 1, 0));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IndeterminatePoint);
  }
  try {
    eval_fibration(S, 1, pt(1, 1, 1, 1));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PointNotOnSurface);
  }
}

TEST(Surface, FiberPointsMapBackToTheirParameter) {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int trial = 0; trial < 12; ++trial) {
    BiConicSurface S = trial == 0 ? paper_dp2() : random_surface(rng, 3);
    std::uniform_int_distribution<int> c(-6, 6);
    for (int k = 0; k < 6; ++k) {
      int s = c(rng), t = c(rng);
      if (s == 0 && t == 0) continue;
      for (int i = 1; i <= 2; ++i) {
        Fiber F = fiber_at(S, i, BaseParam::make(s, t));
        if (!F.smooth()) continue;
        auto r = find_rational_point(F.D);
        if (!r.point) continue;
        auto par = parametrize(F.D, *r.point);
        for (int u = -2; u <= 2; ++u) {
          ProjPoint2 n = par.point(u, 1);
          SurfacePoint P = lift_to_surface(S, F, n);
          ASSERT_TRUE(S.contains(P)) << P.to_string();
          try {
            EXPECT_EQ(eval_fibration(S, i, P), F.param);
            ++checked;
          } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::IndeterminatePoint);
          }
        }
      }
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(Surface, SingularFiberTableOfPaperSurface) {
  BiConicSurface S = paper_dp2();
  auto table = singular_fiber_table(S, 1);
  ASSERT_EQ(table.size(), 4u);
  std::map<BaseParam, SingularFiberReport> by;
  for (const auto& r : table) {
    ASSERT_TRUE(r.field.is_rationals());
    by[BaseParam::make(r.param[0].rational_value(), r.param[1].rational_value())] = r;
  }
  const auto& a = by.at({0, 1});
  EXPECT_EQ(a.rank, 2);
  EXPECT_EQ(a.node_lift.rational(), pt(1, 0, 0, 1));
  EXPECT_EQ(a.splitting_field, "Q(sqrt(-2))");
  EXPECT_EQ(a.classification, FiberClass::Nonsplit);
  const auto& b = by.at({1, 0});
  EXPECT_EQ(b.node_lift.rational(), pt(1, 0, 0, -1));
  EXPECT_EQ(b.splitting_field, "Q(sqrt(2))");
  const auto& c = by.at({1, -1});
  EXPECT_EQ(c.node_lift.rational(), pt(0, 0, 1, -1));
  EXPECT_EQ(c.splitting_field, "Q(sqrt(-1))");
  const auto& d = by.at({1, 1});
  EXPECT_EQ(d.rank, 1);
  EXPECT_EQ(d.multiplicity, 3);
  EXPECT_EQ(d.classification, FiberClass::Rank1Degenerate);

  auto table2 = singular_fiber_table(S, 2);
  std::set<SurfacePoint> lifts1, lifts2;
  for (const auto& r : table)
    if (r.rank == 2) lifts1.insert(r.node_lift.rational().involution());
  for (const auto& r : table2)
    if (r.rank == 2) lifts2.insert(r.node_lift.rational());
  EXPECT_EQ(lifts1, lifts2);
}

TEST(Surface, SignDualityAndBadLoci) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    BiConicSurface S = trial == 0 ? paper_dp2() : random_surface(rng, 2);
    auto t1 = singular_fiber_table(S, 1), t2 = singular_fiber_table(S, 2);
    ASSERT_EQ(t1.size(), t2.size());
    for (size_t k = 0; k < t1.size(); ++k) {
      if (t1[k].rank != 2) continue;
      const auto& a = t1[k].node_lift.coords;
      const auto& b = t2[k].node_lift.coords;
      for (size_t i = 0; i < 3; ++i) EXPECT_EQ(a[i], b[i]);
      EXPECT_EQ(a[3], -b[3]);
      // Every node lift lies in the bad locus it came from.
      EXPECT_TRUE(in_bad_locus(S, 1, t1[k].node_lift));
      EXPECT_TRUE(in_bad_locus(S, 2, t2[k].node_lift));
      // A node lift with w = 0 is fixed by the involution and lies in both.
      if (a[3].is_zero()) {
        EXPECT_TRUE(in_bad_locus(S, 2, t1[k].node_lift));
      }
    }
  }
}

TEST(Surface, HypothesesOfPaperSurface) {
  BiConicSurface S = paper_dp2();
  HypothesisReport h = check_hypotheses(S);
  EXPECT_TRUE(h.condition_a);
  EXPECT_EQ(h.intersection_number, 4);
  EXPECT_FALSE(h.condition_b);
  std::set<SurfacePoint> viol;
  for (const auto& v : h.violating) {
    viol.insert(v.point.rational());
    EXPECT_EQ(v.eckardt, 4);
  }
  EXPECT_EQ(viol, (std::set<SurfacePoint>{pt(1, 0, 0, 1), pt(1, 0, 0, -1)}));
  ASSERT_EQ(h.certificates.size(), 2u);
  EXPECT_EQ(h.bad1.warnings.size(), 1u);
  auto c = obstruction_certificate(S, pt(1, 0, 0, 1));
  ASSERT_TRUE(c.certificate);
  EXPECT_EQ(c.certificate->t1, (BaseParam{0, 1}));
  EXPECT_EQ(c.certificate->t2, (BaseParam{1, 0}));
  EXPECT_EQ(c.certificate->L1, "Q(sqrt(-2))");
  EXPECT_EQ(c.certificate->L2, "Q(sqrt(2))");
  EXPECT_EQ(c.certificate->verdict, "f'_n not arithmetically surjective for all n ≥ 3");
  auto none = obstruction_certificate(S, pt(0, 1, 1, -1));
  EXPECT_FALSE(none.certificate);
  EXPECT_NE(none.failed_condition.find("condition (1)"), std::string::npos);
  auto sing = obstruction_certificate(S, pt(0, 1, 0, 0));
  EXPECT_FALSE(sing.certificate);
}

TEST(Surface, BadIntersectionMembersAreNodesTwiceOrOnTheBranchCurve) {
  // A point of Bad(pi1) also lies in Bad(pi2) exactly when it is fixed by the
  // involution (w = 0) or its node is the node of a second singular member.
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    BiConicSurface S = trial == 0 ? paper_dp2() : random_surface(rng, 2);
    auto t1 = singular_fiber_table(S, 1);
    for (size_t k = 0; k < t1.size(); ++k) {
      if (t1[k].rank != 2 || !t1[k].field.is_rationals()) continue;
      const auto& P = t1[k].node_lift;
      int nodes = 0;
      for (const auto& r : t1)
        if (r.rank == 2 && r.field.is_rationals()) {
          bool same = true;
          for (size_t i = 0; i < 3; ++i) same = same && r.node[i] == P.coords[i];
          nodes += same;
        }
      bool expected = P.coords[3].is_zero() || nodes >= 2;
      EXPECT_EQ(in_bad_locus(S, 2, P), expected) << P.to_string();
    }
  }
}

TEST(Surface, FibersOfDifferentFibrationsMeetInFourPoints) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 6; ++trial) {
    BiConicSurface S = trial == 0 ? paper_dp2() : random_surface(rng, 3);
    HypothesisOptions opt;
    opt.seed = static_cast<std::uint64_t>(trial);
    HypothesisReport h = check_hypotheses(S, opt);
    for (const auto& smp : h.samples) EXPECT_EQ(smp.count, 4) << smp.u1.to_string() << " " << smp.u2.to_string();
  }
}

TEST(Surface, CheckSmooth) {
  SmoothnessReport g = check_smooth(paper_dp2());
  EXPECT_FALSE(g.smooth);
  ASSERT_EQ(g.points.size(), 1u);
  EXPECT_EQ(g.points[0].surface_string(), "[0:1:0:0]");

  // x^4 + y^4 - z^4.
  BiConicSurface F = build_surface(form({1, 0, 0, 0, 0, 0}), form({0, 1, -1, 0, 0, 0}), form({0, 1, 1, 0, 0, 0}));
  EXPECT_TRUE(check_smooth(F).smooth);

  // f4 = (x^2 + z^2)^2 with q = y^2 + xz.
  BiConicSurface N =
      build_surface(form({0, 1, 0, 0, 1, 0}), form({1, -1, 1, 0, -1, 0}), form({1, 1, 1, 0, 1, 0}));
  SmoothnessReport n = check_smooth(N);
  EXPECT_FALSE(n.smooth);
  EXPECT_FALSE(n.reduced);
  ASSERT_FALSE(n.points.empty());
  // The double conic x^2 + z^2 = 0 has the rational point [0:1:0].
  EXPECT_EQ(n.points[0].to_string(), "[0:1:0]");
}

TEST(Surface, SingularPointsHaveVanishingGradient) {
  std::mt19937_64 rng(29);
  int singular = 0;
  for (int trial = 0; trial < 30; ++trial) {
    BiConicSurface S = random_surface(rng, 1);
    SmoothnessReport r = check_smooth(S);
    EXPECT_EQ(r.smooth, r.points.empty());
    for (const auto& P : r.points) {
      ++singular;
      const NumberField& K = P.field;
      for (int v = 0; v < 3; ++v) {
        MPoly<3> d = S.f4().derivative(v);
        EXPECT_TRUE(K.elem(d.eval<NfElem>(P.plane).residue()).is_zero());
      }
    }
  }
  EXPECT_GT(singular, 0);
}

TEST(Surface, RamificationOfAFiber) {
  BiConicSurface S = paper_dp2();
  Fiber F = fiber_at(S, 1, {3, 1});
  ASSERT_TRUE(F.smooth());
  RamificationReport r = ramification_of_restriction(S, F, pt(0, 1, 1, -1));
  EXPECT_EQ(r.map_degree(), 4);
  EXPECT_EQ(r.wronskian.degree(), 6);
  EXPECT_EQ(r.branch.degree(), 6);
  // Branch points are the targets [a:b] where bA - aB acquires a double root.
  BinaryForm oracle = BinaryForm::interpolate(6, [&](const Rational& a, const Rational& b) -> Rational {
    return quartic_discriminant_oracle(r.A.scale(b) - r.B.scale(a));
  });
  EXPECT_TRUE(proportional(r.branch, oracle));
  // The map really is pi2 along the fiber.
  for (int u = -3; u <= 3; ++u) {
    ProjPoint2 n = r.parametrization.point(u, 1);
    SurfacePoint P = lift_to_surface(S, F, n);
    BaseParam b;
    try {
      b = eval_fibration(S, 2, P);
    } catch (const Error&) {
      continue;
    }
    EXPECT_EQ(BaseParam::make(r.A.eval(u, 1), r.B.eval(u, 1)), b);
  }
}

TEST(Surface, RamificationOnRandomSurfaces) {
  std::mt19937_64 rng(31);
  int done = 0;
  for (int trial = 0; trial < 20 && done < 6; ++trial) {
    BiConicSurface S = random_surface(rng, 3);
    if (!check_smooth(S).smooth) continue;
    for (int s = 1; s <= 8 && done < 6; ++s) {
      Fiber F = fiber_at(S, 2, {s, 1});
      if (!F.smooth()) continue;
      try {
        RamificationReport r = ramification_of_restriction(S, F);
        EXPECT_EQ(r.map_degree(), 4);
        EXPECT_EQ(r.wronskian.degree(), 6);
        BinaryForm oracle = BinaryForm::interpolate(6, [&](const Rational& a, const Rational& b) -> Rational {
          return quartic_discriminant_oracle(r.A.scale(b) - r.B.scale(a));
        });
        EXPECT_TRUE(proportional(r.branch, oracle));
        ++done;
      } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoRationalPoint);
      }
    }
  }
  EXPECT_GE(done, 3);
}

namespace {

// Smooth pi1 fibers through small rational points, one point per fiber.
std::vector<std::pair<Fiber, SurfacePoint>> small_smooth_fibers(const BiConicSurface& S, int bound) {
  std::vector<std::pair<Fiber, SurfacePoint>> out;
  std::set<BaseParam> seen;
  for (int x = -bound; x <= bound; ++x)
    for (int y = -bound; y <= bound; ++y)
      for (int z = 0; z <= bound; ++z) {
        if (x == 0 && y == 0 && z == 0) continue;
        Rational f = S.f4_at(x, y, z);
        if (sgn(f) < 0 || !is_rational_square(f)) continue;
        SurfacePoint P = SurfacePoint::from_rationals(x, y, z, *rational_sqrt(f));
        try {
          BaseParam u = eval_fibration(S, 1, P);
          Fiber F = fiber_at(S, 1, u);
          if (F.smooth() && seen.insert(u).second) out.emplace_back(F, P);
        } catch (const Error&) {
        }
      }
  return out;
}

}  // namespace

TEST(SmoothFixture, SmoothWithSquarefreeSextic) {
  BiConicSurface S = testutil::smooth_fixture_1();
  EXPECT_TRUE(check_smooth(S).smooth);
  BinaryForm d = discriminant_sextic(S);
  ASSERT_EQ(d.degree(), 6);
  auto fac = factor_binary(d);
  int geometric = 0;
  for (const auto& [g, e] : fac.factors) {
    EXPECT_EQ(e, 1);
    geometric += g.degree();
  }
  EXPECT_EQ(geometric, 6);
  for (int i = 1; i <= 2; ++i) {
    int total = 0;
    for (const auto& r : singular_fiber_table(S, i)) {
      EXPECT_EQ(r.rank, 2);
      total += r.factor.degree();
    }
    EXPECT_EQ(total, 6);
  }
}

TEST(SmoothFixture, Hypotheses) {
  BiConicSurface S = testutil::smooth_fixture_1();
  HypothesisReport h = check_hypotheses(S);
  EXPECT_TRUE(h.condition_a);
  EXPECT_EQ(h.intersection_number, 4);
  for (const auto& smp : h.samples) EXPECT_EQ(smp.count, 4);
  EXPECT_TRUE(h.condition_b);
  EXPECT_TRUE(h.violating.empty());
  EXPECT_TRUE(h.certificates.empty());
  auto c = obstruction_certificate(S, pt(0, 1, 0, -1));
  EXPECT_FALSE(c.certificate);
  EXPECT_NE(c.failed_condition.find("condition (1)"), std::string::npos);
}

TEST(SmoothFixture, BranchLociOfPi1Fibers) {
  BiConicSurface S = testutil::smooth_fixture_1();
  auto fibers = small_smooth_fibers(S, 6);
  ASSERT_GE(fibers.size(), 6u);
  std::vector<BinaryForm> branch;
  for (size_t k = 0; k < 5; ++k) {
    RamificationReport r = ramification_of_restriction(S, fibers[k].first, fibers[k].second);
    EXPECT_EQ(r.map_degree(), 4);
    EXPECT_EQ(r.branch.degree(), 6);
    branch.push_back(r.branch);
  }
  int coprime = 0;
  for (size_t k = 0; k < 5; ++k)
    if (resultant_binary(branch[k], branch[(k + 1) % 5]) != 0) ++coprime;
  EXPECT_GE(coprime, 4);
}
