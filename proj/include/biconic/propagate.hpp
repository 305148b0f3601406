#pragma once

// Alternating propagation of rational points along the two conic fibrations.
// A node at depth n was reached from its parent by moving inside a fiber of
// pi1 (n odd) or pi2 (n even), so a root-to-node path is a rational point of
// the iterated fiber product.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "biconic/localpoints.hpp"
#include "biconic/surface.hpp"

namespace biconic {

inline int parity_fibration(int depth) { return depth % 2 == 1 ? 1 : 2; }

struct PropNode {
  SurfacePoint point;
  int depth = 0;
  std::optional<size_t> parent;          // index in the owning node list
  std::optional<ProjPoint2> direction;   // the child is the second point of the conic on the line parent-direction
  std::optional<BaseParam> fiber;        // fiber parameter shared with the parent
  int next_fibration() const { return parity_fibration(depth + 1); }
  Integer height() const { return point.height(); }
};

struct PropConfig {
  int depth = 5;
  int branch = 4;
  long height = 20;          // parameter height bound
  std::uint64_t seed = 1;
  int retries = 20;
  unsigned long max_height_bits = 0;  // drop children above this size; 0 keeps all

  void validate() const {
    require(depth >= 0, ErrorKind::InvalidArgument, "depth must be >= 0");
    require(branch >= 1, ErrorKind::InvalidArgument, "branch must be >= 1");
    require(height >= 1, ErrorKind::InvalidArgument, "height must be >= 1");
    require(retries >= 1, ErrorKind::InvalidArgument, "retries must be >= 1");
  }
};

inline std::uint64_t hash_point(const SurfacePoint& P) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto* c : {&P.x, &P.y, &P.z, &P.w}) h = hash_integer(h, *c);
  return h;
}

/// Primitive [a:b] with max(|a|, |b|) <= H, ordered by height then lexicographically.
inline std::vector<std::pair<Integer, Integer>> parameter_spiral(long H) {
  std::vector<std::pair<long, long>> raw;
  for (long b = 0; b <= H; ++b)
    for (long a = -H; a <= H; ++a) {
      if (b == 0 && a != 1) continue;
      if (std::gcd(a, b) != 1) continue;
      raw.emplace_back(a, b);
    }
  std::sort(raw.begin(), raw.end(), [](const auto& u, const auto& v) {
    long hu = std::max(std::abs(u.first), u.second), hv = std::max(std::abs(v.first), v.second);
    return std::tie(hu, u) < std::tie(hv, v);
  });
  std::vector<std::pair<Integer, Integer>> out;
  for (const auto& [a, b] : raw) out.emplace_back(a, b);
  return out;
}

namespace detail {

/// Q(V) P - 2 B(P, V) V: the second point of Q on the line through P and V.
inline ProjPoint2 second_intersection(const TernaryQuadraticForm& Q, const std::array<Rational, 3>& P,
                                      const std::array<Rational, 3>& V) {
  Rational a = Q.eval(V), b = 2 * Q.bilinear(P, V);
  return ProjPoint2::from_rationals(a * P[0] - b * V[0], a * P[1] - b * V[1], a * P[2] - b * V[2]);
}

inline Fiber smooth_fiber_through(const BiConicSurface& S, int i, const SurfacePoint& P) {
  BaseParam u;
  try {
    u = eval_fibration(S, i, P);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::IndeterminatePoint) throw;
    fail(ErrorKind::SingularFiberAtNode, P.to_string() + " is a singular point of the surface");
  }
  Fiber F = fiber_at(S, i, u);
  if (F.rank == 1)
    fail(ErrorKind::ForbiddenParameter, "pi" + std::to_string(i) + " fiber over " + u.to_string() + " has rank 1");
  if (F.rank == 2)
    fail(ErrorKind::SingularFiberAtNode,
         P.to_string() + " lies on the singular pi" + std::to_string(i) + " fiber over " + u.to_string());
  return F;
}

}  // namespace detail

/// Children of a node along the fiber of its next fibration. Each parameter
/// (a, b) names the direction a E1 + b E2 of the conic parametrization
/// anchored at the node.
inline std::vector<PropNode> expand_node(const BiConicSurface& S, const PropNode& node,
                                         const std::vector<std::pair<Integer, Integer>>& params) {
  int i = node.next_fibration();
  Fiber F = detail::smooth_fiber_through(S, i, node.point);
  ConicParametrization par = parametrize(F.D, node.point.plane_point());
  std::vector<PropNode> out;
  for (const auto& [a, b] : params) {
    std::array<Rational, 3> V{0, 0, 0};
    V[par.basis[0]] = a;
    V[par.basis[1]] = b;
    PropNode c;
    c.point = lift_to_surface(S, F, par.point(a, b));
    c.depth = node.depth + 1;
    c.direction = ProjPoint2::from_array(V);
    c.fiber = F.param;
    out.push_back(c);
  }
  return out;
}

struct DepthStats {
  int depth = 0;
  size_t points = 0;      // new points first seen at this depth
  size_t dead_ends = 0;   // nodes of the previous depth on singular fibers
  size_t pi1_params = 0;  // distinct pi1 parameters among this depth's points
  size_t pi2_params = 0;
};

struct Generation {
  std::vector<PropNode> nodes;  // root first, then by depth
  std::vector<DepthStats> stats;
  std::vector<std::string> dead_ends;
};

inline void require_seed(const BiConicSurface& S, const SurfacePoint& P0) {
  require(S.contains(P0), ErrorKind::PointNotOnSurface, P0.to_string() + " is not on the surface");
  try {
    detail::smooth_fiber_through(S, 1, P0);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularFiberAtNode && e.kind() != ErrorKind::ForbiddenParameter) throw;
    fail(ErrorKind::SeedOnSingularFiber, "seed " + P0.to_string() + " is not on a smooth pi1 fiber");
  }
}

inline Generation generate_points(const BiConicSurface& S, const SurfacePoint& P0, const PropConfig& cfg) {
  cfg.validate();
  require_seed(S, P0);
  auto spiral = parameter_spiral(cfg.height);
  Generation out;
  out.nodes.push_back(PropNode{P0, 0, std::nullopt, std::nullopt, std::nullopt});
  std::map<SurfacePoint, size_t> seen{{P0, 0}};
  std::vector<size_t> frontier{0};
  auto count_params = [&](DepthStats& st, const std::vector<size_t>& idx) {
    std::set<BaseParam> a, b;
    for (size_t k : idx) {
      try {
        a.insert(eval_fibration(S, 1, out.nodes[k].point));
        b.insert(eval_fibration(S, 2, out.nodes[k].point));
      } catch (const Error&) {
      }
    }
    st.pi1_params = a.size();
    st.pi2_params = b.size();
  };
  {
    DepthStats st;
    st.points = 1;
    count_params(st, frontier);
    out.stats.push_back(st);
  }
  for (int d = 1; d <= cfg.depth; ++d) {
    DepthStats st;
    st.depth = d;
    std::vector<PropNode> fresh;
    for (size_t k : frontier) {
      const PropNode& node = out.nodes[k];
      std::mt19937_64 rng(hash_combine(hash_combine(cfg.seed, hash_point(node.point)), static_cast<std::uint64_t>(d)));
      std::vector<size_t> pick(spiral.size());
      for (size_t j = 0; j < pick.size(); ++j) pick[j] = j;
      std::shuffle(pick.begin(), pick.end(), rng);
      pick.resize(std::min(pick.size(), static_cast<size_t>(cfg.branch)));
      std::sort(pick.begin(), pick.end());
      std::vector<std::pair<Integer, Integer>> params;
      for (size_t j : pick) params.push_back(spiral[j]);
      std::vector<PropNode> children;
      try {
        children = expand_node(S, node, params);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularFiberAtNode && e.kind() != ErrorKind::ForbiddenParameter) throw;
        ++st.dead_ends;
        out.dead_ends.push_back("depth " + std::to_string(node.depth) + " " + node.point.to_string() + ": " + e.what());
        continue;
      }
      for (auto& c : children) {
        if (cfg.max_height_bits && mpz_sizeinbase(c.point.height().get_mpz_t(), 2) > cfg.max_height_bits) continue;
        c.parent = k;
        fresh.push_back(c);
      }
    }
    // Canonical order before dedup, so the least (height, point) representative wins.
    std::stable_sort(fresh.begin(), fresh.end(), [](const PropNode& a, const PropNode& b) {
      Integer ha = a.height(), hb = b.height();
      return std::tie(ha, a.point) < std::tie(hb, b.point);
    });
    frontier.clear();
    for (auto& c : fresh) {
      if (seen.count(c.point)) continue;
      seen.emplace(c.point, out.nodes.size());
      frontier.push_back(out.nodes.size());
      out.nodes.push_back(c);
    }
    st.points = frontier.size();
    count_params(st, frontier);
    out.stats.push_back(st);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Steering towards a residue class

struct SteerResult {
  bool success = false;
  std::vector<PropNode> path;  // P0, ..., Pd on success
  int attempts = 0;
  std::string failure;         // last failing phase
  std::vector<std::string> transcript;
};

namespace detail {

using ModPoint = std::array<Integer, 4>;
using Plane = std::array<Integer, 3>;

struct ModContext {
  const BiConicSurface& S;
  Integer p;
  Integer M;
  SurfaceMod Sm;
  ModContext(const BiConicSurface& s, const Integer& prime, int N)
      : S(s), p(prime), M(pow_int(prime, static_cast<unsigned long>(N))), Sm(s, M) {}

  bool unit(const Integer& a) const { return mod(a, p) != 0; }
  Integer inv(const Integer& a) const { return *inv_mod(a, M); }
  Integer red(const Integer& a) const { return mod(a, M); }
};

inline std::optional<Plane> normalize_plane(const ModContext& C, const Plane& v) {
  for (size_t i = 0; i < 3; ++i) {
    if (!C.unit(v[i])) continue;
    Integer l = C.inv(v[i]);
    return Plane{C.red(v[0] * l), C.red(v[1] * l), C.red(v[2] * l)};
  }
  return std::nullopt;
}

inline bool same_mod_p(const ModContext& C, const Plane& a, const Plane& b) {
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = i + 1; j < 3; ++j)
      if (C.unit(a[i] * b[j] - a[j] * b[i])) return false;
  return true;
}

/// Fiber parameter of a point mod M from whichever fibration pair has a
/// unit coordinate. For either pair D(s, t) is a multiple of w^2 - f4, so the
/// plane point lies on the pencil member to full precision.
inline std::optional<std::array<Integer, 2>> fiber_param_mod(const ModContext& C, int i, const ModPoint& T) {
  Plane n{T[0], T[1], T[2]};
  Integer q = eval_mod(C.Sm.q, n, C.M), r1 = eval_mod(C.Sm.r1, n, C.M), r2 = eval_mod(C.Sm.r2, n, C.M);
  std::array<std::array<Integer, 2>, 2> pairs;
  if (i == 1) pairs = {{{T[3] - q, r1}, {r2, T[3] + q}}};
  else pairs = {{{-(T[3] + q), r1}, {-r2, T[3] - q}}};
  for (const auto& [s, t] : pairs) {
    if (C.unit(t)) return std::array<Integer, 2>{C.red(s * C.inv(t)), 1};
    if (C.unit(s)) return std::array<Integer, 2>{1, C.red(t * C.inv(s))};
  }
  return std::nullopt;
}

inline std::optional<Integer> sheet_w_mod(const ModContext& C, int i, const std::array<Integer, 2>& st, const Plane& n) {
  int e = fibration_sign(i);
  Integer q = eval_mod(C.Sm.q, n, C.M), r1 = eval_mod(C.Sm.r1, n, C.M), r2 = eval_mod(C.Sm.r2, n, C.M);
  if (C.unit(st[1])) return C.red(e * (q + st[0] * C.inv(st[1]) * r1));
  if (C.unit(st[0])) return C.red(e * (st[1] * r2 - st[0] * q) * C.inv(st[0]));
  return std::nullopt;
}

/// 2 B(u, v) for a form given by its six coefficients.
inline Integer polar2(const ModForm& c, const Plane& u, const Plane& v) {
  return 2 * c[0] * u[0] * v[0] + 2 * c[1] * u[1] * v[1] + 2 * c[2] * u[2] * v[2] + c[3] * (u[0] * v[1] + u[1] * v[0]) +
         c[4] * (u[0] * v[2] + u[2] * v[0]) + c[5] * (u[1] * v[2] + u[2] * v[1]);
}

/// Newton lift of an approximate point of the conic D to full precision. The
/// chart coordinate stays 1 and one other coordinate with a unit partial moves.
inline std::optional<Plane> lift_on_conic(const ModContext& C, const ModForm& D, const Plane& approx) {
  auto n = normalize_plane(C, approx);
  if (!n) return std::nullopt;
  Plane v = *n;
  size_t k = 0;
  while (!C.unit(v[k])) ++k;
  auto g = grad_mod(D, v, C.M);
  size_t j = 3;
  for (size_t i = 0; i < 3 && j == 3; ++i)
    if (i != k && C.unit(g[i])) j = i;
  if (j == 3) return std::nullopt;
  for (int it = 0; it < 64; ++it) {
    Integer f = eval_mod(D, v, C.M);
    if (f == 0) return v;
    Integer d = grad_mod(D, v, C.M)[j];
    if (!C.unit(d)) return std::nullopt;
    v[j] = C.red(v[j] - f * C.inv(d));
  }
  return std::nullopt;
}

/// A random point of the fiber of pi_i through T, away from T mod p. Lines
/// through T sweep the conic; when T is singular on it mod p, a random smooth
/// residue point of the conic is lifted instead.
inline std::optional<ModPoint> random_fiber_point(const ModContext& C, int i, const ModPoint& T, std::mt19937_64& rng) {
  auto st = fiber_param_mod(C, i, T);
  if (!st) return std::nullopt;
  ModForm D = C.Sm.pencil((*st)[0], (*st)[1]);
  Plane A{T[0], T[1], T[2]};
  if (eval_mod(D, A, C.M) != 0) return std::nullopt;
  auto finish = [&](const Plane& n) -> std::optional<ModPoint> {
    auto w = sheet_w_mod(C, i, *st, n);
    if (!w) return std::nullopt;
    ModPoint R{n[0], n[1], n[2], *w};
    if (!C.Sm.on_surface(R)) return std::nullopt;
    return R;
  };
  size_t k = 0;
  while (!C.unit(A[k])) ++k;
  std::uniform_int_distribution<unsigned long> coin(0, ULONG_MAX);
  auto random_mod = [&](const Integer& m) { return mod(Integer(coin(rng)) * Integer(coin(rng)), m); };
  for (int tries = 0; tries < 16; ++tries) {
    Plane V{0, 0, 0};
    for (size_t j = 0; j < 3; ++j)
      if (j != k) V[j] = random_mod(C.M);
    if (!C.unit(V[0]) && !C.unit(V[1]) && !C.unit(V[2])) continue;
    Integer a = eval_mod(D, V, C.M), b = C.red(polar2(D, A, V));
    Plane X{C.red(a * A[0] - b * V[0]), C.red(a * A[1] - b * V[1]), C.red(a * A[2] - b * V[2])};
    auto n = normalize_plane(C, X);
    if (!n || same_mod_p(C, *n, A)) continue;
    if (auto R = finish(*n)) return R;
  }
  std::vector<Plane> residues;
  auto consider = [&](const Plane& v) {
    if (eval_mod(D, v, C.p) == 0 && !same_mod_p(C, v, A)) residues.push_back(v);
  };
  for (Integer y = 0; y < C.p; ++y)
    for (Integer z = 0; z < C.p; ++z) consider({1, y, z});
  for (Integer z = 0; z < C.p; ++z) consider({0, 1, z});
  consider({0, 0, 1});
  std::shuffle(residues.begin(), residues.end(), rng);
  for (Plane v : residues) {
    for (size_t j = 0; j < 3; ++j)
      if (C.unit(v[j])) continue;
      else v[j] += C.p * random_mod(C.M);
    auto n = lift_on_conic(C, D, v);
    if (!n) continue;
    if (auto R = finish(*n)) return R;
  }
  return std::nullopt;
}

/// Common points of the conics D1 and D2 mod M that are transversal mod p.
inline std::vector<Plane> intersect_mod(const ModContext& C, const ModForm& D1, const ModForm& D2, int N) {
  std::vector<Plane> out;
  auto check = [&](Plane v, size_t c) {
    if (eval_mod(D1, v, C.p) != 0 || eval_mod(D2, v, C.p) != 0) return;
    std::array<size_t, 2> j{c == 0 ? 1u : 0u, c == 2 ? 1u : 2u};
    for (int it = 0; it < 2 * N + 4; ++it) {
      auto g1 = grad_mod(D1, v, C.M), g2 = grad_mod(D2, v, C.M);
      Integer det = C.red(g1[j[0]] * g2[j[1]] - g1[j[1]] * g2[j[0]]);
      if (!C.unit(det)) return;
      Integer f1 = eval_mod(D1, v, C.M), f2 = eval_mod(D2, v, C.M);
      if (f1 == 0 && f2 == 0) break;
      Integer di = C.inv(det);
      Integer d0 = C.red((g2[j[1]] * f1 - g1[j[1]] * f2) * di), d1 = C.red((g1[j[0]] * f2 - g2[j[0]] * f1) * di);
      v[j[0]] = C.red(v[j[0]] - d0);
      v[j[1]] = C.red(v[j[1]] - d1);
    }
    if (eval_mod(D1, v, C.M) == 0 && eval_mod(D2, v, C.M) == 0) out.push_back(v);
  };
  for (Integer y = 0; y < C.p; ++y)
    for (Integer z = 0; z < C.p; ++z) check({1, y, z}, 0);
  for (Integer z = 0; z < C.p; ++z) check({0, 1, z}, 1);
  check({0, 0, 1}, 2);
  return out;
}

/// Small primitive (a, b), proportional to (u, v) mod M with a unit factor.
/// The reduced lattice has vectors of size about sqrt(M).
inline std::optional<std::pair<Integer, Integer>> rational_direction(const ModContext& C, const Integer& u,
                                                                     const Integer& v, std::mt19937_64& rng) {
  std::array<Integer, 2> e1, e2;
  if (C.unit(v)) {
    e1 = {C.M, 0};
    e2 = {C.red(u * C.inv(v)), 1};
  } else if (C.unit(u)) {
    e1 = {0, C.M};
    e2 = {1, C.red(v * C.inv(u))};
  } else {
    return std::nullopt;
  }
  auto norm = [](const std::array<Integer, 2>& a) -> Integer { return a[0] * a[0] + a[1] * a[1]; };
  auto dot = [](const std::array<Integer, 2>& a, const std::array<Integer, 2>& b) -> Integer {
    return a[0] * b[0] + a[1] * b[1];
  };
  // Lagrange-Gauss reduction.
  for (;;) {
    if (norm(e1) > norm(e2)) std::swap(e1, e2);
    Integer n1 = norm(e1);
    // Nearest integer to <e1, e2> / |e1|^2.
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), Integer(2 * dot(e1, e2) + n1).get_mpz_t(), Integer(2 * n1).get_mpz_t());
    if (r == 0) break;
    e2 = {e2[0] - r * e1[0], e2[1] - r * e1[1]};
  }
  std::vector<std::pair<Integer, Integer>> cands;
  for (int i = -2; i <= 2; ++i)
    for (int j = -2; j <= 2; ++j) {
      Integer a = i * e1[0] + j * e2[0], b = i * e1[1] + j * e2[1];
      if (a == 0 && b == 0) continue;
      Integer g = gcd(a, b);
      if (!C.unit(g)) continue;
      a /= g;
      b /= g;
      if (b < 0 || (b == 0 && a < 0)) {
        a = -a;
        b = -b;
      }
      cands.emplace_back(a, b);
    }
  if (cands.empty()) return std::nullopt;
  std::sort(cands.begin(), cands.end(), [](const auto& x, const auto& y) {
    Integer hx = std::max(abs_int(x.first), abs_int(x.second)), hy = std::max(abs_int(y.first), abs_int(y.second));
    return std::tie(hx, x) < std::tie(hy, y);
  });
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  size_t top = std::min<size_t>(cands.size(), 3);
  return cands[std::uniform_int_distribution<size_t>(0, top - 1)(rng)];
}

struct Step {
  PropNode node;
  int precision = 0;  // p-adic agreement with the p-adic chain after the step
  int loss = 0;
};

/// Exact child of P along pi_i approximating the p-adic point T, known mod
/// p^prec. When T is close to P the direction loses the common p-power;
/// when T agrees with P to full precision the chain stands still. The
/// returned precision is the measured agreement of the child with T.
inline std::optional<Step> forward_step(const BiConicSurface& S, const Integer& p, int prec, int i,
                                        const PropNode& parent, const ModPoint& T, std::mt19937_64& rng) {
  ModContext C(S, p, prec);
  const SurfacePoint& P = parent.point;
  Plane Pm{C.red(P.x), C.red(P.y), C.red(P.z)};
  size_t k = 0;
  while (k < 3 && !C.unit(Pm[k])) ++k;
  if (k == 3) return std::nullopt;
  Plane V;
  for (size_t j = 0; j < 3; ++j) V[j] = C.red(T[k] * Pm[j] - Pm[k] * T[j]);
  std::array<size_t, 2> b{k == 0 ? 1u : 0u, k == 2 ? 1u : 2u};
  int e = prec;
  for (size_t j : b)
    if (V[j] != 0) e = std::min(e, valuation(V[j], p));
  Step out;
  out.node.depth = parent.depth + 1;
  if (e >= prec) {
    out.node.point = P;
    out.precision = prec;
    out.loss = e;
    return out;
  }
  ModContext Ce(S, p, prec - e);
  Integer pe = pow_int(p, static_cast<unsigned long>(e));
  auto ab = rational_direction(Ce, Integer(V[b[0]] / pe), Integer(V[b[1]] / pe), rng);
  if (!ab) return std::nullopt;
  std::array<Rational, 3> Vq{0, 0, 0};
  Vq[b[0]] = ab->first;
  Vq[b[1]] = ab->second;
  Fiber F = smooth_fiber_through(S, i, P);
  out.node.point = lift_to_surface(S, F, second_intersection(F.D, P.plane(), Vq));
  out.node.direction = ProjPoint2::from_array(Vq);
  out.node.fiber = F.param;
  // Near a node of the fiber mod p the map from directions to points loses
  // more than e digits, so measure what is left.
  const SurfacePoint& X = out.node.point;
  auto a = normalize_mod({X.x, X.y, X.z, X.w}, p, C.M), t = normalize_mod(T, p, C.M);
  int agree = 0;
  if (a && t) {
    agree = prec;
    for (size_t j = 0; j < 4; ++j) {
      Integer d = C.red((*a)[j] - (*t)[j]);
      if (d != 0) agree = std::min(agree, valuation(d, p));
    }
  }
  out.precision = agree;
  out.loss = prec - agree;
  return out;
}

}  // namespace detail

/// Depth-d chain P0 -> ... -> Pd with Pd congruent to the target mod p^m.
/// Backward: a p-adic chain from the target to the pi1 fiber of P0 at
/// precision 2m + 2. Forward: rational points whose fiber parameters
/// approximate it. A chain may repeat a node; that is the parameter which
/// reproduces the anchor.
inline SteerResult steer_to_target(const BiConicSurface& S, const SurfacePoint& P0, const ResidueTarget& target,
                                   int depth, const PropConfig& cfg) {
  cfg.validate();
  require(depth >= 0, ErrorKind::InvalidArgument, "depth must be >= 0");
  require_seed(S, P0);
  detail::check_prime(S, target.p);
  {
    detail::SurfaceMod Sm(S, target.modulus());
    if (!target.smooth || !Sm.on_surface(target.c))
      fail(ErrorKind::TargetNotLiftable, target.to_string() + " is not a smooth point of the reduction");
  }
  SteerResult out;
  PropNode root{P0, 0, std::nullopt, std::nullopt, std::nullopt};
  auto in_class = [&](const SurfacePoint& P) {
    return padic_distance(reduce_point(S, P, target.p, target.m), target) == kAgreeFully;
  };
  auto verify = [&](const PropNode& last) {
    ResidueTarget got = reduce_point(S, last.point, target.p, target.m);
    bool ok = padic_distance(got, target) == kAgreeFully;
    out.transcript.push_back("P" + std::to_string(last.depth) + " mod " + target.p.get_str() + "^" +
                             std::to_string(target.m) + " = " + got.to_string() + (ok ? " == " : " != ") +
                             target.to_string());
    return ok;
  };
  if (depth == 0) {
    out.attempts = 1;
    out.success = verify(root);
    if (out.success) out.path = {root};
    else out.failure = "depth 0: seed is not in the target class";
    return out;
  }
  BaseParam u1 = eval_fibration(S, 1, P0);
  std::uint64_t base = hash_combine(hash_combine(cfg.seed, hash_point(P0)), static_cast<std::uint64_t>(depth));
  for (const auto& c : target.c) base = hash_integer(base, c);
  {
    // The class must already lie on the pi1 fiber of P0 for a single step.
    detail::ModContext Cm(S, target.p, target.m);
    auto st = detail::fiber_param_mod(Cm, 1, target.c);
    detail::ModForm Dm = Cm.Sm.pencil(Cm.red(u1.s), Cm.red(u1.t));
    if (depth == 1 && (detail::eval_mod(Dm, {target.c[0], target.c[1], target.c[2]}, Cm.M) != 0 || !st ||
                       Cm.red((*st)[0] * u1.t - (*st)[1] * u1.s) != 0)) {
      out.failure = "depth 1: target is not on the pi1 fiber of the seed";
      out.attempts = 1;
      return out;
    }
  }
  const bool reflexive = in_class(P0);
  for (int attempt = 0; attempt < cfg.retries; ++attempt) {
    ++out.attempts;
    std::mt19937_64 rng(hash_combine(base, static_cast<std::uint64_t>(attempt)));
    // Guard digits m + 2, widened on later attempts for ill-conditioned targets.
    const int N = target.m + 2 + 2 * (attempt % 3);
    detail::ModContext C(S, target.p, N);
    std::array<Integer, 2> st1{C.red(u1.s), C.red(u1.t)};
    detail::ModForm D1 = C.Sm.pencil(st1[0], st1[1]);
    try {
      detail::ModPoint TD;
      if (reflexive) {
        TD = *detail::normalize_mod({P0.x, P0.y, P0.z, P0.w}, target.p, C.M);
      } else if (depth == 1) {
        // Refine the class along the seed's fiber.
        auto n = detail::lift_on_conic(C, D1, {target.c[0], target.c[1], target.c[2]});
        std::optional<Integer> w;
        if (n) w = detail::sheet_w_mod(C, 1, st1, *n);
        if (!w) {
          out.failure = "depth 1: target does not refine along the seed fiber";
          continue;
        }
        TD = {(*n)[0], (*n)[1], (*n)[2], *w};
      } else {
        ResidueTarget lifted = lift_point(S, target, N);
        TD = {lifted.c[0], lifted.c[1], lifted.c[2], lifted.c[3]};
      }
      // Backward phase.
      std::vector<detail::ModPoint> T(static_cast<size_t>(depth) + 1);
      T[static_cast<size_t>(depth)] = TD;
      bool ok = true;
      // A step with no usable fiber point stands still.
      for (int k = depth; k >= 3; --k) {
        auto prev = detail::random_fiber_point(C, parity_fibration(k), T[static_cast<size_t>(k)], rng);
        T[static_cast<size_t>(k - 1)] = prev ? *prev : T[static_cast<size_t>(k)];
      }
      if (depth >= 2) {
        const auto& T2 = T[2];
        auto st2 = detail::fiber_param_mod(C, 2, T2);
        if (!st2) {
          out.failure = "backward: imprecise pi2 parameter";
          continue;
        }
        auto D2 = C.Sm.pencil((*st2)[0], (*st2)[1]);
        // Points away from both ends keep the forward steps at full precision.
        std::vector<detail::ModPoint> away, near;
        detail::Plane P0m{C.red(P0.x), C.red(P0.y), C.red(P0.z)};
        for (const auto& n : detail::intersect_mod(C, D1, D2, N)) {
          auto w1 = detail::sheet_w_mod(C, 1, st1, n);
          auto w2 = detail::sheet_w_mod(C, 2, *st2, n);
          if (!w1 || !w2 || *w1 != *w2) continue;
          bool close = detail::same_mod_p(C, n, P0m) || detail::same_mod_p(C, n, {T2[0], T2[1], T2[2]});
          (close ? near : away).push_back({n[0], n[1], n[2], *w1});
        }
        auto& pool = away.empty() ? near : away;
        if (pool.empty()) {
          detail::Plane n2{T2[0], T2[1], T2[2]};
          auto w1 = detail::sheet_w_mod(C, 1, st1, n2);
          if (detail::eval_mod(D1, n2, C.M) == 0 && w1 && *w1 == C.red(T2[3])) {
            pool.push_back(T2);
          } else {
            out.failure = "backward: pi2 fiber misses the seed fiber";
            continue;
          }
        }
        T[1] = pool[std::uniform_int_distribution<size_t>(0, pool.size() - 1)(rng)];
      }
      // Forward phase.
      std::vector<PropNode> path{root};
      int prec = N;
      for (int k = 1; k <= depth && ok; ++k) {
        const PropNode& parent = path.back();
        std::optional<detail::Step> step;
        if (k == depth && in_class(parent.point)) {
          step = detail::Step{PropNode{parent.point, k, std::nullopt, std::nullopt, std::nullopt}, prec, 0};
        } else {
          step = detail::forward_step(S, target.p, prec, parity_fibration(k), parent, T[static_cast<size_t>(k)], rng);
        }
        if (!step) {
          ok = false;
          out.failure = "forward: no parameter at depth " + std::to_string(k);
          break;
        }
        prec = step->precision;
        if (prec < target.m) {
          ok = false;
          out.failure = "forward: precision exhausted at depth " + std::to_string(k);
          break;
        }
        if (step->loss > 0)
          out.transcript.push_back("attempt " + std::to_string(attempt) + " step " + std::to_string(k) +
                                   ": precision " + std::to_string(prec) + " after losing " +
                                   std::to_string(step->loss));
        step->node.parent = path.size() - 1;
        path.push_back(step->node);
      }
      if (!ok) continue;
      if (!verify(path.back())) {
        out.failure = "verify: final point misses the target";
        continue;
      }
      out.success = true;
      out.path = std::move(path);
      out.failure.clear();
      return out;
    } catch (const Error& e) {
      out.failure = std::string("attempt error: ") + e.what();
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coverage of residue classes

struct CoverageStats {
  Integer p;
  int m = 1;
  size_t total = 0;                     // smooth classes mod p^m
  std::vector<size_t> hits;             // classes reached by a chain of length <= d, d = 0..depth
  std::vector<ResidueTarget> missed;    // at the maximal depth
};

/// Primes excluded from probes: 2, primes of the discriminant content, of the
/// discriminant of its squarefree part, of the nonzero seed coordinates, and
/// those making the reduction of the surface degenerate.
inline bool is_good_prime(const BiConicSurface& S, const SurfacePoint& P0, const Integer& p) {
  if (p <= 2 || !is_probable_prime(p)) return false;
  try {
    detail::check_prime(S, p);
  } catch (const Error&) {
    return false;
  }
  auto divides = [&](const Rational& r) {
    return sgn(r) != 0 && (mpz_divisible_p(r.get_num().get_mpz_t(), p.get_mpz_t()) ||
                           mpz_divisible_p(r.get_den().get_mpz_t(), p.get_mpz_t()));
  };
  const BinaryForm& d = S.discriminant();
  bool all_divisible = true;
  for (const auto& c : d.coeffs()) {
    if (sgn(c) == 0) continue;
    int v = valuation(c, p);
    if (v < 0) return false;
    all_divisible = all_divisible && v > 0;
  }
  if (all_divisible) return false;
  // Squarefree part: product of the distinct irreducible factors.
  BinaryForm red = BinaryForm::constant(1);
  for (const auto& [g, e] : factor_binary(d).factors) {
    (void)e;
    red = red * g;
  }
  if (red.degree() >= 2 && divides(resultant_binary(red.ds(), red.dt()))) return false;
  for (const auto* c : {&P0.x, &P0.y, &P0.z, &P0.w})
    if (*c != 0 && mpz_divisible_p(c->get_mpz_t(), p.get_mpz_t())) return false;
  return true;
}

inline std::vector<Integer> good_primes(const BiConicSurface& S, const SurfacePoint& P0, size_t count) {
  std::vector<Integer> out;
  for (Integer p = 3; out.size() < count; p = next_prime(p))
    if (is_good_prime(S, P0, p)) out.push_back(p);
  return out;
}

/// Smooth classes mod p^m: every lift of every smooth class mod p. Above a
/// class, the two coordinates that are neither the chart nor the one Hensel
/// refines are free.
inline std::vector<ResidueTarget> smooth_classes(const BiConicSurface& S, const Integer& p, int m) {
  std::vector<ResidueTarget> out;
  detail::SurfaceMod Sp(S, p);
  Integer pm1 = pow_int(p, static_cast<unsigned long>(m - 1));
  for (const auto& t : enumerate_residues(S, p)) {
    if (!t.smooth) continue;
    size_t k = t.chart(), j = 3;
    if (t.c[3] == 0) {
      auto g = Sp.f4_grad({t.c[0], t.c[1], t.c[2]});
      for (size_t i = 0; i < 3; ++i)
        if (i != k && g[i] != 0) {
          j = i;
          break;
        }
    }
    std::vector<size_t> free;
    for (size_t i = 0; i < 4; ++i)
      if (i != k && i != j) free.push_back(i);
    for (Integer a = 0; a < pm1; ++a)
      for (Integer b = 0; b < pm1; ++b) {
        ResidueTarget s = t;
        s.c[free[0]] += a * p;
        s.c[free[1]] += b * p;
        out.push_back(lift_point(S, s, m));
      }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline CoverageStats coverage_probe(const BiConicSurface& S, const SurfacePoint& P0, const Integer& p, int m, int depth,
                                    const PropConfig& cfg) {
  cfg.validate();
  require(m >= 1 && depth >= 0, ErrorKind::InvalidArgument, "precision must be >= 1 and depth >= 0");
  require_seed(S, P0);
  if (!is_good_prime(S, P0, p)) fail(ErrorKind::BadPrime, p.get_str() + " is a bad prime for this surface and seed");
  CoverageStats out;
  out.p = p;
  out.m = m;
  auto classes = smooth_classes(S, p, m);
  out.total = classes.size();
  std::vector<bool> hit(classes.size(), false);
  size_t count = 0;
  ResidueTarget home = reduce_point(S, P0, p, m);
  for (size_t k = 0; k < classes.size(); ++k)
    if (padic_distance(classes[k], home) == kAgreeFully) {
      hit[k] = true;
      ++count;
    }
  out.hits.push_back(count);
  for (int d = 1; d <= depth; ++d) {
    for (size_t k = 0; k < classes.size(); ++k) {
      if (hit[k]) continue;  // a shorter chain pads to length d by standing still
      if (steer_to_target(S, P0, classes[k], d, cfg).success) {
        hit[k] = true;
        ++count;
      }
    }
    out.hits.push_back(count);
  }
  for (size_t k = 0; k < classes.size(); ++k)
    if (!hit[k]) out.missed.push_back(classes[k]);
  return out;
}

}  // namespace biconic
