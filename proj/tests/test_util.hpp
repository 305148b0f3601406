#pragma once

#include "biconic/surface.hpp"

namespace testutil {

using namespace biconic;

inline TernaryQuadraticForm form(std::array<long, 6> c) {
  TernaryQuadraticForm Q;
  for (size_t i = 0; i < 6; ++i) Q.c[i] = c[i];
  return Q;
}

inline SurfacePoint pt(long x, long y, long z, long w) { return {Integer(x), Integer(y), Integer(z), Integer(w)}; }

// Same data as fixtures/paper-dp2.spec and fixtures/smooth-fixture-1.spec.
inline BiConicSurface paper_dp2() {
  return build_surface(form({1, 2, 0, 0, 0, 0}), form({0, -2, 1, 0, 0, 0}), form({0, 2, 1, 0, 0, 0}), "paper-dp2");
}
inline SurfacePoint paper_dp2_seed() { return pt(0, 1, 1, -1); }

inline BiConicSurface smooth_fixture_1() {
  return build_surface(form({1, 1, 1, 0, 2, 1}), form({0, 0, 0, 0, 2, 0}), form({0, 0, 3, 1, 2, 0}),
                       "smooth-fixture-1");
}
inline SurfacePoint smooth_fixture_1_seed() { return pt(0, 0, 1, 1); }

}  // namespace testutil
