#include "doctest.h"
#include "tdk/wittpoly.hpp"

using namespace tdk;

TEST_CASE("first addition polynomials, p = 2") {
  WCtx c;
  c.p = 2;
  const WPoly& s0 = witt_structure_poly(c, WKind::Add, 0);
  CHECK(s0.terms.size() == 2);  // x0 + y0
  const WPoly& s1 = witt_structure_poly(c, WKind::Add, 1);
  // x1 + y1 - x0 y0
  CHECK(s1.terms.size() == 3);
  bool found_cross = false;
  for (auto& [m, v] : s1.terms)
    if (m.ex == std::vector<int>{1} && m.ey == std::vector<int>{1}) {
      found_cross = true;
      CHECK(v == -1);
    }
  CHECK(found_cross);
}

TEST_CASE("ghost identities hold symbolically") {
  for (Int p : {2, 3}) {
    int imax = p == 2 ? 4 : 2;
    for (int i = 0; i <= imax; ++i) {
      CAPTURE(p);
      CAPTURE(i);
      CHECK(witt_selftest_identity(p, WKind::Add, i));
      CHECK(witt_selftest_identity(p, WKind::Mul, i));
      CHECK(witt_selftest_identity(p, WKind::Neg, i));
      CHECK(witt_selftest_identity(p, WKind::Frob, i));
    }
  }
}

TEST_CASE("multiplication polynomial m1 for p = 2") {
  WCtx c;
  c.p = 2;
  const WPoly& m1 = witt_structure_poly(c, WKind::Mul, 1);
  // x0^2 y1 + x1 y0^2 + 2 x1 y1
  CHECK(m1.terms.size() == 3);
}

TEST_CASE("budget truncation drops nilpotent-degree monomials") {
  WCtx c;
  c.p = 2;
  c.nil_x = c.nil_y = true;
  c.nil_class = 2;  // square-zero: all cross terms vanish
  c.sx = c.sy = 4;
  const WPoly& s1 = witt_structure_poly(c, WKind::Add, 1);
  CHECK(s1.terms.size() == 2);  // x1 + y1 only
  // high coordinates become identically zero
  const WPoly& s6 = witt_structure_poly(c, WKind::Add, 6);
  CHECK(s6.zero());
}

TEST_CASE("support masks zero out high variables") {
  WCtx c;
  c.p = 2;
  c.sx = 1;
  c.sy = 1;
  // w_2 of a Teichmueller-supported block is x0^4 only
  WPoly g = witt_ghost_poly(c, 2);
  CHECK(g.terms.size() == 1);
}
