#include "doctest.h"
#include "tdk/ring.hpp"

#include <random>

using namespace tdk;

TEST_CASE("zmod basics") {
  Ring f2 = ring_zmod(2, 1);
  CHECK(f2->size == 2);
  CHECK(f2->t == 1);
  Ring z4 = ring_zmod(2, 2);
  CHECK(z4->size == 4);
  CHECK(z4->t == 2);
  CHECK(r_int(z4, 4).is_zero());
  CHECK_THROWS_AS(ring_zmod(4, 1), MathError);
}

TEST_CASE("poly quotient F2[x]/(x^2)") {
  Ring r = ring_fp_poly_quot(2, {"x"}, {"x^2"});
  CHECK(r->size == 4);
  CHECK(r->t == 1);
  RingElem x = r_parse(r, "x");
  CHECK(r_mul(x, x).is_zero());
  CHECK(r_print(r_add(x, r_one(r))) == "1+x");
  CHECK(r_parse(r, "1+x") == r_add(r_one(r), x));
}

TEST_CASE("F4 arithmetic") {
  Ring f4 = ring_fp_poly_quot(2, {"x"}, {"x^2+x+1"});
  CHECK(f4->size == 4);
  RingElem x = r_parse(f4, "x");
  CHECK(r_mul(x, x) == r_parse(f4, "x+1"));
  // every nonzero element is a unit in a field
  for (unsigned long long i = 1; i < f4->size; ++i)
    CHECK(unit_inverse(r_from_index(f4, i)).has_value());
}

TEST_CASE("square zero extension and products") {
  Ring f2 = ring_zmod(2, 1);
  Ring s = ring_square_zero_ext(f2, {"e"});
  CHECK(s->size == 4);
  RingElem e = r_parse(s, "e");
  CHECK(r_mul(e, e).is_zero());
  Ring pr = ring_product({f2, f2});
  CHECK(pr->size == 4);
  RingElem a = r_parse(pr, "(1|0)");
  RingElem b = r_parse(pr, "(0|1)");
  CHECK(r_mul(a, b).is_zero());
  CHECK(r_add(a, b) == r_one(pr));
  CHECK(r_print(a) == "(1|0)");
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937_64 rng(7);
  for (Ring r : {ring_zmod(2, 2), ring_zmod(3, 1), ring_fp_poly_quot(2, {"x"}, {"x^2"}),
                 ring_fp_poly_quot(2, {"x"}, {"x^2+x+1"})}) {
    for (int k = 0; k < 500; ++k) {
      RingElem a = r_from_index(r, rng() % r->size);
      RingElem b = r_from_index(r, rng() % r->size);
      RingElem c = r_from_index(r, rng() % r->size);
      CHECK(r_mul(a, r_mul(b, c)) == r_mul(r_mul(a, b), c));
      CHECK(r_add(a, r_add(b, c)) == r_add(r_add(a, b), c));
      CHECK(r_mul(a, r_add(b, c)) == r_add(r_mul(a, b), r_mul(a, c)));
      CHECK(r_mul(a, b) == r_mul(b, a));
      CHECK(r_add(a, b) == r_add(b, a));
    }
  }
}

TEST_CASE("unit inverse: worked examples") {
  Ring z4 = ring_zmod(2, 2);
  auto inv3 = unit_inverse(r_int(z4, 3));
  REQUIRE(inv3.has_value());
  CHECK(*inv3 == r_int(z4, 3));
  CHECK(unit_inverse(r_one(z4)) == r_one(z4));
  CHECK(!unit_inverse(r_int(z4, 2)).has_value());
  // inverse property whenever defined, negative exactly when exhaustive search fails
  for (unsigned long long i = 0; i < z4->size; ++i) {
    RingElem x = r_from_index(z4, i);
    auto inv = unit_inverse(x);
    bool found = false;
    for (unsigned long long jj = 0; jj < z4->size; ++jj)
      if (r_mul(x, r_from_index(z4, jj)) == r_one(z4)) found = true;
    CHECK(inv.has_value() == found);
    if (inv) CHECK(r_mul(x, *inv) == r_one(z4));
  }
}

TEST_CASE("p torsion") {
  Ring f2 = ring_zmod(2, 1);
  CHECK(p_torsion(f2).size() == 2);
  Ring z4 = ring_zmod(2, 2);
  auto t = p_torsion(z4);
  REQUIRE(t.size() == 2);
  CHECK((t[0] == r_int(z4, 0)));
  CHECK((t[1] == r_int(z4, 2)));
  Ring dual = ring_fp_poly_quot(2, {"x"}, {"x^2"});
  CHECK(p_torsion(dual).size() == 4);
}

TEST_CASE("homs") {
  Ring f2 = ring_zmod(2, 1);
  Ring z4 = ring_zmod(2, 2);
  Ring dual = ring_fp_poly_quot(2, {"x"}, {"x^2"});
  RingHom red = hom_initial(z4, f2);
  CHECK(hom_check(red));
  CHECK(hom_apply(red, r_int(z4, 3)) == r_one(f2));
  RingHom emb = hom_initial(f2, dual);
  CHECK(hom_check(emb));
  CHECK_THROWS_AS(hom_initial(f2, z4), MathError);
  // F4 has no augmentation to F2
  Ring f4 = ring_fp_poly_quot(2, {"x"}, {"x^2+x+1"});
  CHECK_THROWS_AS(hom_var_images(f4, f2, {{"x", r_zero(f2)}}), MathError);
  // but x -> x+1 is an automorphism
  RingHom frob = hom_var_images(f4, f4, {{"x", r_parse(f4, "x+1")}});
  CHECK(hom_check(frob));
}

TEST_CASE("nil algebra") {
  NilAlgebra n = nil_algebra_make(2, {"x"}, {"x^4"}, 2);
  CHECK(n.nil_class == 4);
  CHECK(n.frob_exp == 2);
  CHECK(n.size() == 8);
  NilAlgebra eps = nil_algebra_make(2, {"e"}, {"e^2"}, 1);
  CHECK(eps.nil_class == 2);
  CHECK(eps.frob_exp == 1);
  CHECK(eps.size() == 2);
  // declared frob_exp below the true one is rejected
  CHECK_THROWS_AS(nil_algebra_make(2, {"x"}, {"x^4"}, 1), MathError);
}

TEST_CASE("thickening: worked examples") {
  Ring f2 = ring_zmod(2, 1);
  Ring s = ring_square_zero_ext(f2, {"e"});
  Thickening th = thickening_make_auto(s, {"e"}, f2);
  CHECK(th->m == 1);
  CHECK(th->ideal.size() == 2);
  CHECK(th->pS_cap_a.size() == 1);  // pS = 0

  Ring z4 = ring_zmod(2, 2);
  Thickening th2 = thickening_make_auto(z4, {"2"}, f2);
  CHECK(th2->m == 1);
  CHECK(th2->ideal.size() == 2);
  CHECK(th2->pS_cap_a.size() == 2);  // {0, 2}

  // kernel (1) is not proper / not square-zero
  CHECK_THROWS_AS(thickening_make_auto(s, {"1"}, f2), MathError);

  // Z/16 -> Z/4 with kernel (4): square-zero, m = 2
  Ring z16 = ring_zmod(2, 4);
  Thickening th3 = thickening_make_auto(z16, {"4"}, z4);
  CHECK(th3->m == 2);
  CHECK(th3->ideal.size() == 4);
  // pS cap a = {0,4,8,12} since 2S = {0,2,...,14} contains (4)
  CHECK(th3->pS_cap_a.size() == 4);

  // pd invariants: a*b = 0 and p^m a = 0 for kernel elements
  for (const RingElem& a : th3->ideal_elems) {
    for (const RingElem& b : th3->ideal_elems) CHECK(r_mul(a, b).is_zero());
    CHECK(r_scal(4, a).is_zero());
  }
}

TEST_CASE("ring_mod_p") {
  Ring z4 = ring_zmod(2, 2);
  auto [q, h] = ring_mod_p(z4);
  CHECK(q->size == 2);
  CHECK(hom_apply(h, r_int(z4, 2)).is_zero());
  Ring f2 = ring_zmod(2, 1);
  auto [q2, h2] = ring_mod_p(f2);
  CHECK(ring_equal(q2, f2));
}
