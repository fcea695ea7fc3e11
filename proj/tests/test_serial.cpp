#include "doctest.h"
#include "tdk/serial.hpp"

#include <random>

using namespace tdk;

TEST_CASE("ring round trips") {
  for (const char* desc : {
           R"({"kind":"zmod","p":2,"t":2})",
           R"({"kind":"fp_poly_quot","p":2,"vars":["x"],"rels":["x^2"]})",
           R"({"kind":"fp_poly_quot","p":2,"vars":["x"],"rels":["x^2+x+1"]})",
           R"({"kind":"square_zero_ext","base":{"kind":"zmod","p":2,"t":1},"gens":["e"]})",
           R"({"kind":"product","factors":[{"kind":"zmod","p":2,"t":1},{"kind":"zmod","p":2,"t":1}]})",
       }) {
    Json j = Json::parse(desc);
    Ring r = ring_from_json(j);
    CHECK(ring_to_json(r) == j);
    Ring r2 = ring_from_json(ring_to_json(r));
    CHECK(ring_equal(r, r2));
  }
}

TEST_CASE("element strings round trip") {
  std::mt19937_64 rng(5);
  for (const char* desc : {
           R"({"kind":"zmod","p":3,"t":2})",
           R"({"kind":"fp_poly_quot","p":2,"vars":["x","y"],"rels":["x^2","y^2"]})",
           R"({"kind":"square_zero_ext","base":{"kind":"zmod","p":2,"t":2},"gens":["e"]})",
           R"({"kind":"product","factors":[{"kind":"zmod","p":2,"t":2},{"kind":"fp_poly_quot","p":2,"vars":["x"],"rels":["x^2"]}]})",
       }) {
    Ring r = ring_from_json(Json::parse(desc));
    for (int t = 0; t < 60; ++t) {
      RingElem e = r_from_index(r, rng() % r->size);
      CHECK(r_parse(r, r_print(e)) == e);
    }
  }
}

TEST_CASE("display and morphism round trip") {
  Ring f2 = ring_from_json(Json::parse(R"({"kind":"zmod","p":2,"t":1})"));
  Display ss = display_supersingular(f2, 2);
  // display_supersingular built from a programmatic ring also carries a desc
  Json dj = display_to_json(ss);
  Display ss2 = display_from_json(dj);
  CHECK(ss2.M == ss.M);
  CHECK(display_to_json(ss2) == dj);
  std::mt19937_64 rng(7);
  auto [q, a] = random_transport(rng, ss);
  Json mj = morphism_to_json(a);
  Morphism a2 = morphism_from_json(mj);
  CHECK(morphism_validate(a2).ok);
  CHECK(a2.X == a.X);
  CHECK(a2.J == a.J);
  CHECK(morphism_to_json(a2) == mj);
}

TEST_CASE("thickening and rel display round trip") {
  Json tj = Json::parse(
      R"({"S":{"kind":"square_zero_ext","base":{"kind":"zmod","p":2,"t":1},"gens":["e"]},
          "R":{"kind":"zmod","p":2,"t":1},"kernel_gens":["e"]})");
  Thickening th = thickening_from_json(tj);
  CHECK(th->m == 1);
  CHECK(thickening_to_json(th) == tj);
  Display ss = display_supersingular(th->R, 3);
  RelDisplay lift = coordinate_lift(ss, th);
  Json rj = rel_display_to_json(lift);
  RelDisplay lift2 = rel_display_from_json(rj);
  CHECK(lift2.M == lift.M);
  CHECK(rel_display_to_json(lift2) == rj);
}

TEST_CASE("nil algebra and group serialization") {
  Json nj = Json::parse(
      R"({"base":{"kind":"zmod","p":2,"t":1},"gens":["x"],"rels":["x^4"],"frob_exp":2})");
  NilAlgebra n = nil_from_json(nj);
  CHECK(n.nil_class == 4);
  CHECK(nil_to_json(n) == nj);
  AbGroup g;
  g.factors = {2, 2};
  Json gj = abgroup_to_json(g);
  CHECK(gj.at("order") == 4);
  CHECK(gj.at("factors") == Json::array({2, 2}));
}

TEST_CASE("covering round trip") {
  Json cj = Json::parse(
      R"({"base":{"kind":"zmod","p":2,"t":1},"cover":{"kind":"field_ext","deg":2}})");
  Covering c = covering_from_json(cj);
  CHECK(covering_to_json(c) == cj);
  CHECK(covering_total_ring(c)->size == 4);
}

TEST_CASE("seed and solution serialization") {
  Thickening th = thickening_from_json(Json::parse(
      R"({"S":{"kind":"zmod","p":2,"t":2},"R":{"kind":"zmod","p":2,"t":1},"kernel_gens":["2"]})"));
  LiftSeed s = zero_seed(th, 1, 1, 1, 1);
  s.Jn.at(0, 0) = r_int(th->S, 2);
  Json sj = seed_to_json(s);
  LiftSeed s2 = seed_from_json(th, 1, 1, 1, 1, sj);
  CHECK(s2.Jn == s.Jn);
  CHECK(seed_to_json(s2) == sj);
}
