#pragma once

#include "tdk/display.hpp"

namespace tdk {

// Relative truncated display for a square-zero pd-thickening S -> R: an
// invertible block matrix over W_n(S), morphisms carry J-blocks in J_{n+1}.
struct RelDisplay {
  Thickening th;
  long n = 0, d = 0, c = 0;
  Mat<WittVec> M;     // over S
  Mat<WittVec> Minv;

  long h() const { return d + c; }
};

RelDisplay rel_display_make(const Thickening& th, long n, long d, long c, const Mat<WittVec>& M);
RelDisplay absolute_to_relative(const Display& p, const Thickening& th);
Display rel_to_absolute(const RelDisplay& p);  // same matrix, as display over S
Display reduce_display(const RelDisplay& p);   // entrywise projection to R

struct RelMorphism {
  RelDisplay src, dst;
  Mat<CWitt> X, Z, Y;
  Mat<JElem> J;
};

Violation rel_morphism_validate(const RelMorphism& a);
RelMorphism rel_identity(const RelDisplay& p);
RelMorphism rel_compose(const RelMorphism& a2, const RelMorphism& a1);
Mat<CWitt> rel_p_matrix(const RelMorphism& a);
RelMorphism morphism_to_relative(const Morphism& a, const Thickening& th);
Morphism reduce_morphism(const RelMorphism& a);

// default lift: coordinatewise section of S -> R applied to every Witt entry
RelDisplay coordinate_lift(const Display& pbar, const Thickening& th);
RelDisplay coordinate_lift_with(const Display& pbar, const Thickening& th,
                                const std::function<RingElem(const RingElem&)>& section);

// ---------------------------------------------------------------------------
// lifting solver

// seed H(n); X,Z,Y entries in pS cap a, J entries in a
struct LiftSeed {
  Mat<RingElem> Xn, Jn, Zn, Yn;
};
LiftSeed zero_seed(const Thickening& th, long d2, long c2, long d, long c);
// all seeds, enumerated (guarded against blowup)
std::vector<LiftSeed> enumerate_seeds(const Thickening& th, long d2, long c2, long d, long c,
                                      size_t cap = 4096);

struct HBlock {
  Mat<RingElem> X, J, Z, Y;
  bool operator==(const HBlock& o) const { return X == o.X && J == o.J && Z == o.Z && Y == o.Y; }
};

struct LiftSolution {
  long n = 0;
  std::vector<HBlock> H;  // H[0..n]
};

// unique morphism 1 + H : P -> P' lifting the identity, given the seed H(n);
// both displays must have equal reduction over R
std::pair<LiftSolution, RelMorphism> lift_solve(const RelDisplay& p, const RelDisplay& pprime,
                                                const LiftSeed& seed);
// lift an arbitrary morphism abar of the reductions: entrywise lift plus
// defect-correcting recursion; equivalent to lifting the triangular
// automorphism of the direct sum, without doubling dimensions
std::pair<LiftSolution, RelMorphism> lift_morphism(const Morphism& abar, const RelDisplay& p,
                                                   const RelDisplay& pprime, const LiftSeed& seed);

// H_1(i) = H_2(i) for i <= n - m(e+1) - 1; requires n > m(e+1)+1
bool truncation_uniqueness_check(const LiftSolution& s1, const LiftSolution& s2, long e, long m);
long uniqueness_level(long n, long e, long m);  // n - m(e+1) - 1

// Delta matrices of the difference recursion
std::pair<Mat<RingElem>, Mat<RingElem>> delta_matrices(const RelDisplay& pprime,
                                                       const RelDisplay& p, long i);
// every (e+1)-window of consecutive Dbreve factors lands in pS, and
// k(e+1)-windows land in p^k S
bool delta_product_check(const RelDisplay& p, long e, std::string* why = nullptr);

// ---------------------------------------------------------------------------
// crystals and Hodge lifts

struct CrystalModule {
  Thickening th;
  long rank = 0;
  std::vector<std::string> basis;
  RelDisplay lift;
};

// hypotheses: pbar nilpotent of order <= e, p^m a = 0 with m = th->m, and
// n > m(e+1)+1; the lift defaults to the coordinate lift
CrystalModule crystal_eval(const Display& pbar, const Thickening& th, long order_bound = 16);
CrystalModule crystal_eval_with(const Display& pbar, const Thickening& th, const RelDisplay& lift,
                                long order_bound = 16);
// level-1 comparison matrix on S (x) P induced by the solver isomorphism
Mat<RingElem> crystal_compare(const RelDisplay& lift1, const RelDisplay& lift2,
                              const LiftSeed& seed);

// display over S obtained by moving the Hodge filtration by phi (d x c over a):
// left-multiplies the matrix by the unipotent block ((1 [phi]) (0 1))
Display hodge_lift_display(const RelDisplay& prel, const Mat<RingElem>& phi);

// absolute isomorphism over S lifting the identity, if one exists among the
// enumerable seeds (the relative solver output with vanishing a-part of J)
std::optional<Morphism> find_absolute_iso(const Display& p1, const Display& p2,
                                          const Thickening& th);

}  // namespace tdk
