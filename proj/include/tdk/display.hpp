#pragma once

#include <random>

#include "tdk/matrix.hpp"

namespace tdk {

// Truncated display of level n: an invertible block matrix ((A B)(C D)) in
// GL_{d+c}(W_n(R)). The inverse is cached at construction.
struct Display {
  Ring R;
  long n = 0, d = 0, c = 0;
  Mat<WittVec> M;
  Mat<WittVec> Minv;

  long h() const { return d + c; }
  Mat<WittVec> A() const;
  Mat<WittVec> B() const;
  Mat<WittVec> C() const;
  Mat<WittVec> D() const;
};

Display display_make(const Ring& R, long n, long d, long c, const Mat<WittVec>& M);
Display display_multiplicative(const Ring& R, long n);  // d=1, c=0, M=(1)
Display display_etale(const Ring& R, long n);           // d=0, c=1, M=(1)
Display display_supersingular(const Ring& R, long n);   // d=c=1, M=((0 1)(1 0))

// Morphism P -> P': blocks X (d'xd), Z (c'xd), Y (c'xc) over the subring
// W_n(R) and J (d'xc) over W_n(R), subject to relation (the matrix identity
// that makes the pair of induced maps a display morphism).
struct Morphism {
  Display src, dst;
  Mat<CWitt> X, Z, Y;
  Mat<WittVec> J;
};

struct Violation {
  bool ok = true;
  std::string block;  // which block of the relation failed
  long i = -1, j = -1;
  std::string msg;
};

Violation morphism_validate(const Morphism& a);
Morphism morphism_identity(const Display& p);
Morphism morphism_compose(const Morphism& a2, const Morphism& a1);  // a2 after a1

// induced map P -> P' as a matrix over the subring: ((X k(VJ)) (Z Y))
Mat<CWitt> morphism_p_matrix(const Morphism& a);
// reconstruct J from the induced P-matrix (faithfulness); src/dst known
Mat<WittVec> morphism_recover_j(const Display& src, const Display& dst, const Mat<CWitt>& pmat);

// solve the relation for the target: M' = RES * M * SIG^{-1}; returns the
// transported display and the (valid by construction) isomorphism
std::pair<Display, Morphism> transport_display(const Display& p, const Mat<CWitt>& x,
                                               const Mat<WittVec>& j, const Mat<CWitt>& z,
                                               const Mat<CWitt>& y);

// vectors in P = T + L and Q = I_{n+1}(x)T + L
struct PVec {
  std::vector<CWitt> t, l;
};
struct QVec {
  std::vector<IElem> t;
  std::vector<CWitt> l;
};

std::vector<WittVec> f_eval(const Display& p, const PVec& v);
std::vector<WittVec> fdot_eval(const Display& p, const QVec& q);
PVec iota(const Display& p, const QVec& q);
// V-sharp matrix N = diag(p 1_d, 1_c) * Minv; satisfies N * Fdot(q) = Res(iota q)
Mat<WittVec> vsharp_matrix(const Display& p);

// least e >= 0 with Dhat0^{(p^{e-1})} ... Dhat0 = 0 over R/pR; c = 0 gives 0,
// nullopt if no e <= bound works
std::optional<long> nilpotence_order(const Display& p, long bound);
// oracle: iterate the Frobenius-semilinear map q -> Dhat0 q^{(p)} on R^c
std::optional<long> nilpotence_order_oracle(const Display& p, long bound);

Display truncate_display(const Display& p, long m);
Morphism truncate_morphism(const Morphism& a, long m);
Display base_change_display(const Display& p, const RingHom& phi);
Morphism base_change_morphism(const Morphism& a, const RingHom& phi);
Display direct_sum(const Display& p1, const Display& p2);

// random generators for property tests
RingElem random_elem(std::mt19937_64& rng, const Ring& r);
WittVec random_witt(std::mt19937_64& rng, const Ring& r, long len);
CWitt random_cwitt(std::mt19937_64& rng, const Ring& r, long n);
Display random_display(std::mt19937_64& rng, const Ring& r, long n, long d, long c);
// random valid morphism out of p via transport; returns target and morphism
std::pair<Display, Morphism> random_transport(std::mt19937_64& rng, const Display& p);

}  // namespace tdk
