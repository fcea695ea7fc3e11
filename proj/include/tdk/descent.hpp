#pragma once

#include "tdk/abgroup.hpp"
#include "tdk/witt.hpp"

namespace tdk {

// Supported faithfully flat coverings: product covers R -> R^k and extensions
// of the prime field F_p -> F_{p^deg}. Tensor powers split into factors
// (copies of R, resp. copies of F_q indexed by Galois exponents), which keeps
// every chain group mechanically enumerable.
struct Covering {
  Ring base;
  std::string kind;  // "product" | "field_ext"
  long param = 2;    // k resp. deg
};

Covering covering_product(const Ring& base, long k);
Covering covering_field_ext(const Ring& base_fp, long deg);
Ring covering_total_ring(const Covering& c);  // S itself

enum class CechVariant { W, CW, Module };

struct ChainLevel {
  std::vector<BigInt> moduli;  // cyclic decomposition of the chain group
};

struct CechComplex {
  Covering cov;
  long n = 0;
  CechVariant variant = CechVariant::W;
  long rank = 1;  // for the module variant
  long maxdeg = 3;
  std::vector<ChainLevel> levels;  // q = 0..maxdeg
  std::vector<IMat> d;             // d[q] : C_q -> C_{q+1}, q < maxdeg
};

CechComplex cech_complex(const Covering& cov, long n, CechVariant variant, long maxdeg,
                         long rank = 1);
bool cech_d2_zero(const CechComplex& c);
AbGroup cech_homology(const CechComplex& c, long q);  // q <= maxdeg - 1
// order of W_n(R) resp. CW_n(R) (^rank) that H^0 must match
BigInt cech_expected_h0(const CechComplex& c);

// levelwise exact sequence 0 -> C(S/R)[p] -> C W_{n+1} -> C CW_n -> 0:
// orders multiply, the inclusion V^n[-] is injective and lands in the kernel
struct ThreeTermReport {
  bool ok = true;
  std::string detail;
};
ThreeTermReport cech_three_term_check(const Covering& cov, long n, long maxdeg);

}  // namespace tdk
