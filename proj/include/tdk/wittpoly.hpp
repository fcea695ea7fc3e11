#pragma once

#include <set>
#include <tuple>
#include <vector>

#include "tdk/abgroup.hpp"  // BigInt
#include "tdk/ring.hpp"

namespace tdk {

// Monomial in two variable blocks x_0.. and y_0.. (y unused for 1-block kinds).
struct WMono {
  std::vector<int> ex, ey;
  auto operator<=>(const WMono&) const = default;
};

struct WPoly {
  std::vector<std::pair<WMono, BigInt>> terms;  // sorted by monomial
  bool zero() const { return terms.empty(); }
};

// Truncation context. Monomials are dropped when provably zero on the target:
//  - support masks: x_j = 0 for j >= sx (resp. y/sy),
//  - nilpotency budget: if a block is flagged nilpotent, monomials whose total
//    degree in flagged blocks reaches nil_class vanish (N^k = 0),
//  - elementwise power cap: in flagged blocks, a single variable to exponent
//    >= var_cap vanishes (x^{p^n0} = 0 for all x).
// Dropping such monomials commutes with polynomial products and with the
// coefficient-wise exact divisions of the ghost recursion, so all kept
// coefficients are exact.
struct WCtx {
  Int p = 2;
  int sx = kUnbounded, sy = kUnbounded;
  bool nil_x = false, nil_y = false;
  int nil_class = 0;  // 0 = no budget
  int var_cap = 0;    // 0 = no cap

  static constexpr int kUnbounded = 1 << 20;
  auto key() const { return std::tuple(p, sx, sy, nil_x, nil_y, nil_class, var_cap); }
};

enum class WKind { Add, Mul, Neg, Frob };

// i-th coordinate polynomial of the requested operation, computed by the
// ghost-component recursion with exact division by p^i, cached per context.
const WPoly& witt_structure_poly(const WCtx& ctx, WKind kind, int i);

// Ghost polynomial w_i of the x block (for tests).
WPoly witt_ghost_poly(const WCtx& ctx, int i);

// polynomial algebra on WPoly (exposed for the symbolic self-tests)
WPoly wp_add(const WCtx& ctx, const WPoly& a, const WPoly& b);
WPoly wp_mul(const WCtx& ctx, const WPoly& a, const WPoly& b);
WPoly wp_scal(const BigInt& k, const WPoly& a);
WPoly wp_pow(const WCtx& ctx, const WPoly& a, unsigned long long e);
// substitute the x block of `outer` by the polynomials `subst_x` (two-block
// inputs), used to check ghost identities symbolically
WPoly wp_subst_x(const WCtx& ctx, const WPoly& outer, const std::vector<WPoly>& subst_x);

// (p, kind, i) triples instantiated so far in full (untruncated) contexts;
// the acceptance suite re-verifies the ghost identities for each of them.
std::set<std::tuple<Int, WKind, int>> witt_poly_usage();

// verify w_i(op(x,y)) == w_i(x) op w_i(y) as exact integer polynomials
bool witt_selftest_identity(Int p, WKind kind, int i);

// evaluate at ring elements; xs/ys supply the variable blocks (missing = 0)
RingElem wp_eval(const WPoly& poly, const Ring& r, const std::vector<RingElem>& xs,
                 const std::vector<RingElem>& ys);

}  // namespace tdk
