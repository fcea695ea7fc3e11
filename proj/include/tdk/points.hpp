#pragma once

#include "tdk/abgroup.hpp"
#include "tdk/display.hpp"

namespace tdk {

// Finite-stage presentation of coker(Fdot - 1 : Q^ -> P^) at support bound M.
// P^ is presented on V-Teichmueller generators per slot; relation rows are the
// complete pair relations below the support fringe plus exponent bounds, and
// the reported group is the subgroup generated by the classes of the low-level
// generators, computed through a pullback lattice. Fringe junk of the stage
// can only shrink as M grows and is excluded from the report.
struct HatModules {
  long bound = 0;     // M (stage parameter)
  long gens = 0;      // generators of the P^ presentation
  long report_gens = 0;  // low-level generators whose classes are reported
  IMat relations;     // true relation rows of P^ (complete below the fringe)
  IMat image_rows;    // rows spanning (Fdot - 1)(Q^-stage)
};

HatModules hat_modules(const Display& p, const NilAlgebra& N, long M);

struct PointsResult {
  AbGroup group;
  long bound_used = 0;       // stabilization witness: bound and bound+1 agree
  bool injective = false;    // Fdot - 1 injective on the materialized model
  BigInt model_q_order = 0;  // size of the materialized injectivity model
};

// cokernel of Fdot - 1 with support-bound escalation until the reported group
// is stable for two consecutive bounds; throws MathError if no stabilization
// within max_bound (never a silent answer)
PointsResult fg_points(const Display& p, const NilAlgebra& N, long start_bound = 1,
                       long max_bound = 6);

// p^m-torsion of fg_points
AbGroup bt_points(const Display& p, long m, const NilAlgebra& N, long start_bound = 1,
                  long max_bound = 6);

// kernel check on a materialized finite model: BFS-closes a small Q^-stage and
// verifies Fdot - 1 is injective on it elementwise
bool points_injective_model(const Display& p, const NilAlgebra& N, long M,
                            BigInt* model_order = nullptr);

// independent oracle: the group {u in 1 + N : u^{p^m} = 1} by enumeration,
// invariant factors recovered from the torsion counts |G[p^j]|
AbGroup mu_oracle(const NilAlgebra& N, long m);
AbGroup unit_group_oracle(const NilAlgebra& N);  // all of 1 + N

}  // namespace tdk
