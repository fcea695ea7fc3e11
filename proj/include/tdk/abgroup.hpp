#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <vector>

namespace tdk {

using BigInt = boost::multiprecision::cpp_int;

// Dense integer matrix, row major. Rows are relations / map images.
struct IMat {
  long rows = 0, cols = 0;
  std::vector<BigInt> v;

  IMat() = default;
  IMat(long r, long c) : rows(r), cols(c), v(static_cast<size_t>(r) * c) {}
  BigInt& at(long i, long j) { return v[static_cast<size_t>(i) * cols + j]; }
  const BigInt& at(long i, long j) const { return v[static_cast<size_t>(i) * cols + j]; }
};

IMat imat_mul(const IMat& a, const IMat& b);
IMat imat_transpose(const IMat& a);
IMat imat_vstack(const IMat& a, const IMat& b);

// Smith normal form: returns D with U*A*V = D, D diagonal with d1 | d2 | ...
// U, V are unimodular; only D is needed by most callers, transforms optional.
struct SmithResult {
  IMat D;
  IMat U;  // rows x rows
  IMat V;  // cols x cols
};
SmithResult smith_normal_form(IMat a, bool want_transforms = false);

// Column Hermite form of A (column operations only), used for integral solving.
// Returns H (lower triangular-ish column HNF) and V with A*V = H.
struct HermiteResult {
  IMat H;
  IMat V;
};
HermiteResult column_hermite(IMat a);

// Solve A*x = b over the integers. A is m x n, b length m.
std::optional<std::vector<BigInt>> integral_solve(const IMat& a, const std::vector<BigInt>& b);

// Basis of the integer kernel {x : A*x = 0}; columns of the returned matrix.
IMat integral_kernel(const IMat& a);

// Finitely generated abelian group presented by generators and relation rows.
// Invariant factors satisfy f1 | f2 | ..., each > 1; free_rank counts Z-summands.
struct AbGroup {
  std::vector<BigInt> factors;
  long free_rank = 0;

  bool finite() const { return free_rank == 0; }
  BigInt order() const;
  bool trivial() const { return factors.empty() && free_rank == 0; }
  std::string str() const;
  bool operator==(const AbGroup&) const = default;
};

// gens = number of generators, rel rows live in Z^gens.
AbGroup abgroup_from_relations(long gens, const IMat& relations);

// Subquotient homology: generators of C carry cyclic moduli (0 = free);
// d_out : C -> C', d_in : C'' -> C are integer matrices on generators
// (columns indexed by source generators). Computes ker(d_out)/im(d_in)
// where both are taken modulo the moduli lattices.
AbGroup homology_group(const IMat& d_out, const std::vector<BigInt>& moduli_target,
                       const IMat& d_in, const std::vector<BigInt>& moduli_self);

// p^m-torsion subgroup of a finite abelian group given by invariant factors.
AbGroup torsion_subgroup(const AbGroup& g, const BigInt& pm);

}  // namespace tdk
