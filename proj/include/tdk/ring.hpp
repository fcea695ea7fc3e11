#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdk {

using Int = long long;

// Raised on mathematically invalid input (exit code 1 territory for the CLI).
struct MathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Raised on malformed input files / descriptors (exit code 2 territory).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RingStructure;
using Ring = std::shared_ptr<const RingStructure>;

// Element in canonical coordinates w.r.t. the ring's Z-module basis.
// Canonical form is unique, so equality is coordinate equality.
struct RingElem {
  Ring ring;
  std::vector<Int> c;

  bool operator==(const RingElem& o) const { return c == o.c; }
  bool operator!=(const RingElem& o) const { return !(*this == o); }
  bool operator<(const RingElem& o) const { return c < o.c; }
  bool is_zero() const;
};

// A finite commutative ring presented as a Z-module  ⊕ Z/m_i · e_i  with a
// multiplication table on the basis. All moduli are powers of the same prime p,
// and p^t annihilates the ring (p is nilpotent).
struct RingStructure {
  Int p = 2;
  Int t = 1;  // char exponent: p^t * 1 == 0
  std::vector<Int> moduli;
  std::vector<std::string> basis_names;
  // mult[i*dim+j] = coordinates of e_i * e_j
  std::vector<std::vector<Int>> mult;
  std::vector<Int> one;
  bool enumerable = true;
  unsigned long long size = 0;
  std::string name;
  std::string desc_json;  // original structured descriptor, for serialization
  // named generators for element parsing (vars, sq-zero gens, "1")
  std::map<std::string, std::vector<Int>> gen_table;
  // product rings remember their factors for componentwise syntax
  std::vector<Ring> factors;

  long dim() const { return static_cast<long>(moduli.size()); }
};

// --- construction -----------------------------------------------------------

Ring ring_zmod(Int p, Int t);
// F_p[vars]/(rels); each relation is either monic univariate with constant
// coefficients (e.g. "x^2", "x^2+x+1") or a pure monomial (e.g. "x*y").
Ring ring_fp_poly_quot(Int p, const std::vector<std::string>& vars,
                       const std::vector<std::string>& rels);
Ring ring_square_zero_ext(const Ring& base, const std::vector<std::string>& gens);
Ring ring_product(const std::vector<Ring>& factors);

bool ring_equal(const Ring& a, const Ring& b);

// --- element arithmetic ------------------------------------------------------

RingElem r_zero(const Ring& r);
RingElem r_one(const Ring& r);
RingElem r_make(const Ring& r, std::vector<Int> coords);  // canonicalizes
RingElem r_add(const RingElem& a, const RingElem& b);
RingElem r_sub(const RingElem& a, const RingElem& b);
RingElem r_neg(const RingElem& a);
RingElem r_mul(const RingElem& a, const RingElem& b);
RingElem r_scal(Int k, const RingElem& a);
RingElem r_pow(const RingElem& a, unsigned long long e);
RingElem r_int(const Ring& r, Int k);  // k * 1

// enumeration: index <-> element, 0 <= idx < size
RingElem r_from_index(const Ring& r, unsigned long long idx);
unsigned long long r_to_index(const RingElem& a);

std::optional<RingElem> unit_inverse(const RingElem& x);
std::vector<RingElem> p_torsion(const Ring& r);

std::string r_print(const RingElem& a);
RingElem r_parse(const Ring& r, const std::string& s);

// --- homomorphisms -----------------------------------------------------------

struct RingHom {
  Ring src, dst;
  std::vector<RingElem> images;  // of src basis vectors
  std::string desc_json;
};

RingElem hom_apply(const RingHom& h, const RingElem& a);
RingHom hom_identity(const Ring& r);
RingHom hom_compose(const RingHom& g, const RingHom& f);  // g after f
// unique hom from Z/p^t; requires char(dst) | p^t
RingHom hom_initial(const Ring& src_zmod, const Ring& dst);
RingHom hom_zmod_reduce(const Ring& src, const Ring& dst);
RingHom hom_sqzero_proj(const Ring& src, const Ring& base);
RingHom hom_sqzero_incl(const Ring& base, const Ring& ext);
// poly-quot source: var name -> image; relations must map to zero
RingHom hom_var_images(const Ring& src, const Ring& dst,
                       const std::map<std::string, RingElem>& var_images);
// product source/target: component j of result pulls back factor idx[j] through hs[j]
RingHom hom_product(const Ring& src, const Ring& dst, const std::vector<long>& idx,
                    const std::vector<RingHom>& hs);
bool hom_check(const RingHom& h);  // 1, moduli, and basis products preserved

// --- nilpotent algebras ------------------------------------------------------

// Non-unital nilpotent algebra N presented inside a unital envelope ring.
struct NilAlgebra {
  Ring env;
  std::vector<bool> ideal_coord;  // basis coordinates that span N
  Int nil_class = 1;              // least k with N^k = 0
  Int frob_exp = 0;               // least n0 with x^{p^n0} = 0 for all x in N
  std::string desc_json;

  bool contains(const RingElem& a) const;
  std::vector<RingElem> enumerate() const;  // all elements of N
  unsigned long long size() const;
};

// envelope = F_p[gens]/(rels), N = ideal generated by gens
NilAlgebra nil_algebra_make(Int p, const std::vector<std::string>& gens,
                            const std::vector<std::string>& rels, Int frob_exp);

// --- pd-thickenings ----------------------------------------------------------

// Surjection S -> R with square-zero kernel ideal a (trivial divided powers),
// p^m a = 0. The only divided-power structure supported by the artifact.
struct PdThickening {
  Ring S, R;
  RingHom proj;
  std::vector<RingElem> ideal_gens;
  std::set<std::vector<Int>> ideal;      // materialized kernel
  std::vector<RingElem> ideal_elems;
  Int m = 0;                             // minimal with p^m a = 0
  std::vector<RingElem> pS_cap_a;
  std::map<std::vector<Int>, RingElem> half_table;  // v in pS -> s with p*s = v
  std::vector<RingElem> section_table;              // default section R -> S

  bool in_ideal(const RingElem& a) const { return ideal.count(a.c) > 0; }
  bool in_pS_cap_a(const RingElem& a) const;
  RingElem halve(const RingElem& v) const;     // s with p*s = v, v in pS
  RingElem section(const RingElem& r) const;   // default set-theoretic section
};

using Thickening = std::shared_ptr<const PdThickening>;

Thickening thickening_make(const Ring& S, const std::vector<RingElem>& kernel_gens,
                           const Ring& R, const RingHom& proj);
// derives the canonical projection where one exists (sq-zero ext, zmod reduce)
Thickening thickening_make_auto(const Ring& S, const std::vector<std::string>& kernel_gens,
                                const Ring& R);

// quotient map R -> R/pR (returns target ring and hom)
std::pair<Ring, RingHom> ring_mod_p(const Ring& r);

}  // namespace tdk
