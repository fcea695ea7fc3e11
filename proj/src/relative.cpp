#include "tdk/relative.hpp"

#include <sstream>

namespace tdk {

namespace {

Mat<WittVec> mat_frob_cw(const Mat<CWitt>& m) {
  Mat<WittVec> r(m.rows, m.cols, m.zero.frob());
  for (size_t i = 0; i < m.v.size(); ++i) r.v[i] = m.v[i].frob();
  return r;
}

Mat<WittVec> mat_res_cw(const Mat<CWitt>& m) {
  Mat<WittVec> r(m.rows, m.cols, m.zero.res());
  for (size_t i = 0; i < m.v.size(); ++i) r.v[i] = m.v[i].res();
  return r;
}

Mat<WittVec> mat_sigma_dot(const Mat<JElem>& m, const Ring& s, long n) {
  Mat<WittVec> r(m.rows, m.cols, w_zero(s, n));
  for (size_t i = 0; i < m.v.size(); ++i) r.v[i] = j_sigma_dot(m.v[i]);
  return r;
}

Mat<WittVec> mat_jbar(const Mat<JElem>& m, const Ring& s, long n) {
  Mat<WittVec> r(m.rows, m.cols, w_zero(s, n));
  for (size_t i = 0; i < m.v.size(); ++i) r.v[i] = j_bar(m.v[i]);
  return r;
}

Mat<CWitt> mat_kappa_j(const Mat<JElem>& m, const Ring& s, long n) {
  Mat<CWitt> r(m.rows, m.cols, cw_zero(s, n));
  for (size_t i = 0; i < m.v.size(); ++i) r.v[i] = j_kappa(m.v[i]);
  return r;
}

// ghost matrix w_i applied entrywise
Mat<RingElem> mat_ghost(const Mat<WittVec>& m, long i) {
  Mat<RingElem> r(m.rows, m.cols, r_zero(m.zero.ring));
  for (size_t k = 0; k < m.v.size(); ++k) r.v[k] = ghost(m.v[k], i);
  return r;
}

Mat<RingElem> mat_scal_r(Int k, const Mat<RingElem>& m) {
  Mat<RingElem> r = m;
  for (auto& e : r.v) e = r_scal(k, e);
  return r;
}

}  // namespace

RelDisplay rel_display_make(const Thickening& th, long n, long d, long c, const Mat<WittVec>& M) {
  if (M.rows != d + c || M.cols != d + c) throw MathError("rel display: shape mismatch");
  for (const WittVec& e : M.v)
    if (e.len() != n || !ring_equal(e.ring, th->S))
      throw MathError("rel display: entry length or ring mismatch");
  auto inv = witt_mat_inverse(M);
  if (!inv) throw MathError("rel display: matrix not invertible over W_n(S)");
  return RelDisplay{th, n, d, c, M, *inv};
}

RelDisplay absolute_to_relative(const Display& p, const Thickening& th) {
  if (!ring_equal(p.R, th->S)) throw MathError("absolute_to_relative: display not over S");
  return RelDisplay{th, p.n, p.d, p.c, p.M, p.Minv};
}

Display rel_to_absolute(const RelDisplay& p) {
  return Display{p.th->S, p.n, p.d, p.c, p.M, p.Minv};
}

Display reduce_display(const RelDisplay& p) {
  Mat<WittVec> m = mat_apply_hom_w(p.th->proj, p.M, p.n);
  Mat<WittVec> mi = mat_apply_hom_w(p.th->proj, p.Minv, p.n);
  return Display{p.th->R, p.n, p.d, p.c, m, mi};
}

Violation rel_morphism_validate(const RelMorphism& a) {
  const RelDisplay &p = a.src, &q = a.dst;
  if (a.X.rows != q.d || a.X.cols != p.d || a.Z.rows != q.c || a.Z.cols != p.d ||
      a.Y.rows != q.c || a.Y.cols != p.c || a.J.rows != q.d || a.J.cols != p.c)
    return {false, "shape", -1, -1, "block shape mismatch"};
  const Ring& s = p.th->S;
  long n = p.n;
  Mat<WittVec> sig = mat_block(mat_frob_cw(a.X), mat_sigma_dot(a.J, s, n),
                               mat_scal_int_w(s->p, mat_frob_cw(a.Z)), mat_frob_cw(a.Y));
  Mat<WittVec> bar = mat_block(mat_res_cw(a.X), mat_jbar(a.J, s, n), mat_res_cw(a.Z),
                               mat_res_cw(a.Y));
  Mat<WittVec> lhs = mat_mul(q.M, sig);
  Mat<WittVec> rhs = mat_mul(bar, p.M);
  for (long i = 0; i < lhs.rows; ++i)
    for (long j = 0; j < lhs.cols; ++j)
      if (!(lhs.at(i, j) == rhs.at(i, j))) {
        std::ostringstream os;
        os << "relative relation fails at entry (" << i << "," << j << ")";
        return {false, "relation", i, j, os.str()};
      }
  return {};
}

RelMorphism rel_identity(const RelDisplay& p) {
  return RelMorphism{p, p, mat_identity_cw(p.th->S, p.n, p.d),
                     Mat<CWitt>(p.c, p.d, cw_zero(p.th->S, p.n)),
                     mat_identity_cw(p.th->S, p.n, p.c),
                     Mat<JElem>(p.d, p.c, j_zero(p.th, p.n))};
}

RelMorphism rel_compose(const RelMorphism& a2, const RelMorphism& a1) {
  if (!(a1.dst.M == a2.src.M)) throw MathError("rel_compose: middle display mismatch");
  const Ring& s = a1.src.th->S;
  long n = a1.src.n;
  RelMorphism r;
  r.src = a1.src;
  r.dst = a2.dst;
  r.X = mat_add(mat_mul(a2.X, a1.X), mat_mul(mat_kappa_j(a2.J, s, n), a1.Z));
  r.J = mat_add(mat_mul(a2.X, a1.J), mat_mul(a2.J, a1.Y));
  r.Z = mat_add(mat_mul(a2.Z, a1.X), mat_mul(a2.Y, a1.Z));
  r.Y = mat_add(mat_mul(a2.Z, mat_kappa_j(a1.J, s, n)), mat_mul(a2.Y, a1.Y));
  return r;
}

Mat<CWitt> rel_p_matrix(const RelMorphism& a) {
  return mat_block(a.X, mat_kappa_j(a.J, a.src.th->S, a.src.n), a.Z, a.Y);
}

RelMorphism morphism_to_relative(const Morphism& a, const Thickening& th) {
  RelMorphism r;
  r.src = absolute_to_relative(a.src, th);
  r.dst = absolute_to_relative(a.dst, th);
  r.X = a.X;
  r.Z = a.Z;
  r.Y = a.Y;
  r.J = Mat<JElem>(a.J.rows, a.J.cols, j_zero(th, a.src.n));
  for (size_t i = 0; i < a.J.v.size(); ++i) r.J.v[i] = j_from_i(th, IElem{a.J.v[i]});
  return r;
}

Morphism reduce_morphism(const RelMorphism& a) {
  Morphism r;
  r.src = reduce_display(a.src);
  r.dst = reduce_display(a.dst);
  const RingHom& pr = a.src.th->proj;
  auto red_cw = [&](const Mat<CWitt>& m) {
    Mat<CWitt> out(m.rows, m.cols, cw_apply_hom(pr, m.zero));
    for (size_t i = 0; i < m.v.size(); ++i) out.v[i] = cw_apply_hom(pr, m.v[i]);
    return out;
  };
  r.X = red_cw(a.X);
  r.Z = red_cw(a.Z);
  r.Y = red_cw(a.Y);
  r.J = Mat<WittVec>(a.J.rows, a.J.cols, w_zero(a.src.th->R, a.src.n));
  for (size_t i = 0; i < a.J.v.size(); ++i) r.J.v[i] = j_reduce(a.J.v[i]).eta;
  return r;
}

RelDisplay coordinate_lift(const Display& pbar, const Thickening& th) {
  return coordinate_lift_with(pbar, th,
                              [&](const RingElem& c) { return th->section(c); });
}

RelDisplay coordinate_lift_with(const Display& pbar, const Thickening& th,
                                const std::function<RingElem(const RingElem&)>& section) {
  if (!ring_equal(pbar.R, th->R)) throw MathError("coordinate_lift: display not over R");
  Mat<WittVec> m(pbar.h(), pbar.h(), w_zero(th->S, pbar.n));
  for (size_t i = 0; i < pbar.M.v.size(); ++i) {
    WittVec lifted{th->S, {}};
    for (const RingElem& c : pbar.M.v[i].a) lifted.a.push_back(section(c));
    m.v[i] = lifted;
  }
  return rel_display_make(th, pbar.n, pbar.d, pbar.c, m);
}

// ---------------------------------------------------------------------------
// solver

LiftSeed zero_seed(const Thickening& th, long d2, long c2, long d, long c) {
  RingElem z = r_zero(th->S);
  return LiftSeed{Mat<RingElem>(d2, d, z), Mat<RingElem>(d2, c, z), Mat<RingElem>(c2, d, z),
                  Mat<RingElem>(c2, c, z)};
}

std::vector<LiftSeed> enumerate_seeds(const Thickening& th, long d2, long c2, long d, long c,
                                      size_t cap) {
  size_t nk = th->pS_cap_a.size();
  size_t na = th->ideal_elems.size();
  size_t slots_k = static_cast<size_t>(d2 * d + c2 * d + c2 * c);
  size_t slots_a = static_cast<size_t>(d2 * c);
  double total = 1;
  for (size_t i = 0; i < slots_k; ++i) total *= static_cast<double>(nk);
  for (size_t i = 0; i < slots_a; ++i) total *= static_cast<double>(na);
  if (total > static_cast<double>(cap)) throw MathError("enumerate_seeds: seed space too large");
  std::vector<LiftSeed> out;
  size_t count = static_cast<size_t>(total);
  for (size_t idx = 0; idx < count; ++idx) {
    size_t k = idx;
    LiftSeed s = zero_seed(th, d2, c2, d, c);
    auto next_k = [&]() {
      RingElem e = th->pS_cap_a[k % nk];
      k /= nk;
      return e;
    };
    auto next_a = [&]() {
      RingElem e = th->ideal_elems[k % na];
      k /= na;
      return e;
    };
    for (auto& e : s.Xn.v) e = next_k();
    for (auto& e : s.Zn.v) e = next_k();
    for (auto& e : s.Yn.v) e = next_k();
    for (auto& e : s.Jn.v) e = next_a();
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

void check_seed(const Thickening& th, const LiftSeed& seed) {
  for (const RingElem& e : seed.Xn.v)
    if (!th->in_pS_cap_a(e)) throw MathError("seed: X(n) entry outside pS cap a");
  for (const RingElem& e : seed.Zn.v)
    if (!th->in_pS_cap_a(e)) throw MathError("seed: Z(n) entry outside pS cap a");
  for (const RingElem& e : seed.Yn.v)
    if (!th->in_pS_cap_a(e)) throw MathError("seed: Y(n) entry outside pS cap a");
  for (const RingElem& e : seed.Jn.v)
    if (!th->in_ideal(e)) throw MathError("seed: J(n) entry outside the kernel ideal");
}

// backward recursion on the per-log-coordinate equations; defect(i) are the
// log coordinates of the relation defect of the initial candidate
LiftSolution solve_recursion(const RelDisplay& p, const RelDisplay& pprime,
                             const std::vector<Mat<RingElem>>& defect, const LiftSeed& seed) {
  const Thickening& th = p.th;
  long n = p.n;
  long d2 = pprime.d, c2 = pprime.c;
  LiftSolution sol;
  sol.n = n;
  sol.H.assign(static_cast<size_t>(n) + 1,
               HBlock{seed.Xn, seed.Jn, seed.Zn, seed.Yn});
  auto block = [&](const Mat<RingElem>& full, long which) {
    // split an h2 x h matrix into X J Z Y blocks
    switch (which) {
      case 0: return mat_slice(full, 0, d2, 0, p.d);
      case 1: return mat_slice(full, 0, d2, p.d, p.h());
      case 2: return mat_slice(full, d2, d2 + c2, 0, p.d);
      default: return mat_slice(full, d2, d2 + c2, p.d, p.h());
    }
  };
  for (long i = n - 1; i >= 0; --i) {
    const HBlock& nxt = sol.H[static_cast<size_t>(i) + 1];
    Mat<RingElem> k(0, 0, r_zero(th->S));
    if (i == n - 1) {
      // (X(n) J(n) ; p Z(n) Y(n))
      k = mat_block(nxt.X, nxt.J, mat_scal_r(th->S->p, nxt.Z), nxt.Y);
    } else {
      // (p X(i+1) J(i+1) ; p^2 Z(i+1) p Y(i+1))
      k = mat_block(mat_scal_r(th->S->p, nxt.X), nxt.J,
                    mat_scal_r(th->S->p * th->S->p, nxt.Z), mat_scal_r(th->S->p, nxt.Y));
    }
    Mat<RingElem> wi_mp = mat_ghost(pprime.M, i);
    Mat<RingElem> wi_minv = mat_ghost(p.Minv, i);
    Mat<RingElem> hi = mat_mul(mat_add(defect[static_cast<size_t>(i)], mat_mul(wi_mp, k)), wi_minv);
    for (const RingElem& e : hi.v)
      if (!th->in_ideal(e))
        throw MathError("lift solver: recursion left the kernel ideal");
    sol.H[static_cast<size_t>(i)] = HBlock{block(hi, 0), block(hi, 1), block(hi, 2), block(hi, 3)};
  }
  return sol;
}

// assemble alpha0 + H where alpha0 is a relative morphism and H holds kernel
// coordinates; H[0..n-1] feed the a-coordinates, H[n] the x_n slot
RelMorphism assemble(const RelMorphism& alpha0, const LiftSolution& sol) {
  const Thickening& th = alpha0.src.th;
  long n = alpha0.src.n;
  RelMorphism r = alpha0;
  auto add_kernel = [&](Mat<CWitt>& blockM, auto pick) {
    for (long i = 0; i < blockM.rows; ++i)
      for (long j = 0; j < blockM.cols; ++j) {
        KernelElem ke{th, {}, pick(sol.H[static_cast<size_t>(n)], i, j)};
        for (long lvl = 0; lvl < n; ++lvl)
          ke.a.push_back(pick(sol.H[static_cast<size_t>(lvl)], i, j));
        blockM.at(i, j) = cw_add(blockM.at(i, j), k_to_cwitt(ke));
      }
  };
  add_kernel(r.X, [](const HBlock& h, long i, long j) { return h.X.at(i, j); });
  add_kernel(r.Z, [](const HBlock& h, long i, long j) { return h.Z.at(i, j); });
  add_kernel(r.Y, [](const HBlock& h, long i, long j) { return h.Y.at(i, j); });
  for (long i = 0; i < r.J.rows; ++i)
    for (long j = 0; j < r.J.cols; ++j) {
      WittVec eta{th->S, {}};
      for (long lvl = 1; lvl <= n; ++lvl)
        eta.a.push_back(sol.H[static_cast<size_t>(lvl)].J.at(i, j));
      JElem jh = j_make(th, sol.H[0].J.at(i, j), eta);
      r.J.at(i, j) = j_add(r.J.at(i, j), jh);
    }
  return r;
}

// log coordinates of the relation defect of a candidate morphism
std::vector<Mat<RingElem>> relation_defect(const RelMorphism& a) {
  const RelDisplay &p = a.src, &q = a.dst;
  const Ring& s = p.th->S;
  long n = p.n;
  Mat<WittVec> sig = mat_block(mat_frob_cw(a.X), mat_sigma_dot(a.J, s, n),
                               mat_scal_int_w(s->p, mat_frob_cw(a.Z)), mat_frob_cw(a.Y));
  Mat<WittVec> bar = mat_block(mat_res_cw(a.X), mat_jbar(a.J, s, n), mat_res_cw(a.Z),
                               mat_res_cw(a.Y));
  Mat<WittVec> defect_w(sig.rows, p.h(), w_zero(s, n));
  Mat<WittVec> lhs = mat_mul(q.M, sig);
  Mat<WittVec> rhs = mat_mul(bar, p.M);
  for (size_t k = 0; k < defect_w.v.size(); ++k) defect_w.v[k] = w_sub(lhs.v[k], rhs.v[k]);
  std::vector<Mat<RingElem>> defect;
  for (long i = 0; i < n; ++i) {
    Mat<RingElem> di(defect_w.rows, defect_w.cols, r_zero(s));
    for (long r2 = 0; r2 < defect_w.rows; ++r2)
      for (long c2 = 0; c2 < defect_w.cols; ++c2) {
        RingElem e = defect_w.at(r2, c2).a[static_cast<size_t>(i)];
        if (!p.th->in_ideal(e))
          throw MathError("lift: defect not in W(a); reductions over R differ");
        di.at(r2, c2) = e;
      }
    // the recursion solves  defect + w_i(M') K = H(i) w_i(M), i.e. the defect
    // enters with the sign of eta = M' - M in the identity-lift case
    defect.push_back(di);
  }
  return defect;
}

}  // namespace

std::pair<LiftSolution, RelMorphism> lift_solve(const RelDisplay& p, const RelDisplay& pprime,
                                                const LiftSeed& seed) {
  if (p.n != pprime.n || p.d != pprime.d || p.c != pprime.c)
    throw MathError("lift_solve: shape mismatch");
  check_seed(p.th, seed);
  Display rp = reduce_display(p), rq = reduce_display(pprime);
  if (!(rp.M == rq.M)) throw MathError("lift_solve: reductions over R differ");
  RelMorphism alpha0 = rel_identity(p);
  alpha0.dst = pprime;  // candidate 1 : P -> P'
  std::vector<Mat<RingElem>> defect = relation_defect(alpha0);
  // relation(alpha0 + H) = 0  <=>  -defect(i) satisfies the eta-equations; the
  // recursion uses eta + w_i(M') K = H(i) w_i(M) with eta = M' - M, and
  // relation_defect(alpha0) = M' * 1 - 1 * M = eta, matching directly
  LiftSolution sol = solve_recursion(p, pprime, defect, seed);
  RelMorphism alpha = assemble(alpha0, sol);
  return {sol, alpha};
}

std::pair<LiftSolution, RelMorphism> lift_morphism(const Morphism& abar, const RelDisplay& p,
                                                   const RelDisplay& pprime,
                                                   const LiftSeed& seed) {
  check_seed(p.th, seed);
  Display rp = reduce_display(p), rq = reduce_display(pprime);
  if (!(rp.M == abar.src.M) || !(rq.M == abar.dst.M))
    throw MathError("lift_morphism: reductions do not match the given morphism");
  // entrywise lift of abar through the default section
  const Thickening& th = p.th;
  auto lift_cw = [&](const Mat<CWitt>& m) {
    Mat<CWitt> out(m.rows, m.cols, cw_zero(th->S, p.n));
    for (size_t i = 0; i < m.v.size(); ++i) {
      WittVec rep{th->S, {}};
      for (const RingElem& c : m.v[i].rep.a) rep.a.push_back(th->section(c));
      out.v[i] = cw_from_rep(rep);
    }
    return out;
  };
  RelMorphism alpha0;
  alpha0.src = p;
  alpha0.dst = pprime;
  alpha0.X = lift_cw(abar.X);
  alpha0.Z = lift_cw(abar.Z);
  alpha0.Y = lift_cw(abar.Y);
  alpha0.J = Mat<JElem>(abar.J.rows, abar.J.cols, j_zero(th, p.n));
  for (size_t i = 0; i < abar.J.v.size(); ++i) {
    WittVec eta{th->S, {}};
    for (const RingElem& c : abar.J.v[i].a) eta.a.push_back(th->section(c));
    alpha0.J.v[i] = j_make(th, r_zero(th->S), eta);
  }
  std::vector<Mat<RingElem>> defect = relation_defect(alpha0);
  LiftSolution sol = solve_recursion(p, pprime, defect, seed);
  RelMorphism alpha = assemble(alpha0, sol);
  return {sol, alpha};
}

long uniqueness_level(long n, long e, long m) { return n - m * (e + 1) - 1; }

bool truncation_uniqueness_check(const LiftSolution& s1, const LiftSolution& s2, long e, long m) {
  if (s1.n != s2.n) throw MathError("uniqueness check: level mismatch");
  long n = s1.n;
  if (n <= m * (e + 1) + 1)
    throw MathError("uniqueness check: hypothesis n > m(e+1)+1 violated");
  long lvl = uniqueness_level(n, e, m);
  for (long i = 0; i <= lvl; ++i)
    if (!(s1.H[static_cast<size_t>(i)] == s2.H[static_cast<size_t>(i)])) return false;
  return true;
}

std::pair<Mat<RingElem>, Mat<RingElem>> delta_matrices(const RelDisplay& pprime,
                                                       const RelDisplay& p, long i) {
  if (i >= p.n) throw MathError("delta_matrices: i out of range");
  Int pr = p.th->S->p;
  auto blocks = [&](const Mat<WittVec>& mat, long d) {
    Mat<RingElem> g = mat_ghost(mat, i);
    return std::array<Mat<RingElem>, 4>{
        mat_slice(g, 0, d, 0, d), mat_slice(g, 0, d, d, g.cols),
        mat_slice(g, d, g.rows, 0, d), mat_slice(g, d, g.rows, d, g.cols)};
  };
  auto [a2, b2, c2, d2] = blocks(pprime.M, pprime.d);
  Mat<RingElem> dprime = mat_block(a2, mat_scal_r(pr, b2), c2, mat_scal_r(pr, d2));
  auto [ab, bb, cb, db] = blocks(p.Minv, p.d);
  Mat<RingElem> dbreve = mat_block(mat_scal_r(pr, ab), mat_scal_r(pr, bb), cb, db);
  return {dprime, dbreve};
}

bool delta_product_check(const RelDisplay& p, long e, std::string* why) {
  const Thickening& th = p.th;
  Int pr = th->S->p;
  // p^k S membership sets
  auto in_pkS = [&](const RingElem& x, long k) {
    Int pk = 1;
    for (long i = 0; i < k; ++i) pk *= pr;
    for (unsigned long long idx = 0; idx < th->S->size; ++idx)
      if (r_scal(pk, r_from_index(th->S, idx)) == x) return true;
    return false;
  };
  long n = p.n;
  for (long k = 1; k * (e + 1) <= n; ++k) {
    long window = k * (e + 1);
    for (long i = 0; i + window <= n; ++i) {
      Mat<RingElem> prod = delta_matrices(p, p, i).second;
      for (long j = 1; j < window; ++j)
        prod = mat_mul(delta_matrices(p, p, i + j).second, prod);
      for (const RingElem& x : prod.v)
        if (!in_pkS(x, k)) {
          if (why) {
            std::ostringstream os;
            os << "window of " << window << " factors at i=" << i << " leaves p^" << k << " S";
            *why = os.str();
          }
          return false;
        }
    }
  }
  return true;
}

CrystalModule crystal_eval(const Display& pbar, const Thickening& th, long order_bound) {
  return crystal_eval_with(pbar, th, coordinate_lift(pbar, th), order_bound);
}

CrystalModule crystal_eval_with(const Display& pbar, const Thickening& th, const RelDisplay& lift,
                                long order_bound) {
  auto e = nilpotence_order(pbar, order_bound);
  if (!e) throw MathError("crystal: display is not nilpotent within the bound");
  if (pbar.n <= th->m * (*e + 1) + 1)
    throw MathError("crystal: hypothesis n > m(e+1)+1 violated");
  if (!(reduce_display(lift).M == pbar.M)) throw MathError("crystal: lift does not reduce to P");
  CrystalModule cm;
  cm.th = th;
  cm.rank = pbar.h();
  for (long i = 0; i < pbar.d; ++i) cm.basis.push_back("T" + std::to_string(i));
  for (long i = 0; i < pbar.c; ++i) cm.basis.push_back("L" + std::to_string(i));
  cm.lift = lift;
  return cm;
}

Mat<RingElem> crystal_compare(const RelDisplay& lift1, const RelDisplay& lift2,
                              const LiftSeed& seed) {
  auto [sol, alpha] = lift_solve(lift1, lift2, seed);
  Mat<CWitt> pm = rel_p_matrix(alpha);
  Mat<RingElem> out(pm.rows, pm.cols, r_zero(lift1.th->S));
  for (size_t i = 0; i < pm.v.size(); ++i) out.v[i] = pm.v[i].w0res();
  return out;
}

Display hodge_lift_display(const RelDisplay& prel, const Mat<RingElem>& phi) {
  const Thickening& th = prel.th;
  if (phi.rows != prel.d || phi.cols != prel.c) throw MathError("hodge lift: phi shape mismatch");
  for (const RingElem& e : phi.v)
    if (!th->in_ideal(e)) throw MathError("hodge lift: phi entries must lie in the kernel ideal");
  // left-multiply by ((1 [phi]) (0 1))
  Mat<WittVec> u = mat_identity_w(th->S, prel.n, prel.h());
  for (long i = 0; i < prel.d; ++i)
    for (long j = 0; j < prel.c; ++j) u.at(i, prel.d + j) = teichmuller(phi.at(i, j), prel.n);
  Mat<WittVec> m = mat_mul(u, prel.M);
  return display_make(th->S, prel.n, prel.d, prel.c, m);
}

std::optional<Morphism> find_absolute_iso(const Display& p1, const Display& p2,
                                          const Thickening& th) {
  RelDisplay r1 = absolute_to_relative(p1, th);
  RelDisplay r2 = absolute_to_relative(p2, th);
  if (!(reduce_display(r1).M == reduce_display(r2).M)) return std::nullopt;
  for (const LiftSeed& seed : enumerate_seeds(th, p1.d, p1.c, p1.d, p1.c)) {
    auto [sol, alpha] = lift_solve(r1, r2, seed);
    bool apart_zero = true;
    for (const JElem& j : alpha.J.v)
      if (!j.apart.is_zero()) apart_zero = false;
    if (!apart_zero) continue;
    // the relative morphism comes from an absolute one
    Morphism m;
    m.src = p1;
    m.dst = p2;
    m.X = alpha.X;
    m.Z = alpha.Z;
    m.Y = alpha.Y;
    m.J = Mat<WittVec>(alpha.J.rows, alpha.J.cols, w_zero(th->S, p1.n));
    for (size_t i = 0; i < alpha.J.v.size(); ++i) m.J.v[i] = alpha.J.v[i].eta;
    if (morphism_validate(m).ok) return m;
  }
  return std::nullopt;
}

}  // namespace tdk
