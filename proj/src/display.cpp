#include "tdk/display.hpp"

#include <sstream>

namespace tdk {

namespace {

Mat<WittVec> mat_frob(const Mat<CWitt>& m) {
  Mat<WittVec> r(m.rows, m.cols, m.zero.frob());
  for (size_t i = 0; i < m.v.size(); ++i) r.v[i] = m.v[i].frob();
  return r;
}

Mat<WittVec> mat_res(const Mat<CWitt>& m) {
  Mat<WittVec> r(m.rows, m.cols, m.zero.res());
  for (size_t i = 0; i < m.v.size(); ++i) r.v[i] = m.v[i].res();
  return r;
}

// V applied to the restriction of J to length n-1 (the bar convention)
Mat<WittVec> mat_vjbar(const Mat<WittVec>& j) {
  long n = j.zero.len();
  Mat<WittVec> r(j.rows, j.cols, w_zero(j.zero.ring, n));
  for (size_t i = 0; i < j.v.size(); ++i) r.v[i] = verschiebung(restrict_w(j.v[i], n - 1));
  return r;
}

Mat<CWitt> mat_kappa_vj(const Mat<WittVec>& j) {
  long n = j.zero.len();
  Mat<CWitt> r(j.rows, j.cols, cw_zero(j.zero.ring, n));
  for (size_t i = 0; i < j.v.size(); ++i) r.v[i] = CWitt{verschiebung(j.v[i])};
  return r;
}

// sigma-side matrix ((F(X) J) (p F(Z) F(Y))) of a morphism
Mat<WittVec> sigma_matrix(const Morphism& a) {
  return mat_block(mat_frob(a.X), a.J, mat_scal_int_w(a.src.R->p, mat_frob(a.Z)),
                   mat_frob(a.Y));
}

// res-side matrix ((Res X  V Jbar) (Res Z  Res Y))
Mat<WittVec> res_matrix(const Morphism& a) {
  return mat_block(mat_res(a.X), mat_vjbar(a.J), mat_res(a.Z), mat_res(a.Y));
}

}  // namespace

Mat<WittVec> Display::A() const { return mat_slice(M, 0, d, 0, d); }
Mat<WittVec> Display::B() const { return mat_slice(M, 0, d, d, d + c); }
Mat<WittVec> Display::C() const { return mat_slice(M, d, d + c, 0, d); }
Mat<WittVec> Display::D() const { return mat_slice(M, d, d + c, d, d + c); }

Display display_make(const Ring& R, long n, long d, long c, const Mat<WittVec>& M) {
  if (M.rows != d + c || M.cols != d + c) throw MathError("display: matrix shape mismatch");
  for (const WittVec& e : M.v)
    if (e.len() != n || !ring_equal(e.ring, R)) throw MathError("display: entry length or ring mismatch");
  auto inv = witt_mat_inverse(M);
  if (!inv) throw MathError("display: matrix not invertible (w0 of det is not a unit)");
  return Display{R, n, d, c, M, *inv};
}

Display display_multiplicative(const Ring& R, long n) {
  Mat<WittVec> m(1, 1, w_zero(R, n));
  m.at(0, 0) = w_int(R, n, 1);
  return display_make(R, n, 1, 0, m);
}

Display display_etale(const Ring& R, long n) {
  Mat<WittVec> m(1, 1, w_zero(R, n));
  m.at(0, 0) = w_int(R, n, 1);
  return display_make(R, n, 0, 1, m);
}

Display display_supersingular(const Ring& R, long n) {
  Mat<WittVec> m(2, 2, w_zero(R, n));
  m.at(0, 1) = w_int(R, n, 1);
  m.at(1, 0) = w_int(R, n, 1);
  return display_make(R, n, 1, 1, m);
}

Violation morphism_validate(const Morphism& a) {
  const Display &p = a.src, &q = a.dst;
  if (a.X.rows != q.d || a.X.cols != p.d || a.Z.rows != q.c || a.Z.cols != p.d ||
      a.Y.rows != q.c || a.Y.cols != p.c || a.J.rows != q.d || a.J.cols != p.c)
    return {false, "shape", -1, -1, "block shape mismatch"};
  Mat<WittVec> lhs = mat_mul(q.M, sigma_matrix(a));
  Mat<WittVec> rhs = mat_mul(res_matrix(a), p.M);
  for (long i = 0; i < lhs.rows; ++i)
    for (long j = 0; j < lhs.cols; ++j)
      if (!(lhs.at(i, j) == rhs.at(i, j))) {
        std::ostringstream os;
        os << "relation fails at entry (" << i << "," << j << ")";
        return {false, "relation", i, j, os.str()};
      }
  // faithfulness datum: the P-map determines J back
  Mat<WittVec> jrec = morphism_recover_j(p, q, morphism_p_matrix(a));
  for (long i = 0; i < a.J.rows; ++i)
    for (long j = 0; j < a.J.cols; ++j)
      if (!(jrec.at(i, j) == a.J.at(i, j)))
        return {false, "J-recovery", i, j, "induced P-map does not determine J"};
  return {};
}

Morphism morphism_identity(const Display& p) {
  return Morphism{p, p, mat_identity_cw(p.R, p.n, p.d), Mat<CWitt>(p.c, p.d, cw_zero(p.R, p.n)),
                  mat_identity_cw(p.R, p.n, p.c), Mat<WittVec>(p.d, p.c, w_zero(p.R, p.n))};
}

Morphism morphism_compose(const Morphism& a2, const Morphism& a1) {
  if (!(a1.dst.M == a2.src.M) || a1.dst.n != a2.src.n)
    throw MathError("compose: middle display mismatch");
  Morphism r;
  r.src = a1.src;
  r.dst = a2.dst;
  r.X = mat_add(mat_mul(a2.X, a1.X), mat_mul(mat_kappa_vj(a2.J), a1.Z));
  r.J = mat_add(mat_mul(mat_frob(a2.X), a1.J), mat_mul(a2.J, mat_frob(a1.Y)));
  r.Z = mat_add(mat_mul(a2.Z, a1.X), mat_mul(a2.Y, a1.Z));
  r.Y = mat_add(mat_mul(a2.Z, mat_kappa_vj(a1.J)), mat_mul(a2.Y, a1.Y));
  return r;
}

Mat<CWitt> morphism_p_matrix(const Morphism& a) {
  return mat_block(a.X, mat_kappa_vj(a.J), a.Z, a.Y);
}

Mat<WittVec> morphism_recover_j(const Display& src, const Display& dst, const Mat<CWitt>& pmat) {
  long d = src.d, c = src.c, d2 = dst.d, c2 = dst.c;
  Mat<CWitt> x = mat_slice(pmat, 0, d2, 0, d);
  Mat<CWitt> kvj = mat_slice(pmat, 0, d2, d, d + c);
  Mat<CWitt> z = mat_slice(pmat, d2, d2 + c2, 0, d);
  Mat<CWitt> y = mat_slice(pmat, d2, d2 + c2, d, d + c);
  // res of the kappa-block is V(Jbar), all the bar data we need
  Mat<WittVec> vjbar = mat_res(kvj);
  // right-hand columns of the relation: (Res X * B + V Jbar * D ; Res Z * B + Res Y * D)
  Mat<WittVec> top = mat_add(mat_mul(mat_res(x), src.B()), mat_mul(vjbar, src.D()));
  Mat<WittVec> bot = mat_add(mat_mul(mat_res(z), src.B()), mat_mul(mat_res(y), src.D()));
  Mat<WittVec> stacked = mat_vjoin(top, bot);
  // (J ; F(Y)) = Minv' * stacked; J is the top block
  Mat<WittVec> sol = mat_mul(dst.Minv, stacked);
  return mat_slice(sol, 0, d2, 0, c);
}

std::pair<Display, Morphism> transport_display(const Display& p, const Mat<CWitt>& x,
                                               const Mat<WittVec>& j, const Mat<CWitt>& z,
                                               const Mat<CWitt>& y) {
  Morphism a;
  a.src = p;
  a.X = x;
  a.J = j;
  a.Z = z;
  a.Y = y;
  Mat<WittVec> sig = sigma_matrix(a);
  auto siginv = witt_mat_inverse(sig);
  if (!siginv) throw MathError("transport: sigma-side block matrix not invertible");
  Mat<WittVec> res = res_matrix(a);
  if (!witt_mat_inverse(res)) throw MathError("transport: res-side block matrix not invertible");
  Mat<WittVec> mprime = mat_mul(mat_mul(res, p.M), *siginv);
  Display q = display_make(p.R, p.n, p.d, p.c, mprime);
  a.dst = q;
  return {q, a};
}

std::vector<WittVec> f_eval(const Display& p, const PVec& v) {
  if (static_cast<long>(v.t.size()) != p.d || static_cast<long>(v.l.size()) != p.c)
    throw MathError("f_eval: shape mismatch");
  Mat<WittVec> col(p.h(), 1, w_zero(p.R, p.n));
  for (long i = 0; i < p.d; ++i) col.at(i, 0) = v.t[static_cast<size_t>(i)].frob();
  for (long i = 0; i < p.c; ++i) col.at(p.d + i, 0) = v.l[static_cast<size_t>(i)].frob();
  Mat<WittVec> scaled = p.M;
  for (long i = 0; i < p.h(); ++i)
    for (long jj = p.d; jj < p.h(); ++jj) scaled.at(i, jj) = w_scal_int(p.R->p, scaled.at(i, jj));
  Mat<WittVec> out = mat_mul(scaled, col);
  return out.v;
}

std::vector<WittVec> fdot_eval(const Display& p, const QVec& q) {
  if (static_cast<long>(q.t.size()) != p.d || static_cast<long>(q.l.size()) != p.c)
    throw MathError("fdot_eval: shape mismatch");
  Mat<WittVec> col(p.h(), 1, w_zero(p.R, p.n));
  for (long i = 0; i < p.d; ++i) col.at(i, 0) = q.t[static_cast<size_t>(i)].eta;
  for (long i = 0; i < p.c; ++i) col.at(p.d + i, 0) = q.l[static_cast<size_t>(i)].frob();
  Mat<WittVec> out = mat_mul(p.M, col);
  return out.v;
}

PVec iota(const Display&, const QVec& q) {
  PVec v;
  for (const IElem& e : q.t) v.t.push_back(i_kappa(e));
  v.l = q.l;
  return v;
}

Mat<WittVec> vsharp_matrix(const Display& p) {
  Mat<WittVec> n = p.Minv;
  for (long i = 0; i < p.d; ++i)
    for (long j = 0; j < p.h(); ++j) n.at(i, j) = w_scal_int(p.R->p, n.at(i, j));
  return n;
}

namespace {

Mat<RingElem> mat_entry_pow(const Mat<RingElem>& m, unsigned long long e) {
  Mat<RingElem> r = m;
  for (auto& x : r.v) x = r_pow(x, e);
  return r;
}

bool mat_is_zero(const Mat<RingElem>& m) {
  return std::all_of(m.v.begin(), m.v.end(), [](const RingElem& e) { return e.is_zero(); });
}

Mat<RingElem> dhat0(const Display& p, const std::pair<Ring, RingHom>& modp) {
  Mat<WittVec> dbrk = mat_slice(p.Minv, p.d, p.h(), p.d, p.h());
  Mat<RingElem> d0 = mat_w0(dbrk);
  Mat<RingElem> r(d0.rows, d0.cols, r_zero(modp.first));
  for (size_t i = 0; i < d0.v.size(); ++i) r.v[i] = hom_apply(modp.second, d0.v[i]);
  return r;
}

}  // namespace

std::optional<long> nilpotence_order(const Display& p, long bound) {
  if (p.c == 0) return 0;  // V-sharp acts on the zero module
  auto modp = ring_mod_p(p.R);
  Mat<RingElem> d0 = dhat0(p, modp);
  Mat<RingElem> acc = d0;
  unsigned long long pe = 1;
  for (long e = 1; e <= bound; ++e) {
    if (e > 1) acc = mat_mul(mat_entry_pow(d0, pe), acc);
    if (mat_is_zero(acc)) return e;
    pe *= static_cast<unsigned long long>(p.R->p);
  }
  return std::nullopt;
}

std::optional<long> nilpotence_order_oracle(const Display& p, long bound) {
  if (p.c == 0) return 0;
  auto modp = ring_mod_p(p.R);
  Mat<RingElem> d0 = dhat0(p, modp);
  // iterate q -> Dhat0 * q^(p) on the standard basis vectors
  std::vector<Mat<RingElem>> basis;
  for (long j = 0; j < p.c; ++j) {
    Mat<RingElem> e(p.c, 1, r_zero(modp.first));
    e.at(j, 0) = r_one(modp.first);
    basis.push_back(e);
  }
  for (long e = 1; e <= bound; ++e) {
    bool allzero = true;
    for (auto& v : basis) {
      v = mat_mul(d0, mat_entry_pow(v, static_cast<unsigned long long>(p.R->p)));
      if (!mat_is_zero(v)) allzero = false;
    }
    if (allzero) return e;
  }
  return std::nullopt;
}

Display truncate_display(const Display& p, long m) {
  if (m > p.n) throw MathError("truncate: m > n");
  Mat<WittVec> mm(p.h(), p.h(), w_zero(p.R, m));
  Mat<WittVec> mi(p.h(), p.h(), w_zero(p.R, m));
  for (size_t i = 0; i < p.M.v.size(); ++i) {
    mm.v[i] = restrict_w(p.M.v[i], m);
    mi.v[i] = restrict_w(p.Minv.v[i], m);
  }
  return Display{p.R, m, p.d, p.c, mm, mi};
}

Morphism truncate_morphism(const Morphism& a, long m) {
  Morphism r;
  r.src = truncate_display(a.src, m);
  r.dst = truncate_display(a.dst, m);
  auto trunc_cw = [&](const Mat<CWitt>& mat) {
    Mat<CWitt> out(mat.rows, mat.cols, cw_truncate(mat.zero, m));
    for (size_t i = 0; i < mat.v.size(); ++i) out.v[i] = cw_truncate(mat.v[i], m);
    return out;
  };
  r.X = trunc_cw(a.X);
  r.Z = trunc_cw(a.Z);
  r.Y = trunc_cw(a.Y);
  r.J = Mat<WittVec>(a.J.rows, a.J.cols, w_zero(a.src.R, m));
  for (size_t i = 0; i < a.J.v.size(); ++i) r.J.v[i] = restrict_w(a.J.v[i], m);
  return r;
}

Display base_change_display(const Display& p, const RingHom& phi) {
  if (!ring_equal(phi.src, p.R)) throw MathError("base_change: hom source mismatch");
  Mat<WittVec> mm = mat_apply_hom_w(phi, p.M, p.n);
  Mat<WittVec> mi = mat_apply_hom_w(phi, p.Minv, p.n);
  return Display{phi.dst, p.n, p.d, p.c, mm, mi};
}

Morphism base_change_morphism(const Morphism& a, const RingHom& phi) {
  Morphism r;
  r.src = base_change_display(a.src, phi);
  r.dst = base_change_display(a.dst, phi);
  auto bc_cw = [&](const Mat<CWitt>& mat) {
    Mat<CWitt> out(mat.rows, mat.cols, cw_apply_hom(phi, mat.zero));
    for (size_t i = 0; i < mat.v.size(); ++i) out.v[i] = cw_apply_hom(phi, mat.v[i]);
    return out;
  };
  r.X = bc_cw(a.X);
  r.Z = bc_cw(a.Z);
  r.Y = bc_cw(a.Y);
  r.J = mat_apply_hom_w(phi, a.J, a.src.n);
  return r;
}

Display direct_sum(const Display& p1, const Display& p2) {
  if (!ring_equal(p1.R, p2.R) || p1.n != p2.n) throw MathError("direct_sum: ring/level mismatch");
  long d = p1.d + p2.d, c = p1.c + p2.c;
  Mat<WittVec> m(d + c, d + c, w_zero(p1.R, p1.n));
  auto put = [&](const Mat<WittVec>& blk, long r0, long c0) {
    for (long i = 0; i < blk.rows; ++i)
      for (long j = 0; j < blk.cols; ++j) m.at(r0 + i, c0 + j) = blk.at(i, j);
  };
  put(p1.A(), 0, 0);
  put(p2.A(), p1.d, p1.d);
  put(p1.B(), 0, d);
  put(p2.B(), p1.d, d + p1.c);
  put(p1.C(), d, 0);
  put(p2.C(), d + p1.c, p1.d);
  put(p1.D(), d, d);
  put(p2.D(), d + p1.c, d + p1.c);
  return display_make(p1.R, p1.n, d, c, m);
}

RingElem random_elem(std::mt19937_64& rng, const Ring& r) {
  return r_from_index(r, rng() % r->size);
}

WittVec random_witt(std::mt19937_64& rng, const Ring& r, long len) {
  WittVec v{r, {}};
  for (long i = 0; i < len; ++i) v.a.push_back(random_elem(rng, r));
  return v;
}

CWitt random_cwitt(std::mt19937_64& rng, const Ring& r, long n) {
  return CWitt{random_witt(rng, r, n + 1)};
}

Display random_display(std::mt19937_64& rng, const Ring& r, long n, long d, long c) {
  for (int tries = 0; tries < 1000; ++tries) {
    Mat<WittVec> m(d + c, d + c, w_zero(r, n));
    for (auto& e : m.v) e = random_witt(rng, r, n);
    if (ring_mat_inverse(mat_w0(m))) return display_make(r, n, d, c, m);
  }
  throw MathError("random_display: failed to sample an invertible matrix");
}

std::pair<Display, Morphism> random_transport(std::mt19937_64& rng, const Display& p) {
  for (int tries = 0; tries < 1000; ++tries) {
    Mat<CWitt> x(p.d, p.d, cw_zero(p.R, p.n));
    Mat<CWitt> y(p.c, p.c, cw_zero(p.R, p.n));
    Mat<CWitt> z(p.c, p.d, cw_zero(p.R, p.n));
    Mat<WittVec> j(p.d, p.c, w_zero(p.R, p.n));
    for (auto& e : x.v) e = random_cwitt(rng, p.R, p.n);
    for (auto& e : y.v) e = random_cwitt(rng, p.R, p.n);
    for (auto& e : z.v) e = random_cwitt(rng, p.R, p.n);
    for (auto& e : j.v) e = random_witt(rng, p.R, p.n);
    Morphism probe;
    probe.src = p;
    probe.X = x;
    probe.J = j;
    probe.Z = z;
    probe.Y = y;
    Mat<WittVec> sig = mat_block(mat_frob(x), j, mat_scal_int_w(p.R->p, mat_frob(z)), mat_frob(y));
    Mat<WittVec> res = mat_block(mat_res(x), mat_vjbar(j), mat_res(z), mat_res(y));
    if (!ring_mat_inverse(mat_w0(sig)) || !ring_mat_inverse(mat_w0(res))) continue;
    return transport_display(p, x, j, z, y);
  }
  throw MathError("random_transport: failed to sample invertible blocks");
}

}  // namespace tdk
