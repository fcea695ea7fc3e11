#include "tdk/matrix.hpp"

namespace tdk {

RingElem ring_mat_det(const Mat<RingElem>& m) {
  if (m.rows != m.cols) throw MathError("det: not square");
  long n = m.rows;
  if (n == 0) return r_one(m.zero.ring);
  if (n == 1) return m.at(0, 0);
  RingElem acc = r_zero(m.zero.ring);
  for (long j = 0; j < n; ++j) {
    Mat<RingElem> minor(n - 1, n - 1, m.zero);
    for (long i = 1; i < n; ++i) {
      long cc = 0;
      for (long k = 0; k < n; ++k) {
        if (k == j) continue;
        minor.at(i - 1, cc++) = m.at(i, k);
      }
    }
    RingElem term = r_mul(m.at(0, j), ring_mat_det(minor));
    acc = (j % 2 == 0) ? r_add(acc, term) : r_sub(acc, term);
  }
  return acc;
}

std::optional<Mat<RingElem>> ring_mat_inverse(const Mat<RingElem>& m) {
  if (m.rows != m.cols) throw MathError("inverse: not square");
  long n = m.rows;
  RingElem det = ring_mat_det(m);
  auto dinv = unit_inverse(det);
  if (!dinv) return std::nullopt;
  Mat<RingElem> adj(n, n, m.zero);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      Mat<RingElem> minor(n - 1, n - 1, m.zero);
      for (long r = 0; r < n; ++r) {
        if (r == i) continue;
        long cc = 0;
        for (long c = 0; c < n; ++c) {
          if (c == j) continue;
          minor.at(r < i ? r : r - 1, cc++) = m.at(r, c);
        }
      }
      RingElem cof = ring_mat_det(minor);
      if ((i + j) % 2 == 1) cof = r_neg(cof);
      adj.at(j, i) = r_mul(cof, *dinv);  // transpose of cofactors
    }
  return adj;
}

Mat<RingElem> mat_w0(const Mat<WittVec>& m) {
  Mat<RingElem> r(m.rows, m.cols, r_zero(m.zero.ring));
  for (size_t i = 0; i < m.v.size(); ++i)
    r.v[i] = m.v[i].len() > 0 ? m.v[i].a[0] : r_zero(m.zero.ring);
  return r;
}

Mat<WittVec> mat_identity_w(const Ring& r, long n, long h) {
  Mat<WittVec> m(h, h, w_zero(r, n));
  for (long i = 0; i < h; ++i) m.at(i, i) = w_int(r, n, 1);
  return m;
}

Mat<CWitt> mat_identity_cw(const Ring& r, long n, long h) {
  Mat<CWitt> m(h, h, cw_zero(r, n));
  for (long i = 0; i < h; ++i) m.at(i, i) = cw_one(r, n);
  return m;
}

Mat<WittVec> mat_scal_int_w(Int k, const Mat<WittVec>& m) {
  Mat<WittVec> r = m;
  for (auto& e : r.v) e = w_scal_int(k, e);
  return r;
}

std::optional<Mat<WittVec>> witt_mat_inverse(const Mat<WittVec>& m) {
  if (m.rows != m.cols) throw MathError("witt inverse: not square");
  long h = m.rows;
  const Ring& ring = m.zero.ring;
  long n = m.zero.len();
  if (h == 0) return Mat<WittVec>(0, 0, w_zero(ring, n));
  auto r0inv = ring_mat_inverse(mat_w0(m));
  if (!r0inv) return std::nullopt;
  Mat<WittVec> x(h, h, w_zero(ring, n));
  for (long i = 0; i < h; ++i)
    for (long j = 0; j < h; ++j) x.at(i, j) = teichmuller(r0inv->at(i, j), n);
  Mat<WittVec> id = mat_identity_w(ring, n, h);
  Mat<WittVec> two = mat_scal_int_w(2, id);
  for (int it = 0; it < 64; ++it) {
    Mat<WittVec> mx = mat_mul(m, x);
    if (mx == id) return x;
    // X <- X (2 - M X)
    Mat<WittVec> corr = two;
    for (size_t k = 0; k < corr.v.size(); ++k) corr.v[k] = w_sub(corr.v[k], mx.v[k]);
    x = mat_mul(x, corr);
  }
  throw MathError("witt inverse: Newton iteration failed to converge");
}

Mat<WittVec> mat_apply_hom_w(const RingHom& h, const Mat<WittVec>& m, long len) {
  Mat<WittVec> r(m.rows, m.cols, w_zero(h.dst, len));
  for (size_t i = 0; i < m.v.size(); ++i) r.v[i] = w_apply_hom(h, m.v[i]);
  return r;
}

}  // namespace tdk
