#pragma once

#include <functional>
#include <optional>

#include "tdk/witt.hpp"

namespace tdk {

// element op overload set used by the generic matrix routines
inline WittVec gadd(const WittVec& a, const WittVec& b) { return w_add(a, b); }
inline WittVec gmul(const WittVec& a, const WittVec& b) { return w_mul(a, b); }
inline CWitt gadd(const CWitt& a, const CWitt& b) { return cw_add(a, b); }
inline CWitt gmul(const CWitt& a, const CWitt& b) { return cw_mul(a, b); }
inline IElem gadd(const IElem& a, const IElem& b) { return i_add(a, b); }
inline IElem gmul(const CWitt& a, const IElem& b) { return i_act(a, b); }
inline IElem gmul(const IElem& a, const CWitt& b) { return i_act(b, a); }
inline JElem gadd(const JElem& a, const JElem& b) { return j_add(a, b); }
inline JElem gmul(const CWitt& a, const JElem& b) { return j_act(a, b); }
inline JElem gmul(const JElem& a, const CWitt& b) { return j_act(b, a); }
inline RingElem gadd(const RingElem& a, const RingElem& b) { return r_add(a, b); }
inline RingElem gmul(const RingElem& a, const RingElem& b) { return r_mul(a, b); }

template <class T>
struct Mat {
  long rows = 0, cols = 0;
  std::vector<T> v;
  T zero;  // prototype carrying ring/level context, used for empty sums

  Mat() = default;
  Mat(long r, long c, T z) : rows(r), cols(c), v(static_cast<size_t>(r * c), z), zero(std::move(z)) {}
  T& at(long i, long j) { return v[static_cast<size_t>(i * cols + j)]; }
  const T& at(long i, long j) const { return v[static_cast<size_t>(i * cols + j)]; }
  bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && v == o.v; }
};

template <class T>
Mat<T> mat_add(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> r = a;
  for (size_t i = 0; i < r.v.size(); ++i) r.v[i] = gadd(r.v[i], b.v[i]);
  return r;
}

template <class A, class B, class C>
Mat<C> mat_mul_gen(const Mat<A>& a, const Mat<B>& b, C zero) {
  Mat<C> r(a.rows, b.cols, std::move(zero));
  for (long i = 0; i < a.rows; ++i)
    for (long k = 0; k < a.cols; ++k)
      for (long j = 0; j < b.cols; ++j)
        r.at(i, j) = gadd(r.at(i, j), gmul(a.at(i, k), b.at(k, j)));
  return r;
}

template <class T>
Mat<T> mat_mul(const Mat<T>& a, const Mat<T>& b) {
  return mat_mul_gen(a, b, a.zero);
}
inline Mat<IElem> mat_mul(const Mat<CWitt>& a, const Mat<IElem>& b) {
  return mat_mul_gen(a, b, b.zero);
}
inline Mat<IElem> mat_mul(const Mat<IElem>& a, const Mat<CWitt>& b) {
  return mat_mul_gen(a, b, a.zero);
}
inline Mat<JElem> mat_mul(const Mat<CWitt>& a, const Mat<JElem>& b) {
  return mat_mul_gen(a, b, b.zero);
}
inline Mat<JElem> mat_mul(const Mat<JElem>& a, const Mat<CWitt>& b) {
  return mat_mul_gen(a, b, a.zero);
}

template <class A, class B>
Mat<B> mat_map(const Mat<A>& a, const std::function<B(const A&)>& f, B zero) {
  Mat<B> r(a.rows, a.cols, std::move(zero));
  for (size_t i = 0; i < a.v.size(); ++i) r.v[i] = f(a.v[i]);
  return r;
}

template <class T>
Mat<T> mat_hjoin(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> r(a.rows, a.cols + b.cols, a.zero);
  for (long i = 0; i < a.rows; ++i) {
    for (long j = 0; j < a.cols; ++j) r.at(i, j) = a.at(i, j);
    for (long j = 0; j < b.cols; ++j) r.at(i, a.cols + j) = b.at(i, j);
  }
  return r;
}

template <class T>
Mat<T> mat_vjoin(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> r(a.rows + b.rows, a.cols, a.zero);
  for (long i = 0; i < a.rows; ++i)
    for (long j = 0; j < a.cols; ++j) r.at(i, j) = a.at(i, j);
  for (long i = 0; i < b.rows; ++i)
    for (long j = 0; j < a.cols; ++j) r.at(a.rows + i, j) = b.at(i, j);
  return r;
}

// block matrix ((A B) (C D))
template <class T>
Mat<T> mat_block(const Mat<T>& a, const Mat<T>& b, const Mat<T>& c, const Mat<T>& d) {
  return mat_vjoin(mat_hjoin(a, b), mat_hjoin(c, d));
}

template <class T>
Mat<T> mat_slice(const Mat<T>& m, long r0, long r1, long c0, long c1) {
  Mat<T> r(r1 - r0, c1 - c0, m.zero);
  for (long i = r0; i < r1; ++i)
    for (long j = c0; j < c1; ++j) r.at(i - r0, j - c0) = m.at(i, j);
  return r;
}

// determinant over a commutative ring by cofactor expansion (desk-scale sizes)
RingElem ring_mat_det(const Mat<RingElem>& m);
std::optional<Mat<RingElem>> ring_mat_inverse(const Mat<RingElem>& m);

Mat<RingElem> mat_w0(const Mat<WittVec>& m);  // entrywise first ghost component
Mat<WittVec> mat_identity_w(const Ring& r, long n, long h);
Mat<CWitt> mat_identity_cw(const Ring& r, long n, long h);
Mat<WittVec> mat_scal_int_w(Int k, const Mat<WittVec>& m);

// invertibility criterion: w0(det) a unit; inverse by Teichmueller lift of the
// residue inverse followed by Newton iteration X <- X(2 - MX) through the
// nilpotent kernel of w0
std::optional<Mat<WittVec>> witt_mat_inverse(const Mat<WittVec>& m);

Mat<WittVec> mat_apply_hom_w(const RingHom& h, const Mat<WittVec>& m, long len);

}  // namespace tdk
