#pragma once

#include "tdk/ring.hpp"
#include "tdk/wittpoly.hpp"

namespace tdk {

// Truncated p-typical Witt vector over a fixed ring; arithmetic comes from the
// universal structure polynomials.
struct WittVec {
  Ring ring;
  std::vector<RingElem> a;

  long len() const { return static_cast<long>(a.size()); }
  bool operator==(const WittVec& o) const { return a == o.a; }
  bool is_zero() const;
};

WittVec w_zero(const Ring& r, long len);
WittVec w_make(const Ring& r, std::vector<RingElem> coords);
WittVec w_add(const WittVec& x, const WittVec& y);
WittVec w_sub(const WittVec& x, const WittVec& y);
WittVec w_neg(const WittVec& x);
WittVec w_mul(const WittVec& x, const WittVec& y);
WittVec w_scal_int(Int k, const WittVec& x);  // k * x, integer scalar
WittVec w_int(const Ring& r, long len, Int k);
WittVec frobenius(const WittVec& x);           // length L -> L-1
WittVec verschiebung(const WittVec& x);        // length L -> L+1
WittVec teichmuller(const RingElem& a, long len);
WittVec restrict_w(const WittVec& x, long m);  // first m coordinates
RingElem ghost(const WittVec& x, long i);
std::vector<WittVec> enumerate_witt(const Ring& r, long len);
WittVec w_apply_hom(const RingHom& h, const WittVec& x);

// Element of the subring W_n = image of (Res, F) : W_{n+1} -> W_n x W_n.
// Always carries a representative; equality compares the (res, frob) pair.
struct CWitt {
  WittVec rep;  // length n+1

  long n() const { return rep.len() - 1; }
  WittVec res() const { return restrict_w(rep, n()); }
  WittVec frob() const { return frobenius(rep); }
  RingElem w0res() const { return rep.a[0]; }
  bool operator==(const CWitt& o) const { return res() == o.res() && frob() == o.frob(); }
};

CWitt cw_from_rep(WittVec rep);
CWitt cw_zero(const Ring& r, long n);
CWitt cw_one(const Ring& r, long n);
CWitt cw_int(const Ring& r, long n, Int k);
CWitt cw_add(const CWitt& x, const CWitt& y);
CWitt cw_sub(const CWitt& x, const CWitt& y);
CWitt cw_neg(const CWitt& x);
CWitt cw_mul(const CWitt& x, const CWitt& y);
CWitt cw_truncate(const CWitt& x, long m);  // level m <= n
CWitt cw_apply_hom(const RingHom& h, const CWitt& x);

// kernel of (Res, F) on W_{n+1}: elements V^n[s] with p s = 0
std::vector<WittVec> kernel_of_projection(const Ring& r, long n);

// Element V(eta) of I_{n+1}, eta in W_n(R).
struct IElem {
  WittVec eta;
  bool operator==(const IElem& o) const { return eta == o.eta; }
};

IElem i_zero(const Ring& r, long n);
IElem i_add(const IElem& x, const IElem& y);
IElem i_neg(const IElem& x);
IElem i_act(const CWitt& xi, const IElem& x);  // xi * V(eta) = V(F(xi) eta)
CWitt i_kappa(const IElem& x);                 // representative V(eta)
WittVec i_sigma_dot(const IElem& x);           // V^{-1}
IElem i_truncate(const IElem& x, long m);
IElem i_apply_hom(const RingHom& h, const IElem& x);

// Element a~ + V(eta) of J_{n+1} = a~ (+) I_{n+1}(S) for a square-zero
// pd-thickening; a~ is the Teichmueller-shaped part with entry in the kernel
// ideal. The W_{n+1}(S) representative is literally (a, eta_0, ..., eta_{n-1}).
struct JElem {
  Thickening th;
  RingElem apart;
  WittVec eta;  // length n over S

  bool operator==(const JElem& o) const { return apart == o.apart && eta == o.eta; }
};

JElem j_make(const Thickening& th, const RingElem& apart, const WittVec& eta);
JElem j_zero(const Thickening& th, long n);
JElem j_from_i(const Thickening& th, const IElem& x);  // zero a-part
JElem j_add(const JElem& x, const JElem& y);
JElem j_neg(const JElem& x);
JElem j_act(const CWitt& xi, const JElem& x);  // (w0(res xi) a, F(xi) eta)
CWitt j_kappa(const JElem& x);
WittVec j_sigma_dot(const JElem& x);
WittVec j_bar(const JElem& x);                // Res of kappa: (a, eta_0..eta_{n-2})
IElem j_reduce(const JElem& x);               // to I_{n+1}(R): V(eta mod a)
JElem j_truncate(const JElem& x, long m);

// Kernel element <a_0,...,a_{n-1}, x_n> of W_n(S) -> W_n(R):
// Res = [a_0..a_{n-1}], F = [p a_1, ..., p a_{n-1}, x_n].
struct KernelElem {
  Thickening th;
  std::vector<RingElem> a;  // entries in the kernel ideal
  RingElem xn;              // in pS cap a
};

CWitt k_to_cwitt(const KernelElem& k);

// Finitely supported Witt vector over a nilpotent algebra. Arithmetic uses the
// budget-truncated structure polynomials; support growth is bounded by the
// isobaric-weight argument and guarded by a hard cap.
struct HatWitt {
  const NilAlgebra* N = nullptr;
  std::vector<RingElem> a;  // trimmed, entries in N

  long len() const { return static_cast<long>(a.size()); }
  bool operator==(const HatWitt& o) const { return a == o.a; }
};

HatWitt hat_make(const NilAlgebra& n, std::vector<RingElem> coords);
HatWitt hat_zero(const NilAlgebra& n);
HatWitt hat_add(const HatWitt& x, const HatWitt& y);
HatWitt hat_neg(const HatWitt& x);
HatWitt hat_sub(const HatWitt& x, const HatWitt& y);
// module action of w in W_n(R) (R = base of the envelope mod N) on x
HatWitt hat_act(const WittVec& w, const HatWitt& x);
HatWitt hat_frob(const HatWitt& x);
HatWitt hat_versch(const HatWitt& x);
HatWitt hat_teich(const NilAlgebra& n, const RingElem& v, long shift);  // V^shift [v]

// group closure of the vectors supported in the first M coordinates
struct HatWittGroup {
  const NilAlgebra* N;
  long support_bound;         // M
  long closure_bound;         // proven bound M + ceil(log_p k)
  std::vector<HatWitt> elems; // the full finite group
};
HatWittGroup hatW_generate(const NilAlgebra& n, long M);

}  // namespace tdk
