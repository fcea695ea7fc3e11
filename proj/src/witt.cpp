#include "tdk/witt.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tdk {

namespace {

WCtx full_ctx(const Ring& r) {
  WCtx c;
  c.p = r->p;
  return c;
}

void check_same(const WittVec& x, const WittVec& y) {
  if (!ring_equal(x.ring, y.ring)) throw MathError("witt op: base ring mismatch");
  if (x.len() != y.len()) throw MathError("witt op: length mismatch");
}

}  // namespace

bool WittVec::is_zero() const {
  return std::all_of(a.begin(), a.end(), [](const RingElem& e) { return e.is_zero(); });
}

WittVec w_zero(const Ring& r, long len) {
  return WittVec{r, std::vector<RingElem>(static_cast<size_t>(len), r_zero(r))};
}

WittVec w_make(const Ring& r, std::vector<RingElem> coords) {
  return WittVec{r, std::move(coords)};
}

WittVec w_add(const WittVec& x, const WittVec& y) {
  check_same(x, y);
  WCtx c = full_ctx(x.ring);
  WittVec out{x.ring, {}};
  for (long i = 0; i < x.len(); ++i)
    out.a.push_back(wp_eval(witt_structure_poly(c, WKind::Add, static_cast<int>(i)), x.ring, x.a, y.a));
  return out;
}

WittVec w_neg(const WittVec& x) {
  WCtx c = full_ctx(x.ring);
  WittVec out{x.ring, {}};
  for (long i = 0; i < x.len(); ++i)
    out.a.push_back(wp_eval(witt_structure_poly(c, WKind::Neg, static_cast<int>(i)), x.ring, x.a, {}));
  return out;
}

WittVec w_sub(const WittVec& x, const WittVec& y) { return w_add(x, w_neg(y)); }

WittVec w_mul(const WittVec& x, const WittVec& y) {
  check_same(x, y);
  WCtx c = full_ctx(x.ring);
  WittVec out{x.ring, {}};
  for (long i = 0; i < x.len(); ++i)
    out.a.push_back(wp_eval(witt_structure_poly(c, WKind::Mul, static_cast<int>(i)), x.ring, x.a, y.a));
  return out;
}

WittVec w_scal_int(Int k, const WittVec& x) {
  WittVec acc = w_zero(x.ring, x.len());
  WittVec base = x;
  bool neg = k < 0;
  unsigned long long e = neg ? static_cast<unsigned long long>(-k) : static_cast<unsigned long long>(k);
  while (e) {
    if (e & 1) acc = w_add(acc, base);
    base = w_add(base, base);
    e >>= 1;
  }
  return neg ? w_neg(acc) : acc;
}

WittVec w_int(const Ring& r, long len, Int k) {
  return w_scal_int(k, teichmuller(r_one(r), len));
}

WittVec frobenius(const WittVec& x) {
  if (x.len() < 1) throw MathError("frobenius: empty vector");
  WCtx c = full_ctx(x.ring);
  WittVec out{x.ring, {}};
  for (long i = 0; i + 1 < x.len(); ++i)
    out.a.push_back(wp_eval(witt_structure_poly(c, WKind::Frob, static_cast<int>(i)), x.ring, x.a, {}));
  return out;
}

WittVec verschiebung(const WittVec& x) {
  WittVec out{x.ring, {r_zero(x.ring)}};
  out.a.insert(out.a.end(), x.a.begin(), x.a.end());
  return out;
}

WittVec teichmuller(const RingElem& a, long len) {
  WittVec out = w_zero(a.ring, len);
  if (len > 0) out.a[0] = a;
  return out;
}

WittVec restrict_w(const WittVec& x, long m) {
  if (m > x.len()) throw MathError("restrict: target longer than source");
  return WittVec{x.ring, std::vector<RingElem>(x.a.begin(), x.a.begin() + m)};
}

RingElem ghost(const WittVec& x, long i) {
  if (i >= x.len()) throw MathError("ghost: index out of range");
  RingElem acc = r_zero(x.ring);
  Int pj = 1;
  for (long j = 0; j <= i; ++j) {
    unsigned long long e = 1;
    for (long k = 0; k < i - j; ++k) e *= static_cast<unsigned long long>(x.ring->p);
    acc = r_add(acc, r_scal(pj, r_pow(x.a[static_cast<size_t>(j)], e)));
    pj *= x.ring->p;
  }
  return acc;
}

std::vector<WittVec> enumerate_witt(const Ring& r, long len) {
  std::vector<WittVec> out;
  unsigned long long total = 1;
  for (long i = 0; i < len; ++i) {
    total *= r->size;
    if (total > (1ull << 22)) throw MathError("enumerate_witt: too many vectors");
  }
  for (unsigned long long idx = 0; idx < total; ++idx) {
    unsigned long long k = idx;
    WittVec v{r, {}};
    for (long i = 0; i < len; ++i) {
      v.a.push_back(r_from_index(r, k % r->size));
      k /= r->size;
    }
    out.push_back(std::move(v));
  }
  return out;
}

WittVec w_apply_hom(const RingHom& h, const WittVec& x) {
  WittVec out{h.dst, {}};
  for (const RingElem& e : x.a) out.a.push_back(hom_apply(h, e));
  return out;
}

// --- CWitt -------------------------------------------------------------------

CWitt cw_from_rep(WittVec rep) {
  if (rep.len() < 1) throw MathError("cw_from_rep: representative must have length >= 1");
  return CWitt{std::move(rep)};
}

CWitt cw_zero(const Ring& r, long n) { return CWitt{w_zero(r, n + 1)}; }
CWitt cw_one(const Ring& r, long n) { return CWitt{teichmuller(r_one(r), n + 1)}; }
CWitt cw_int(const Ring& r, long n, Int k) { return CWitt{w_int(r, n + 1, k)}; }
CWitt cw_add(const CWitt& x, const CWitt& y) { return CWitt{w_add(x.rep, y.rep)}; }
CWitt cw_sub(const CWitt& x, const CWitt& y) { return CWitt{w_sub(x.rep, y.rep)}; }
CWitt cw_neg(const CWitt& x) { return CWitt{w_neg(x.rep)}; }
CWitt cw_mul(const CWitt& x, const CWitt& y) { return CWitt{w_mul(x.rep, y.rep)}; }
CWitt cw_truncate(const CWitt& x, long m) {
  if (m > x.n()) throw MathError("cw_truncate: m > n");
  return CWitt{restrict_w(x.rep, m + 1)};
}
CWitt cw_apply_hom(const RingHom& h, const CWitt& x) { return CWitt{w_apply_hom(h, x.rep)}; }

std::vector<WittVec> kernel_of_projection(const Ring& r, long n) {
  std::vector<WittVec> out;
  for (const RingElem& s : p_torsion(r)) {
    WittVec v = teichmuller(s, 1);
    for (long i = 0; i < n; ++i) v = verschiebung(v);
    out.push_back(v);
  }
  return out;
}

// --- IElem -------------------------------------------------------------------

IElem i_zero(const Ring& r, long n) { return IElem{w_zero(r, n)}; }
IElem i_add(const IElem& x, const IElem& y) { return IElem{w_add(x.eta, y.eta)}; }
IElem i_neg(const IElem& x) { return IElem{w_neg(x.eta)}; }
IElem i_act(const CWitt& xi, const IElem& x) { return IElem{w_mul(xi.frob(), x.eta)}; }
CWitt i_kappa(const IElem& x) { return CWitt{verschiebung(x.eta)}; }
WittVec i_sigma_dot(const IElem& x) { return x.eta; }
IElem i_truncate(const IElem& x, long m) { return IElem{restrict_w(x.eta, m)}; }
IElem i_apply_hom(const RingHom& h, const IElem& x) { return IElem{w_apply_hom(h, x.eta)}; }

// --- JElem -------------------------------------------------------------------

JElem j_make(const Thickening& th, const RingElem& apart, const WittVec& eta) {
  if (!th->in_ideal(apart)) throw MathError("j_make: a-part outside the kernel ideal");
  if (!ring_equal(eta.ring, th->S)) throw MathError("j_make: eta not over S");
  return JElem{th, apart, eta};
}

JElem j_zero(const Thickening& th, long n) {
  return JElem{th, r_zero(th->S), w_zero(th->S, n)};
}

JElem j_from_i(const Thickening& th, const IElem& x) {
  return JElem{th, r_zero(th->S), x.eta};
}

JElem j_add(const JElem& x, const JElem& y) {
  // componentwise since a^2 = 0 makes [a] + [a'] = [a + a']
  return JElem{x.th, r_add(x.apart, y.apart), w_add(x.eta, y.eta)};
}

JElem j_neg(const JElem& x) { return JElem{x.th, r_neg(x.apart), w_neg(x.eta)}; }

JElem j_act(const CWitt& xi, const JElem& x) {
  return JElem{x.th, r_mul(xi.w0res(), x.apart), w_mul(xi.frob(), x.eta)};
}

CWitt j_kappa(const JElem& x) {
  WittVec rep{x.th->S, {x.apart}};
  rep.a.insert(rep.a.end(), x.eta.a.begin(), x.eta.a.end());
  return CWitt{std::move(rep)};
}

WittVec j_sigma_dot(const JElem& x) { return x.eta; }

WittVec j_bar(const JElem& x) {
  WittVec out{x.th->S, {x.apart}};
  out.a.insert(out.a.end(), x.eta.a.begin(), x.eta.a.end() - 1);
  return out;
}

IElem j_reduce(const JElem& x) { return IElem{w_apply_hom(x.th->proj, x.eta)}; }

JElem j_truncate(const JElem& x, long m) { return JElem{x.th, x.apart, restrict_w(x.eta, m)}; }

// --- kernel elements ----------------------------------------------------------

CWitt k_to_cwitt(const KernelElem& k) {
  const Thickening& th = k.th;
  for (const RingElem& e : k.a)
    if (!th->in_ideal(e)) throw MathError("kernel element coordinate outside the ideal");
  if (!th->in_pS_cap_a(k.xn)) throw MathError("kernel element x_n outside pS cap a");
  WittVec rep{th->S, k.a};
  rep.a.push_back(th->halve(k.xn));
  return CWitt{std::move(rep)};
}

// --- HatWitt ------------------------------------------------------------------

namespace {

constexpr long kHatHardCap = 44;

int ceil_log(Int p, Int k) {
  int e = 0;
  Int v = 1;
  while (v < k) {
    v *= p;
    ++e;
  }
  return e;
}

WCtx hat_ctx(const NilAlgebra& n, int sx, int sy, bool nil_x) {
  WCtx c;
  c.p = n.env->p;
  c.sx = sx;
  c.sy = sy;
  c.nil_x = nil_x;
  c.nil_y = true;
  c.nil_class = static_cast<int>(n.nil_class);
  Int cap = 1;
  for (Int i = 0; i < n.frob_exp; ++i) cap *= n.env->p;
  c.var_cap = static_cast<int>(cap);
  return c;
}

void hat_trim(HatWitt& x) {
  while (!x.a.empty() && x.a.back().is_zero()) x.a.pop_back();
}

void hat_check_member(const NilAlgebra& n, const RingElem& e) {
  if (!n.contains(e)) throw MathError("hat witt coordinate outside the nilpotent algebra");
}

// evaluate structure polynomials until they are identically zero
HatWitt hat_binop(const NilAlgebra& n, WKind kind, const std::vector<RingElem>& xs, bool nil_x,
                  const std::vector<RingElem>& ys) {
  WCtx c = hat_ctx(n, static_cast<int>(xs.size()), static_cast<int>(ys.size()), nil_x);
  HatWitt out{&n, {}};
  long mx = std::max<long>(static_cast<long>(xs.size()), static_cast<long>(ys.size()));
  int zeros = 0;
  for (long i = 0;; ++i) {
    if (i > kHatHardCap)
      throw std::logic_error("hat witt closure escaped the proven support bound");
    const WPoly& poly = witt_structure_poly(c, kind, static_cast<int>(i));
    if (poly.zero()) {
      if (i >= mx && ++zeros >= 2) break;
      out.a.push_back(r_zero(n.env));
      continue;
    }
    zeros = 0;
    out.a.push_back(wp_eval(poly, n.env, xs, ys));
  }
  hat_trim(out);
  for (const RingElem& e : out.a) hat_check_member(n, e);
  return out;
}

}  // namespace

HatWitt hat_make(const NilAlgebra& n, std::vector<RingElem> coords) {
  for (const RingElem& e : coords) hat_check_member(n, e);
  HatWitt x{&n, std::move(coords)};
  hat_trim(x);
  return x;
}

HatWitt hat_zero(const NilAlgebra& n) { return HatWitt{&n, {}}; }

HatWitt hat_add(const HatWitt& x, const HatWitt& y) {
  return hat_binop(*x.N, WKind::Add, x.a, true, y.a);
}

HatWitt hat_neg(const HatWitt& x) {
  return hat_binop(*x.N, WKind::Neg, x.a, true, {});
}

HatWitt hat_sub(const HatWitt& x, const HatWitt& y) { return hat_add(x, hat_neg(y)); }

HatWitt hat_act(const WittVec& w, const HatWitt& x) {
  // lift the W_n(R) element coordinatewise into the envelope: the envelope is
  // an F_p algebra containing R = env / N along the monomial basis, and any
  // two lifts differ by W(N)-translation; the action is independent of the
  // lift because V^n W * hatW(N) = 0 justifies the W_n(R)-module structure.
  const NilAlgebra& n = *x.N;
  std::vector<RingElem> ws;
  for (const RingElem& e : w.a) {
    // R must be the prime field here (pR = 0, dim-1 component): coordinates of
    // e embed via the unit of the envelope
    if (w.ring->dim() != 1)
      throw MathError("hat_act: base ring of the display must be the prime field");
    ws.push_back(r_int(n.env, e.c[0]));
  }
  return hat_binop(n, WKind::Mul, ws, false, x.a);
}

HatWitt hat_frob(const HatWitt& x) {
  const NilAlgebra& n = *x.N;
  WCtx c = hat_ctx(n, static_cast<int>(x.a.size()), 0, true);
  HatWitt out{&n, {}};
  int zeros = 0;
  for (long i = 0;; ++i) {
    if (i > kHatHardCap) throw std::logic_error("hat_frob escaped the support bound");
    const WPoly& poly = witt_structure_poly(c, WKind::Frob, static_cast<int>(i));
    if (poly.zero()) {
      if (i >= x.len() && ++zeros >= 2) break;
      out.a.push_back(r_zero(n.env));
      continue;
    }
    zeros = 0;
    out.a.push_back(wp_eval(poly, n.env, x.a, {}));
  }
  hat_trim(out);
  return out;
}

HatWitt hat_versch(const HatWitt& x) {
  if (x.a.empty()) return x;
  HatWitt out{x.N, {r_zero(x.N->env)}};
  out.a.insert(out.a.end(), x.a.begin(), x.a.end());
  return out;
}

HatWitt hat_teich(const NilAlgebra& n, const RingElem& v, long shift) {
  hat_check_member(n, v);
  HatWitt out{&n, {}};
  if (!v.is_zero()) {
    out.a.assign(static_cast<size_t>(shift), r_zero(n.env));
    out.a.push_back(v);
  }
  return out;
}

HatWittGroup hatW_generate(const NilAlgebra& n, long M) {
  if (M < 1) throw MathError("hatW_generate: support bound must be >= 1");
  HatWittGroup g;
  g.N = &n;
  g.support_bound = M;
  g.closure_bound = M + ceil_log(n.env->p, n.nil_class);
  // seed: all vectors supported in the first M coordinates
  std::vector<RingElem> nelems = n.enumerate();
  std::set<std::vector<std::vector<Int>>> seen;
  std::vector<HatWitt> frontier;
  auto key_of = [](const HatWitt& x) {
    std::vector<std::vector<Int>> k;
    for (const RingElem& e : x.a) k.push_back(e.c);
    return k;
  };
  std::vector<HatWitt> gens;
  {
    std::vector<size_t> idx(static_cast<size_t>(M), 0);
    while (true) {
      std::vector<RingElem> coords;
      for (long i = 0; i < M; ++i) coords.push_back(nelems[idx[static_cast<size_t>(i)]]);
      gens.push_back(hat_make(n, coords));
      size_t i = 0;
      while (i < idx.size() && ++idx[i] == nelems.size()) idx[i++] = 0;
      if (i == idx.size()) break;
    }
  }
  for (const HatWitt& x : gens)
    if (seen.insert(key_of(x)).second) frontier.push_back(x);
  size_t head = 0;
  std::vector<HatWitt> elems(frontier);
  while (head < elems.size()) {
    HatWitt cur = elems[head++];
    for (const HatWitt& x : gens) {
      HatWitt s = hat_add(cur, x);
      if (s.len() > g.closure_bound)
        throw std::logic_error("hatW closure escaped the proven bound");
      if (seen.insert(key_of(s)).second) elems.push_back(s);
    }
  }
  g.elems = std::move(elems);
  return g;
}

}  // namespace tdk
