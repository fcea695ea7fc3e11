#include "tdk/wittpoly.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace tdk {

namespace {

BigInt bigpow(Int b, int e) {
  BigInt r = 1;
  while (e-- > 0) r *= b;
  return r;
}

void trim(WMono& m) {
  while (!m.ex.empty() && m.ex.back() == 0) m.ex.pop_back();
  while (!m.ey.empty() && m.ey.back() == 0) m.ey.pop_back();
}

bool keep(const WCtx& c, const WMono& m) {
  for (size_t j = 0; j < m.ex.size(); ++j)
    if (m.ex[j] && static_cast<int>(j) >= c.sx) return false;
  for (size_t j = 0; j < m.ey.size(); ++j)
    if (m.ey[j] && static_cast<int>(j) >= c.sy) return false;
  if (c.nil_class > 0) {
    long deg = 0;
    if (c.nil_x)
      for (int e : m.ex) deg += e;
    if (c.nil_y)
      for (int e : m.ey) deg += e;
    if (deg >= c.nil_class) return false;
  }
  if (c.var_cap > 0) {
    if (c.nil_x)
      for (int e : m.ex)
        if (e >= c.var_cap) return false;
    if (c.nil_y)
      for (int e : m.ey)
        if (e >= c.var_cap) return false;
  }
  return true;
}

WPoly from_map(const WCtx& c, std::map<WMono, BigInt>&& acc) {
  WPoly p;
  for (auto& [m, v] : acc) {
    if (v == 0) continue;
    if (!keep(c, m)) continue;
    p.terms.emplace_back(m, std::move(v));
  }
  return p;
}

WMono mono_var(bool yblock, int j, int e) {
  WMono m;
  auto& v = yblock ? m.ey : m.ex;
  v.assign(j + 1, 0);
  v[j] = e;
  return m;
}

}  // namespace

WPoly wp_add(const WCtx& c, const WPoly& a, const WPoly& b) {
  std::map<WMono, BigInt> acc;
  for (auto& [m, v] : a.terms) acc[m] += v;
  for (auto& [m, v] : b.terms) acc[m] += v;
  return from_map(c, std::move(acc));
}

WPoly wp_scal(const BigInt& k, const WPoly& a) {
  WPoly r;
  if (k == 0) return r;
  for (auto& [m, v] : a.terms) r.terms.emplace_back(m, k * v);
  return r;
}

WPoly wp_mul(const WCtx& c, const WPoly& a, const WPoly& b) {
  std::map<WMono, BigInt> acc;
  for (auto& [ma, va] : a.terms)
    for (auto& [mb, vb] : b.terms) {
      WMono m;
      m.ex.assign(std::max(ma.ex.size(), mb.ex.size()), 0);
      m.ey.assign(std::max(ma.ey.size(), mb.ey.size()), 0);
      for (size_t j = 0; j < ma.ex.size(); ++j) m.ex[j] += ma.ex[j];
      for (size_t j = 0; j < mb.ex.size(); ++j) m.ex[j] += mb.ex[j];
      for (size_t j = 0; j < ma.ey.size(); ++j) m.ey[j] += ma.ey[j];
      for (size_t j = 0; j < mb.ey.size(); ++j) m.ey[j] += mb.ey[j];
      trim(m);
      if (!keep(c, m)) continue;
      acc[m] += va * vb;
    }
  return from_map(c, std::move(acc));
}

WPoly wp_pow(const WCtx& c, const WPoly& a, unsigned long long e) {
  WPoly acc;
  acc.terms.emplace_back(WMono{}, BigInt(1));
  WPoly base = a;
  while (e) {
    if (e & 1) acc = wp_mul(c, acc, base);
    base = wp_mul(c, base, base);
    e >>= 1;
  }
  return acc;
}

namespace {

// ghost polynomial of one block: sum_{j<=i} p^j z_j^{p^{i-j}}
WPoly ghost_block(const WCtx& c, bool yblock, int i) {
  std::map<WMono, BigInt> acc;
  for (int j = 0; j <= i; ++j) {
    WMono m = mono_var(yblock, j, static_cast<int>(bigpow(c.p, i - j).convert_to<long long>()));
    if (!keep(c, m)) continue;
    acc[m] += bigpow(c.p, j);
  }
  return from_map(c, std::move(acc));
}

WPoly wp_divexact(const WPoly& a, const BigInt& d) {
  WPoly r;
  for (auto& [m, v] : a.terms) {
    if (v % d != 0) throw std::logic_error("witt recursion: non-exact division");
    r.terms.emplace_back(m, v / d);
  }
  return r;
}

struct Cache {
  std::mutex mu;
  std::map<std::tuple<decltype(std::declval<WCtx>().key()), WKind, int>, WPoly> polys;
  std::set<std::tuple<Int, WKind, int>> usage;
};
Cache& cache() {
  static Cache c;
  return c;
}

WPoly compute_poly(const WCtx& c, WKind kind, int i);

const WPoly& cached_poly(const WCtx& c, WKind kind, int i) {
  auto key = std::tuple(c.key(), kind, i);
  {
    std::lock_guard<std::mutex> g(cache().mu);
    auto it = cache().polys.find(key);
    if (it != cache().polys.end()) return it->second;
  }
  WPoly p = compute_poly(c, kind, i);
  std::lock_guard<std::mutex> g(cache().mu);
  if (c.sx == WCtx::kUnbounded && c.sy == WCtx::kUnbounded && c.nil_class == 0 && c.var_cap == 0)
    cache().usage.insert({c.p, kind, i});
  return cache().polys.emplace(key, std::move(p)).first->second;
}

WPoly compute_poly(const WCtx& c, WKind kind, int i) {
  // target ghost value
  WPoly target;
  switch (kind) {
    case WKind::Add:
      target = wp_add(c, ghost_block(c, false, i), ghost_block(c, true, i));
      break;
    case WKind::Mul:
      target = wp_mul(c, ghost_block(c, false, i), ghost_block(c, true, i));
      break;
    case WKind::Neg:
      target = wp_scal(-1, ghost_block(c, false, i));
      break;
    case WKind::Frob:
      target = ghost_block(c, false, i + 1);
      break;
  }
  for (int j = 0; j < i; ++j) {
    const WPoly& pj = cached_poly(c, kind, j);
    WPoly pw = wp_pow(c, pj, static_cast<unsigned long long>(
                                 bigpow(c.p, i - j).convert_to<long long>()));
    target = wp_add(c, target, wp_scal(-bigpow(c.p, j), pw));
  }
  return wp_divexact(target, bigpow(c.p, i));
}

}  // namespace

const WPoly& witt_structure_poly(const WCtx& ctx, WKind kind, int i) {
  return cached_poly(ctx, kind, i);
}

WPoly witt_ghost_poly(const WCtx& ctx, int i) { return ghost_block(ctx, false, i); }

std::set<std::tuple<Int, WKind, int>> witt_poly_usage() {
  std::lock_guard<std::mutex> g(cache().mu);
  return cache().usage;
}

WPoly wp_subst_x(const WCtx& c, const WPoly& outer, const std::vector<WPoly>& subst_x) {
  WPoly acc;
  for (auto& [m, v] : outer.terms) {
    WPoly term;
    term.terms.emplace_back(WMono{}, v);
    for (size_t j = 0; j < m.ex.size(); ++j) {
      if (!m.ex[j]) continue;
      if (j >= subst_x.size()) {
        term = WPoly{};
        break;
      }
      term = wp_mul(c, term, wp_pow(c, subst_x[j], static_cast<unsigned long long>(m.ex[j])));
    }
    if (!m.ey.empty()) throw std::logic_error("wp_subst_x: outer poly has y variables");
    acc = wp_add(c, acc, term);
  }
  return acc;
}

bool witt_selftest_identity(Int p, WKind kind, int i) {
  WCtx c;
  c.p = p;
  // coordinates of the operation, as two-block polynomials
  std::vector<WPoly> coords;
  int len = kind == WKind::Frob ? i + 1 : i + 1;
  for (int j = 0; j < len; ++j) coords.push_back(witt_structure_poly(c, kind, j));
  // w_i applied to the coordinates
  WPoly lhs = wp_subst_x(c, witt_ghost_poly(c, i), coords);
  WPoly rhs;
  switch (kind) {
    case WKind::Add:
      rhs = wp_add(c, ghost_block(c, false, i), ghost_block(c, true, i));
      break;
    case WKind::Mul:
      rhs = wp_mul(c, ghost_block(c, false, i), ghost_block(c, true, i));
      break;
    case WKind::Neg:
      rhs = wp_scal(-1, ghost_block(c, false, i));
      break;
    case WKind::Frob:
      rhs = ghost_block(c, false, i + 1);
      break;
  }
  return lhs.terms == rhs.terms;
}

RingElem wp_eval(const WPoly& poly, const Ring& r, const std::vector<RingElem>& xs,
                 const std::vector<RingElem>& ys) {
  RingElem acc = r_zero(r);
  Int pt = 1;
  for (Int i = 0; i < r->t; ++i) pt *= r->p;
  // power cache per variable
  std::vector<std::vector<RingElem>> px(xs.size()), py(ys.size());
  auto get_pow = [&](std::vector<std::vector<RingElem>>& cache, const std::vector<RingElem>& vars,
                     size_t j, int e) -> const RingElem& {
    auto& vec = cache[j];
    if (vec.empty()) vec.push_back(vars[j]);  // vec[k] = vars[j]^{k+1}
    while (static_cast<int>(vec.size()) < e) vec.push_back(r_mul(vec.back(), vars[j]));
    return vec[static_cast<size_t>(e - 1)];
  };
  for (auto& [m, v] : poly.terms) {
    bool vanish = false;
    for (size_t j = 0; j < m.ex.size() && !vanish; ++j)
      if (m.ex[j] && j >= xs.size()) vanish = true;
    for (size_t j = 0; j < m.ey.size() && !vanish; ++j)
      if (m.ey[j] && j >= ys.size()) vanish = true;
    if (vanish) continue;
    Int coef = static_cast<Int>(((v % pt) + pt) % pt);
    if (!coef) continue;
    RingElem term = r_int(r, coef);
    for (size_t j = 0; j < m.ex.size(); ++j)
      if (m.ex[j]) term = r_mul(term, get_pow(px, xs, j, m.ex[j]));
    for (size_t j = 0; j < m.ey.size(); ++j)
      if (m.ey[j]) term = r_mul(term, get_pow(py, ys, j, m.ey[j]));
    acc = r_add(acc, term);
  }
  return acc;
}

}  // namespace tdk
