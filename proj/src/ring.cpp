#include "tdk/ring.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace tdk {

namespace {

constexpr unsigned long long kMaxRingSize = 1ull << 24;

Int ipow(Int b, Int e) {
  Int r = 1;
  while (e-- > 0) r *= b;
  return r;
}

Int mod(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

bool is_prime(Int p) {
  if (p < 2) return false;
  for (Int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

struct MutableRing : RingStructure {};

std::vector<Int> canon(const RingStructure& r, std::vector<Int> c) {
  for (size_t i = 0; i < c.size(); ++i) c[i] = mod(c[i], r.moduli[i]);
  return c;
}

std::vector<Int>& axpy(const RingStructure& r, std::vector<Int>& acc, Int k,
                       const std::vector<Int>& x) {
  for (size_t i = 0; i < acc.size(); ++i) acc[i] = mod(acc[i] + k * x[i], r.moduli[i]);
  return acc;
}

// ---------------------------------------------------------------------------
// tiny expression parser for element strings:
//   expr := term (('+'|'-') term)* ; term := factor ('*' factor)*
//   factor := INT | NAME ('^' INT)? | '(' expr ... ')'
// product elements additionally use "(a|b|...)" at top level.
struct Parser {
  const Ring& ring;
  const std::string& s;
  size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw InputError("element parse error at pos " + std::to_string(pos) + " of '" + s +
                     "': " + msg);
  }

  Int integer() {
    skip();
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '-')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) fail("expected integer");
    return std::stoll(s.substr(start, pos - start));
  }

  RingElem factor();
  RingElem term() {
    RingElem v = factor();
    while (true) {
      skip();
      if (pos < s.size() && s[pos] == '*') {
        ++pos;
        v = r_mul(v, factor());
      } else
        break;
    }
    return v;
  }
  RingElem expr() {
    skip();
    bool neg = false;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) neg = s[pos++] == '-';
    RingElem v = term();
    if (neg) v = r_neg(v);
    while (true) {
      skip();
      if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        bool sub = s[pos++] == '-';
        RingElem w = term();
        v = sub ? r_sub(v, w) : r_add(v, w);
      } else
        break;
    }
    return v;
  }
};

RingElem Parser::factor() {
  skip();
  if (pos >= s.size()) fail("unexpected end");
  char c = s[pos];
  if (c == '(') {
    ++pos;
    RingElem v = expr();
    if (!eat(')')) fail("expected ')'");
    return v;
  }
  if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
    return r_int(ring, integer());
  }
  // name
  size_t start = pos;
  while (pos < s.size() &&
         (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '.'))
    ++pos;
  std::string name = s.substr(start, pos - start);
  auto it = ring->gen_table.find(name);
  if (it == ring->gen_table.end()) fail("unknown generator '" + name + "'");
  RingElem v{ring, it->second};
  skip();
  if (pos < s.size() && s[pos] == '^') {
    ++pos;
    Int e = integer();
    if (e < 0) fail("negative exponent");
    v = r_pow(v, static_cast<unsigned long long>(e));
  }
  return v;
}

std::string product_split_print(const RingElem& a);

}  // namespace

bool RingElem::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](Int x) { return x == 0; });
}

// ---------------------------------------------------------------------------

RingElem r_zero(const Ring& r) { return RingElem{r, std::vector<Int>(r->dim(), 0)}; }
RingElem r_one(const Ring& r) { return RingElem{r, r->one}; }

RingElem r_make(const Ring& r, std::vector<Int> coords) {
  if (static_cast<long>(coords.size()) != r->dim()) throw InputError("coordinate length mismatch");
  return RingElem{r, canon(*r, std::move(coords))};
}

RingElem r_add(const RingElem& a, const RingElem& b) {
  RingElem r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = mod(r.c[i] + b.c[i], a.ring->moduli[i]);
  return r;
}

RingElem r_sub(const RingElem& a, const RingElem& b) {
  RingElem r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = mod(r.c[i] - b.c[i], a.ring->moduli[i]);
  return r;
}

RingElem r_neg(const RingElem& a) {
  RingElem r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = mod(-r.c[i], a.ring->moduli[i]);
  return r;
}

RingElem r_mul(const RingElem& a, const RingElem& b) {
  const RingStructure& R = *a.ring;
  std::vector<Int> acc(R.dim(), 0);
  for (long i = 0; i < R.dim(); ++i) {
    if (a.c[i] == 0) continue;
    for (long j = 0; j < R.dim(); ++j) {
      if (b.c[j] == 0) continue;
      Int k = mod(a.c[i] * b.c[j], ipow(R.p, R.t));
      if (k) axpy(R, acc, k, R.mult[static_cast<size_t>(i) * R.dim() + j]);
    }
  }
  return RingElem{a.ring, std::move(acc)};
}

RingElem r_scal(Int k, const RingElem& a) {
  RingElem r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = mod(k * r.c[i], a.ring->moduli[i]);
  return r;
}

RingElem r_pow(const RingElem& a, unsigned long long e) {
  RingElem acc = r_one(a.ring);
  RingElem base = a;
  while (e) {
    if (e & 1) acc = r_mul(acc, base);
    base = r_mul(base, base);
    e >>= 1;
  }
  return acc;
}

RingElem r_int(const Ring& r, Int k) { return r_scal(k, r_one(r)); }

RingElem r_from_index(const Ring& r, unsigned long long idx) {
  std::vector<Int> c(r->dim());
  for (long i = 0; i < r->dim(); ++i) {
    c[i] = static_cast<Int>(idx % static_cast<unsigned long long>(r->moduli[i]));
    idx /= static_cast<unsigned long long>(r->moduli[i]);
  }
  return RingElem{r, std::move(c)};
}

unsigned long long r_to_index(const RingElem& a) {
  unsigned long long idx = 0;
  for (long i = a.ring->dim() - 1; i >= 0; --i)
    idx = idx * static_cast<unsigned long long>(a.ring->moduli[i]) +
          static_cast<unsigned long long>(a.c[i]);
  return idx;
}

std::optional<RingElem> unit_inverse(const RingElem& x) {
  const Ring& r = x.ring;
  RingElem one = r_one(r);
  if (x == one) return one;
  if (!r->enumerable) throw MathError("unit_inverse: ring not enumerable");
  for (unsigned long long i = 0; i < r->size; ++i) {
    RingElem y = r_from_index(r, i);
    if (r_mul(x, y) == one) return y;
  }
  return std::nullopt;
}

std::vector<RingElem> p_torsion(const Ring& r) {
  if (!r->enumerable) throw MathError("p_torsion: ring not enumerable");
  std::vector<RingElem> out;
  for (unsigned long long i = 0; i < r->size; ++i) {
    RingElem x = r_from_index(r, i);
    if (r_scal(r->p, x).is_zero()) out.push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------------------
// construction

namespace {

void finish_ring(MutableRing& r) {
  unsigned long long sz = 1;
  for (Int m : r.moduli) {
    sz *= static_cast<unsigned long long>(m);
    if (sz > kMaxRingSize) throw MathError("ring too large to enumerate");
  }
  r.size = sz;
  r.enumerable = true;
  r.gen_table["1"] = r.one;
}

void check_ring_axioms_sampled(const Ring& r);

}  // namespace

Ring ring_zmod(Int p, Int t) {
  if (!is_prime(p)) throw MathError("zmod: p must be prime");
  if (t < 1) throw MathError("zmod: t must be >= 1");
  auto r = std::make_shared<MutableRing>();
  r->p = p;
  r->t = t;
  r->moduli = {ipow(p, t)};
  r->basis_names = {"1"};
  r->mult = {{1}};
  r->one = {1};
  r->name = "Z/" + std::to_string(ipow(p, t));
  r->desc_json = "{\"kind\":\"zmod\",\"p\":" + std::to_string(p) + ",\"t\":" + std::to_string(t) + "}";
  finish_ring(*r);
  return r;
}

namespace {

// monomial = exponent vector over vars
using Mono = std::vector<Int>;

struct PolyQuotBuilder {
  Int p;
  std::vector<std::string> vars;
  // for var i: cap[i] = degree of its univariate relation (or from monomial rels),
  // and rewrite[i] = lower-order replacement of x_i^{cap_i} as poly (may be zero)
  std::vector<Int> cap;
  std::vector<std::map<Mono, Int>> rewrite;
  std::vector<Mono> mono_rels;  // pure monomial relations -> 0
  std::vector<Mono> basis;
  std::map<Mono, long> index;

  bool killed(const Mono& m) const {
    for (const Mono& k : mono_rels) {
      bool div = true;
      for (size_t i = 0; i < m.size(); ++i)
        if (m[i] < k[i]) {
          div = false;
          break;
        }
      if (div) return true;
    }
    return false;
  }

  // reduce a monomial times coefficient into a linear combination of basis monomials
  void reduce(Mono m, Int coef, std::map<Mono, Int>& acc) const {
    coef = mod(coef, p);
    if (!coef) return;
    if (killed(m)) return;
    for (size_t i = 0; i < m.size(); ++i) {
      if (m[i] >= cap[i]) {
        Mono rest = m;
        rest[i] -= cap[i];
        for (auto& [rm, rc] : rewrite[i]) {
          Mono nm = rest;
          for (size_t j = 0; j < nm.size(); ++j) nm[j] += rm[j];
          reduce(nm, mod(coef * rc, p), acc);
        }
        return;
      }
    }
    acc[m] = mod(acc[m] + coef, p);
  }
};

// parse a relation string over vars into {mono: coef} with coefficients mod p
std::map<Mono, Int> parse_rel(const std::string& s, const std::vector<std::string>& vars, Int p) {
  std::map<Mono, Int> out;
  size_t pos = 0;
  auto skip = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  Int sign = 1;
  while (true) {
    skip();
    if (pos >= s.size()) break;
    if (s[pos] == '+') {
      sign = 1;
      ++pos;
      continue;
    }
    if (s[pos] == '-') {
      sign = -1;
      ++pos;
      continue;
    }
    // term: coef? (var (^int)?)*
    Int coef = 1;
    Mono m(vars.size(), 0);
    bool any = false;
    while (pos < s.size()) {
      skip();
      if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        size_t st = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        coef = mod(coef * std::stoll(s.substr(st, pos - st)), p);
        any = true;
      } else if (pos < s.size() && (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
        size_t st = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
          ++pos;
        std::string name = s.substr(st, pos - st);
        auto it = std::find(vars.begin(), vars.end(), name);
        if (it == vars.end()) throw InputError("relation uses unknown variable '" + name + "'");
        Int e = 1;
        skip();
        if (pos < s.size() && s[pos] == '^') {
          ++pos;
          skip();
          size_t st2 = pos;
          while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
          if (st2 == pos) throw InputError("bad exponent in relation");
          e = std::stoll(s.substr(st2, pos - st2));
        }
        m[static_cast<size_t>(it - vars.begin())] += e;
        any = true;
      } else if (pos < s.size() && s[pos] == '*') {
        ++pos;
        continue;
      } else
        break;
    }
    if (!any) throw InputError("empty term in relation '" + s + "'");
    out[m] = mod(out[m] + sign * coef, p);
    sign = 1;
  }
  // drop zero coefficients
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace

Ring ring_fp_poly_quot(Int p, const std::vector<std::string>& vars,
                       const std::vector<std::string>& rels) {
  if (!is_prime(p)) throw MathError("fp_poly_quot: p must be prime");
  if (vars.empty()) throw InputError("fp_poly_quot: need at least one variable");
  PolyQuotBuilder b;
  b.p = p;
  b.vars = vars;
  b.cap.assign(vars.size(), -1);
  b.rewrite.resize(vars.size());

  for (const std::string& rs : rels) {
    auto poly = parse_rel(rs, vars, p);
    if (poly.empty()) throw InputError("relation '" + rs + "' is zero mod p");
    // classify: pure monomial or monic univariate
    auto lead = std::prev(poly.end());
    Mono lm = lead->first;
    long nz = 0, vi = -1;
    for (size_t i = 0; i < lm.size(); ++i)
      if (lm[i] > 0) {
        ++nz;
        vi = static_cast<long>(i);
      }
    if (poly.size() == 1 && lead->second == 1 && nz >= 2) {
      b.mono_rels.push_back(lm);
      continue;
    }
    if (nz != 1) throw MathError("relation '" + rs + "' is not monic univariate or a monomial");
    // univariate in vi; must be monic and all other terms of lower degree in vi only
    if (lead->second != 1) throw MathError("relation '" + rs + "' is not monic");
    Int deg = lm[static_cast<size_t>(vi)];
    std::map<Mono, Int> rw;
    for (auto& [m, c] : poly) {
      if (m == lm) continue;
      for (size_t i = 0; i < m.size(); ++i)
        if (m[i] > 0 && static_cast<long>(i) != vi)
          throw MathError("relation '" + rs + "' mixes variables");
      if (m[static_cast<size_t>(vi)] >= deg) throw MathError("relation '" + rs + "' not reduced");
      rw[m] = mod(-c, p);
    }
    if (b.cap[static_cast<size_t>(vi)] != -1)
      throw MathError("two univariate relations for variable " + vars[static_cast<size_t>(vi)]);
    b.cap[static_cast<size_t>(vi)] = deg;
    b.rewrite[static_cast<size_t>(vi)] = std::move(rw);
  }
  for (size_t i = 0; i < vars.size(); ++i) {
    if (b.cap[i] == -1) {
      // a pure-monomial power relation x^k counts as the cap with zero rewrite
      Int best = -1;
      for (const Mono& k : b.mono_rels) {
        long nz = 0;
        for (size_t j = 0; j < k.size(); ++j)
          if (k[j] > 0) ++nz;
        if (nz == 1 && k[i] > 0 && (best == -1 || k[i] < best)) best = k[i];
      }
      if (best == -1)
        throw MathError("variable " + vars[i] + " has no bounding relation; ring is infinite");
      b.cap[i] = best;
      b.rewrite[i] = {};
    }
  }

  // basis = surviving monomials under the caps and monomial relations
  Mono m(vars.size(), 0);
  while (true) {
    if (!b.killed(m)) {
      b.index[m] = static_cast<long>(b.basis.size());
      b.basis.push_back(m);
    }
    size_t i = 0;
    while (i < vars.size()) {
      if (++m[i] < b.cap[i]) break;
      m[i] = 0;
      ++i;
    }
    if (i == vars.size()) break;
  }

  auto r = std::make_shared<MutableRing>();
  r->p = p;
  r->t = 1;
  long dim = static_cast<long>(b.basis.size());
  r->moduli.assign(dim, p);
  for (const Mono& bm : b.basis) {
    std::string nm;
    for (size_t i = 0; i < bm.size(); ++i) {
      if (!bm[i]) continue;
      if (!nm.empty()) nm += "*";
      nm += vars[i];
      if (bm[i] > 1) nm += "^" + std::to_string(bm[i]);
    }
    r->basis_names.push_back(nm.empty() ? "1" : nm);
  }
  r->mult.resize(static_cast<size_t>(dim) * dim);
  for (long i = 0; i < dim; ++i)
    for (long j = 0; j < dim; ++j) {
      Mono pm(vars.size());
      for (size_t k = 0; k < vars.size(); ++k) pm[k] = b.basis[i][k] + b.basis[j][k];
      std::map<Mono, Int> acc;
      b.reduce(pm, 1, acc);
      std::vector<Int> row(dim, 0);
      for (auto& [mm, cc] : acc) row[b.index.at(mm)] = cc;
      r->mult[static_cast<size_t>(i) * dim + j] = std::move(row);
    }
  r->one.assign(dim, 0);
  r->one[b.index.at(Mono(vars.size(), 0))] = 1;
  {
    std::ostringstream nm;
    nm << "F" << p << "[";
    for (size_t i = 0; i < vars.size(); ++i) nm << (i ? "," : "") << vars[i];
    nm << "]/(";
    for (size_t i = 0; i < rels.size(); ++i) nm << (i ? "," : "") << rels[i];
    nm << ")";
    r->name = nm.str();
  }
  {
    std::ostringstream ds;
    ds << "{\"kind\":\"fp_poly_quot\",\"p\":" << p << ",\"vars\":[";
    for (size_t i = 0; i < vars.size(); ++i) ds << (i ? "," : "") << "\"" << vars[i] << "\"";
    ds << "],\"rels\":[";
    for (size_t i = 0; i < rels.size(); ++i) ds << (i ? "," : "") << "\"" << rels[i] << "\"";
    ds << "]}";
    r->desc_json = ds.str();
  }
  finish_ring(*r);
  for (size_t i = 0; i < vars.size(); ++i) {
    Mono vm(vars.size(), 0);
    vm[i] = 1;
    auto it = b.index.find(vm);
    if (it == b.index.end()) throw MathError("variable " + vars[i] + " is zero in the quotient");
    std::vector<Int> coords(dim, 0);
    coords[it->second] = 1;
    r->gen_table[vars[i]] = coords;
  }
  check_ring_axioms_sampled(r);
  return r;
}

Ring ring_square_zero_ext(const Ring& base, const std::vector<std::string>& gens) {
  if (gens.empty()) throw InputError("square_zero_ext: need at least one generator");
  auto r = std::make_shared<MutableRing>();
  long bd = base->dim();
  long g = static_cast<long>(gens.size());
  long dim = bd * (1 + g);
  r->p = base->p;
  r->t = base->t;
  r->moduli.resize(dim);
  r->basis_names.resize(dim);
  for (long blk = 0; blk <= g; ++blk)
    for (long i = 0; i < bd; ++i) {
      r->moduli[blk * bd + i] = base->moduli[i];
      std::string bn = base->basis_names[i];
      r->basis_names[blk * bd + i] =
          blk == 0 ? bn : (bn == "1" ? gens[blk - 1] : bn + "*" + gens[blk - 1]);
    }
  r->mult.assign(static_cast<size_t>(dim) * dim, std::vector<Int>(dim, 0));
  for (long bi = 0; bi <= g; ++bi)
    for (long bj = 0; bj <= g; ++bj) {
      if (bi && bj) continue;  // e_i * e_j = 0
      long blk = bi + bj;
      for (long i = 0; i < bd; ++i)
        for (long j = 0; j < bd; ++j) {
          std::vector<Int> row(dim, 0);
          const auto& brow = base->mult[static_cast<size_t>(i) * bd + j];
          for (long k = 0; k < bd; ++k) row[blk * bd + k] = brow[k];
          r->mult[static_cast<size_t>(bi * bd + i) * dim + (bj * bd + j)] = std::move(row);
        }
    }
  r->one.assign(dim, 0);
  for (long i = 0; i < bd; ++i) r->one[i] = base->one[i];
  r->name = base->name + "[" + gens[0] + "]/(" + gens[0] + "^2)";
  {
    std::ostringstream ds;
    ds << "{\"kind\":\"square_zero_ext\",\"base\":" << base->desc_json << ",\"gens\":[";
    for (size_t i = 0; i < gens.size(); ++i) ds << (i ? "," : "") << "\"" << gens[i] << "\"";
    ds << "]}";
    r->desc_json = ds.str();
  }
  finish_ring(*r);
  for (long bi = 0; bi < g; ++bi) {
    std::vector<Int> coords(dim, 0);
    for (long i = 0; i < bd; ++i) coords[(bi + 1) * bd + i] = base->one[i];
    r->gen_table[gens[static_cast<size_t>(bi)]] = coords;
  }
  // expose base generators too
  for (auto& [n, c] : base->gen_table) {
    if (r->gen_table.count(n)) continue;
    std::vector<Int> coords(dim, 0);
    for (long i = 0; i < bd; ++i) coords[i] = c[i];
    r->gen_table[n] = coords;
  }
  return r;
}

Ring ring_product(const std::vector<Ring>& factors) {
  if (factors.empty()) throw InputError("product: need at least one factor");
  auto r = std::make_shared<MutableRing>();
  r->p = factors[0]->p;
  r->t = 0;
  long dim = 0;
  for (const Ring& f : factors) {
    if (f->p != r->p) throw MathError("product: mixed primes");
    r->t = std::max(r->t, f->t);
    dim += f->dim();
  }
  r->moduli.resize(dim);
  r->basis_names.resize(dim);
  r->one.assign(dim, 0);
  r->mult.assign(static_cast<size_t>(dim) * dim, std::vector<Int>(dim, 0));
  long off = 0;
  for (size_t fi = 0; fi < factors.size(); ++fi) {
    const Ring& f = factors[fi];
    long fd = f->dim();
    for (long i = 0; i < fd; ++i) {
      r->moduli[off + i] = f->moduli[i];
      r->basis_names[off + i] = "f" + std::to_string(fi) + "." + f->basis_names[i];
      r->one[off + i] = f->one[i];
      for (long j = 0; j < fd; ++j) {
        std::vector<Int> row(dim, 0);
        const auto& frow = f->mult[static_cast<size_t>(i) * fd + j];
        for (long k = 0; k < fd; ++k) row[off + k] = frow[k];
        r->mult[static_cast<size_t>(off + i) * dim + (off + j)] = std::move(row);
      }
    }
    off += fd;
  }
  std::ostringstream nm;
  for (size_t i = 0; i < factors.size(); ++i) nm << (i ? " x " : "") << factors[i]->name;
  r->name = nm.str();
  r->factors = factors;
  {
    std::ostringstream ds;
    ds << "{\"kind\":\"product\",\"factors\":[";
    for (size_t i = 0; i < factors.size(); ++i) ds << (i ? "," : "") << factors[i]->desc_json;
    ds << "]}";
    r->desc_json = ds.str();
  }
  finish_ring(*r);
  return r;
}

bool ring_equal(const Ring& a, const Ring& b) {
  if (a == b) return true;
  return a->p == b->p && a->t == b->t && a->moduli == b->moduli && a->mult == b->mult &&
         a->one == b->one;
}

namespace {

void check_ring_axioms_sampled(const Ring& r) {
  // cheap closure sanity on generators: associativity and distributivity on a
  // few basis triples; full property testing lives in the test suite
  long d = std::min<long>(r->dim(), 4);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j)
      for (long k = 0; k < d; ++k) {
        RingElem ei = r_from_index(r, 0), ej = ei, ek = ei;
        ei.c.assign(r->dim(), 0);
        ei.c[i] = 1;
        ej.c.assign(r->dim(), 0);
        ej.c[j] = 1;
        ek.c.assign(r->dim(), 0);
        ek.c[k] = 1;
        if (!(r_mul(r_mul(ei, ej), ek) == r_mul(ei, r_mul(ej, ek))))
          throw MathError("ring multiplication is not associative");
      }
}

std::string product_split_print(const RingElem& a) {
  std::string out = "(";
  long off = 0;
  for (size_t fi = 0; fi < a.ring->factors.size(); ++fi) {
    const Ring& f = a.ring->factors[fi];
    RingElem comp{f, std::vector<Int>(a.c.begin() + off, a.c.begin() + off + f->dim())};
    if (fi) out += "|";
    out += r_print(comp);
    off += f->dim();
  }
  return out + ")";
}

}  // namespace

std::string r_print(const RingElem& a) {
  if (!a.ring->factors.empty()) return product_split_print(a);
  std::ostringstream os;
  bool first = true;
  for (long i = 0; i < a.ring->dim(); ++i) {
    if (!a.c[i]) continue;
    if (!first) os << "+";
    const std::string& nm = a.ring->basis_names[i];
    if (nm == "1")
      os << a.c[i];
    else if (a.c[i] == 1)
      os << nm;
    else
      os << a.c[i] << "*" << nm;
    first = false;
  }
  if (first) return "0";
  return os.str();
}

RingElem r_parse(const Ring& r, const std::string& s) {
  // product syntax "(a|b|...)"
  if (!r->factors.empty()) {
    size_t i = 0;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i < s.size() && s[i] == '(') {
      // split at top-level bars
      std::vector<std::string> parts;
      int depth = 0;
      std::string cur;
      bool is_split = false;
      for (size_t j = i; j < s.size(); ++j) {
        char c = s[j];
        if (c == '(') {
          if (depth++ == 0) continue;
        }
        if (c == ')') {
          if (--depth == 0) {
            parts.push_back(cur);
            is_split = true;
            break;
          }
        }
        if (c == '|' && depth == 1) {
          parts.push_back(cur);
          cur.clear();
          continue;
        }
        cur += c;
      }
      if (is_split && parts.size() == r->factors.size()) {
        std::vector<Int> coords;
        for (size_t fi = 0; fi < parts.size(); ++fi) {
          RingElem comp = r_parse(r->factors[fi], parts[fi]);
          coords.insert(coords.end(), comp.c.begin(), comp.c.end());
        }
        return RingElem{r, std::move(coords)};
      }
    }
  }
  Parser p{r, s};
  RingElem v = p.expr();
  p.skip();
  if (p.pos != s.size()) p.fail("trailing input");
  return v;
}

// ---------------------------------------------------------------------------
// homomorphisms

RingElem hom_apply(const RingHom& h, const RingElem& a) {
  RingElem out = r_zero(h.dst);
  for (long i = 0; i < h.src->dim(); ++i)
    if (a.c[i]) out = r_add(out, r_scal(a.c[i], h.images[static_cast<size_t>(i)]));
  return out;
}

bool hom_check(const RingHom& h) {
  if (!(hom_apply(h, r_one(h.src)) == r_one(h.dst))) return false;
  long d = h.src->dim();
  for (long i = 0; i < d; ++i) {
    // additive order must divide the basis modulus
    if (!r_scal(h.src->moduli[i], h.images[static_cast<size_t>(i)]).is_zero()) return false;
    for (long j = 0; j < d; ++j) {
      RingElem lhs = r_mul(h.images[static_cast<size_t>(i)], h.images[static_cast<size_t>(j)]);
      RingElem rhs = hom_apply(h, RingElem{h.src, canon(*h.src, std::vector<Int>(
                                                       h.src->mult[static_cast<size_t>(i) * d + j]))});
      if (!(lhs == rhs)) return false;
    }
  }
  return true;
}

RingHom hom_identity(const Ring& r) {
  RingHom h{r, r, {}, "{\"kind\":\"identity\"}"};
  for (long i = 0; i < r->dim(); ++i) {
    std::vector<Int> c(r->dim(), 0);
    c[i] = 1;
    h.images.push_back(RingElem{r, std::move(c)});
  }
  return h;
}

RingHom hom_compose(const RingHom& g, const RingHom& f) {
  if (!ring_equal(f.dst, g.src)) throw MathError("hom_compose: middle ring mismatch");
  RingHom h{f.src, g.dst, {}, "{\"kind\":\"composite\"}"};
  for (const RingElem& im : f.images) h.images.push_back(hom_apply(g, im));
  return h;
}

RingHom hom_initial(const Ring& src_zmod, const Ring& dst) {
  if (src_zmod->dim() != 1) throw MathError("hom_initial: source must be Z/p^t");
  if (src_zmod->p != dst->p || dst->t > src_zmod->t)
    throw MathError("hom_initial: characteristic of target does not divide p^t");
  RingHom h{src_zmod, dst, {r_one(dst)}, "{\"kind\":\"initial\"}"};
  return h;
}

RingHom hom_zmod_reduce(const Ring& src, const Ring& dst) { return hom_initial(src, dst); }

RingHom hom_sqzero_proj(const Ring& src, const Ring& base) {
  long bd = base->dim();
  if (src->dim() % bd != 0 || src->dim() < 2 * bd)
    throw MathError("hom_sqzero_proj: not an extension of the base");
  RingHom h{src, base, {}, "{\"kind\":\"sqzero_proj\"}"};
  for (long i = 0; i < src->dim(); ++i) {
    std::vector<Int> c(bd, 0);
    if (i < bd) c[i] = 1;
    h.images.push_back(RingElem{base, std::move(c)});
  }
  if (!hom_check(h)) throw MathError("hom_sqzero_proj: projection is not a ring hom");
  return h;
}

RingHom hom_sqzero_incl(const Ring& base, const Ring& ext) {
  RingHom h{base, ext, {}, "{\"kind\":\"sqzero_incl\"}"};
  for (long i = 0; i < base->dim(); ++i) {
    std::vector<Int> c(ext->dim(), 0);
    c[i] = 1;
    h.images.push_back(RingElem{ext, std::move(c)});
  }
  if (!hom_check(h)) throw MathError("hom_sqzero_incl: not a ring hom");
  return h;
}

RingHom hom_var_images(const Ring& src, const Ring& dst,
                       const std::map<std::string, RingElem>& var_images) {
  RingHom h{src, dst, {}, "{\"kind\":\"var_images\"}"};
  // build each basis image by parsing the basis name as a monomial in the vars
  for (long i = 0; i < src->dim(); ++i) {
    const std::string& nm = src->basis_names[i];
    RingElem im = r_one(dst);
    if (nm != "1") {
      std::istringstream ss(nm);
      std::string part;
      while (std::getline(ss, part, '*')) {
        std::string v = part;
        Int e = 1;
        if (auto pos = part.find('^'); pos != std::string::npos) {
          v = part.substr(0, pos);
          e = std::stoll(part.substr(pos + 1));
        }
        auto it = var_images.find(v);
        if (it == var_images.end())
          throw InputError("hom_var_images: no image for variable " + v);
        im = r_mul(im, r_pow(it->second, static_cast<unsigned long long>(e)));
      }
    }
    h.images.push_back(im);
  }
  if (!hom_check(h)) throw MathError("hom_var_images: images do not satisfy the relations");
  return h;
}

RingHom hom_product(const Ring& src, const Ring& dst, const std::vector<long>& idx,
                    const std::vector<RingHom>& hs) {
  if (dst->factors.size() != idx.size() || idx.size() != hs.size())
    throw InputError("hom_product: shape mismatch");
  RingHom h{src, dst, {}, "{\"kind\":\"product\"}"};
  // image of src basis e_i: concatenate hs[j](component idx[j] of e_i)
  std::vector<long> offs_src;
  long off = 0;
  for (const Ring& f : src->factors) {
    offs_src.push_back(off);
    off += f->dim();
  }
  if (src->factors.empty()) throw InputError("hom_product: source must be a product ring");
  for (long i = 0; i < src->dim(); ++i) {
    std::vector<Int> out;
    for (size_t j = 0; j < idx.size(); ++j) {
      const Ring& sf = src->factors[static_cast<size_t>(idx[j])];
      long o = offs_src[static_cast<size_t>(idx[j])];
      RingElem comp{sf, std::vector<Int>(sf->dim(), 0)};
      if (i >= o && i < o + sf->dim()) comp.c[i - o] = 1;
      RingElem im = hom_apply(hs[j], comp);
      out.insert(out.end(), im.c.begin(), im.c.end());
    }
    h.images.push_back(RingElem{dst, std::move(out)});
  }
  return h;
}

// ---------------------------------------------------------------------------
// nilpotent algebras

bool NilAlgebra::contains(const RingElem& a) const {
  for (long i = 0; i < env->dim(); ++i)
    if (a.c[i] && !ideal_coord[static_cast<size_t>(i)]) return false;
  return true;
}

std::vector<RingElem> NilAlgebra::enumerate() const {
  std::vector<RingElem> out;
  std::vector<long> pos;
  for (long i = 0; i < env->dim(); ++i)
    if (ideal_coord[static_cast<size_t>(i)]) pos.push_back(i);
  unsigned long long total = 1;
  for (long i : pos) total *= static_cast<unsigned long long>(env->moduli[i]);
  for (unsigned long long idx = 0; idx < total; ++idx) {
    std::vector<Int> c(env->dim(), 0);
    unsigned long long k = idx;
    for (long i : pos) {
      c[i] = static_cast<Int>(k % static_cast<unsigned long long>(env->moduli[i]));
      k /= static_cast<unsigned long long>(env->moduli[i]);
    }
    out.push_back(RingElem{env, std::move(c)});
  }
  return out;
}

unsigned long long NilAlgebra::size() const {
  unsigned long long total = 1;
  for (long i = 0; i < env->dim(); ++i)
    if (ideal_coord[static_cast<size_t>(i)])
      total *= static_cast<unsigned long long>(env->moduli[i]);
  return total;
}

NilAlgebra nil_algebra_make(Int p, const std::vector<std::string>& gens,
                            const std::vector<std::string>& rels, Int frob_exp) {
  NilAlgebra n;
  n.env = ring_fp_poly_quot(p, gens, rels);
  n.ideal_coord.assign(static_cast<size_t>(n.env->dim()), false);
  for (long i = 0; i < n.env->dim(); ++i)
    n.ideal_coord[static_cast<size_t>(i)] = n.env->basis_names[i] != "1";
  // nilpotency class: least k with N^k = 0, computed on ideal basis products
  std::vector<RingElem> layer;
  for (long i = 0; i < n.env->dim(); ++i)
    if (n.ideal_coord[static_cast<size_t>(i)]) {
      std::vector<Int> c(n.env->dim(), 0);
      c[i] = 1;
      layer.push_back(RingElem{n.env, std::move(c)});
    }
  std::vector<RingElem> basis = layer;
  Int k = 1;
  while (!std::all_of(layer.begin(), layer.end(), [](const RingElem& e) { return e.is_zero(); })) {
    std::set<std::vector<Int>> next;
    for (const RingElem& a : layer)
      for (const RingElem& b : basis) {
        RingElem pr = r_mul(a, b);
        if (!pr.is_zero()) next.insert(pr.c);
      }
    layer.clear();
    for (auto& c : next) layer.push_back(RingElem{n.env, c});
    ++k;
    if (k > 64) throw MathError("nil_algebra_make: algebra is not nilpotent");
  }
  n.nil_class = k;
  // Frobenius exponent: least n0 with x^{p^n0} = 0 for all x; the declared
  // value must not undershoot it
  Int n0 = 0;
  auto all_vanish = [&](Int e) {
    unsigned long long pe = 1;
    for (Int i = 0; i < e; ++i) pe *= static_cast<unsigned long long>(p);
    for (const RingElem& x : n.enumerate())
      if (!r_pow(x, pe).is_zero()) return false;
    return true;
  };
  while (!all_vanish(n0)) {
    ++n0;
    if (n0 > 32) throw MathError("nil_algebra_make: Frobenius exponent out of range");
  }
  if (frob_exp > 0 && frob_exp < n0)
    throw MathError("nil_algebra_make: declared frob_exp undershoots x^{p^n} = 0");
  n.frob_exp = n0;
  {
    std::ostringstream ds;
    ds << "{\"base\":{\"kind\":\"zmod\",\"p\":" << p << ",\"t\":1},\"gens\":[";
    for (size_t i = 0; i < gens.size(); ++i) ds << (i ? "," : "") << "\"" << gens[i] << "\"";
    ds << "],\"rels\":[";
    for (size_t i = 0; i < rels.size(); ++i) ds << (i ? "," : "") << "\"" << rels[i] << "\"";
    ds << "],\"frob_exp\":" << n.frob_exp << "}";
    n.desc_json = ds.str();
  }
  return n;
}

// ---------------------------------------------------------------------------
// pd-thickenings

bool PdThickening::in_pS_cap_a(const RingElem& a) const {
  return std::any_of(pS_cap_a.begin(), pS_cap_a.end(),
                     [&](const RingElem& e) { return e == a; });
}

RingElem PdThickening::halve(const RingElem& v) const {
  auto it = half_table.find(v.c);
  if (it == half_table.end()) throw MathError("halve: element not in pS");
  return it->second;
}

RingElem PdThickening::section(const RingElem& r) const {
  return section_table[static_cast<size_t>(r_to_index(r))];
}

Thickening thickening_make(const Ring& S, const std::vector<RingElem>& kernel_gens,
                           const Ring& R, const RingHom& proj) {
  auto th = std::make_shared<PdThickening>();
  th->S = S;
  th->R = R;
  th->proj = proj;
  th->ideal_gens = kernel_gens;
  if (kernel_gens.empty()) throw MathError("thickening: empty kernel generating set");
  // materialize the ideal: Z-span closure of {s * g}
  std::set<std::vector<Int>> span;
  std::vector<RingElem> frontier;
  auto insert = [&](const RingElem& e) {
    if (span.insert(e.c).second) frontier.push_back(e);
  };
  insert(r_zero(S));
  for (const RingElem& g : kernel_gens)
    for (unsigned long long i = 0; i < S->size; ++i) insert(r_mul(r_from_index(S, i), g));
  // close under addition
  bool grew = true;
  std::vector<RingElem> elems;
  for (auto& c : span) elems.push_back(RingElem{S, c});
  while (grew) {
    grew = false;
    std::vector<RingElem> cur;
    for (auto& c : span) cur.push_back(RingElem{S, c});
    for (const RingElem& a : cur)
      for (const RingElem& g : cur) {
        RingElem s = r_add(a, g);
        if (span.insert(s.c).second) grew = true;
      }
  }
  th->ideal = span;
  for (auto& c : span) th->ideal_elems.push_back(RingElem{S, c});
  // square-zero check on the spanning set
  for (const RingElem& a : th->ideal_elems)
    for (const RingElem& b : th->ideal_elems)
      if (!r_mul(a, b).is_zero())
        throw MathError("thickening: kernel ideal is not square-zero; general divided powers unsupported");
  // projection kills the ideal and is surjective with kernel exactly the ideal
  for (const RingElem& a : th->ideal_elems)
    if (!hom_apply(proj, a).is_zero()) throw MathError("thickening: projection does not kill the ideal");
  std::set<std::vector<Int>> image;
  unsigned long long ker_count = 0;
  for (unsigned long long i = 0; i < S->size; ++i) {
    RingElem s = r_from_index(S, i);
    RingElem im = hom_apply(proj, s);
    image.insert(im.c);
    if (im.is_zero()) ++ker_count;
  }
  if (image.size() != R->size) throw MathError("thickening: projection is not surjective");
  if (ker_count != th->ideal.size())
    throw MathError("thickening: kernel of projection differs from the generated ideal");
  // minimal m with p^m a = 0
  Int m = 0;
  bool all_zero = false;
  while (!all_zero) {
    all_zero = true;
    Int pm = ipow(S->p, m);
    for (const RingElem& a : th->ideal_elems)
      if (!r_scal(pm, a).is_zero()) all_zero = false;
    if (!all_zero) {
      ++m;
      if (m > 64) throw MathError("thickening: p^m a never vanishes");
    }
  }
  th->m = m;
  // pS cap a, with a section of multiplication by p
  std::set<std::vector<Int>> seen;
  for (unsigned long long i = 0; i < S->size; ++i) {
    RingElem s = r_from_index(S, i);
    RingElem v = r_scal(S->p, s);
    if (!th->half_table.count(v.c)) th->half_table[v.c] = s;
    if (th->in_ideal(v) && seen.insert(v.c).second) th->pS_cap_a.push_back(v);
  }
  // default section of proj: first preimage in enumeration order
  th->section_table.assign(R->size, r_zero(S));
  std::vector<bool> have(R->size, false);
  for (unsigned long long i = 0; i < S->size; ++i) {
    RingElem s = r_from_index(S, i);
    unsigned long long ri = r_to_index(hom_apply(proj, s));
    if (!have[ri]) {
      have[ri] = true;
      th->section_table[ri] = s;
    }
  }
  return th;
}

Thickening thickening_make_auto(const Ring& S, const std::vector<std::string>& kernel_gens,
                                const Ring& R) {
  std::vector<RingElem> gens;
  for (const std::string& g : kernel_gens) gens.push_back(r_parse(S, g));
  // canonical projections for the supported shapes
  if (S->dim() == 1 && R->dim() == 1) return thickening_make(S, gens, R, hom_initial(S, R));
  if (R->dim() < S->dim() && S->dim() % R->dim() == 0) {
    // try square-zero projection
    try {
      RingHom pr = hom_sqzero_proj(S, R);
      return thickening_make(S, gens, R, pr);
    } catch (const MathError&) {
    }
  }
  // try augmentation vars -> 0 from a poly quotient onto Z/p
  if (R->dim() == 1) {
    std::map<std::string, RingElem> zero_imgs;
    for (auto& [n, c] : S->gen_table)
      if (n != "1") zero_imgs.emplace(n, r_zero(R));
    try {
      RingHom pr = hom_var_images(S, R, zero_imgs);
      return thickening_make(S, gens, R, pr);
    } catch (const MathError&) {
    } catch (const InputError&) {
    }
  }
  throw MathError("thickening: no canonical projection; supply one explicitly");
}

std::pair<Ring, RingHom> ring_mod_p(const Ring& r) {
  if (r->t == 1) return {r, hom_identity(r)};
  if (r->dim() == 1) {
    Ring q = ring_zmod(r->p, 1);
    return {q, hom_initial(r, q)};
  }
  if (!r->factors.empty()) {
    std::vector<Ring> qs;
    std::vector<RingHom> hs;
    std::vector<long> idx;
    for (size_t i = 0; i < r->factors.size(); ++i) {
      auto [q, h] = ring_mod_p(r->factors[i]);
      qs.push_back(q);
      hs.push_back(h);
      idx.push_back(static_cast<long>(i));
    }
    Ring q = ring_product(qs);
    return {q, hom_product(r, q, idx, hs)};
  }
  throw MathError("ring_mod_p: unsupported ring shape");
}

}  // namespace tdk
