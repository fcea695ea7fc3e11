#include "tdk/descent.hpp"

#include <map>
#include <sstream>

namespace tdk {

namespace {

// irreducible monic polynomial of given degree over F_p, by search
std::string irreducible_poly(Int p, long deg) {
  Ring fp = ring_zmod(p, 1);
  (void)fp;
  if (deg < 2 || deg > 4) throw MathError("field_ext: degree must be in 2..4");
  // coefficients c_0..c_{deg-1} of x^deg + sum c_i x^i
  long total = 1;
  for (long i = 0; i < deg; ++i) total *= static_cast<long>(p);
  for (long mask = 0; mask < total; ++mask) {
    std::vector<Int> c;
    long k = mask;
    for (long i = 0; i < deg; ++i) {
      c.push_back(k % p);
      k /= p;
    }
    // no roots in F_p
    bool has_root = false;
    for (Int r = 0; r < p; ++r) {
      Int v = 1;
      for (long i = 0; i < deg; ++i) v = (v * r) % p;  // r^deg
      Int ri = 1;
      for (long i = 0; i < deg; ++i) {
        v = (v + c[static_cast<size_t>(i)] * ri) % p;
        ri = (ri * r) % p;
      }
      if (v % p == 0) has_root = true;
    }
    if (has_root) continue;
    if (deg == 4) {
      // also exclude products of two irreducible quadratics: test whether the
      // quotient ring has zero divisors among degree-2 elements by brute force
      std::vector<std::string> vars{"x"};
      std::ostringstream rel;
      rel << "x^4";
      for (long i = deg - 1; i >= 0; --i)
        if (c[static_cast<size_t>(i)]) rel << "+" << c[static_cast<size_t>(i)] << "*x^" << i;
      Ring cand = ring_fp_poly_quot(p, vars, {rel.str()});
      bool field = true;
      for (unsigned long long i = 1; i < cand->size && field; ++i)
        if (!unit_inverse(r_from_index(cand, i))) field = false;
      if (!field) continue;
    }
    std::ostringstream rel;
    rel << "x^" << deg;
    for (long i = deg - 1; i >= 0; --i)
      if (c[static_cast<size_t>(i)]) {
        rel << "+";
        if (c[static_cast<size_t>(i)] != 1 || i == 0)
          rel << c[static_cast<size_t>(i)] << (i > 0 ? "*" : "");
        if (i > 0) {
          rel << "x";
          if (i > 1) rel << "^" << i;
        }
      }
    return rel.str();
  }
  throw MathError("field_ext: no irreducible polynomial found");
}

// presentation of the W-group of one factor ring: generators V^i[x]
struct FactorData {
  Ring F;
  long levels = 0;  // generator levels (n for W, n+1 for the CW presentation)
  bool cw = false;  // quotient by V^n[s] classes
  std::vector<RingElem> nonzero;
  std::map<std::vector<Int>, long> index_of;
  std::vector<BigInt> moduli;  // nontrivial cyclic moduli
  IMat u;                      // gens x gens transform: z = U x
  std::vector<long> keep;      // rows of U with nontrivial modulus

  long ngens() const { return levels * static_cast<long>(nonzero.size()); }
  long gen_index(long level, const RingElem& x) const {
    return level * static_cast<long>(nonzero.size()) + index_of.at(x.c);
  }
  // cyclic coordinates of a Witt vector of length `levels`
  std::vector<BigInt> dlog(const WittVec& v) const {
    std::vector<BigInt> x(static_cast<size_t>(ngens()), 0);
    for (long i = 0; i < v.len(); ++i)
      if (!v.a[static_cast<size_t>(i)].is_zero())
        x[static_cast<size_t>(gen_index(i, v.a[static_cast<size_t>(i)]))] += 1;
    std::vector<BigInt> z;
    for (size_t r = 0; r < keep.size(); ++r) {
      BigInt acc = 0;
      for (long j = 0; j < u.cols; ++j) acc += u.at(keep[r], j) * x[static_cast<size_t>(j)];
      const BigInt& m = moduli[r];
      acc %= m;
      if (acc < 0) acc += m;
      z.push_back(acc);
    }
    return z;
  }
};

FactorData build_factor(const Ring& F, long n, bool cw) {
  FactorData fd;
  fd.F = F;
  fd.cw = cw;
  fd.levels = cw ? n + 1 : n;
  for (unsigned long long i = 0; i < F->size; ++i) {
    RingElem x = r_from_index(F, i);
    if (x.is_zero()) continue;
    fd.index_of[x.c] = static_cast<long>(fd.nonzero.size());
    fd.nonzero.push_back(x);
  }
  long ng = fd.ngens();
  std::vector<std::vector<BigInt>> rows;
  auto expr_of = [&](const WittVec& v) {
    std::vector<BigInt> e(static_cast<size_t>(ng), 0);
    for (long i = 0; i < v.len(); ++i)
      if (!v.a[static_cast<size_t>(i)].is_zero())
        e[static_cast<size_t>(fd.gen_index(i, v.a[static_cast<size_t>(i)]))] += 1;
    return e;
  };
  // pair relations: truncation closes the expressions
  std::vector<RingElem> basis;
  for (long i = 0; i < F->dim(); ++i) {
    std::vector<Int> c(F->dim(), 0);
    c[i] = 1;
    basis.push_back(RingElem{F, std::move(c)});
  }
  for (long i = 0; i < fd.levels; ++i)
    for (const RingElem& x : fd.nonzero)
      for (const RingElem& b : basis) {
        // V^i[x] is the coordinate vector (0,..,x,..,0)
        WittVec vxi = w_zero(F, fd.levels);
        vxi.a[static_cast<size_t>(i)] = x;
        WittVec vbi = w_zero(F, fd.levels);
        vbi.a[static_cast<size_t>(i)] = b;
        WittVec s = w_add(vxi, vbi);
        std::vector<BigInt> row = expr_of(s);
        for (auto& e : row) e = -e;
        row[static_cast<size_t>(fd.gen_index(i, x))] += 1;
        row[static_cast<size_t>(fd.gen_index(i, b))] += 1;
        rows.push_back(std::move(row));
      }
  if (cw) {
    // kernel of (Res, F): exactly the classes V^n[s] with p s = 0; top-level
    // addition is plain, so these rows span the kernel subgroup
    for (const RingElem& s2 : p_torsion(F)) {
      if (s2.is_zero()) continue;
      std::vector<BigInt> row(static_cast<size_t>(ng), 0);
      row[static_cast<size_t>(fd.gen_index(n, s2))] = 1;
      rows.push_back(std::move(row));
    }
  }
  IMat rel(static_cast<long>(rows.size()), ng);
  for (size_t r = 0; r < rows.size(); ++r)
    for (long j = 0; j < ng; ++j) rel.at(static_cast<long>(r), j) = rows[r][static_cast<size_t>(j)];
  // lattice = column span of rel^T; with U rel^T V = D the coordinates are z = U x
  SmithResult s = smith_normal_form(imat_transpose(rel), true);
  fd.u = s.U;
  long rdiag = std::min(s.D.rows, s.D.cols);
  BigInt order = 1;
  for (long i = 0; i < ng; ++i) {
    BigInt di = i < rdiag ? s.D.at(i, i) : BigInt(0);
    if (di == 0)
      throw std::logic_error("descent: factor group presentation is not finite");
    order *= di;
    if (di != 1) {
      fd.moduli.push_back(di);
      fd.keep.push_back(i);
    }
  }
  // |W_L(F)| = |F|^L; the CW quotient divides out |F[p]|
  BigInt expect = 1;
  for (long i = 0; i < fd.levels; ++i) expect *= F->size;
  if (cw) expect /= static_cast<unsigned long long>(p_torsion(F).size());
  if (order != expect)
    throw std::logic_error("descent: factor group order mismatch; presentation incomplete");
  return fd;
}

// V^i[x] as a plain coordinate vector of length `levels`
WittVec vteich(const Ring& F, long levels, long i, const RingElem& x) {
  WittVec v = w_zero(F, levels);
  v.a[static_cast<size_t>(i)] = x;
  return v;
}

// one coface map between chain levels, factorwise
struct Coface {
  // target factor index -> (source factor index, galois exponent)
  std::vector<std::pair<long, long>> pullback;
};

struct Tower {
  Covering cov;
  Ring factor_ring;                 // every factor is a copy of this ring
  std::vector<long> factor_count;   // per level q = 0..maxdeg+? factors
  std::vector<std::vector<Coface>> cofaces;  // cofaces[q][i]: level q -> q+1
  std::vector<RingHom> twists;      // galois powers sigma^e (field case)
};

long tuple_index(const std::vector<long>& t, long radix) {
  long idx = 0;
  for (size_t i = t.size(); i-- > 0;) idx = idx * radix + t[i];
  return idx;
}

std::vector<long> index_tuple(long idx, long len, long radix) {
  std::vector<long> t;
  for (long i = 0; i < len; ++i) {
    t.push_back(idx % radix);
    idx /= radix;
  }
  return t;
}

Tower build_tower(const Covering& cov, long maxdeg) {
  Tower tw;
  tw.cov = cov;
  if (cov.kind == "product") {
    tw.factor_ring = cov.base;
    long k = cov.param;
    // level q: factors indexed by tuples (j_0..j_q) in {0..k-1}^{q+1}
    for (long q = 0; q <= maxdeg + 1; ++q) {
      long cnt = 1;
      for (long i = 0; i <= q; ++i) cnt *= k;
      tw.factor_count.push_back(cnt);
    }
    tw.twists.push_back(hom_identity(cov.base));
    for (long q = 0; q <= maxdeg; ++q) {
      std::vector<Coface> cf;
      for (long i = 0; i <= q + 1; ++i) {
        Coface c;
        long tgt = tw.factor_count[static_cast<size_t>(q) + 1];
        for (long f = 0; f < tgt; ++f) {
          std::vector<long> t = index_tuple(f, q + 2, k);
          std::vector<long> src;
          for (long j = 0; j <= q + 1; ++j)
            if (j != i) src.push_back(t[static_cast<size_t>(j)]);
          c.pullback.emplace_back(tuple_index(src, k), 0);
        }
        cf.push_back(std::move(c));
      }
      tw.cofaces.push_back(std::move(cf));
    }
  } else if (cov.kind == "field_ext") {
    if (cov.base->dim() != 1 || cov.base->t != 1)
      throw MathError("field_ext covering requires base F_p");
    Int p = cov.base->p;
    long deg = cov.param;
    Ring fq = ring_fp_poly_quot(p, {"x"}, {irreducible_poly(p, deg)});
    tw.factor_ring = fq;
    // level q: factors indexed by (e_1..e_q) in (Z/deg)^q
    for (long q = 0; q <= maxdeg + 1; ++q) {
      long cnt = 1;
      for (long i = 0; i < q; ++i) cnt *= deg;
      tw.factor_count.push_back(cnt);
    }
    // twists sigma^e : x -> x^{p^e}
    for (long e = 0; e < deg; ++e) {
      RingElem xe = r_parse(fq, "x");
      for (long i = 0; i < e; ++i) xe = r_pow(xe, static_cast<unsigned long long>(p));
      tw.twists.push_back(hom_var_images(fq, fq, {{"x", xe}}));
    }
    for (long q = 0; q <= maxdeg; ++q) {
      std::vector<Coface> cf;
      long m = q + 1;  // number of tensor slots at level q
      for (long i = 0; i <= m; ++i) {
        Coface c;
        long tgt = tw.factor_count[static_cast<size_t>(q) + 1];
        for (long f = 0; f < tgt; ++f) {
          std::vector<long> t = index_tuple(f, m, deg);  // exponents e_2..e_{m+2}
          if (i == 0) {
            // source tuple (e_3 - e_2, ..., e_{m+1} - e_2), twist sigma^{e_2}
            std::vector<long> src;
            for (long j = 1; j < m; ++j)
              src.push_back(((t[static_cast<size_t>(j)] - t[0]) % deg + deg) % deg);
            c.pullback.emplace_back(tuple_index(src, deg), t[0]);
          } else {
            // drop exponent t[i-1], no twist
            std::vector<long> src;
            for (long j = 0; j < m; ++j)
              if (j != i - 1) src.push_back(t[static_cast<size_t>(j)]);
            c.pullback.emplace_back(tuple_index(src, deg), 0);
          }
        }
        cf.push_back(std::move(c));
      }
      tw.cofaces.push_back(std::move(cf));
    }
  } else {
    throw InputError("unknown covering kind " + cov.kind);
  }
  return tw;
}

// per-twist generator maps on the factor group: column (i,x) -> dlog of V^i[sigma^e x]
IMat twist_matrix(const FactorData& fd, const RingHom& twist) {
  long nc = static_cast<long>(fd.moduli.size());
  IMat b(nc, static_cast<long>(fd.ngens()));
  for (long i = 0; i < fd.levels; ++i)
    for (const RingElem& x : fd.nonzero) {
      std::vector<BigInt> z = fd.dlog(vteich(fd.F, fd.levels, i, hom_apply(twist, x)));
      long col = fd.gen_index(i, x);
      for (long r = 0; r < nc; ++r) b.at(r, col) = z[static_cast<size_t>(r)];
    }
  return b;
}

// expand to cyclic source coordinates: generator columns -> cyclic columns needs
// the section of dlog; instead we build d directly on generator columns of the
// source presentation and convert: a map is determined by generator images, and
// the source cyclic coordinates relate by z = U x, so we give d on cyclic
// generators via preimages. Simpler: express d-matrix entries on the cyclic
// generators by mapping each cyclic generator's preimage; the preimage of the
// k-th cyclic generator is the column of U^{-1}... to avoid inverting U we
// instead assemble d on generator columns and note that relation columns map
// consistently, so we can use any preimage. We pick: cyclic generator k of the
// source corresponds to the integer vector row-solve U y = e_k.
std::optional<std::vector<BigInt>> u_preimage(const IMat& u, long k) {
  // solve U y = e_{row k}; U unimodular so a unique integer solution exists
  IMat a = u;
  std::vector<BigInt> rhs(static_cast<size_t>(u.rows), 0);
  rhs[static_cast<size_t>(k)] = 1;
  return integral_solve(a, rhs);
}

struct LevelData {
  FactorData* fd;
  long factors;
};

}  // namespace

Covering covering_product(const Ring& base, long k) {
  if (k < 1) throw MathError("product covering needs k >= 1");
  return Covering{base, "product", k};
}

Covering covering_field_ext(const Ring& base_fp, long deg) {
  return Covering{base_fp, "field_ext", deg};
}

Ring covering_total_ring(const Covering& c) {
  if (c.kind == "product") {
    std::vector<Ring> fs(static_cast<size_t>(c.param), c.base);
    return ring_product(fs);
  }
  return ring_fp_poly_quot(c.base->p, {"x"}, {irreducible_poly(c.base->p, c.param)});
}

CechComplex cech_complex(const Covering& cov, long n, CechVariant variant, long maxdeg,
                         long rank) {
  if (maxdeg < 1) throw MathError("cech: maxdeg must be >= 1");
  if (variant == CechVariant::Module && rank < 0) throw MathError("cech: bad rank");
  Tower tw = build_tower(cov, maxdeg);
  bool cw = variant != CechVariant::W;
  long copies = variant == CechVariant::Module ? rank : 1;
  FactorData fd = build_factor(tw.factor_ring, n, cw);
  long nc = static_cast<long>(fd.moduli.size());
  // cyclic generator preimages (columns in generator coordinates)
  std::vector<std::vector<BigInt>> pre;
  for (long k = 0; k < nc; ++k) {
    auto y = u_preimage(fd.u, fd.keep[static_cast<size_t>(k)]);
    if (!y) throw std::logic_error("descent: transform not unimodular");
    pre.push_back(*y);
  }
  // per twist: matrix of the induced map on cyclic coordinates
  std::vector<IMat> tmat;
  for (const RingHom& tws : tw.twists) {
    IMat gm = twist_matrix(fd, tws);  // cyclic x gens
    IMat m(nc, nc);
    for (long k = 0; k < nc; ++k) {
      // image of cyclic generator k = gm * preimage_k
      for (long r = 0; r < nc; ++r) {
        BigInt acc = 0;
        for (long j = 0; j < gm.cols; ++j) acc += gm.at(r, j) * pre[static_cast<size_t>(k)][static_cast<size_t>(j)];
        m.at(r, k) = acc;
      }
    }
    tmat.push_back(std::move(m));
  }

  CechComplex c;
  c.cov = cov;
  c.n = n;
  c.variant = variant;
  c.rank = rank;
  c.maxdeg = maxdeg;
  for (long q = 0; q <= maxdeg; ++q) {
    ChainLevel lvl;
    for (long f = 0; f < tw.factor_count[static_cast<size_t>(q)]; ++f)
      for (long cp = 0; cp < copies; ++cp)
        for (const BigInt& m : fd.moduli) lvl.moduli.push_back(m);
    c.levels.push_back(std::move(lvl));
  }
  long block = nc * copies;
  for (long q = 0; q < maxdeg; ++q) {
    long rows = static_cast<long>(c.levels[static_cast<size_t>(q) + 1].moduli.size());
    long cols = static_cast<long>(c.levels[static_cast<size_t>(q)].moduli.size());
    IMat d(rows, cols);
    for (size_t i = 0; i < tw.cofaces[static_cast<size_t>(q)].size(); ++i) {
      const Coface& cf = tw.cofaces[static_cast<size_t>(q)][i];
      long sign = (i % 2 == 0) ? 1 : -1;
      for (long f = 0; f < tw.factor_count[static_cast<size_t>(q) + 1]; ++f) {
        auto [src, tw_e] = cf.pullback[static_cast<size_t>(f)];
        const IMat& b = tmat[static_cast<size_t>(tw_e)];
        for (long cp = 0; cp < copies; ++cp)
          for (long r = 0; r < nc; ++r)
            for (long cc = 0; cc < nc; ++cc)
              d.at(f * block + cp * nc + r, src * block + cp * nc + cc) += sign * b.at(r, cc);
      }
    }
    c.d.push_back(std::move(d));
  }
  return c;
}

bool cech_d2_zero(const CechComplex& c) {
  for (size_t q = 0; q + 1 < c.d.size(); ++q) {
    IMat prod = imat_mul(c.d[q + 1], c.d[q]);
    const auto& mod = c.levels[q + 2].moduli;
    for (long i = 0; i < prod.rows; ++i)
      for (long j = 0; j < prod.cols; ++j)
        if (prod.at(i, j) % mod[static_cast<size_t>(i)] != 0) return false;
  }
  return true;
}

AbGroup cech_homology(const CechComplex& c, long q) {
  if (q < 0 || q >= c.maxdeg) throw MathError("cech_homology: q out of range");
  const IMat& d_out = c.d[static_cast<size_t>(q)];
  IMat d_in(static_cast<long>(c.levels[static_cast<size_t>(q)].moduli.size()), 0);
  if (q > 0) d_in = c.d[static_cast<size_t>(q) - 1];
  return homology_group(d_out, c.levels[static_cast<size_t>(q) + 1].moduli, d_in,
                        c.levels[static_cast<size_t>(q)].moduli);
}

BigInt cech_expected_h0(const CechComplex& c) {
  const Ring& r = c.cov.base;
  BigInt wn = 1;
  for (long i = 0; i < c.n; ++i) wn *= r->size;
  if (c.variant == CechVariant::W) return wn;
  // |CW_n(R)| = |W_{n+1}(R)| / |R[p]|
  BigInt wn1 = wn * r->size;
  BigInt rp = static_cast<unsigned long long>(p_torsion(r).size());
  BigInt cwn = wn1 / rp;
  if (c.variant == CechVariant::CW) return cwn;
  BigInt out = 1;
  for (long i = 0; i < c.rank; ++i) out *= cwn;
  return out;
}

ThreeTermReport cech_three_term_check(const Covering& cov, long n, long maxdeg) {
  Tower tw = build_tower(cov, maxdeg);
  FactorData w_next = build_factor(tw.factor_ring, n + 1, false);
  FactorData cw_fd = build_factor(tw.factor_ring, n, true);
  ThreeTermReport rep;
  // per factor: |A[p]| * |CW_n| = |W_{n+1}|, inclusion injective, composite zero
  BigInt worder = 1, cworder = 1;
  for (const BigInt& m : w_next.moduli) worder *= m;
  for (const BigInt& m : cw_fd.moduli) cworder *= m;
  BigInt ap = 0;
  for (const RingElem& s : p_torsion(tw.factor_ring)) {
    (void)s;
    ap += 1;
  }
  if (ap * cworder != worder) {
    rep.ok = false;
    rep.detail = "orders do not multiply";
    return rep;
  }
  for (const RingElem& s : p_torsion(tw.factor_ring)) {
    if (s.is_zero()) continue;
    // inclusion: V^n[s] nonzero in W_{n+1}
    WittVec v = vteich(tw.factor_ring, n + 1, n, s);
    auto z = w_next.dlog(v);
    bool nz = std::any_of(z.begin(), z.end(), [](const BigInt& x) { return x != 0; });
    if (!nz) {
      rep.ok = false;
      rep.detail = "inclusion not injective";
      return rep;
    }
    // composite zero: class vanishes in CW_n
    auto zc = cw_fd.dlog(v);
    bool zero = std::all_of(zc.begin(), zc.end(), [](const BigInt& x) { return x == 0; });
    if (!zero) {
      rep.ok = false;
      rep.detail = "composite projection not zero";
      return rep;
    }
  }
  std::ostringstream os;
  os << "per factor: |A[p]| = " << ap << ", |CW_n| = " << cworder << ", |W_{n+1}| = " << worder;
  rep.detail = os.str();
  return rep;
}

}  // namespace tdk
