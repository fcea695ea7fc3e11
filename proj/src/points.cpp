#include "tdk/points.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "tdk/witt.hpp"

namespace tdk {

namespace {

std::string hat_key(const HatWitt& x) {
  std::string k;
  for (const RingElem& e : x.a) {
    for (Int c : e.c) k += static_cast<char>('0' + c);
    k += '|';
  }
  return k;
}

std::vector<RingElem> additive_basis(const NilAlgebra& N) {
  std::vector<RingElem> basis;
  for (long i = 0; i < N.env->dim(); ++i)
    if (N.ideal_coord[static_cast<size_t>(i)]) {
      std::vector<Int> c(N.env->dim(), 0);
      c[i] = 1;
      basis.push_back(RingElem{N.env, std::move(c)});
    }
  return basis;
}

int ceil_log(Int p, Int k) {
  int e = 0;
  Int v = 1;
  while (v < k) {
    v *= p;
    ++e;
  }
  return e;
}

// per-slot generator bookkeeping: generator (i, x) for x in N \ {0}
struct SlotGens {
  const NilAlgebra* N;
  long levels;                         // i < levels
  std::vector<RingElem> nonzero;       // all nonzero elements of N, indexed
  std::map<std::vector<Int>, long> index_of;

  long ngens() const { return levels * static_cast<long>(nonzero.size()); }
  long gen_index(long level, const RingElem& x) const {
    auto it = index_of.find(x.c);
    if (it == index_of.end()) throw std::logic_error("points: element not indexed");
    return level * static_cast<long>(nonzero.size()) + it->second;
  }
};

SlotGens make_gens(const NilAlgebra& N, long levels) {
  SlotGens g;
  g.N = &N;
  g.levels = levels;
  for (const RingElem& x : N.enumerate())
    if (!x.is_zero()) {
      g.index_of[x.c] = static_cast<long>(g.nonzero.size());
      g.nonzero.push_back(x);
    }
  return g;
}

// canonical expression of a finitely supported vector over the generators;
// fails (nullopt) if the support exceeds the generator levels
std::optional<std::map<long, long>> canon_expr(const SlotGens& g, const HatWitt& v) {
  std::map<long, long> e;
  for (long i = 0; i < v.len(); ++i) {
    const RingElem& c = v.a[static_cast<size_t>(i)];
    if (c.is_zero()) continue;
    if (i >= g.levels) return std::nullopt;
    e[g.gen_index(i, c)] += 1;
  }
  return e;
}

}  // namespace

HatModules hat_modules(const Display& p, const NilAlgebra& N, long M) {
  if (p.R->t != 1) throw MathError("points: base ring must satisfy pR = 0");
  if (N.frob_exp > p.n)
    throw MathError("points: Frobenius exponent of N exceeds the display level");
  if (M < 1) throw MathError("points: support bound must be >= 1");
  long h = p.h();
  Int pr = p.R->p;
  long lg = ceil_log(pr, N.nil_class);
  long n0 = N.frob_exp;
  // stage geometry: Q^-generators live at levels < MQ; their images have
  // support <= MQ + n0, which must stay below the generator range B; complete
  // pair relations are available for levels i with i + lg < B; the report
  // covers levels < Mrep
  long MQ = M + lg + 2;
  long B = MQ + n0 + 1;
  long Mrep = M;
  std::vector<RingElem> basis = additive_basis(N);
  SlotGens gens = make_gens(N, B);
  long ng = gens.ngens();

  // relation rows per slot: pair rows (complete below the fringe) and
  // exponent rows p^E e_g (true since W^(N) elements of bounded support are
  // killed by a fixed p-power)
  std::vector<std::vector<std::pair<long, long>>> slot_rows;  // sparse rows
  for (long i = 0; i + lg < B; ++i) {
    for (const RingElem& x : gens.nonzero)
      for (const RingElem& b : basis) {
        HatWitt vx = hat_teich(N, x, i);
        HatWitt vb = hat_teich(N, b, i);
        HatWitt s = hat_add(vx, vb);
        auto es = canon_expr(gens, s);
        if (!es) throw std::logic_error("points: pair sum escaped the generator range");
        std::vector<std::pair<long, long>> row;
        row.emplace_back(gens.gen_index(i, x), 1);
        long bi = gens.gen_index(i, b);
        bool same = bi == gens.gen_index(i, x);
        if (same)
          row.back().second += 1;
        else
          row.emplace_back(bi, 1);
        for (auto& [gidx, cnt] : *es) {
          bool merged = false;
          for (auto& [rg, rc] : row)
            if (rg == gidx) {
              rc -= cnt;
              merged = true;
            }
          if (!merged) row.emplace_back(gidx, -cnt);
        }
        slot_rows.push_back(std::move(row));
      }
  }
  // p v = V F v over an F_p algebra, so p^{n0} kills all of W^(N)
  BigInt pE = 1;
  for (long i = 0; i < n0; ++i) pE *= pr;

  // Q^-stage generators and their images under Fdot - iota
  struct QG {
    bool t_slot;
    long slot, level;
    RingElem b;
  };
  std::vector<QG> qgens;
  for (long s = 0; s < p.d; ++s)
    for (long i = 0; i < MQ; ++i)
      for (const RingElem& b : basis) qgens.push_back({true, s, i, b});
  for (long s = 0; s < p.c; ++s)
    for (long i = 0; i < MQ; ++i)
      for (const RingElem& b : basis) qgens.push_back({false, s, i, b});

  std::vector<std::vector<HatWitt>> images;
  for (const QG& q : qgens) {
    std::vector<HatWitt> col(static_cast<size_t>(h), hat_zero(N));
    if (q.t_slot) {
      HatWitt eta = hat_teich(N, q.b, q.level);
      for (long r = 0; r < h; ++r)
        col[static_cast<size_t>(r)] = hat_act(p.M.at(r, q.slot), eta);
      col[static_cast<size_t>(q.slot)] =
          hat_sub(col[static_cast<size_t>(q.slot)], hat_versch(eta));
    } else {
      HatWitt ell = hat_teich(N, q.b, q.level);
      HatWitt fell = hat_frob(ell);
      for (long r = 0; r < h; ++r)
        col[static_cast<size_t>(r)] = hat_act(p.M.at(r, p.d + q.slot), fell);
      long ps = p.d + q.slot;
      col[static_cast<size_t>(ps)] = hat_sub(col[static_cast<size_t>(ps)], ell);
    }
    images.push_back(std::move(col));
  }

  HatModules hm;
  hm.bound = M;
  hm.gens = ng * h;
  hm.report_gens = Mrep * static_cast<long>(gens.nonzero.size()) * h;
  long nrel_slot = static_cast<long>(slot_rows.size());
  hm.relations = IMat(nrel_slot * h + hm.gens, hm.gens);
  for (long s = 0; s < h; ++s)
    for (long r = 0; r < nrel_slot; ++r)
      for (auto& [gidx, cnt] : slot_rows[static_cast<size_t>(r)])
        hm.relations.at(s * nrel_slot + r, s * ng + gidx) = cnt;
  for (long gidx = 0; gidx < hm.gens; ++gidx)
    hm.relations.at(nrel_slot * h + gidx, gidx) = pE;
  hm.image_rows = IMat(static_cast<long>(images.size()), hm.gens);
  for (size_t k = 0; k < images.size(); ++k)
    for (long s = 0; s < h; ++s) {
      auto e = canon_expr(gens, images[k][static_cast<size_t>(s)]);
      if (!e) throw std::logic_error("points: image entry escaped the generator range");
      for (auto& [gidx, cnt] : *e) hm.image_rows.at(static_cast<long>(k), s * ng + gidx) = cnt;
    }
  return hm;
}

namespace {

// order the generators so that the reported (low-level) ones come first:
// generator (slot, level, x) -> reported iff level < Mrep
AbGroup reported_subgroup(const HatModules& hm, const Display& p, const NilAlgebra& N, long M) {
  // rebuild index geometry
  long h = p.h();
  SlotGens gens = make_gens(N, 1);  // only for the nonzero count
  long nnz = static_cast<long>(gens.nonzero.size());
  if (nnz == 0 || hm.gens == 0) return AbGroup{};
  long ng = hm.gens / h;
  long rep_levels = hm.report_gens / (h * nnz);
  std::vector<long> rep_cols;
  for (long s = 0; s < h; ++s)
    for (long lvl = 0; lvl < rep_levels; ++lvl)
      for (long x = 0; x < nnz; ++x) rep_cols.push_back(s * ng + lvl * nnz + x);
  (void)M;
  // lattice L = row span of relations + image rows; pullback of the subgroup
  // generated by the reported classes: kernel of [Incl | -L^T]
  IMat rows = imat_vstack(hm.relations, hm.image_rows);
  IMat lt = imat_transpose(rows);  // gens x nrows
  long nrep = static_cast<long>(rep_cols.size());
  IMat a(hm.gens, nrep + lt.cols);
  for (long j = 0; j < nrep; ++j) a.at(rep_cols[static_cast<size_t>(j)], j) = 1;
  for (long i = 0; i < hm.gens; ++i)
    for (long j = 0; j < lt.cols; ++j) a.at(i, nrep + j) = -lt.at(i, j);
  IMat ker = integral_kernel(a);
  // relation rows of the subgroup presentation: x-parts of the kernel basis
  IMat sub_rows(ker.cols, nrep);
  for (long j = 0; j < ker.cols; ++j)
    for (long i = 0; i < nrep; ++i) sub_rows.at(j, i) = ker.at(i, j);
  return abgroup_from_relations(nrep, sub_rows);
}

}  // namespace

bool points_injective_model(const Display& p, const NilAlgebra& N, long M, BigInt* model_order) {
  if (p.R->t != 1) throw MathError("points: base ring must satisfy pR = 0");
  long h = p.h();
  std::vector<RingElem> basis = additive_basis(N);
  // materialize per-slot stage groups by BFS closure
  auto closure = [&](long shift) {
    std::vector<HatWitt> gens;
    for (long i = 0; i < M; ++i)
      for (const RingElem& b : basis) gens.push_back(hat_teich(N, b, i + shift));
    std::vector<HatWitt> elems{hat_zero(N)};
    std::unordered_set<std::string> seen{hat_key(elems[0])};
    size_t head = 0;
    while (head < elems.size()) {
      HatWitt cur = elems[head++];
      for (const HatWitt& g : gens) {
        HatWitt nxt = hat_add(cur, g);
        if (seen.insert(hat_key(nxt)).second) {
          elems.push_back(nxt);
          if (elems.size() > 100000)
            throw MathError("points: injectivity model too large; lower the bound");
        }
      }
    }
    return elems;
  };
  std::vector<HatWitt> tgrp = p.d > 0 ? closure(1) : std::vector<HatWitt>{hat_zero(N)};
  std::vector<HatWitt> lgrp = p.c > 0 ? closure(0) : std::vector<HatWitt>{hat_zero(N)};
  // enumerate the product over slots, mapping through Fdot - iota
  double total = 1;
  for (long s = 0; s < p.d; ++s) total *= static_cast<double>(tgrp.size());
  for (long s = 0; s < p.c; ++s) total *= static_cast<double>(lgrp.size());
  if (total > 300000) throw MathError("points: injectivity model too large; lower the bound");
  if (model_order) *model_order = static_cast<unsigned long long>(total);
  std::vector<long> idx(static_cast<size_t>(h), 0);
  std::unordered_set<std::string> image_keys;
  while (true) {
    // build q from idx, compute image key
    std::vector<HatWitt> col(static_cast<size_t>(h), hat_zero(N));
    for (long s = 0; s < p.d; ++s) {
      const HatWitt& veta = tgrp[static_cast<size_t>(idx[static_cast<size_t>(s)])];
      // veta is V(eta): recover eta by dropping the leading zero
      HatWitt eta = hat_zero(N);
      if (!veta.a.empty())
        eta.a.assign(veta.a.begin() + 1, veta.a.end());
      for (long r = 0; r < h; ++r)
        col[static_cast<size_t>(r)] =
            hat_add(col[static_cast<size_t>(r)], hat_act(p.M.at(r, s), eta));
      col[static_cast<size_t>(s)] = hat_sub(col[static_cast<size_t>(s)], veta);
    }
    for (long s = 0; s < p.c; ++s) {
      const HatWitt& ell = lgrp[static_cast<size_t>(idx[static_cast<size_t>(p.d + s)])];
      HatWitt fell = hat_frob(ell);
      for (long r = 0; r < h; ++r)
        col[static_cast<size_t>(r)] =
            hat_add(col[static_cast<size_t>(r)], hat_act(p.M.at(r, p.d + s), fell));
      col[static_cast<size_t>(p.d + s)] = hat_sub(col[static_cast<size_t>(p.d + s)], ell);
    }
    std::string key;
    for (const HatWitt& e : col) key += hat_key(e) + "/";
    if (!image_keys.insert(key).second) return false;  // collision: not injective
    // odometer
    long s = 0;
    while (s < h) {
      size_t lim = static_cast<size_t>(s) < static_cast<size_t>(p.d) ? tgrp.size() : lgrp.size();
      if (static_cast<size_t>(++idx[static_cast<size_t>(s)]) < lim) break;
      idx[static_cast<size_t>(s)] = 0;
      ++s;
    }
    if (s == h) break;
  }
  return true;
}

PointsResult fg_points(const Display& p, const NilAlgebra& N, long start_bound, long max_bound) {
  std::optional<AbGroup> prev;
  for (long M = start_bound; M <= max_bound; ++M) {
    HatModules hm = hat_modules(p, N, M);
    AbGroup g = reported_subgroup(hm, p, N, M);
    if (prev && *prev == g) {
      PointsResult res;
      res.group = g;
      res.bound_used = M;
      res.injective = points_injective_model(p, N, std::min(M, 2L), &res.model_q_order);
      return res;
    }
    prev = g;
  }
  throw MathError("points: cokernel did not stabilize within the bound");
}

AbGroup bt_points(const Display& p, long m, const NilAlgebra& N, long start_bound,
                  long max_bound) {
  if (m < 0) throw MathError("bt_points: m must be >= 0");
  PointsResult fg = fg_points(p, N, start_bound, max_bound);
  BigInt pm = 1;
  for (long i = 0; i < m; ++i) pm *= p.R->p;
  return torsion_subgroup(fg.group, pm);
}

AbGroup mu_oracle(const NilAlgebra& N, long m) {
  Int p = N.env->p;
  BigInt pm = 1;
  for (long i = 0; i < m; ++i) pm *= p;
  std::vector<RingElem> elems = N.enumerate();
  RingElem one = r_one(N.env);
  auto order_divides = [&](const RingElem& a, const BigInt& e) {
    RingElem u = r_add(one, a);
    RingElem acc = one;
    BigInt k = e;
    RingElem base = u;
    while (k > 0) {
      if (k % 2 == 1) acc = r_mul(acc, base);
      base = r_mul(base, base);
      k /= 2;
    }
    return acc == one;
  };
  std::vector<RingElem> group;
  for (const RingElem& a : elems)
    if (order_divides(a, pm)) group.push_back(a);
  std::vector<long> logs;  // log_p |G[p^j]|
  logs.push_back(0);
  BigInt pj = 1;
  while (true) {
    pj *= p;
    long c = 0;
    for (const RingElem& a : group)
      if (order_divides(a, pj)) ++c;
    long lg = 0, v = c;
    while (v > 1) {
      v /= static_cast<long>(p);
      ++lg;
    }
    logs.push_back(lg);
    if (c == static_cast<long>(group.size())) break;
  }
  AbGroup g;
  std::vector<long> dj;  // #{i : a_i >= j}
  for (size_t j = 1; j < logs.size(); ++j) dj.push_back(logs[j] - logs[j - 1]);
  for (size_t j = dj.size(); j-- > 0;) {
    long with_this = dj[j] - (j + 1 < dj.size() ? dj[j + 1] : 0);
    for (long t = 0; t < with_this; ++t) {
      BigInt f = 1;
      for (size_t i = 0; i <= j; ++i) f *= p;
      g.factors.push_back(f);
    }
  }
  std::sort(g.factors.begin(), g.factors.end());
  return g;
}

AbGroup unit_group_oracle(const NilAlgebra& N) { return mu_oracle(N, 30); }

}  // namespace tdk
