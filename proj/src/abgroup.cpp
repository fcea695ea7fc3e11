#include "tdk/abgroup.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tdk {

IMat imat_mul(const IMat& a, const IMat& b) {
  if (a.cols != b.rows) throw std::logic_error("imat_mul: shape mismatch");
  IMat r(a.rows, b.cols);
  for (long i = 0; i < a.rows; ++i)
    for (long k = 0; k < a.cols; ++k) {
      const BigInt& aik = a.at(i, k);
      if (aik == 0) continue;
      for (long j = 0; j < b.cols; ++j) r.at(i, j) += aik * b.at(k, j);
    }
  return r;
}

IMat imat_transpose(const IMat& a) {
  IMat r(a.cols, a.rows);
  for (long i = 0; i < a.rows; ++i)
    for (long j = 0; j < a.cols; ++j) r.at(j, i) = a.at(i, j);
  return r;
}

IMat imat_vstack(const IMat& a, const IMat& b) {
  if (a.cols != b.cols && a.rows != 0 && b.rows != 0)
    throw std::logic_error("imat_vstack: col mismatch");
  long cols = a.rows ? a.cols : b.cols;
  IMat r(a.rows + b.rows, cols);
  for (long i = 0; i < a.rows; ++i)
    for (long j = 0; j < cols; ++j) r.at(i, j) = a.at(i, j);
  for (long i = 0; i < b.rows; ++i)
    for (long j = 0; j < cols; ++j) r.at(a.rows + i, j) = b.at(i, j);
  return r;
}

namespace {

void swap_rows(IMat& m, long i, long j) {
  if (i == j) return;
  for (long k = 0; k < m.cols; ++k) std::swap(m.at(i, k), m.at(j, k));
}
void swap_cols(IMat& m, long i, long j) {
  if (i == j) return;
  for (long k = 0; k < m.rows; ++k) std::swap(m.at(k, i), m.at(k, j));
}
// row_i -= q * row_j
void row_sub(IMat& m, long i, long j, const BigInt& q) {
  if (q == 0) return;
  for (long k = 0; k < m.cols; ++k) m.at(i, k) -= q * m.at(j, k);
}
void col_sub(IMat& m, long i, long j, const BigInt& q) {
  if (q == 0) return;
  for (long k = 0; k < m.rows; ++k) m.at(k, i) -= q * m.at(k, j);
}
void negate_row(IMat& m, long i) {
  for (long k = 0; k < m.cols; ++k) m.at(i, k) = -m.at(i, k);
}
void negate_col(IMat& m, long i) {
  for (long k = 0; k < m.rows; ++k) m.at(k, i) = -m.at(k, i);
}

}  // namespace

SmithResult smith_normal_form(IMat a, bool want_transforms) {
  SmithResult res;
  long m = a.rows, n = a.cols;
  IMat u, v;
  if (want_transforms) {
    u = IMat(m, m);
    v = IMat(n, n);
    for (long i = 0; i < m; ++i) u.at(i, i) = 1;
    for (long i = 0; i < n; ++i) v.at(i, i) = 1;
  }
  long t = 0;
  while (t < m && t < n) {
    // find pivot: smallest nonzero |entry| in the remaining block
    long pi = -1, pj = -1;
    BigInt best;
    for (long i = t; i < m; ++i)
      for (long j = t; j < n; ++j) {
        if (a.at(i, j) == 0) continue;
        BigInt ab = abs(a.at(i, j));
        if (pi < 0 || ab < best) {
          best = ab;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;  // all zero
    swap_rows(a, t, pi);
    if (want_transforms) swap_rows(u, t, pi);
    swap_cols(a, t, pj);
    if (want_transforms) swap_cols(v, t, pj);

    while (true) {
      bool dirty = false;
      for (long i = t + 1; i < m; ++i) {
        if (a.at(i, t) == 0) continue;
        BigInt q = a.at(i, t) / a.at(t, t);
        row_sub(a, i, t, q);
        if (want_transforms) row_sub(u, i, t, q);
        if (a.at(i, t) != 0) {  // remainder smaller than pivot: swap up
          swap_rows(a, t, i);
          if (want_transforms) swap_rows(u, t, i);
          dirty = true;
        }
      }
      for (long j = t + 1; j < n; ++j) {
        if (a.at(t, j) == 0) continue;
        BigInt q = a.at(t, j) / a.at(t, t);
        col_sub(a, j, t, q);
        if (want_transforms) col_sub(v, j, t, q);
        if (a.at(t, j) != 0) {
          swap_cols(a, t, j);
          if (want_transforms) swap_cols(v, t, j);
          dirty = true;
        }
      }
      if (dirty) continue;
      // pivot alone in its row and column; force divisibility of the block
      bool fixed = true;
      for (long i = t + 1; i < m && fixed; ++i)
        for (long j = t + 1; j < n && fixed; ++j)
          if (a.at(i, j) % a.at(t, t) != 0) {
            row_sub(a, t, i, BigInt(-1));  // row_t += row_i, then re-clear
            if (want_transforms) row_sub(u, t, i, BigInt(-1));
            fixed = false;
          }
      if (fixed) break;
    }
    if (a.at(t, t) < 0) {
      negate_row(a, t);
      if (want_transforms) negate_row(u, t);
    }
    ++t;
  }
  res.D = std::move(a);
  res.U = std::move(u);
  res.V = std::move(v);
  return res;
}

HermiteResult column_hermite(IMat a) {
  long m = a.rows, n = a.cols;
  IMat v(n, n);
  for (long i = 0; i < n; ++i) v.at(i, i) = 1;
  long row = 0, col = 0;
  while (row < m && col < n) {
    long pj = -1;
    BigInt best;
    for (long j = col; j < n; ++j) {
      if (a.at(row, j) == 0) continue;
      BigInt ab = abs(a.at(row, j));
      if (pj < 0 || ab < best) {
        best = ab;
        pj = j;
      }
    }
    if (pj < 0) {
      ++row;
      continue;
    }
    swap_cols(a, col, pj);
    swap_cols(v, col, pj);
    bool again = true;
    while (again) {
      again = false;
      for (long j = col + 1; j < n; ++j) {
        if (a.at(row, j) == 0) continue;
        BigInt q = a.at(row, j) / a.at(row, col);
        col_sub(a, j, col, q);
        col_sub(v, j, col, q);
        if (a.at(row, j) != 0) {
          swap_cols(a, col, j);
          swap_cols(v, col, j);
          again = true;
        }
      }
    }
    if (a.at(row, col) < 0) {
      negate_col(a, col);
      negate_col(v, col);
    }
    ++row;
    ++col;
  }
  return {std::move(a), std::move(v)};
}

std::optional<std::vector<BigInt>> integral_solve(const IMat& a, const std::vector<BigInt>& b) {
  // column HNF: a*V = H, solve H*y = b by forward substitution, x = V*y
  HermiteResult hr = column_hermite(a);
  long m = a.rows, n = a.cols;
  std::vector<BigInt> y(n, 0), r(b);
  long col = 0;
  for (long row = 0; row < m; ++row) {
    if (col < n && hr.H.at(row, col) != 0) {
      BigInt q = r[row] / hr.H.at(row, col);
      if (r[row] % hr.H.at(row, col) != 0) return std::nullopt;
      y[col] = q;
      for (long i = row; i < m; ++i) r[i] -= q * hr.H.at(i, col);
      ++col;
    }
    if (r[row] != 0) return std::nullopt;
  }
  std::vector<BigInt> x(n, 0);
  for (long i = 0; i < n; ++i) {
    if (y[i] == 0) continue;
    for (long j = 0; j < n; ++j) x[j] += hr.V.at(j, i) * y[i];
  }
  return x;
}

IMat integral_kernel(const IMat& a) {
  HermiteResult hr = column_hermite(a);
  long n = a.cols;
  std::vector<long> zero_cols;
  for (long j = 0; j < n; ++j) {
    bool z = true;
    for (long i = 0; i < a.rows && z; ++i)
      if (hr.H.at(i, j) != 0) z = false;
    if (z) zero_cols.push_back(j);
  }
  IMat k(n, static_cast<long>(zero_cols.size()));
  for (size_t c = 0; c < zero_cols.size(); ++c)
    for (long i = 0; i < n; ++i) k.at(i, static_cast<long>(c)) = hr.V.at(i, zero_cols[c]);
  return k;
}

BigInt AbGroup::order() const {
  if (free_rank > 0) throw std::logic_error("infinite group has no order");
  BigInt o = 1;
  for (const auto& f : factors) o *= f;
  return o;
}

std::string AbGroup::str() const {
  std::ostringstream os;
  if (trivial()) return "0";
  bool first = true;
  for (const auto& f : factors) {
    if (!first) os << " x ";
    os << "Z/" << f;
    first = false;
  }
  for (long i = 0; i < free_rank; ++i) {
    if (!first) os << " x ";
    os << "Z";
    first = false;
  }
  return os.str();
}

AbGroup abgroup_from_relations(long gens, const IMat& relations) {
  if (relations.rows > 0 && relations.cols != gens)
    throw std::logic_error("abgroup_from_relations: width mismatch");
  IMat rel = relations;
  if (rel.rows == 0) rel = IMat(0, gens);
  SmithResult s = smith_normal_form(rel);
  AbGroup g;
  long r = std::min(s.D.rows, s.D.cols);
  long rank = 0;
  for (long i = 0; i < r; ++i) {
    if (s.D.at(i, i) == 0) continue;
    ++rank;
    if (s.D.at(i, i) != 1) g.factors.push_back(s.D.at(i, i));
  }
  g.free_rank = gens - rank;
  return g;
}

AbGroup homology_group(const IMat& d_out, const std::vector<BigInt>& moduli_target,
                       const IMat& d_in, const std::vector<BigInt>& moduli_self) {
  long g = static_cast<long>(moduli_self.size());
  if (d_out.cols != g || (d_in.rows && d_in.rows != g))
    throw std::logic_error("homology_group: shape mismatch");
  // cycles: x in Z^g with d_out * x = 0 modulo the target moduli
  long gt = d_out.rows;
  IMat a(gt, g + gt);
  for (long i = 0; i < gt; ++i) {
    for (long j = 0; j < g; ++j) a.at(i, j) = d_out.at(i, j);
    a.at(i, g + i) = moduli_target[static_cast<size_t>(i)];
  }
  IMat k = integral_kernel(a);  // (g+gt) x r
  // cycle lattice Z, columns = first g coordinates of kernel basis
  IMat z(g, k.cols);
  for (long i = 0; i < g; ++i)
    for (long j = 0; j < k.cols; ++j) z.at(i, j) = k.at(i, j);
  // boundaries: columns of d_in plus the moduli lattice of C itself
  long nb = d_in.cols;
  IMat b(g, nb + g);
  for (long i = 0; i < g; ++i) {
    for (long j = 0; j < nb; ++j) b.at(i, j) = d_in.at(i, j);
    b.at(i, nb + i) = moduli_self[static_cast<size_t>(i)];
  }
  // express boundaries in cycle coordinates: Z * Y = B
  IMat y(z.cols, b.cols);
  for (long j = 0; j < b.cols; ++j) {
    std::vector<BigInt> col(g);
    for (long i = 0; i < g; ++i) col[static_cast<size_t>(i)] = b.at(i, j);
    auto sol = integral_solve(z, col);
    if (!sol) throw std::logic_error("homology_group: boundary not a cycle");
    for (long i = 0; i < y.rows; ++i) y.at(i, j) = (*sol)[static_cast<size_t>(i)];
  }
  return abgroup_from_relations(y.rows, imat_transpose(y));
}

AbGroup torsion_subgroup(const AbGroup& g, const BigInt& pm) {
  if (!g.finite()) throw std::logic_error("torsion_subgroup: infinite group");
  AbGroup t;
  for (const auto& f : g.factors) {
    BigInt d = gcd(f, pm);
    if (d != 1) t.factors.push_back(d);
  }
  std::sort(t.factors.begin(), t.factors.end());
  return t;
}

}  // namespace tdk
