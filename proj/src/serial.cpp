#include "tdk/serial.hpp"

namespace tdk {

namespace {

Json require(const Json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  return j.at(key);
}

Mat<WittVec> witt_mat_from_json(const Ring& r, long n, const Json& j, long rows, long cols) {
  Mat<WittVec> m(rows, cols, w_zero(r, n));
  if (static_cast<long>(j.size()) != rows) throw InputError("matrix row count mismatch");
  for (long i = 0; i < rows; ++i) {
    const Json& row = j.at(static_cast<size_t>(i));
    if (static_cast<long>(row.size()) != cols) throw InputError("matrix column count mismatch");
    for (long k = 0; k < cols; ++k) {
      WittVec w = witt_from_json(r, row.at(static_cast<size_t>(k)));
      if (w.len() != n) throw InputError("witt entry has wrong length");
      m.at(i, k) = w;
    }
  }
  return m;
}

Json witt_mat_to_json(const Mat<WittVec>& m) {
  Json rows = Json::array();
  for (long i = 0; i < m.rows; ++i) {
    Json row = Json::array();
    for (long j = 0; j < m.cols; ++j) row.push_back(witt_to_json(m.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Json cwitt_mat_to_json(const Mat<CWitt>& m) {
  Json rows = Json::array();
  for (long i = 0; i < m.rows; ++i) {
    Json row = Json::array();
    for (long j = 0; j < m.cols; ++j) row.push_back(cwitt_to_json(m.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Mat<CWitt> cwitt_mat_from_json(const Ring& r, long n, const Json& j, long rows, long cols) {
  Mat<CWitt> m(rows, cols, cw_zero(r, n));
  if (static_cast<long>(j.size()) != rows) throw InputError("matrix row count mismatch");
  for (long i = 0; i < rows; ++i) {
    const Json& row = j.at(static_cast<size_t>(i));
    if (static_cast<long>(row.size()) != cols) throw InputError("matrix column count mismatch");
    for (long k = 0; k < cols; ++k) m.at(i, k) = cwitt_from_json(r, n, row.at(static_cast<size_t>(k)));
  }
  return m;
}

Json relem_mat_to_json(const Mat<RingElem>& m) {
  Json rows = Json::array();
  for (long i = 0; i < m.rows; ++i) {
    Json row = Json::array();
    for (long j = 0; j < m.cols; ++j) row.push_back(r_print(m.at(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Mat<RingElem> relem_mat_from_json(const Ring& r, const Json& j, long rows, long cols) {
  Mat<RingElem> m(rows, cols, r_zero(r));
  if (static_cast<long>(j.size()) != rows) throw InputError("matrix row count mismatch");
  for (long i = 0; i < rows; ++i) {
    const Json& row = j.at(static_cast<size_t>(i));
    if (static_cast<long>(row.size()) != cols) throw InputError("matrix column count mismatch");
    for (long k = 0; k < cols; ++k)
      m.at(i, k) = r_parse(r, row.at(static_cast<size_t>(k)).get<std::string>());
  }
  return m;
}

}  // namespace

Json ring_to_json(const Ring& r) {
  if (!r->desc_json.empty()) return Json::parse(r->desc_json);
  throw std::logic_error("ring has no descriptor");
}

Ring ring_from_json(const Json& j) {
  std::string kind = require(j, "kind").get<std::string>();
  Ring out;
  if (kind == "zmod") {
    out = ring_zmod(require(j, "p").get<Int>(), require(j, "t").get<Int>());
  } else if (kind == "fp_poly_quot") {
    out = ring_fp_poly_quot(require(j, "p").get<Int>(),
                            require(j, "vars").get<std::vector<std::string>>(),
                            require(j, "rels").get<std::vector<std::string>>());
  } else if (kind == "square_zero_ext") {
    Ring base = ring_from_json(require(j, "base"));
    out = ring_square_zero_ext(base, require(j, "gens").get<std::vector<std::string>>());
  } else if (kind == "product") {
    std::vector<Ring> fs;
    for (const Json& f : require(j, "factors")) fs.push_back(ring_from_json(f));
    out = ring_product(fs);
  } else {
    throw InputError("unknown ring kind '" + kind + "'");
  }
  const_cast<RingStructure*>(out.get())->desc_json = j.dump();
  return out;
}

Json elem_to_json(const RingElem& e) { return r_print(e); }

RingElem elem_from_json(const Ring& r, const Json& j) {
  return r_parse(r, j.get<std::string>());
}

Json witt_to_json(const WittVec& w) {
  Json a = Json::array();
  for (const RingElem& e : w.a) a.push_back(r_print(e));
  return a;
}

WittVec witt_from_json(const Ring& r, const Json& j) {
  WittVec w{r, {}};
  for (const Json& e : j) w.a.push_back(r_parse(r, e.get<std::string>()));
  return w;
}

Json cwitt_to_json(const CWitt& c) {
  Json j;
  j["rep"] = witt_to_json(c.rep);
  return j;
}

CWitt cwitt_from_json(const Ring& r, long n, const Json& j) {
  WittVec rep = witt_from_json(r, require(j, "rep"));
  if (rep.len() != n + 1) throw InputError("cwitt representative must have length n+1");
  return cw_from_rep(rep);
}

Json hom_to_json(const RingHom& h) { return Json::parse(h.desc_json); }

RingHom hom_from_json(const Json& j, const Ring& src, const Ring& dst) {
  std::string kind = require(j, "kind").get<std::string>();
  if (kind == "identity") return hom_identity(src);
  if (kind == "initial") return hom_initial(src, dst);
  if (kind == "sqzero_proj") return hom_sqzero_proj(src, dst);
  if (kind == "sqzero_incl") return hom_sqzero_incl(src, dst);
  if (kind == "var_images") {
    std::map<std::string, RingElem> imgs;
    for (auto& [k, v] : require(j, "images").items())
      imgs.emplace(k, r_parse(dst, v.get<std::string>()));
    return hom_var_images(src, dst, imgs);
  }
  throw InputError("unknown hom kind '" + kind + "'");
}

Json display_to_json(const Display& d) {
  Json j;
  j["ring"] = ring_to_json(d.R);
  j["n"] = d.n;
  j["d"] = d.d;
  j["c"] = d.c;
  j["matrix"] = witt_mat_to_json(d.M);
  return j;
}

Display display_from_json(const Json& j) {
  Ring r = ring_from_json(require(j, "ring"));
  long n = require(j, "n").get<long>();
  long d = require(j, "d").get<long>();
  long c = require(j, "c").get<long>();
  if (n < 1 || d < 0 || c < 0 || d + c < 1) throw InputError("bad display shape");
  Mat<WittVec> m = witt_mat_from_json(r, n, require(j, "matrix"), d + c, d + c);
  return display_make(r, n, d, c, m);
}

Json morphism_to_json(const Morphism& m) {
  Json j;
  j["source"] = display_to_json(m.src);
  j["target"] = display_to_json(m.dst);
  j["X"] = cwitt_mat_to_json(m.X);
  j["Z"] = cwitt_mat_to_json(m.Z);
  j["Y"] = cwitt_mat_to_json(m.Y);
  j["J"] = witt_mat_to_json(m.J);
  return j;
}

Morphism morphism_from_json(const Json& j) {
  Morphism m;
  m.src = display_from_json(require(j, "source"));
  m.dst = display_from_json(require(j, "target"));
  if (!ring_equal(m.src.R, m.dst.R) || m.src.n != m.dst.n)
    throw InputError("morphism: source and target over different rings or levels");
  const Ring& r = m.src.R;
  long n = m.src.n;
  m.X = cwitt_mat_from_json(r, n, require(j, "X"), m.dst.d, m.src.d);
  m.Z = cwitt_mat_from_json(r, n, require(j, "Z"), m.dst.c, m.src.d);
  m.Y = cwitt_mat_from_json(r, n, require(j, "Y"), m.dst.c, m.src.c);
  m.J = witt_mat_from_json(r, n, require(j, "J"), m.dst.d, m.src.c);
  return m;
}

Json thickening_to_json(const Thickening& t) {
  Json j;
  j["S"] = ring_to_json(t->S);
  j["R"] = ring_to_json(t->R);
  Json gens = Json::array();
  for (const RingElem& g : t->ideal_gens) gens.push_back(r_print(g));
  j["kernel_gens"] = gens;
  return j;
}

Thickening thickening_from_json(const Json& j) {
  Ring s = ring_from_json(require(j, "S"));
  Ring r = ring_from_json(require(j, "R"));
  std::vector<std::string> gens;
  for (const Json& g : require(j, "kernel_gens")) gens.push_back(g.get<std::string>());
  if (j.contains("proj")) {
    std::vector<RingElem> ge;
    for (const std::string& g : gens) ge.push_back(r_parse(s, g));
    return thickening_make(s, ge, r, hom_from_json(j.at("proj"), s, r));
  }
  return thickening_make_auto(s, gens, r);
}

Json rel_display_to_json(const RelDisplay& d) {
  Json j;
  j["thickening"] = thickening_to_json(d.th);
  j["n"] = d.n;
  j["d"] = d.d;
  j["c"] = d.c;
  j["matrix"] = witt_mat_to_json(d.M);
  return j;
}

RelDisplay rel_display_from_json(const Json& j) {
  Thickening th = thickening_from_json(require(j, "thickening"));
  long n = require(j, "n").get<long>();
  long d = require(j, "d").get<long>();
  long c = require(j, "c").get<long>();
  Mat<WittVec> m = witt_mat_from_json(th->S, n, require(j, "matrix"), d + c, d + c);
  return rel_display_make(th, n, d, c, m);
}

Json rel_morphism_to_json(const RelMorphism& m) {
  Json j;
  j["source"] = rel_display_to_json(m.src);
  j["target"] = rel_display_to_json(m.dst);
  j["X"] = cwitt_mat_to_json(m.X);
  j["Z"] = cwitt_mat_to_json(m.Z);
  j["Y"] = cwitt_mat_to_json(m.Y);
  Json jm = Json::array();
  for (long i = 0; i < m.J.rows; ++i) {
    Json row = Json::array();
    for (long k = 0; k < m.J.cols; ++k) {
      const JElem& e = m.J.at(i, k);
      Json je;
      je["a"] = r_print(e.apart);
      je["eta"] = witt_to_json(e.eta);
      row.push_back(je);
    }
    jm.push_back(row);
  }
  j["J"] = jm;
  return j;
}

Json seed_to_json(const LiftSeed& s) {
  Json j;
  j["X_n"] = relem_mat_to_json(s.Xn);
  j["J_n"] = relem_mat_to_json(s.Jn);
  j["Z_n"] = relem_mat_to_json(s.Zn);
  j["Y_n"] = relem_mat_to_json(s.Yn);
  return j;
}

LiftSeed seed_from_json(const Thickening& th, long d2, long c2, long d, long c, const Json& j) {
  LiftSeed s = zero_seed(th, d2, c2, d, c);
  if (j.contains("X_n")) s.Xn = relem_mat_from_json(th->S, j.at("X_n"), d2, d);
  if (j.contains("J_n")) s.Jn = relem_mat_from_json(th->S, j.at("J_n"), d2, c);
  if (j.contains("Z_n")) s.Zn = relem_mat_from_json(th->S, j.at("Z_n"), c2, d);
  if (j.contains("Y_n")) s.Yn = relem_mat_from_json(th->S, j.at("Y_n"), c2, c);
  return s;
}

Json solution_to_json(const LiftSolution& s) {
  Json levels = Json::array();
  for (const HBlock& h : s.H) {
    Json j;
    j["X"] = relem_mat_to_json(h.X);
    j["J"] = relem_mat_to_json(h.J);
    j["Z"] = relem_mat_to_json(h.Z);
    j["Y"] = relem_mat_to_json(h.Y);
    levels.push_back(j);
  }
  Json out;
  out["n"] = s.n;
  out["H"] = levels;
  return out;
}

Json nil_to_json(const NilAlgebra& n) {
  if (!n.desc_json.empty()) return Json::parse(n.desc_json);
  throw std::logic_error("nil algebra has no descriptor");
}

NilAlgebra nil_from_json(const Json& j) {
  Json base = require(j, "base");
  Int p = require(base, "p").get<Int>();
  if (base.contains("t") && base.at("t").get<Int>() != 1)
    throw MathError("nil algebra base must satisfy pR = 0");
  NilAlgebra n = nil_algebra_make(p, require(j, "gens").get<std::vector<std::string>>(),
                                  require(j, "rels").get<std::vector<std::string>>(),
                                  j.contains("frob_exp") ? j.at("frob_exp").get<Int>() : 0);
  n.desc_json = j.dump();
  return n;
}

Json abgroup_to_json(const AbGroup& g) {
  Json j;
  j["order"] = g.order().convert_to<unsigned long long>();
  Json f = Json::array();
  for (const BigInt& x : g.factors) f.push_back(x.convert_to<unsigned long long>());
  j["factors"] = f;
  return j;
}

Json covering_to_json(const Covering& c) {
  Json j;
  j["base"] = ring_to_json(c.base);
  Json cov;
  cov["kind"] = c.kind;
  if (c.kind == "product")
    cov["k"] = c.param;
  else
    cov["deg"] = c.param;
  j["cover"] = cov;
  return j;
}

Covering covering_from_json(const Json& j) {
  Ring base = ring_from_json(require(j, "base"));
  Json cov = require(j, "cover");
  std::string kind = require(cov, "kind").get<std::string>();
  if (kind == "product") return covering_product(base, require(cov, "k").get<long>());
  if (kind == "field_ext") return covering_field_ext(base, require(cov, "deg").get<long>());
  throw InputError("unknown covering kind '" + kind + "'");
}

}  // namespace tdk
