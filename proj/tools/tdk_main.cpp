// tdk: truncated display kit. One JSON job per invocation; exit 0 on success,
// 1 on mathematically invalid input (with a structured report), 2 on
// malformed input.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>

#include "tdk/serial.hpp"

using namespace tdk;

namespace {

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("json parse error: ") + e.what());
  }
  return j;
}

void write_json(const std::string& path, const Json& j) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file " + path);
  out << j.dump(2) << "\n";
}

struct Options {
  std::string in, in2, out;
  long level = -1;
  long order_bound = -1;
  unsigned long long seed = 0;
  long bound = -1;
};

int cmd_witt_eval(const Options& o) {
  Json j = read_json(o.in);
  Ring r = ring_from_json(j.at("ring"));
  std::string op = j.at("op").get<std::string>();
  Json out;
  auto arg = [&](size_t i) { return witt_from_json(r, j.at("args").at(i)); };
  if (op == "add")
    out["result"] = witt_to_json(w_add(arg(0), arg(1)));
  else if (op == "mul")
    out["result"] = witt_to_json(w_mul(arg(0), arg(1)));
  else if (op == "sub")
    out["result"] = witt_to_json(w_sub(arg(0), arg(1)));
  else if (op == "neg")
    out["result"] = witt_to_json(w_neg(arg(0)));
  else if (op == "frobenius")
    out["result"] = witt_to_json(frobenius(arg(0)));
  else if (op == "verschiebung")
    out["result"] = witt_to_json(verschiebung(arg(0)));
  else if (op == "teichmuller")
    out["result"] = witt_to_json(
        teichmuller(r_parse(r, j.at("elem").get<std::string>()), j.at("length").get<long>()));
  else if (op == "restrict")
    out["result"] = witt_to_json(restrict_w(arg(0), j.at("length").get<long>()));
  else if (op == "ghost")
    out["result"] = r_print(ghost(arg(0), j.at("index").get<long>()));
  else
    throw InputError("unknown witt op '" + op + "'");
  write_json(o.out, out);
  return 0;
}

int cmd_display_validate(const Options& o) {
  Json j = read_json(o.in);
  Json out;
  if (j.contains("X")) {
    Morphism m = morphism_from_json(j);
    Violation v = morphism_validate(m);
    if (!v.ok) {
      out["valid"] = false;
      out["block"] = v.block;
      out["i"] = v.i;
      out["j"] = v.j;
      out["message"] = v.msg;
      write_json(o.out, out);
      return 1;
    }
    out["valid"] = true;
    out["kind"] = "morphism";
  } else {
    Display d = display_from_json(j);  // throws MathError if not invertible
    out["valid"] = true;
    out["kind"] = "display";
    out["height"] = d.h();
  }
  write_json(o.out, out);
  return 0;
}

int cmd_display_compose(const Options& o) {
  Morphism a1 = morphism_from_json(read_json(o.in));
  Morphism a2 = morphism_from_json(read_json(o.in2));
  Violation v1 = morphism_validate(a1);
  if (!v1.ok) throw MathError("first morphism invalid: " + v1.msg);
  Violation v2 = morphism_validate(a2);
  if (!v2.ok) throw MathError("second morphism invalid: " + v2.msg);
  Morphism c = morphism_compose(a2, a1);
  write_json(o.out, morphism_to_json(c));
  return 0;
}

int cmd_display_truncate(const Options& o) {
  if (o.level < 1) throw InputError("--level required");
  Json j = read_json(o.in);
  if (j.contains("X")) {
    Morphism m = morphism_from_json(j);
    write_json(o.out, morphism_to_json(truncate_morphism(m, o.level)));
  } else {
    Display d = display_from_json(j);
    write_json(o.out, display_to_json(truncate_display(d, o.level)));
  }
  return 0;
}

int cmd_display_basechange(const Options& o) {
  Json j = read_json(o.in);
  Json hom = read_json(o.in2);
  Ring dst = ring_from_json(hom.at("target"));
  if (j.contains("X")) {
    Morphism m = morphism_from_json(j);
    RingHom phi = hom_from_json(hom.at("hom"), m.src.R, dst);
    write_json(o.out, morphism_to_json(base_change_morphism(m, phi)));
  } else {
    Display d = display_from_json(j);
    RingHom phi = hom_from_json(hom.at("hom"), d.R, dst);
    write_json(o.out, display_to_json(base_change_display(d, phi)));
  }
  return 0;
}

int cmd_nilpotence_order(const Options& o) {
  Display d = display_from_json(read_json(o.in));
  long bound = o.order_bound > 0 ? o.order_bound : d.c * d.R->t * 2 + 2;
  auto e = nilpotence_order(d, bound);
  Json out;
  if (e) {
    out["order"] = *e;
  } else {
    out["nilpotent"] = false;
    out["bound"] = bound;
  }
  write_json(o.out, out);
  return 0;
}

int cmd_lift_solve(const Options& o) {
  Json j = read_json(o.in);
  Thickening th = thickening_from_json(j.at("thickening"));
  long n = j.at("n").get<long>();
  auto load = [&](const Json& dj) {
    long d = dj.at("d").get<long>(), c = dj.at("c").get<long>();
    Mat<WittVec> m(d + c, d + c, w_zero(th->S, n));
    long h = d + c;
    const Json& rows = dj.at("matrix");
    for (long i = 0; i < h; ++i)
      for (long k = 0; k < h; ++k)
        m.at(i, k) = witt_from_json(th->S, rows.at(static_cast<size_t>(i)).at(static_cast<size_t>(k)));
    return rel_display_make(th, n, d, c, m);
  };
  RelDisplay p = load(j.at("display"));
  RelDisplay q = load(j.at("display_prime"));
  LiftSeed seed = j.contains("seed") ? seed_from_json(th, q.d, q.c, p.d, p.c, j.at("seed"))
                                     : zero_seed(th, q.d, q.c, p.d, p.c);
  auto [sol, alpha] = lift_solve(p, q, seed);
  Violation v = rel_morphism_validate(alpha);
  Json out;
  out["solution"] = solution_to_json(sol);
  out["morphism"] = rel_morphism_to_json(alpha);
  out["valid"] = v.ok;
  Morphism red = reduce_morphism(alpha);
  out["reduces_to_identity"] =
      morphism_p_matrix(red) == morphism_p_matrix(morphism_identity(reduce_display(p)));
  write_json(o.out, out);
  return v.ok ? 0 : 1;
}

int cmd_lift_uniqueness(const Options& o) {
  Json j = read_json(o.in);
  Thickening th = thickening_from_json(j.at("thickening"));
  long n = j.at("n").get<long>();
  auto load = [&](const Json& dj) {
    long d = dj.at("d").get<long>(), c = dj.at("c").get<long>();
    Mat<WittVec> m(d + c, d + c, w_zero(th->S, n));
    for (long i = 0; i < d + c; ++i)
      for (long k = 0; k < d + c; ++k)
        m.at(i, k) =
            witt_from_json(th->S, dj.at("matrix").at(static_cast<size_t>(i)).at(static_cast<size_t>(k)));
    return rel_display_make(th, n, d, c, m);
  };
  RelDisplay p = load(j.at("display"));
  RelDisplay q = load(j.at("display_prime"));
  auto e = nilpotence_order(reduce_display(p), o.order_bound > 0 ? o.order_bound : 8);
  if (!e) throw MathError("lift-uniqueness: reduction is not nilpotent within the bound");
  if (n <= th->m * (*e + 1) + 1)
    throw MathError("lift-uniqueness: hypothesis n > m(e+1)+1 violated");
  // deterministic seed sample (all if few, else 4 drawn by the given seed)
  std::vector<LiftSeed> seeds = enumerate_seeds(th, q.d, q.c, p.d, p.c, 1 << 14);
  std::mt19937_64 rng(o.seed);
  if (seeds.size() > 4) {
    std::vector<LiftSeed> pick;
    for (int i = 0; i < 4; ++i) pick.push_back(seeds[rng() % seeds.size()]);
    seeds = pick;
  }
  std::vector<LiftSolution> sols;
  for (const LiftSeed& s : seeds) sols.push_back(lift_solve(p, q, s).first);
  bool pass = true;
  for (size_t i = 1; i < sols.size(); ++i)
    if (!truncation_uniqueness_check(sols[0], sols[i], *e, th->m)) pass = false;
  Json out;
  out["pass"] = pass;
  out["nilpotence_order"] = *e;
  out["m"] = th->m;
  out["agree_to_level"] = uniqueness_level(n, *e, th->m);
  out["seeds"] = seeds.size();
  write_json(o.out, out);
  return pass ? 0 : 1;
}

int cmd_crystal_eval(const Options& o) {
  Json j = read_json(o.in);
  Thickening th = thickening_from_json(j.at("thickening"));
  Display pbar = display_from_json(j.at("display"));
  CrystalModule cm = crystal_eval(pbar, th, o.order_bound > 0 ? o.order_bound : 8);
  // well-definedness: the solver comparison of the canonical lift with itself
  // is the identity at level 1 for every enumerable seed
  bool well_defined = true;
  Mat<RingElem> id(cm.rank, cm.rank, r_zero(th->S));
  for (long i = 0; i < cm.rank; ++i) id.at(i, i) = r_one(th->S);
  for (const LiftSeed& s : enumerate_seeds(th, pbar.d, pbar.c, pbar.d, pbar.c, 1 << 10))
    if (!(crystal_compare(cm.lift, cm.lift, s) == id)) well_defined = false;
  Json out;
  out["rank"] = cm.rank;
  out["basis"] = cm.basis;
  out["well_defined"] = well_defined;
  out["lift"] = rel_display_to_json(cm.lift);
  write_json(o.out, out);
  return 0;
}

int cmd_hodge_lift(const Options& o) {
  Json j = read_json(o.in);
  RelDisplay rel = rel_display_from_json(j);
  Mat<RingElem> phi(rel.d, rel.c, r_zero(rel.th->S));
  const Json& pj = j.at("phi");
  for (long i = 0; i < rel.d; ++i)
    for (long k = 0; k < rel.c; ++k)
      phi.at(i, k) = r_parse(rel.th->S, pj.at(static_cast<size_t>(i)).at(static_cast<size_t>(k)).get<std::string>());
  Display lifted = hodge_lift_display(rel, phi);
  write_json(o.out, display_to_json(lifted));
  return 0;
}

int cmd_points(const Options& o, bool bt) {
  Json j = read_json(o.in);
  Display d = display_from_json(j.at("display"));
  NilAlgebra n = nil_from_json(j.at("nil"));
  long start = o.bound > 0 ? o.bound : 1;
  PointsResult r = fg_points(d, n, start, start + 5);
  Json out;
  if (bt) {
    if (o.level < 0) throw InputError("--level (torsion exponent m) required");
    AbGroup g = bt_points(d, o.level, n, start, start + 5);
    out = abgroup_to_json(g);
  } else {
    out = abgroup_to_json(r.group);
  }
  out["bound_used"] = r.bound_used;
  out["injective"] = r.injective;
  write_json(o.out, out);
  return 0;
}

int cmd_descent_cech(const Options& o) {
  Json j = read_json(o.in);
  Covering cov = covering_from_json(j);
  long n = o.level > 0 ? o.level : 2;
  long maxdeg = o.bound > 0 ? o.bound : 3;
  CechVariant variant = CechVariant::CW;
  long rank = 1;
  if (j.contains("variant")) {
    std::string v = j.at("variant").get<std::string>();
    if (v == "W")
      variant = CechVariant::W;
    else if (v == "CW")
      variant = CechVariant::CW;
    else if (v == "module") {
      variant = CechVariant::Module;
      rank = j.contains("rank") ? j.at("rank").get<long>() : 1;
    } else
      throw InputError("unknown variant '" + v + "'");
  }
  CechComplex c = cech_complex(cov, n, variant, maxdeg, rank);
  Json out;
  out["d_squared_zero"] = cech_d2_zero(c);
  Json hs = Json::array();
  bool acyclic = true;
  for (long q = 0; q < maxdeg; ++q) {
    AbGroup h = cech_homology(c, q);
    Json hj = abgroup_to_json(h);
    hj["q"] = q;
    hs.push_back(hj);
    if (q >= 1 && !h.trivial()) acyclic = false;
  }
  out["homology"] = hs;
  out["h0_expected"] = cech_expected_h0(c).convert_to<unsigned long long>();
  AbGroup h0 = cech_homology(c, 0);
  out["h0_matches"] = h0.order() == cech_expected_h0(c);
  out["acyclic_above_0"] = acyclic;
  write_json(o.out, out);
  if (!out["d_squared_zero"].get<bool>() || !out["h0_matches"].get<bool>() || !acyclic) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tdk: truncated Witt vector and display toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool needs_in2 = false) {
    sub->add_option("--in", o.in, "input file")->required();
    if (needs_in2) sub->add_option("--in2", o.in2, "second input file")->required();
    sub->add_option("--out", o.out, "output file (stdout if omitted)");
    sub->add_option("--level", o.level, "level / truncation / torsion exponent");
    sub->add_option("--order-bound", o.order_bound, "nilpotence order bound");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--bound", o.bound, "support or degree bound");
  };

  std::map<std::string, std::function<int()>> handlers;
  auto reg = [&](const std::string& name, const std::string& help, bool in2,
                 std::function<int()> fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, in2);
    handlers[name] = std::move(fn);
    sub->callback([&, name] { handlers.at(name)(); });
  };

  int rc = 0;
  auto wrap = [&](std::function<int()> fn) {
    return [&, fn]() -> int {
      rc = fn();
      return rc;
    };
  };

  reg("witt-eval", "evaluate a Witt vector operation", false, wrap([&] { return cmd_witt_eval(o); }));
  reg("display-validate", "validate a display or morphism file", false,
      wrap([&] { return cmd_display_validate(o); }));
  reg("display-compose", "compose morphisms (--in2 after --in)", true,
      wrap([&] { return cmd_display_compose(o); }));
  reg("display-truncate", "truncate a display or morphism to --level", false,
      wrap([&] { return cmd_display_truncate(o); }));
  reg("display-basechange", "base change along a ring hom (--in2)", true,
      wrap([&] { return cmd_display_basechange(o); }));
  reg("nilpotence-order", "nilpotence order of a display", false,
      wrap([&] { return cmd_nilpotence_order(o); }));
  reg("lift-solve", "solve the lifting equations for a lift problem", false,
      wrap([&] { return cmd_lift_solve(o); }));
  reg("lift-uniqueness", "verify truncation uniqueness across seeds", false,
      wrap([&] { return cmd_lift_uniqueness(o); }));
  reg("crystal-eval", "evaluate the crystal of a nilpotent display", false,
      wrap([&] { return cmd_crystal_eval(o); }));
  reg("hodge-lift", "display lift given a Hodge filtration shift", false,
      wrap([&] { return cmd_hodge_lift(o); }));
  reg("points-fg", "points of the truncated formal group", false,
      wrap([&] { return cmd_points(o, false); }));
  reg("points-bt", "p^m-torsion points (--level m)", false,
      wrap([&] { return cmd_points(o, true); }));
  reg("descent-cech", "Cech complex homology for a covering", false,
      wrap([&] { return cmd_descent_cech(o); }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const MathError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    if (!o.out.empty()) {
      Json rep;
      rep["valid"] = false;
      rep["error"] = e.what();
      try {
        write_json(o.out, rep);
      } catch (...) {
      }
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return rc;
}
