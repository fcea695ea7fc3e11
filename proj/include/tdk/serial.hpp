#pragma once

#include <json.hpp>

#include "tdk/descent.hpp"
#include "tdk/points.hpp"
#include "tdk/relative.hpp"

namespace tdk {

using Json = nlohmann::ordered_json;

// ring descriptors: {"kind":"zmod","p":2,"t":2},
// {"kind":"fp_poly_quot","p":2,"vars":["x"],"rels":["x^2"]},
// {"kind":"square_zero_ext","base":{...},"gens":["e"]},
// {"kind":"product","factors":[...]}
Json ring_to_json(const Ring& r);
Ring ring_from_json(const Json& j);

Json elem_to_json(const RingElem& e);  // canonical coordinate string
RingElem elem_from_json(const Ring& r, const Json& j);

Json witt_to_json(const WittVec& w);
WittVec witt_from_json(const Ring& r, const Json& j);

Json cwitt_to_json(const CWitt& c);  // {"rep": [...]} via the representative
CWitt cwitt_from_json(const Ring& r, long n, const Json& j);

// hom descriptors: {"kind":"identity"|"initial"|"sqzero_proj"|"sqzero_incl"} or
// {"kind":"var_images","images":{"x":"..."}}
Json hom_to_json(const RingHom& h);
RingHom hom_from_json(const Json& j, const Ring& src, const Ring& dst);

Json display_to_json(const Display& d);
Display display_from_json(const Json& j);

Json morphism_to_json(const Morphism& m);
Morphism morphism_from_json(const Json& j);

// {"S":{...},"R":{...},"kernel_gens":["e"],("proj":{...})}
Json thickening_to_json(const Thickening& t);
Thickening thickening_from_json(const Json& j);

Json rel_display_to_json(const RelDisplay& d);
RelDisplay rel_display_from_json(const Json& j);

Json rel_morphism_to_json(const RelMorphism& m);

Json seed_to_json(const LiftSeed& s);
LiftSeed seed_from_json(const Thickening& th, long d2, long c2, long d, long c, const Json& j);

Json solution_to_json(const LiftSolution& s);

// {"base":{...},"gens":["x"],"rels":["x^4"],"frob_exp":2}
Json nil_to_json(const NilAlgebra& n);
NilAlgebra nil_from_json(const Json& j);

Json abgroup_to_json(const AbGroup& g);  // {"order":4,"factors":[2,2]}

// {"base":{...},"cover":{"kind":"product","k":2}|{"kind":"field_ext","deg":2}}
Json covering_to_json(const Covering& c);
Covering covering_from_json(const Json& j);

}  // namespace tdk
