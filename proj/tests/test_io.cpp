#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "catcoh/io.hpp"
#include "testutil.hpp"

using namespace catcoh;

namespace {

Json small_file() {
  return Json::parse(R"({
    "categories": {
      "pt": {"objects": 1, "morphisms": [{"src":0,"tgt":0}], "identity": [0],
             "composition": [[0,0,0]]},
      "I": {"objects": 2,
            "morphisms": [{"src":0,"tgt":0},{"src":0,"tgt":1},{"src":1,"tgt":1}],
            "identity": [0,2],
            "composition": [[0,0,0],[1,0,1],[2,1,1],[2,2,2]]}
    },
    "functors": {
      "collapse": {"src":"I","tgt":"pt","obj_map":[0,0],"mor_map":[0,0,0]},
      "top": {"src":"pt","tgt":"I","obj_map":[1],"mor_map":[2]}
    },
    "diagrams": {
      "L": {"base":"pt","fibers":["I"],"on_mor":["idI"]}
    },
    "natural_systems": {
      "c2": {"base":"I","kind":"constant","rank":2},
      "skew": {"base":"I","kind":"contravariant","object_ranks":[0,1],
               "matrices":[[],[],[[1]]]},
      "exp": {"base":"I","kind":"explicit","ranks":[1,1,1],
              "post":[{"psi":1,"alpha":0,"matrix":[[3]]}]}
    },
    "tasks": [
      {"name":"t1","op":"cohomology","category":"I","system":"c2","ring":"zz","max_degree":3}
    ]
  })");
}

}  // namespace

TEST_CASE("parse, resolve, validate") {
  Json j = small_file();
  j["functors"]["idI"] = Json{{"src", "I"}, {"tgt", "I"}, {"obj_map", {0, 1}}, {"mor_map", {0, 1, 2}}};
  WorkbenchFile wf = parse_workbench(j);
  Workspace ws(wf);
  CHECK(ws.category("pt").morphisms() == 1);
  CHECK(ws.category("I").morphisms() == 3);
  CHECK(validate_functor(ws.functor("collapse")).ok());
  CHECK(ws.diagram("L").fiber.size() == 1);
  CHECK(ws.grothendieck("L").cat.morphisms() == 3);
  NaturalSystem c2 = ws.system("c2", Ring::zz());
  CHECK(c2.rank(0) == 2);
  CHECK(c2.is_constant());
  NaturalSystem skew = ws.system("skew", Ring::zz());
  CHECK(skew.rank(2) == 1);
  CHECK(skew.rank(0) == 0);
  NaturalSystem exp = ws.system("exp", Ring::fp(5));
  CHECK(exp.post(1, 0)(0, 0) == 3);
  CHECK(ws.validate_all().ok());
  CHECK(ws.file().tasks.size() == 1);
}

TEST_CASE("round trip through emit and parse") {
  Json j = small_file();
  j["functors"]["idI"] = Json{{"src", "I"}, {"tgt", "I"}, {"obj_map", {0, 1}}, {"mor_map", {0, 1, 2}}};
  WorkbenchFile wf = parse_workbench(j);
  Json emitted = emit_workbench(wf);
  WorkbenchFile back = parse_workbench(emitted);
  bool equal = back == wf;
  CHECK(equal);
}

TEST_CASE("dangling references and malformed payloads raise parse errors") {
  Json j = small_file();  // diagram L references the missing functor idI
  WorkbenchFile wf = parse_workbench(j);
  Workspace ws(wf);
  CHECK_THROWS_AS(ws.diagram("L"), ParseError);
  CHECK_THROWS_AS(ws.category("nope"), ParseError);
  CHECK_THROWS_AS(ws.system("nope", Ring::zz()), ParseError);
  CHECK(!ws.validate_all().ok());

  Json bad = small_file();
  bad["natural_systems"]["c2"]["rank"] = "two";  // payload kept verbatim; resolution fails
  Workspace ws_bad{parse_workbench(bad)};
  CHECK_THROWS_AS(ws_bad.system("c2", Ring::zz()), ParseError);
  Json bad2 = small_file();
  bad2["natural_systems"]["skew"]["matrices"] = Json::array({Json::array(), Json::array()});
  Workspace ws2{parse_workbench(bad2)};
  CHECK_THROWS_AS(ws2.system("skew", Ring::zz()), ParseError);
}

TEST_CASE("broken composition tables are validation errors") {
  Json j = small_file();
  j["categories"]["I"]["composition"] = Json::array({Json::array({0, 0, 0})});
  Workspace ws{parse_workbench(j)};
  CHECK_THROWS_AS(ws.category("I"), ValidationError);
}

TEST_CASE("ring parsing") {
  CHECK(parse_ring("zz") == Ring::zz());
  CHECK(parse_ring("fp:2") == Ring::fp(2));
  CHECK(parse_ring("fp:7") == Ring::fp(7));
  CHECK_THROWS_AS(parse_ring("fp:4"), ParseError);
  CHECK_THROWS_AS(parse_ring("rationals"), ParseError);
}

TEST_CASE("adjunction resolution derives the unit when omitted") {
  Json j = small_file();
  j["functors"]["idI"] = Json{{"src", "I"}, {"tgt", "I"}, {"obj_map", {0, 1}}, {"mor_map", {0, 1, 2}}};
  Workspace ws{parse_workbench(j)};
  Adjunction with_unit = ws.adjunction("collapse", "top", std::vector<int>{1, 2});
  CHECK(validate_adjunction(with_unit).ok());
  Adjunction derived = ws.adjunction("collapse", "top", std::nullopt);
  CHECK(validate_adjunction(derived).ok());
  CHECK(derived.unit == with_unit.unit);  // the poset unit is forced
  CHECK_THROWS_AS(ws.adjunction("top", "collapse", std::nullopt), ValidationError);
}

TEST_CASE("emitted category blocks re-validate") {
  Diagram dg = catcoh::testutil::example_c();
  GrothendieckCategory g = grothendieck_construction(dg);
  Json cj = emit_category(g.cat);
  Json file{{"categories", {{"G", cj}}}};
  Workspace ws{parse_workbench(file)};
  CHECK(ws.category("G") == g.cat);
}
