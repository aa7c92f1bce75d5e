#include "doctest.h"
#include "motivic/error.hpp"
#include "motivic/io.hpp"

using namespace motivic;
using io::json;

TEST_CASE("fan json round trip") {
  for (const char* name : {"P2", "P1xP1", "Hirzebruch(3)", "A2", "Gm^2", "P3"}) {
    const auto fan = io::fan_from_json(json(name));
    const auto back = io::fan_from_json(io::fan_to_json(fan));
    CHECK(back == fan);
  }
  const auto doc = json::parse(R"({"rank": 2, "rays": [[1,0],[0,1],[-1,-1]], "maximal_cones": [[0,1],[1,2],[0,2]]})");
  CHECK(io::fan_from_json(doc) == toric::projective_space(2));
}

TEST_CASE("fan json errors") {
  CHECK_THROWS(io::fan_from_json(json("NotAFan")));
  CHECK_THROWS(io::fan_from_json(json::parse(R"({"rank": 2, "rays": [[1,0]]})")));
  // A cone containing a line is not strongly convex.
  CHECK_THROWS(io::fan_from_json(json::parse(R"({"rank": 1, "rays": [[1],[-1]], "maximal_cones": [[0,1]]})")));
  CHECK_THROWS_AS(io::load_json("/nonexistent/file.json"), SchemaError);
}

TEST_CASE("object specs") {
  const auto a2 = io::object_from_json(json::parse(R"({"fan": "P2", "open_rays": [0, 1]})"));
  CHECK(a2.klass() == KClass::lefschetz() * KClass::lefschetz());
  const auto line = io::object_from_json(json::parse(R"({"fan": "P2", "orbit_closures": [[0]]})"));
  CHECK(line.dimension() == 1);
  CHECK(line.is_compact());
  const auto x = io::object_from_json(json::parse(R"({"fan": "P2", "remove": [[0, 2]]})"));
  CHECK(x.cells().size() == 6);
  const auto back = io::object_from_json(io::object_to_json(a2));
  CHECK(back.cells() == a2.cells());
  // A point and the open torus without the line between them.
  CHECK_THROWS_AS(io::object_from_json(json::parse(R"({"fan": "P2", "cells": [0, 4]})")), SchemaError);
}

TEST_CASE("relation files") {
  const auto doc = json::parse(R"([
    {"kind": "open", "slots": {"X": "S", "U": "V", "complement": "P1"},
     "dims": {"S": 2, "V": 2}, "compact": {"S": true, "V": false}}
  ])");
  const auto rels = io::relations_from_json(doc);
  REQUIRE(rels.relations().size() == 1);
  CHECK(rels.lookup("V")->dim == 2);
  const auto k = normalize(parse_expr("S - V", rels), rels);
  CHECK(k == KClass::polynomial({1, 1}));
  CHECK_THROWS_AS(io::relations_from_json(json::parse(R"([{"kind": "glue", "slots": {}}])")), SchemaError);
  CHECK_THROWS_AS(io::relations_from_json(json::parse(R"({"kind": "open"})")), SchemaError);
}

TEST_CASE("registry files") {
  const auto reg = io::registry_from_json(json::parse(R"([{"generator": "K", "measure": "e", "value": [1, 0, 1]},
                                                          {"generator": "K", "measure": "count", "value": [5]}])"));
  CHECK(reg.lookup("K", MeasureSpec::parse("e"))->to_string() == "1 + (uv)^2");
  CHECK(reg.lookup("K", MeasureSpec::parse("count:3")).has_value());
  CHECK_FALSE(reg.lookup("K", MeasureSpec::parse("euler")).has_value());
}

TEST_CASE("toric site round trip") {
  const auto doc = json::parse(R"({
    "objects": [
      {"name": "P2", "backend_ref": {"fan": "P2"}},
      {"name": "A2", "backend_ref": {"fan": "P2", "open_rays": [0, 1]}, "dim": 2, "compact": false},
      {"name": "line", "backend_ref": {"fan": "P2", "open_rays": [0, 1], "orbit_closures": [[0]]}}
    ],
    "morphisms": [{"name": "j", "src": "line", "window": "line", "tgt": "A2"}],
    "squares": [{"id": "loc", "kind": "localization", "X": "P2", "U": "A2"}]
  })");
  const auto s = io::site_from_json(doc);
  CHECK(s.backend() == site::Backend::toric);
  CHECK(s.square("loc").base() == "A2");
  const auto again = io::site_from_json(io::site_to_json(s));
  CHECK(again.objects().size() == s.objects().size());
  CHECK(again.squares().size() == 1);
  CHECK(again.morphism("j").target == "A2");
  CHECK(io::site_to_json(again).dump() == io::site_to_json(s).dump());

  auto bad = doc;
  bad["objects"][1]["dim"] = 1;
  CHECK_THROWS_AS(io::site_from_json(bad), SchemaError);
}

TEST_CASE("declared site") {
  const auto doc = json::parse(R"({
    "objects": [{"name": "X", "dim": 2}, {"name": "Y", "dim": 2}, {"name": "E", "dim": 1},
                {"name": "C", "dim": 0, "compact": true}],
    "squares": [{"id": "b", "kind": "abstract_blowup", "corners": {"E": "E", "Y": "Y", "C": "C", "X": "X"},
                 "flags": {"closed_immersion": true}}]
  })");
  const auto s = io::site_from_json(doc);
  CHECK(s.backend() == site::Backend::declared);
  const auto& sq = s.square("b");
  CHECK(sq.x == "X");
  CHECK(sq.flags.at("closed_immersion"));
  const auto v = site::validate_square(sq, &s);
  CHECK_FALSE(v.ok());
}
