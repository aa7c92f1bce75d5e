#include <map>

#include "doctest.h"
#include "motivic/corpus.hpp"
#include "motivic/error.hpp"
#include "motivic/runner.hpp"

using namespace motivic;
using io::json;

namespace {

std::map<std::string, std::size_t> tally(const run::Report& r, run::Status s) {
  std::map<std::string, std::size_t> out;
  for (const auto& rec : r.records)
    if (rec.status == s) ++out[rec.kind];
  return out;
}

}  // namespace

TEST_CASE("orbit point counts") {
  auto p2 = std::make_shared<const toric::Fan>(toric::projective_space(2));
  const auto whole = toric::ToricObject::whole(p2);
  CHECK(run::orbit_point_count(whole, 2) == 7);
  CHECK(run::orbit_point_count(whole, 5) == 31);
  auto t = std::make_shared<const toric::Fan>(toric::torus(3));
  CHECK(run::orbit_point_count(toric::ToricObject::whole(t), 4) == 27);
  CHECK(run::orbit_point_count(toric::ToricObject::empty_in(p2), 3) == 0);
}

TEST_CASE("corpus sizes scale and generation is deterministic") {
  const auto a = corpus::generate(7, 6);
  CHECK(a.additivity.size() == 24);
  CHECK(a.independence.size() == 6);
  CHECK(a.blowups.size() == 6);
  CHECK(a.expressions.size() == 12);
  CHECK(a.kunneth.size() == 12);
  CHECK(a.mayer_vietoris.size() == 6);
  CHECK(a.expressions[0] == "A1");

  run::Options opt;
  const auto r1 = run::run_corpus(a, opt).to_json().dump();
  const auto r2 = run::run_corpus(corpus::generate(7, 6), opt).to_json().dump();
  CHECK(r1 == r2);
  const auto r3 = run::run_corpus(corpus::generate(8, 6), opt).to_json().dump();
  CHECK(r1 != r3);
}

TEST_CASE("small corpora pass every check") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto rep = run::run_corpus(corpus::generate(seed, 8), run::Options{});
    CAPTURE(seed);
    for (const auto& r : rep.records) {
      CAPTURE(r.id);
      CAPTURE(r.reason);
      CHECK(r.status == run::Status::pass);
    }
  }
}

TEST_CASE("summary counts equal record tallies") {
  run::Options opt;
  opt.measures = {"euler", "perturbed:e"};
  const auto rep = run::run_corpus(corpus::generate(5, 5), opt);
  const auto s = rep.summary();
  std::size_t pass = 0, fail = 0, skipped = 0;
  for (const auto& r : rep.records) {
    pass += r.status == run::Status::pass;
    fail += r.status == run::Status::fail;
    skipped += r.status == run::Status::skipped;
  }
  CHECK(s.total == rep.records.size());
  CHECK(s.pass == pass);
  CHECK(s.fail == fail);
  CHECK(s.skipped == skipped);
  CHECK(rep.ok() == (fail == 0));
  const auto j = rep.to_json();
  CHECK(j["summary"]["total"].get<std::size_t>() == rep.records.size());
  // The perturbed measure is not multiplicative.
  CHECK(tally(rep, run::Status::skipped)["kunneth"] == 10);
}

TEST_CASE("kind filter") {
  run::Options opt;
  opt.kinds = {"round_trip"};
  const auto rep = run::run_corpus(corpus::generate(1, 4), opt);
  CHECK(rep.records.size() == 8);
  for (const auto& r : rep.records) CHECK(r.kind == "round_trip");
}

TEST_CASE("perturbed fixture fails exactly independence and blowup descent") {
  const std::string dir = MOTIVIC_TEST_DATA;
  const auto rep = run::run_suite(io::load_json(dir + "/perturbed_suite.json"), run::Options{}, dir);
  const auto failed = tally(rep, run::Status::fail);
  CHECK(failed.size() == 2);
  CHECK(failed.count("independence") == 1);
  CHECK(failed.count("blowup_descent") == 1);
  CHECK(tally(rep, run::Status::skipped)["kunneth"] == 1);
  CHECK_FALSE(rep.ok());
}

TEST_CASE("suites") {
  const auto empty = run::run_suite(json::array(), run::Options{});
  CHECK(empty.records.empty());
  CHECK(empty.summary().total == 0);
  CHECK(empty.ok());

  const auto suite = json::parse(R"j({
    "objects": {"A2": {"fan": "P2", "open_rays": [0, 1]}},
    "checks": [
      {"kind": "additivity", "measure": "e", "args": ["P2", "A2"]},
      {"kind": "round_trip", "args": ["A1 * Gm"]},
      {"kind": "point_count", "args": ["Hirzebruch(2)"]}
    ]
  })j");
  const auto rep = run::run_suite(suite, run::Options{});
  CHECK(rep.records.size() == 6);
  CHECK(rep.ok());

  // The builtin A2 lives in another fan: a failed record, not an exception.
  const auto foreign = run::run_suite(json::parse(R"([{"kind": "additivity", "args": ["P2", "A2"]}])"), run::Options{});
  REQUIRE(foreign.records.size() == 2);
  CHECK(foreign.records[0].status == run::Status::fail);
  CHECK(foreign.records[0].reason.rfind("error:", 0) == 0);

  CHECK_THROWS_AS(run::run_suite(json::parse(R"([{"kind": "nope"}])"), run::Options{}), SchemaError);
  CHECK_THROWS_AS(run::run_suite(json::parse(R"([{"kind": "additivity", "args": ["Nowhere", "P2"]}])"), run::Options{}),
                  SchemaError);
}

TEST_CASE("timings stay out of the default json") {
  run::Options opt;
  opt.kinds = {"blowup_relation"};
  const auto rep = run::run_corpus(corpus::generate(1, 2), opt);
  CHECK(rep.to_json().dump().find("timing") == std::string::npos);
  CHECK(rep.to_json(true).dump().find("timing_ms") != std::string::npos);
  CHECK(rep.to_text().find("2 checks: 2 passed") != std::string::npos);
}
