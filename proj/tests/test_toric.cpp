#include <random>

#include "doctest.h"
#include "motivic/error.hpp"
#include "motivic/toric.hpp"

using namespace motivic;
using namespace motivic::toric;

namespace {

FanPtr share(Fan f) { return std::make_shared<const Fan>(std::move(f)); }

// Direct orbit count, independent of KClass arithmetic.
Integer orbit_count(const Fan& f, const CellSet& cells, long q) {
  Integer total = 0;
  for (auto c : cells) total += boost::multiprecision::pow(Integer(q - 1), static_cast<unsigned>(f.rank() - f.cone(c).dim));
  return total;
}

CellSet all_cells(const Fan& f) {
  CellSet out;
  for (std::size_t i = 0; i < f.size(); ++i) out.push_back(i);
  return out;
}

Fan p2() { return Fan::build(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}, {0, 2}}); }

}  // namespace

TEST_CASE("build worked fans") {
  auto p1 = Fan::build(1, {{1}, {-1}}, {{0}, {1}});
  CHECK(p1.size() == 3);
  auto a2 = Fan::build(2, {{1, 0}, {0, 1}}, {{0, 1}});
  CHECK(a2.size() == 4);
  auto f = p2();
  CHECK(f.size() == 7);
  CHECK(f.cone(0).rays.empty());
  CHECK(f.maximal().size() == 3);
  CHECK(f == projective_space(2));
  auto gm = Fan::build(1, {}, {});
  CHECK(gm.size() == 1);
  CHECK(gm == torus(1));
}

TEST_CASE("build rejects invalid data") {
  CHECK_THROWS_AS(Fan::build(1, {{2}}, {{0}}), GeometryError);
  CHECK_THROWS_AS(Fan::build(1, {{0}}, {{0}}), GeometryError);
  CHECK_THROWS_AS(Fan::build(1, {{1}, {-1}}, {{0, 1}}), GeometryError);
  CHECK_THROWS_AS(Fan::build(2, {{1, 0}, {1, 0}}, {{0}, {1}}), GeometryError);
  // Two quadrants overlapping in their interiors.
  CHECK_THROWS_AS(Fan::build(2, {{1, 0}, {0, 1}, {1, 1}, {-1, 1}}, {{0, 1}, {2, 3}}), GeometryError);
  // Cones meeting along a common ray set that is not a face of one of them.
  CHECK_THROWS_AS(Fan::build(2, {{1, 0}, {1, 2}, {0, 1}}, {{0, 2}, {1}}), GeometryError);
  CHECK_THROWS_AS(Fan::build(2, {{1, 0}, {0, 1}, {1, 1}}, {{0, 1, 2}}), GeometryError);
  CHECK_THROWS_AS(Fan::build(2, {{1, 0}, {0, 1}, {1, 1}}, {{0, 1}}), GeometryError);
  CHECK_THROWS_AS(Fan::build(2, {{1, 0, 0}}, {{0}}), GeometryError);
}

TEST_CASE("non-simplicial cones") {
  // Cone over a square in rank 3.
  auto f = Fan::build(3, {{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}, {0, -1, 1}}, {{0, 1, 2, 3}});
  CHECK(f.size() == 1 + 4 + 4 + 1);
  const auto& top = f.cone(f.size() - 1);
  CHECK(top.dim == 3);
  CHECK(top.facets.size() == 4);
  CHECK_FALSE(f.is_smooth());
  CHECK(f.locate({0, 0, 1}) == f.size() - 1);
  CHECK_FALSE(f.find({0, 2}).has_value());
}

TEST_CASE("fan properties") {
  auto p = p2().properties();
  CHECK(p.complete);
  CHECK(p.smooth);
  CHECK(p.dimension == 2);
  auto a = affine_space(2).properties();
  CHECK_FALSE(a.complete);
  CHECK(a.smooth);
  auto singular = Fan::build(2, {{0, 1}, {2, -1}}, {{0, 1}});
  CHECK_FALSE(singular.is_smooth());
  CHECK(projective_space(3).is_complete());
  CHECK(named_fan("P1^3")->is_complete());
  CHECK_FALSE(affine_space(3).is_complete());
  CHECK(hirzebruch(3).is_complete());
  CHECK(hirzebruch(3).is_smooth());
  CHECK(projective_space(1).is_complete());
  CHECK_FALSE(affine_space(1).is_complete());
}

TEST_CASE("open subfans") {
  auto p1 = share(projective_space(1));
  auto a1 = open_subfan(p1, {0, *p1->find({0})});
  CHECK(a1.klass() == KClass::lefschetz(1));
  CHECK(a1.is_open());
  CHECK_FALSE(a1.is_compact());
  CHECK(ToricObject::whole(p1).minus(a1).klass() == KClass::constant(1));
  auto p = share(p2());
  auto torus2 = open_subfan(p, {0});
  CHECK(torus2.klass() == KClass::polynomial({1, -2, 1}));
  CHECK(ToricObject::whole(p).minus(torus2).klass() == KClass::polynomial({0, 3}));
  CHECK_THROWS_AS(open_subfan(p, {0, 4}), GeometryError);
  CHECK_THROWS_AS(ToricObject(p, {99}), GeometryError);
}

TEST_CASE("class_of worked examples") {
  auto f = p2();
  CHECK(class_of(f) == KClass::polynomial({1, 1, 1}));
  CHECK(class_of(f, CellSet{}).is_zero());
  CellSet lines;
  for (std::size_t i = 1; i < f.size(); ++i) lines.push_back(i);
  CHECK(class_of(f, lines) == KClass::polynomial({0, 3}));
  CHECK_THROWS_AS(class_of(f, CellSet{42}), GeometryError);
}

TEST_CASE("compactness of orbit unions") {
  auto p = share(p2());
  const auto ray = *p->find({0});
  auto line = ToricObject(p, p->star(ray));
  CHECK(line.is_closed());
  CHECK(line.is_compact());
  CHECK(line.dimension() == 1);
  CHECK(line.klass() == KClass::polynomial({1, 1}));
  auto punctured = ToricObject::whole(p).minus(ToricObject(p, {p->size() - 1}));
  CHECK_FALSE(punctured.is_compact());
  auto a2 = share(affine_space(2));
  auto origin = ToricObject(a2, {a2->size() - 1});
  CHECK(origin.is_compact());
  CHECK(origin.dimension() == 0);
  CHECK(ToricObject::empty_in(p).is_compact());
  CHECK(ToricObject::empty_in(p).dimension() == -1);
  // Two lines crossing: closed, compact, reducible.
  auto cross = ToricObject(p, p->star(ray)).unite(ToricObject(p, p->star(*p->find({1}))));
  CHECK(cross.is_compact());
  CHECK(cross.components().size() == 2);
  CHECK_FALSE(cross.is_smooth());
}

TEST_CASE("star subdivision of P2 at a point") {
  auto p = share(p2());
  auto sub = star_subdivide(p, {1, 1});
  CHECK(sub.fan->rays().size() == 4);
  CHECK(sub.fan->maximal().size() == 4);
  CHECK(sub.smooth_blowup);
  CHECK(sub.fan->is_complete());
  CHECK(sub.fan->is_smooth());
  CHECK(sub.y.klass() == KClass::polynomial({1, 2, 1}));
  CHECK(sub.c.klass() == KClass::constant(1));
  CHECK(sub.e.klass() == KClass::polynomial({1, 1}));
  CHECK(sub.e.is_compact());
  CHECK(sub.x.klass() + sub.e.klass() == sub.c.klass() + sub.y.klass());
  // Re-validating the assembled fan succeeds.
  std::vector<std::vector<std::size_t>> maximal;
  for (auto m : sub.fan->maximal()) maximal.push_back(sub.fan->cone(m).rays);
  CHECK_NOTHROW(Fan::build(2, sub.fan->rays(), maximal));

  auto a2 = share(affine_space(2));
  auto bl = star_subdivide(a2, {1, 1});
  CHECK(bl.fan->maximal().size() == 2);

  CHECK_THROWS_AS(star_subdivide(p, {1, 0}), GeometryError);
  CHECK_THROWS_AS(star_subdivide(a2, {-1, 0}), GeometryError);
  CHECK_THROWS_AS(star_subdivide(p, {2, 2}), GeometryError);
  auto non_smooth = star_subdivide(p, {1, 2});
  CHECK_FALSE(non_smooth.smooth_blowup);
}

TEST_CASE("complete_surface") {
  auto a1 = Fan::build(1, {{1}}, {{0}});
  auto c1 = complete_surface(a1);
  CHECK(c1.is_complete());
  CHECK(c1.rays() == std::vector<IntVector>{{1}, {-1}});
  CHECK(complete_surface(projective_space(1)) == projective_space(1));
  auto c2 = complete_surface(affine_space(2));
  CHECK(c2.rays() == std::vector<IntVector>{{1, 0}, {0, 1}, {-1, -1}});
  CHECK(c2.is_complete());
  auto t = complete_surface(torus(2));
  CHECK(t.rays().size() == 3);
  auto ray = complete_surface(Fan::build(2, {{1, 0}}, {{0}}));
  CHECK(ray.rays() == std::vector<IntVector>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  CHECK(class_of(ray) == KClass::polynomial({1, 2, 1}));
  CHECK_THROWS_AS(complete_surface(affine_space(3)), GeometryError);
}

TEST_CASE("properness over the identity lattice") {
  auto p = share(p2());
  auto sub = star_subdivide(p, {1, 1});
  CHECK(is_proper_map(sub.y, sub.x));
  CHECK(is_closed_immersion(sub.c, sub.x));
  CHECK(is_closed_immersion(sub.e, sub.y));
  auto a2 = share(affine_space(2));
  auto bl = star_subdivide(a2, {1, 1});
  CHECK(is_proper_map(bl.y, bl.x));
  auto p1 = share(projective_space(1));
  auto a1 = open_subfan(p1, {0, 1});
  CHECK(is_open_immersion(a1, ToricObject::whole(p1)));
  CHECK_FALSE(is_proper_map(a1, ToricObject::whole(p1)));
  CHECK(is_proper_map(ToricObject::whole(p1), ToricObject::whole(p1)));
  // Open piece of the blowup over an open piece of the base.
  auto u = open_subfan(p, {0, 1, 2});
  CHECK(is_proper_map(preimage(sub.y, u), u));
}

TEST_CASE("products") {
  auto f = product(projective_space(1), projective_space(1));
  CHECK(f.is_complete());
  CHECK(class_of(f) == KClass::polynomial({1, 2, 1}));
  auto gm = ToricObject::whole(share(torus(1)), "Gm");
  auto gm2 = product(gm, gm);
  CHECK(gm2.klass() == KClass::polynomial({1, -2, 1}));
  CHECK(gm2.label() == "GmxGm");
}

TEST_CASE("property: orbit counts, additivity and h-vectors over random fans") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const bool three = trial % 4 == 3;
    auto fan = share(three ? projective_space(3) : (trial % 2 ? projective_space(2) : product(projective_space(1), projective_space(1))));
    const int steps = static_cast<int>(rng() % 4);
    for (int s = 0; s < steps; ++s) {
      auto maximal = fan->maximal();
      auto m = maximal[rng() % maximal.size()];
      auto faces = fan->faces(m);
      std::vector<std::size_t> candidates;
      for (auto c : faces)
        if (fan->cone(c).dim >= 2) candidates.push_back(c);
      auto sigma = candidates[rng() % candidates.size()];
      fan = star_subdivide(fan, fan->interior_point(sigma)).fan;
    }
    REQUIRE(fan->is_complete());
    REQUIRE(fan->is_smooth());
    const auto cells = all_cells(*fan);
    for (long q : {2, 3, 4, 5}) CHECK(class_of(*fan).evaluate(q) == orbit_count(*fan, cells, q));
    // h-vector oracle from face counts alone.
    const auto f = fan->f_vector();
    const auto h = class_of(*fan).lefschetz_coefficients();
    if (fan->rank() == 2) {
      CHECK(h == std::vector<Integer>{1, Integer(f[1]) - 2, 1});
    } else {
      CHECK(h == std::vector<Integer>{1, Integer(f[1]) - 3, Integer(f[1]) - 3, 1});
    }
    CHECK(h_vector(*fan) == h);
    // Random open subfans: additivity.
    for (int k = 0; k < 5; ++k) {
      std::vector<bool> keep(fan->size(), false);
      keep[0] = true;
      for (std::size_t c = 1; c < fan->size(); ++c) {
        if (rng() % 2) continue;
        bool ok = true;
        for (auto face : fan->faces(c))
          if (face != c && !keep[face]) ok = false;
        keep[c] = ok;
      }
      CellSet u;
      for (std::size_t c = 0; c < fan->size(); ++c)
        if (keep[c]) u.push_back(c);
      auto open = open_subfan(fan, u);
      auto rest = ToricObject::whole(fan).minus(open);
      CHECK(open.klass() + rest.klass() == class_of(*fan));
      CHECK(rest.is_closed());
    }
  }
}
