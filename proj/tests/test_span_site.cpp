#include <random>

#include "doctest.h"
#include "motivic/error.hpp"
#include "motivic/span_site.hpp"

using namespace motivic;
using namespace motivic::site;
using namespace motivic::toric;

namespace {

FanPtr share(Fan f) { return std::make_shared<const Fan>(std::move(f)); }

ToricObject open_on(const FanPtr& fan, const std::vector<std::size_t>& rays) {
  CellSet cells;
  for (std::size_t c = 0; c < fan->size(); ++c) {
    const auto& r = fan->cone(c).rays;
    if (std::all_of(r.begin(), r.end(), [&](std::size_t i) { return std::count(rays.begin(), rays.end(), i) > 0; }))
      cells.push_back(c);
  }
  return open_subfan(fan, cells);
}

ToricObject orbit_closure(const FanPtr& fan, std::vector<std::size_t> rays) {
  return ToricObject(fan, {*fan->find(rays)}).closure();
}

bool failed(const ValidationReport& r, const std::string& cond) {
  for (const auto& e : r.entries)
    if (e.condition == cond) return e.status == ValidationEntry::Status::fail;
  return false;
}

}  // namespace

TEST_CASE("compose worked examples") {
  auto p1 = share(projective_space(1));
  const auto x = ToricObject::whole(p1, "P1");
  const auto a1 = open_on(p1, {0});
  const auto gm = open_on(p1, {});
  const auto first = toric_span(x, a1, a1);
  const auto second = toric_span(a1, gm, gm);
  const auto both = compose(second, first);
  CHECK(both.window_obj->cells() == gm.cells());
  CHECK(*both.target_obj == gm);
  CHECK_FALSE(both.is_zero());

  CHECK(compose(identity_span(a1), first).key() == first.key());
  CHECK(compose(first, identity_span(x)).key() == first.key());
  CHECK(compose(zero_span(a1, gm), first).is_zero());
  CHECK(compose(second, zero_span(x, a1)).is_zero());

  // A1 -> P1 is not proper, the point -> P1 is.
  CHECK_THROWS_AS(toric_span(a1, a1, x), SiteError);
  const auto point = orbit_closure(p1, {0});
  CHECK(toric_span(point, point, x).map == "lattice-id");
  CHECK_THROWS_AS(compose(first, first), SiteError);
}

TEST_CASE("declared composition") {
  SitePresentation site(Backend::declared);
  site.add_object({"X", 2, true, {}});
  site.add_object({"Y", 1, true, {}});
  site.add_object({"Z", 0, true, {}});
  SpanMorphism f{Backend::declared, "f", "X", "Y", "X", "f", {}, {}, {}};
  SpanMorphism g{Backend::declared, "g", "Y", "Z", "Y", "g", {}, {}, {}};
  SpanMorphism gf{Backend::declared, "gf", "X", "Z", "X", "gf", {}, {}, {}};
  site.add_morphism(f);
  site.add_morphism(g);
  CHECK_THROWS_AS(compose(g, f, &site), SiteError);
  site.add_morphism(gf);
  site.add_pullback("f", "g", "gf");
  CHECK(compose(g, f, &site).name == "gf");
  SpanMorphism id{Backend::declared, "idY", "Y", "Y", "Y", "id", {}, {}, {}};
  CHECK(compose(id, f, &site).name == "f");
  SpanMorphism zero{Backend::declared, "0", "Y", "Z", "", "zero", {}, {}, {}};
  CHECK(compose(zero, f, &site).is_zero());
  auto p1 = share(projective_space(1));
  CHECK_THROWS_AS(compose(identity_span(ToricObject::whole(p1)), f, &site), SiteError);
  CHECK_THROWS_AS(site.add_object({"W", -2, true, {}}), SiteError);
}

TEST_CASE("localization squares") {
  auto p1 = share(projective_space(1));
  const auto x = ToricObject::whole(p1, "P1");
  const auto sq = localization_square(x, open_on(p1, {0}));
  CHECK(sq.kind == SquareKind::localization);
  CHECK(sq.toric->e.cells().size() == 1);
  CHECK(sq.toric->e.dimension() == 0);
  CHECK(sq.toric->c.empty());
  const auto r = validate_square(sq);
  CHECK(r.ok());
  CHECK(r.jointly_surjective == std::optional<bool>(true));

  CHECK(localization_square(x, x).toric->e.empty());
  auto p2 = share(projective_space(2));
  const auto torus2 = open_on(p2, {});
  CHECK(localization_square(ToricObject::whole(p2), torus2).toric->e.klass() == KClass::polynomial({0, 3}));
  CHECK_THROWS_AS(localization_square(x, orbit_closure(p1, {0})), GeometryError);
}

TEST_CASE("validation of blowup squares") {
  auto p2 = share(projective_space(2));
  const auto sq = blowup_square(star_subdivide(p2, {1, 1}));
  CHECK(sq.kind == SquareKind::smooth_blowup);
  const auto r = validate_square(sq);
  CHECK(r.ok());
  CHECK(r.entries.size() == 6);
  CHECK(r.jointly_surjective == std::optional<bool>(true));

  // Wrong E corner.
  auto broken = sq;
  broken.toric->e = sq.toric->y;
  CHECK(failed(validate_square(broken), "cartesian"));
  // Empty center, so Y -> X must be an isomorphism everywhere; it is not.
  auto p1p1 = share(product(projective_space(1), projective_space(1)));
  const auto sub = star_subdivide(p1p1, {1, 1});
  auto wrong = toric_square(SquareKind::abstract_blowup, ToricObject::empty_in(sub.fan), sub.y,
                            ToricObject::empty_in(p1p1), sub.x);
  const auto wr = validate_square(wrong);
  CHECK(failed(wr, "restriction-iso"));
  CHECK(wr.jointly_surjective == std::optional<bool>(true));

  DistinguishedSquare declared;
  declared.backend = Backend::declared;
  declared.kind = SquareKind::abstract_blowup;
  declared.flags = {{"cartesian", true}, {"closed_immersion", true}, {"proper", true}};
  const auto dr = validate_square(declared);
  CHECK_FALSE(dr.ok());
  bool saw = false;
  for (const auto& e : dr.entries)
    if (e.detail == "restriction-iso undeclared") saw = true;
  CHECK(saw);
  CHECK_FALSE(dr.jointly_surjective);
  declared.flags["restriction_iso"] = true;
  CHECK(validate_square(declared).ok());
  CHECK(validate_square(declared).entries[0].status == ValidationEntry::Status::trusted);
}

TEST_CASE("simple cover enumeration") {
  auto p2 = share(projective_space(2));
  const auto first = star_subdivide(p2, {1, 1});
  const auto second = star_subdivide(first.fan, {2, 1});
  SitePresentation site;
  const auto x = site.intern(first.x);
  const auto sq0 = site.add_square(blowup_square(first, "sq0"));
  const auto sq1 = site.add_square(blowup_square(second, "sq1"));
  CHECK(site.square(sq1).x == site.square(sq0).y);

  const auto d0 = enumerate_simple_covers(site, x, 0);
  REQUIRE(d0.size() == 1);
  CHECK(d0[0].leaves().size() == 1);
  CHECK(d0[0].depth() == 0);

  const auto d1 = enumerate_simple_covers(site, x, 1);
  CHECK(d1.size() == 2);
  const auto d2 = enumerate_simple_covers(site, x, 2);
  bool three_leaf = false;
  for (const auto& c : d2) {
    const auto leaves = c.leaves();
    if (leaves.size() != 3) continue;
    three_leaf = true;
    CHECK(c.depth() == 2);
    std::vector<std::vector<std::string>> paths;
    for (const auto& l : leaves) paths.push_back(l.path);
    std::sort(paths.begin(), paths.end());
    CHECK(paths == std::vector<std::vector<std::string>>{{"sq0.i"}, {"sq1.i", "sq0.p"}, {"sq1.p", "sq0.p"}});
  }
  CHECK(three_leaf);

  // Monotone, and every cover is jointly surjective.
  for (int d = 0; d < 3; ++d) {
    std::set<std::string> small, large;
    for (const auto& c : enumerate_simple_covers(site, x, d)) small.insert(c.key());
    for (const auto& c : enumerate_simple_covers(site, x, d + 1)) {
      large.insert(c.key());
      CHECK(jointly_surjective(site, c) == std::optional<bool>(true));
    }
    CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
  }
  CHECK_THROWS_AS(enumerate_simple_covers(site, "nowhere", 1), SiteError);
}

TEST_CASE("c-completeness worked examples") {
  auto p2 = share(projective_space(2));
  const auto sub = star_subdivide(p2, {1, 1});
  const auto sq = blowup_square(sub);
  SitePresentation site;
  site.add_square(sq);

  const auto id = check_c_complete(site, sq, identity_span(sub.x), 3);
  CHECK(id.found);
  CHECK(id.depth == 1);
  CHECK(id.cover->leaves().size() == 2);

  // A line through the center: a closed immersion, pulled back to a square over the line.
  const auto line = orbit_closure(p2, {0});
  const auto proper = check_c_complete(site, sq, toric_span(line, line, sub.x), 3);
  CHECK(proper.found);
  CHECK(proper.depth == 1);
  REQUIRE(proper.constructed.size() == 1);
  CHECK(validate_square(proper.constructed[0]).ok());
  CHECK_FALSE(check_c_complete(site, sq, toric_span(line, line, sub.x), 0).found);

  // The center itself factors through i; the zero span is trivially covered.
  const auto center = sub.c;
  CHECK(check_c_complete(site, sq, toric_span(center, center, sub.x), 0).found);
  CHECK(check_c_complete(site, sq, zero_span(line, sub.x), 0).found);

  // A proper map from a different fan: P2 blown up at another fixed point.
  const auto other = star_subdivide(p2, {1, -1});
  const auto refined = check_c_complete(site, sq, toric_span(other.y, other.y, sub.x), 3);
  CHECK(refined.found);
  REQUIRE(refined.constructed.size() == 1);
  CHECK(validate_square(refined.constructed[0]).ok());

  // Localization: a line W closed in U = P2 minus a line, mapped to U by
  // its own window. Gluing W with its closure gives the line itself.
  const auto u = open_on(p2, {1, 2});
  const auto w = orbit_closure(p2, {1}).intersect(u);
  const auto loc2 = localization_square(sub.x, u);
  const auto glued = check_c_complete(site, loc2, toric_span(w, w, u), 3);
  CHECK(glued.found);
  CHECK(glued.depth == 1);
  REQUIRE(glued.constructed.size() == 1);
  CHECK(glued.constructed[0].toric->y == orbit_closure(p2, {1}));

  // A1 with window Gm over U = Gm in P1 would glue A1 and P1 along Gm.
  auto p1 = share(projective_space(1));
  const auto x1 = ToricObject::whole(p1, "P1");
  const auto a1 = open_on(p1, {0});
  const auto gm = open_on(p1, {});
  const auto loc = localization_square(x1, gm);
  const auto nonsep = check_c_complete(site, loc, toric_span(a1, gm, gm), 3);
  CHECK_FALSE(nonsep.found);
  CHECK(nonsep.note.find("non-toric glue required") != std::string::npos);

  // An open immersion from another fan needs glue outside the toric world.
  auto a1_fan = share(affine_space(1));
  const auto foreign = ToricObject::whole(a1_fan);
  const auto loc1 = localization_square(x1, a1);
  const auto no = check_c_complete(site, loc1, toric_span(foreign, foreign, a1), 3);
  CHECK_FALSE(no.found);
  CHECK(no.note.find("non-toric glue required") != std::string::npos);
}

TEST_CASE("dimension compatibility worked examples") {
  auto p2 = share(projective_space(2));
  const auto sq = blowup_square(star_subdivide(p2, {1, 1}));
  CHECK(check_dim_compatible(sq).kind == DimVerdict::Kind::direct);

  auto p1 = share(projective_space(1));
  const auto x1 = ToricObject::whole(p1);
  CHECK(check_dim_compatible(localization_square(x1, open_on(p1, {0}))).kind == DimVerdict::Kind::direct);

  // Two crossing lines; U is one of them minus the crossing point, open but
  // not dense.
  const auto cross = orbit_closure(p2, {0}).unite(orbit_closure(p2, {1}));
  const auto u = cross.minus(orbit_closure(p2, {1}));
  const auto sparse = localization_square(cross, u);
  const auto v = check_dim_compatible(sparse);
  CHECK(v.kind == DimVerdict::Kind::refined);
  REQUIRE(v.refinement.size() == 1);
  CHECK(v.refinement[0].toric->y == orbit_closure(p2, {0}));
  CHECK(check_dim_compatible(v.refinement[0]).kind == DimVerdict::Kind::direct);

  // A reducible base with a non-dense blowup: refined through components.
  const auto bad = toric_square(SquareKind::abstract_blowup, cross, cross, cross, cross);
  const auto rv = check_dim_compatible(bad);
  CHECK(rv.kind == DimVerdict::Kind::refined);
  for (const auto& r : rv.refinement) {
    CHECK(check_dim_compatible(r).kind == DimVerdict::Kind::direct);
    CHECK(validate_square(r).ok());
  }
}

TEST_CASE("property: composition is associative with units and zeros") {
  std::mt19937_64 rng(23);
  auto fan = share(hirzebruch(1));
  // A chain X0 ~> X1 ~> X2 ~> X3: each window is a random open of the source
  // and each target adds to the window an open piece away from its closure.
  auto random_open = [&] {
    std::vector<std::size_t> rays;
    for (std::size_t r = 0; r < fan->rays().size(); ++r)
      if (rng() % 3) rays.push_back(r);
    return open_on(fan, rays);
  };
  auto next = [&](const ToricObject& x) {
    const auto window = random_open().intersect(x);
    const auto extra = random_open().minus(window.closure());
    const auto target = window.unite(extra);
    if (target.is_locally_closed() && !window.empty() && is_proper_map(window, target))
      return toric_span(x, window, target);
    return toric_span(x, window, window);
  };
  for (int t = 0; t < 60; ++t) {
    const auto x = random_open();
    const auto f = next(x);
    const auto g = next(*f.target_obj);
    const auto h = next(*g.target_obj);
    CHECK(compose(h, compose(g, f)).key() == compose(compose(h, g), f).key());
    CHECK(compose(identity_span(*f.target_obj), f).key() == f.key());
    CHECK(compose(f, identity_span(x)).key() == f.key());
    CHECK(compose(zero_span(*f.target_obj, x), f).is_zero());
    CHECK(compose(f, zero_span(x, x)).is_zero());
  }
}

TEST_CASE("property: built squares validate") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 30; ++t) {
    auto fan = share(t % 2 ? projective_space(2 + t % 2) : hirzebruch(t % 3));
    // star subdivision at the sum of a random maximal cone's rays
    const auto maxes = fan->maximal();
    const auto cone = maxes[rng() % maxes.size()];
    IntVector v(fan->rank(), 0);
    for (auto r : fan->cone(cone).rays)
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += fan->rays()[r][i];
    const auto sq = blowup_square(star_subdivide(fan, v));
    const auto r = validate_square(sq);
    CHECK(r.ok());
    CHECK(r.jointly_surjective == std::optional<bool>(true));
    std::vector<std::size_t> rays;
    for (std::size_t i = 0; i < fan->rays().size(); ++i)
      if (rng() % 2) rays.push_back(i);
    const auto loc = localization_square(ToricObject::whole(fan), open_on(fan, rays));
    CHECK(validate_square(loc).ok());
    CHECK(check_dim_compatible(loc).kind != DimVerdict::Kind::fail);
    CHECK(check_dim_compatible(sq).kind == DimVerdict::Kind::direct);
  }
}
