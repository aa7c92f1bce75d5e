#include "motivic/corpus.hpp"

#include <random>

#include "motivic/error.hpp"
#include "motivic/lattice.hpp"

namespace motivic::corpus {

using csupport::CompactificationProvider;
using toric::CellSet;
using toric::Fan;
using toric::FanPtr;
using toric::ToricObject;

namespace {

using Rng = std::mt19937_64;

// rng() % n rather than a distribution keeps the stream identical across
// standard libraries.
std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

FanPtr share(Fan f) { return std::make_shared<const Fan>(std::move(f)); }

std::vector<std::size_t> cones_of_dim(const Fan& f, int lo, int hi) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < f.size(); ++c)
    if (f.cone(c).dim >= lo && f.cone(c).dim <= hi) out.push_back(c);
  return out;
}

IntVector ray_sum(const Fan& f, std::size_t cone) {
  IntVector v(f.rank(), 0);
  for (auto r : f.cone(cone).rays) v = lattice::add(v, f.rays()[r]);
  return v;
}

FanPtr blow_up_random(Rng& rng, const FanPtr& fan) {
  const auto cones = cones_of_dim(*fan, 2, static_cast<int>(fan->rank()));
  if (cones.empty()) return fan;
  return toric::star_subdivide(fan, ray_sum(*fan, cones[pick(rng, cones.size())])).fan;
}

ToricObject random_complete_fan(Rng& rng, std::size_t index) {
  const auto r = pick(rng, 10);
  FanPtr fan;
  std::string label;
  int blowups = 0;
  if (r < 6) {
    static const char* surfaces[] = {"P2", "P1xP1", "F1", "F2", "F3"};
    label = surfaces[pick(rng, 5)];
    fan = share(*toric::named_fan(label));
    blowups = static_cast<int>(pick(rng, 3));
  } else if (r < 9) {
    static const char* threefolds[] = {"P3", "P2xP1", "P1^3"};
    label = threefolds[pick(rng, 3)];
    fan = label == "P2xP1" ? share(toric::product(toric::projective_space(2), toric::projective_space(1)))
                           : share(*toric::named_fan(label));
    blowups = static_cast<int>(pick(rng, 2));
  } else {
    label = "P1";
    fan = share(toric::projective_space(1));
  }
  for (int b = 0; b < blowups; ++b) fan = blow_up_random(rng, fan);
  if (blowups) label += "+" + std::to_string(blowups) + "bl";
  return ToricObject::whole(fan, "X" + std::to_string(index) + ":" + label);
}

ToricObject random_open(Rng& rng, const FanPtr& fan) {
  std::vector<bool> keep(fan->rays().size());
  for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = pick(rng, 3) != 0;
  CellSet cells;
  for (std::size_t c = 0; c < fan->size(); ++c) {
    const auto& rs = fan->cone(c).rays;
    if (std::all_of(rs.begin(), rs.end(), [&](std::size_t i) { return keep[i]; })) cells.push_back(c);
  }
  return ToricObject(fan, cells);
}

ToricObject random_closed(Rng& rng, const FanPtr& fan, std::size_t pieces) {
  ToricObject out = ToricObject::empty_in(fan);
  if (fan->size() < 2) return out;
  for (std::size_t k = 0; k < pieces; ++k) out = out.unite(ToricObject(fan, {1 + pick(rng, fan->size() - 1)}).closure());
  return out;
}

ToricObject random_locally_closed(Rng& rng, const ToricObject& ambient) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    auto obj = (pick(rng, 4) == 0 ? ambient : random_open(rng, ambient.fan_ptr()).intersect(ambient));
    obj = obj.minus(random_closed(rng, ambient.fan_ptr(), pick(rng, 3)));
    if (pick(rng, 5) == 0) obj = obj.intersect(random_closed(rng, ambient.fan_ptr(), 1 + pick(rng, 2)));
    if (!obj.empty() && obj.is_locally_closed()) return obj.with_label(ambient.label());
  }
  return ambient;
}

// A non-complete rank-2 fan made of some of the maximal cones of `fan`.
std::optional<ToricObject> partial_fan(Rng& rng, const ToricObject& whole, std::size_t index) {
  const auto& f = whole.fan();
  std::vector<std::vector<std::size_t>> chosen;
  for (auto m : f.maximal())
    if (pick(rng, 2)) chosen.push_back(f.cone(m).rays);
  if (chosen.empty() || chosen.size() == f.maximal().size()) return std::nullopt;
  std::vector<std::size_t> used;
  for (const auto& c : chosen) used.insert(used.end(), c.begin(), c.end());
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::vector<IntVector> rays;
  for (auto r : used) rays.push_back(f.rays()[r]);
  for (auto& c : chosen)
    for (auto& r : c) r = static_cast<std::size_t>(std::lower_bound(used.begin(), used.end(), r) - used.begin());
  return ToricObject::whole(share(Fan::build(f.rank(), std::move(rays), chosen)), "U" + std::to_string(index));
}

std::string random_expr(Rng& rng, int depth) {
  static const char* atoms[] = {"pt", "P1", "P2", "A1", "A2", "Gm", "L", "F1", "2", "empty", "P3", "Bl(P2;pt)", "E(P2;pt)"};
  if (depth == 0 || pick(rng, 10) < 3) return atoms[pick(rng, std::size(atoms))];
  static const char* ops[] = {" + ", " - ", "*"};
  return "(" + random_expr(rng, depth - 1) + ops[pick(rng, 3)] + random_expr(rng, depth - 1) + ")";
}

// Morphisms into `base` that the toric backend can express: identity, zero,
// closed orbit closures, a closed piece plus an isolated point (a window
// smaller than the source), and the pullback of a refinement.
void add_morphisms(Rng& rng, site::SitePresentation& s, const ToricObject& base) {
  const auto& fan = base.fan_ptr();
  s.add_morphism(site::identity_span(base));
  s.add_morphism(site::zero_span(base, base));
  const auto closed = [&] {
    for (int attempt = 0; attempt < 6; ++attempt) {
      auto w = ToricObject(fan, {1 + pick(rng, fan->size() - 1)}).closure().intersect(base);
      if (!w.empty()) return w;
    }
    return ToricObject::empty_in(fan);
  }();
  if (!closed.empty()) {
    s.add_morphism(site::toric_span(closed, closed, base));
    const auto top = cones_of_dim(*fan, static_cast<int>(fan->rank()), static_cast<int>(fan->rank()));
    const auto hull = closed.closure();
    for (std::size_t t = 0; t < top.size(); ++t) {
      const auto point = top[(t + pick(rng, top.size())) % top.size()];
      if (hull.contains_cell(point)) continue;
      auto z = closed.unite(ToricObject(fan, {point}));
      if (z.is_locally_closed() && toric::is_open_immersion(closed, z)) {
        s.add_morphism(site::toric_span(z, closed, base));
        break;
      }
    }
  }
  const auto refined = blow_up_random(rng, fan);
  if (refined != fan) {
    const auto z = toric::preimage(ToricObject::whole(refined), base);
    if (!z.empty()) s.add_morphism(site::toric_span(z, z, base));
  }
}

void add_site_family(Rng& rng, site::SitePresentation& s, const ToricObject& x, std::size_t index) {
  using namespace site;
  const auto& fan = x.fan_ptr();
  const std::string tag = "s" + std::to_string(index);
  std::vector<ToricObject> bases;

  const auto cones = cones_of_dim(*fan, 2, static_cast<int>(fan->rank()));
  if (!cones.empty()) {
    const auto sub = toric::star_subdivide(fan, ray_sum(*fan, cones[pick(rng, cones.size())]));
    const auto sq = blowup_square(sub, tag + ".blowup");
    s.add_square(sq);
    bases.push_back(sub.x);
    // A second blowup stacked on top.
    const auto up = cones_of_dim(*sub.fan, 2, static_cast<int>(fan->rank()));
    const auto stacked = toric::star_subdivide(sub.fan, ray_sum(*sub.fan, up[pick(rng, up.size())]));
    s.add_square(blowup_square(stacked, tag + ".stacked"));
    bases.push_back(stacked.x);
    // Its pullback to an orbit closure through the center, which is not direct.
    const auto& center = fan->cone(sub.center).rays;
    const auto line = ToricObject(fan, {*fan->find({center[pick(rng, center.size())]})}).closure();
    const auto pulled = check_c_complete(s, sq, toric_span(line, line, sub.x), 1);
    if (pulled.found && !pulled.constructed.empty()) {
      auto p = pulled.constructed.front();
      p.id = tag + ".pullback";
      s.add_square(p);
      bases.push_back(p.toric->x);
    }
  }

  auto u = random_open(rng, fan);
  if (u.empty()) u = ToricObject(fan, {0});
  s.add_square(localization_square(x, u, tag + ".localization"));
  bases.push_back(u);

  // Two crossing divisors: a reducible base.
  const auto two = cones_of_dim(*fan, 2, 2);
  if (!two.empty()) {
    const auto& rays = fan->cone(two[pick(rng, two.size())]).rays;
    const auto d0 = ToricObject(fan, {*fan->find({rays[0]})}).closure();
    const auto d1 = ToricObject(fan, {*fan->find({rays[1]})}).closure();
    const auto cross = d0.unite(d1).with_label(x.label());
    const auto piece = cross.minus(d1);
    s.add_square(localization_square(cross, piece, tag + ".sparse"));
    bases.push_back(piece);
    s.add_square(toric_square(SquareKind::abstract_blowup, d1, cross, d1, cross, tag + ".component"));
    bases.push_back(cross);
  }
  for (const auto& b : bases) add_morphisms(rng, s, b);
}

}  // namespace

Corpus generate(std::uint64_t seed, std::size_t size) {
  Rng rng(seed);
  Corpus c;
  c.seed = seed;
  c.size = size;
  const std::size_t n = std::max<std::size_t>(size, 1);

  for (std::size_t i = 0; i < n; ++i) c.fans.push_back(random_complete_fan(rng, i));

  c.partial_fans.push_back(ToricObject::whole(share(toric::affine_space(2)), "A2"));
  c.partial_fans.push_back(ToricObject::whole(share(toric::product(toric::affine_space(1), toric::torus(1))), "A1xGm"));
  c.partial_fans.push_back(ToricObject::whole(share(toric::torus(2)), "Gm^2"));
  c.partial_fans.push_back(ToricObject::whole(share(toric::affine_space(1)), "A1"));
  for (std::size_t i = 0; c.partial_fans.size() < 4 + n / 2 && i < 20 * n; ++i) {
    const auto& f = c.fans[pick(rng, c.fans.size())];
    if (f.fan().rank() != 2) continue;
    if (auto p = partial_fan(rng, f, c.partial_fans.size())) c.partial_fans.push_back(*p);
  }

  auto any_ambient = [&]() -> const ToricObject& {
    if (pick(rng, 3) == 0) return c.partial_fans[pick(rng, c.partial_fans.size())];
    return c.fans[pick(rng, c.fans.size())];
  };

  for (std::size_t i = 0; i < 4 * n; ++i) {
    const auto x = random_locally_closed(rng, any_ambient());
    c.additivity.push_back({x, x.intersect(random_open(rng, x.fan_ptr()))});
  }

  const CompactificationProvider provider;
  for (std::size_t i = 0; c.independence.size() < n && i < 50 * n; ++i) {
    if (i % 2 == 0) {
      const auto& p = c.partial_fans[pick(rng, c.partial_fans.size())];
      if (p.fan().rank() != 2) continue;
      const auto a = provider.choose(p);
      auto alt = csupport::alternative_completion(p, a.compact.fan_ptr(), rng());
      if (!alt) continue;
      c.independence.push_back({p, a, csupport::make_choice(p, *alt, "subdivided")});
    } else {
      const auto& f = c.fans[pick(rng, c.fans.size())];
      const auto u = random_open(rng, f.fan_ptr()).with_label(f.label());
      if (u.is_whole() || u.empty()) continue;
      auto alt = csupport::alternative_completion(u, f.fan_ptr(), rng());
      if (!alt) continue;
      c.independence.push_back({u, csupport::make_choice(u, f.fan_ptr(), "ambient"),
                                csupport::make_choice(u, *alt, "subdivided")});
    }
  }

  c.blowups.push_back(toric::star_subdivide(share(toric::projective_space(2)), {1, 1}));
  for (std::size_t i = 0; c.blowups.size() < n && i < 20 * n; ++i) {
    const auto& amb = pick(rng, 4) == 0 ? c.partial_fans[pick(rng, c.partial_fans.size())] : c.fans[pick(rng, c.fans.size())];
    const auto cones = cones_of_dim(amb.fan(), 2, static_cast<int>(amb.fan().rank()));
    if (cones.empty()) continue;
    const auto cone = cones[pick(rng, cones.size())];
    auto v = ray_sum(amb.fan(), cone);
    // Sometimes a weighted ray, which gives a singular abstract blowup.
    if (pick(rng, 3) == 0) v = lattice::add(v, amb.fan().rays()[amb.fan().cone(cone).rays.front()]);
    c.blowups.push_back(toric::star_subdivide(amb.fan_ptr(), lattice::primitive(v)));
  }

  c.expressions.push_back("A1");
  c.expressions.push_back("Bl(P2;pt)");
  while (c.expressions.size() < 2 * n) c.expressions.push_back(random_expr(rng, 4));

  auto small_ambient = [&]() -> const ToricObject& {
    for (;;) {
      const auto& a = any_ambient();
      if (a.fan().rank() <= 2) return a;
    }
  };
  for (std::size_t i = 0; i < 2 * n; ++i) {
    const auto x = random_locally_closed(rng, small_ambient());
    const auto y = random_locally_closed(rng, small_ambient());
    c.kunneth.push_back({x, y});
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto x = random_locally_closed(rng, any_ambient());
    const auto u = x.intersect(random_open(rng, x.fan_ptr()));
    // The smallest open containing the rest, plus a random open.
    CellSet faces;
    const auto rest = x.minus(u);
    for (auto cell : rest.cells())
      for (auto f : x.fan().faces(cell)) faces.push_back(f);
    std::sort(faces.begin(), faces.end());
    faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
    const auto cover = ToricObject(x.fan_ptr(), faces).unite(random_open(rng, x.fan_ptr()));
    c.mayer_vietoris.push_back({x, u, x.intersect(cover)});
  }

  const std::size_t families = std::max<std::size_t>(4, n / 4);
  for (std::size_t i = 0; i < families && i < c.fans.size(); ++i) add_site_family(rng, c.site, c.fans[i], i);
  return c;
}

}  // namespace motivic::corpus
