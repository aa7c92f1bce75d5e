#include "motivic/span_site.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "motivic/error.hpp"

namespace motivic::site {

using toric::CellSet;
using toric::ToricObject;

std::string to_string(Backend b) { return b == Backend::toric ? "toric" : "declared"; }

std::string to_string(SquareKind k) {
  switch (k) {
    case SquareKind::smooth_blowup: return "smooth_blowup";
    case SquareKind::abstract_blowup: return "abstract_blowup";
    case SquareKind::localization: return "localization";
  }
  return "abstract_blowup";
}

SquareKind square_kind_from_string(const std::string& s) {
  if (s == "smooth_blowup") return SquareKind::smooth_blowup;
  if (s == "abstract_blowup") return SquareKind::abstract_blowup;
  if (s == "localization") return SquareKind::localization;
  throw SchemaError("unknown square kind '" + s + "'");
}

std::string to_string(ValidationEntry::Status s) {
  switch (s) {
    case ValidationEntry::Status::pass: return "pass";
    case ValidationEntry::Status::fail: return "fail";
    case ValidationEntry::Status::trusted: return "trusted";
  }
  return "fail";
}

std::string to_string(DimVerdict::Kind k) {
  switch (k) {
    case DimVerdict::Kind::direct: return "direct";
    case DimVerdict::Kind::refined: return "refined";
    case DimVerdict::Kind::fail: return "fail";
  }
  return "fail";
}

namespace {

std::string fingerprint(const ToricObject& obj) {
  std::string out = std::to_string(obj.fan().rank()) + "[";
  for (const auto& r : obj.fan().rays()) {
    out += "(";
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i].str();
    out += ")";
  }
  out += "]{";
  for (std::size_t i = 0; i < obj.cells().size(); ++i) out += (i ? "," : "") + std::to_string(obj.cells()[i]);
  return out + "}";
}

bool same_fan(const ToricObject& a, const ToricObject& b) { return a.fan_ptr() == b.fan_ptr() || a.fan() == b.fan(); }

const ToricCorners& corners(const DistinguishedSquare& sq) {
  if (!sq.toric) throw SiteError("square " + sq.id + " has no toric data");
  return *sq.toric;
}

}  // namespace

// ---------------------------------------------------------------------------
// Spans

bool SpanMorphism::is_zero() const {
  if (backend == Backend::toric) return !window_obj || window_obj->empty();
  return window.empty();
}

bool SpanMorphism::is_identity() const {
  if (backend == Backend::toric)
    return source_obj && window_obj && target_obj && !is_zero() && *window_obj == *source_obj &&
           *source_obj == *target_obj;
  return map == "id" && window == source && source == target;
}

std::string SpanMorphism::key() const {
  if (backend == Backend::toric && source_obj && window_obj && target_obj)
    return fingerprint(*source_obj) + "|" + fingerprint(*window_obj) + "|" + map + "|" + fingerprint(*target_obj);
  return source + "|" + window + "|" + map + "|" + target;
}

SpanMorphism toric_span(const ToricObject& source, const ToricObject& window, const ToricObject& target) {
  if (!same_fan(source, window)) throw SiteError("window of a span must live in the source's fan");
  if (!window.empty() && !toric::is_open_immersion(window, source))
    throw SiteError(window.describe() + " is not an open subobject of " + source.describe());
  if (!window.empty() && !toric::is_proper_map(window, target))
    throw SiteError("no proper toric map from " + window.describe() + " to " + target.describe());
  SpanMorphism m;
  m.backend = Backend::toric;
  m.source = source.describe();
  m.target = target.describe();
  m.window = window.empty() ? std::string() : window.describe();
  m.map = window.empty() ? "zero" : "lattice-id";
  m.source_obj = source;
  m.window_obj = window;
  m.target_obj = target;
  return m;
}

SpanMorphism identity_span(const ToricObject& obj) { return toric_span(obj, obj, obj); }

SpanMorphism zero_span(const ToricObject& source, const ToricObject& target) {
  return toric_span(source, ToricObject::empty_in(source.fan_ptr()), target);
}

SpanMorphism compose(const SpanMorphism& second, const SpanMorphism& first, const SitePresentation* site) {
  if (first.backend != second.backend) throw SiteError("cannot compose spans of different backends");
  if (first.backend == Backend::toric) {
    if (!first.target_obj || !second.source_obj || !(*first.target_obj == *second.source_obj))
      throw SiteError("span targets " + first.target + " but the next span starts at " + second.source);
    const auto& x = *first.source_obj;
    const auto& z = *second.target_obj;
    if (first.is_zero() || second.is_zero()) return zero_span(x, z);
    const auto images = toric::cell_images(*first.window_obj, *first.target_obj);
    if (!images) throw SiteError("first span does not map its window into its target");
    CellSet w;
    for (std::size_t k = 0; k < images->size(); ++k)
      if (second.window_obj->contains_cell((*images)[k])) w.push_back(first.window_obj->cells()[k]);
    return toric_span(x, ToricObject(x.fan_ptr(), std::move(w)), z);
  }
  if (first.target != second.source)
    throw SiteError("span targets " + first.target + " but the next span starts at " + second.source);
  if (first.is_zero() || second.is_zero()) {
    SpanMorphism m;
    m.backend = Backend::declared;
    m.source = first.source;
    m.target = second.target;
    m.map = "zero";
    return m;
  }
  if (second.is_identity()) return first;
  if (first.is_identity()) return second;
  if (site)
    if (auto name = site->pullback(first.name, second.name)) return site->morphism(*name);
  throw SiteError("missing declared pullback for " + first.name + " then " + second.name);
}

// ---------------------------------------------------------------------------
// Squares

DistinguishedSquare toric_square(SquareKind kind, const ToricObject& e, const ToricObject& y, const ToricObject& c,
                                 const ToricObject& x, std::string id) {
  DistinguishedSquare sq;
  sq.kind = kind;
  sq.backend = Backend::toric;
  sq.toric = ToricCorners{e, y, c, x, std::nullopt};
  sq.e = e.describe();
  sq.y = y.describe();
  sq.c = c.describe();
  sq.x = x.describe();
  sq.id = id.empty() ? to_string(kind) + ":" + sq.x : std::move(id);
  return sq;
}

DistinguishedSquare localization_square(const ToricObject& x, const ToricObject& u, std::string id) {
  if (!toric::is_open_immersion(u, x)) throw GeometryError(u.describe() + " is not an open subobject of " + x.describe());
  const auto e = x.minus(u).with_label(x.label());
  const auto c = ToricObject::empty_in(x.fan_ptr());
  auto sq = toric_square(SquareKind::localization, e, x, c, u, std::move(id));
  if (sq.id == "localization:" + sq.x) sq.id = "localization:" + x.describe() + "/" + u.describe();
  return sq;
}

DistinguishedSquare blowup_square(const toric::StarSubdivision& sub, std::string id) {
  const auto kind = sub.smooth_blowup ? SquareKind::smooth_blowup : SquareKind::abstract_blowup;
  auto sq = toric_square(kind, sub.e, sub.y, sub.c, sub.x, std::move(id));
  sq.toric->ray = sub.fan->rays().back();
  return sq;
}

SpanMorphism leg_i(const DistinguishedSquare& sq) {
  const auto& k = corners(sq);
  if (sq.kind == SquareKind::localization) return zero_span(k.c, k.x);
  return toric_span(k.c, k.c, k.x);
}

SpanMorphism leg_p(const DistinguishedSquare& sq) {
  const auto& k = corners(sq);
  if (sq.kind == SquareKind::localization) return toric_span(k.y, ToricObject(k.y.fan_ptr(), k.x.cells()), k.x);
  return toric_span(k.y, k.y, k.x);
}

bool ValidationReport::ok() const {
  return std::none_of(entries.begin(), entries.end(),
                      [](const ValidationEntry& e) { return e.status == ValidationEntry::Status::fail; });
}

namespace {

ValidationEntry entry(std::string condition, bool pass, std::string detail = {}) {
  return {std::move(condition), pass ? ValidationEntry::Status::pass : ValidationEntry::Status::fail,
          pass ? std::string() : std::move(detail)};
}

// Y -> X restricted over X \ C is a bijection on cones with equal ray vectors.
bool restriction_iso(const ToricCorners& k, std::string& detail) {
  const auto off = k.x.minus(k.c);
  const auto over = toric::preimage(k.y, off);
  const auto images = toric::cell_images(over, k.x);
  if (!images) {
    detail = "cells over X \\ C do not map to X";
    return false;
  }
  std::map<std::size_t, std::size_t> hits;
  for (std::size_t i = 0; i < images->size(); ++i) {
    const auto& ys = k.y.fan().cone(over.cells()[i]).rays;
    const auto& xs = k.x.fan().cone((*images)[i]).rays;
    std::set<IntVector> yv, xv;
    for (auto r : ys) yv.insert(k.y.fan().rays()[r]);
    for (auto r : xs) xv.insert(k.x.fan().rays()[r]);
    if (yv != xv) {
      detail = "cone over " + std::to_string((*images)[i]) + " is subdivided";
      return false;
    }
    ++hits[(*images)[i]];
  }
  for (auto t : off.cells())
    if (hits[t] != 1) {
      detail = "orbit " + std::to_string(t) + " has " + std::to_string(hits[t]) + " preimages";
      return false;
    }
  return true;
}

ValidationReport validate_toric(const DistinguishedSquare& sq) {
  const auto& k = corners(sq);
  ValidationReport r;
  if (sq.kind == SquareKind::localization) {
    r.entries.push_back(entry("open", toric::is_open_immersion(k.x, k.y), "base is not open in X"));
    r.entries.push_back(entry("complement", same_fan(k.e, k.y) && k.e == k.y.minus(k.x), "E is not X \\ U"));
    r.entries.push_back(entry("empty-corner", k.c.empty(), "C corner is not empty"));
    // p restricted to its window U hits every orbit of U; i contributes nothing.
    CellSet hit;
    for (auto c : k.y.cells())
      if (k.x.contains_cell(c)) hit.push_back(c);
    r.jointly_surjective = same_fan(k.x, k.y) && hit == k.x.cells();
    return r;
  }
  r.entries.push_back(entry("closed-immersion", toric::is_closed_immersion(k.c, k.x), "C -> X is not a closed immersion"));
  const bool proper = toric::is_proper_map(k.y, k.x);
  r.entries.push_back(entry("proper", proper, "Y -> X is not proper"));
  const bool cartesian = same_fan(k.e, k.y) && k.e == toric::preimage(k.y, k.c);
  r.entries.push_back(entry("cartesian", cartesian, "E is not the preimage of C"));
  std::string detail;
  const bool iso = proper && restriction_iso(k, detail);
  r.entries.push_back(entry("restriction-iso", iso, proper ? detail : "Y -> X is not proper"));
  const bool dims = k.c.dimension() <= k.x.dimension() && k.e.dimension() <= k.y.dimension();
  r.entries.push_back(entry("dimensions", dims, "dim C > dim X or dim E > dim Y"));
  if (sq.kind == SquareKind::smooth_blowup)
    r.entries.push_back(entry("smooth", k.x.is_smooth() && k.c.is_smooth() && k.y.is_smooth(), "a corner is singular"));
  CellSet hit = k.c.cells();
  if (auto images = toric::cell_images(k.y, k.x)) hit.insert(hit.end(), images->begin(), images->end());
  std::sort(hit.begin(), hit.end());
  hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
  r.jointly_surjective = hit == k.x.cells();
  return r;
}

ValidationReport validate_declared(const DistinguishedSquare& sq, const SitePresentation* site) {
  ValidationReport r;
  std::vector<std::string> required;
  if (sq.kind == SquareKind::localization)
    required = {"open"};
  else
    required = {"closed_immersion", "proper", "cartesian", "restriction_iso"};
  if (sq.kind == SquareKind::smooth_blowup) required.push_back("smooth");
  for (const auto& flag : required) {
    std::string name = flag;
    std::replace(name.begin(), name.end(), '_', '-');
    auto it = sq.flags.find(flag);
    if (it == sq.flags.end())
      r.entries.push_back({name, ValidationEntry::Status::fail, name + " undeclared"});
    else if (!it->second)
      r.entries.push_back({name, ValidationEntry::Status::fail, name + " declared false"});
    else
      r.entries.push_back({name, ValidationEntry::Status::trusted, {}});
  }
  if (site && site->has_object(sq.e) && site->has_object(sq.y) && site->has_object(sq.c) && site->has_object(sq.x)) {
    const int e = site->object(sq.e).dim, y = site->object(sq.y).dim;
    const int c = site->object(sq.c).dim, x = site->object(sq.x).dim;
    if (sq.kind == SquareKind::localization)
      r.entries.push_back(entry("empty-corner", c == -1, "C corner is not empty"));
    else
      r.entries.push_back(entry("dimensions", c <= x && e <= y, "dim C > dim X or dim E > dim Y"));
  }
  return r;
}

}  // namespace

ValidationReport validate_square(const DistinguishedSquare& sq, const SitePresentation* site) {
  if (sq.backend == Backend::toric) return validate_toric(sq);
  return validate_declared(sq, site);
}

// ---------------------------------------------------------------------------
// Site presentation

void SitePresentation::add_object(SiteObject obj) {
  if (obj.dim < -1) throw SiteError("object " + obj.name + " has dimension below -1");
  if (obj.name.empty()) throw SiteError("object without a name");
  if (object_index_.count(obj.name)) throw SiteError("object " + obj.name + " declared twice");
  object_index_.emplace(obj.name, objects_.size());
  objects_.push_back(std::move(obj));
}

std::string SitePresentation::intern(const ToricObject& obj) {
  for (const auto& o : objects_)
    if (o.toric && same_fan(*o.toric, obj) && o.toric->cells() == obj.cells()) return o.name;
  std::string name = obj.empty() ? "empty" : obj.describe();
  if (object_index_.count(name)) {
    int k = 2;
    while (object_index_.count(name + "#" + std::to_string(k))) ++k;
    name += "#" + std::to_string(k);
  }
  add_object({name, obj.dimension(), obj.empty() || obj.is_compact(), obj});
  return name;
}

bool SitePresentation::has_object(const std::string& name) const { return object_index_.count(name) > 0; }

const SiteObject& SitePresentation::object(const std::string& name) const {
  auto it = object_index_.find(name);
  if (it == object_index_.end()) throw SiteError("unknown object " + name);
  return objects_[it->second];
}

void SitePresentation::add_morphism(SpanMorphism m) {
  if (m.backend != backend_) throw SiteError("morphism backend does not match the site");
  if (m.backend == Backend::toric) {
    m.source = intern(*m.source_obj);
    m.target = intern(*m.target_obj);
    if (!m.is_zero()) m.window = intern(*m.window_obj);
  } else {
    for (const auto* n : {&m.source, &m.target})
      if (!has_object(*n)) throw SiteError("morphism " + m.name + " refers to unknown object " + *n);
    if (!m.window.empty() && !has_object(m.window))
      throw SiteError("morphism " + m.name + " has unknown window " + m.window);
  }
  if (m.name.empty()) m.name = "m" + std::to_string(morphisms_.size());
  for (const auto& other : morphisms_)
    if (other.name == m.name) throw SiteError("morphism " + m.name + " declared twice");
  morphisms_.push_back(std::move(m));
}

const SpanMorphism& SitePresentation::morphism(const std::string& name) const {
  for (const auto& m : morphisms_)
    if (m.name == name) return m;
  throw SiteError("unknown morphism " + name);
}

std::string SitePresentation::add_square(DistinguishedSquare sq) {
  if (sq.backend != backend_) throw SiteError("square backend does not match the site");
  if (sq.backend == Backend::toric) {
    const auto& k = corners(sq);
    sq.e = intern(k.e);
    sq.y = intern(k.y);
    sq.c = intern(k.c);
    sq.x = intern(k.x);
  } else {
    for (const auto* n : {&sq.e, &sq.y, &sq.c, &sq.x})
      if (!has_object(*n)) throw SiteError("square " + sq.id + " refers to unknown object " + *n);
  }
  if (sq.id.empty()) sq.id = "sq" + std::to_string(squares_.size());
  for (const auto& other : squares_)
    if (other.id == sq.id) throw SiteError("square " + sq.id + " declared twice");
  squares_.push_back(std::move(sq));
  return squares_.back().id;
}

const DistinguishedSquare& SitePresentation::square(const std::string& id) const {
  for (const auto& s : squares_)
    if (s.id == id) return s;
  throw SiteError("unknown square " + id);
}

std::vector<const DistinguishedSquare*> SitePresentation::squares_over(const std::string& base) const {
  std::vector<const DistinguishedSquare*> out;
  for (const auto& s : squares_)
    if (s.base() == base) out.push_back(&s);
  return out;
}

void SitePresentation::add_pullback(const std::string& first, const std::string& second, const std::string& composite) {
  pullbacks_[{first, second}] = composite;
}

std::optional<std::string> SitePresentation::pullback(const std::string& first, const std::string& second) const {
  auto it = pullbacks_.find({first, second});
  if (it == pullbacks_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Simple covers

std::string SimpleCover::Leaf::key() const {
  std::string out = source;
  for (const auto& p : path) out += " -> " + p;
  return out;
}

SimpleCover SimpleCover::iso(std::string object) {
  auto node = std::make_shared<Node>();
  node->object = std::move(object);
  return SimpleCover(std::move(node));
}

SimpleCover SimpleCover::square(const DistinguishedSquare& sq, const SimpleCover& over_y, const SimpleCover& over_c) {
  if (over_y.root() != sq.y || over_c.root() != sq.c)
    throw SiteError("subcovers do not match the corners of square " + sq.id);
  auto node = std::make_shared<Node>();
  node->object = sq.base();
  node->square = sq.id;
  node->over_y = over_y.root_;
  node->over_c = over_c.root_;
  return SimpleCover(std::move(node));
}

namespace {

void collect(const SimpleCover::Node& n, std::vector<SimpleCover::Leaf>& out) {
  if (n.square.empty()) {
    out.push_back({n.object, {}});
    return;
  }
  const std::size_t start_y = out.size();
  collect(*n.over_y, out);
  for (std::size_t k = start_y; k < out.size(); ++k) out[k].path.push_back(n.square + ".p");
  const std::size_t start_c = out.size();
  collect(*n.over_c, out);
  for (std::size_t k = start_c; k < out.size(); ++k) out[k].path.push_back(n.square + ".i");
}

int node_depth(const SimpleCover::Node& n) {
  if (n.square.empty()) return 0;
  return 1 + std::max(node_depth(*n.over_y), node_depth(*n.over_c));
}

}  // namespace

std::vector<SimpleCover::Leaf> SimpleCover::leaves() const {
  std::vector<Leaf> out;
  collect(*root_, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::string SimpleCover::key() const {
  std::string out;
  for (const auto& leaf : leaves()) out += (out.empty() ? "" : "; ") + leaf.key();
  return out;
}

int SimpleCover::depth() const { return node_depth(*root_); }

std::vector<SimpleCover> enumerate_simple_covers(const SitePresentation& site, const std::string& object, int depth) {
  if (!site.has_object(object)) throw SiteError("unknown object " + object);
  std::map<std::pair<std::string, int>, std::vector<SimpleCover>> memo;
  std::function<const std::vector<SimpleCover>&(const std::string&, int)> covers =
      [&](const std::string& obj, int d) -> const std::vector<SimpleCover>& {
    auto key = std::make_pair(obj, d);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::map<std::string, SimpleCover> found;
    auto iso = SimpleCover::iso(obj);
    found.emplace(iso.key(), iso);
    if (d > 0) {
      for (const auto* sq : site.squares_over(obj)) {
        const auto ys = covers(sq->y, d - 1);
        const auto cs = covers(sq->c, d - 1);
        for (const auto& cy : ys)
          for (const auto& cc : cs) {
            auto cover = SimpleCover::square(*sq, cy, cc);
            found.emplace(cover.key(), cover);
          }
      }
    }
    std::vector<SimpleCover> out;
    for (auto& [k, c] : found) out.push_back(std::move(c));
    return memo.emplace(key, std::move(out)).first->second;
  };
  return covers(object, std::max(depth, 0));
}

std::optional<bool> jointly_surjective(const SitePresentation& site, const SimpleCover& cover) {
  std::function<std::optional<CellSet>(const SimpleCover::Node&)> image =
      [&](const SimpleCover::Node& n) -> std::optional<CellSet> {
    const auto& obj = site.object(n.object);
    if (!obj.toric) return std::nullopt;
    if (n.square.empty()) return obj.toric->cells();
    const auto& sq = site.square(n.square);
    if (!sq.toric) return std::nullopt;
    auto from_y = image(*n.over_y);
    auto from_c = image(*n.over_c);
    if (!from_y || !from_c) return std::nullopt;
    CellSet hit;
    if (sq.kind == SquareKind::localization) {
      for (auto c : *from_y)
        if (sq.toric->x.contains_cell(c)) hit.push_back(c);
    } else {
      auto images = toric::cell_images(ToricObject(sq.toric->y.fan_ptr(), *from_y), sq.toric->x);
      if (!images) return std::nullopt;
      hit = *images;
      hit.insert(hit.end(), from_c->begin(), from_c->end());
    }
    std::sort(hit.begin(), hit.end());
    hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
    return hit;
  };
  auto hit = image(cover.tree());
  if (!hit) return std::nullopt;
  return *hit == site.object(cover.root()).toric->cells();
}

// ---------------------------------------------------------------------------
// c-completeness

namespace {

CCompleteVerdict found_iso(const std::string& source, std::string note) {
  CCompleteVerdict v;
  v.found = true;
  v.cover = SimpleCover::iso(source);
  v.depth = 0;
  v.note = std::move(note);
  return v;
}

CCompleteVerdict not_found(std::string note) {
  CCompleteVerdict v;
  v.note = std::move(note);
  return v;
}

CCompleteVerdict found_square(DistinguishedSquare sq, std::string note) {
  CCompleteVerdict v;
  const auto report = validate_square(sq);
  if (!report.ok()) {
    std::string why;
    for (const auto& e : report.entries)
      if (e.status == ValidationEntry::Status::fail) why += (why.empty() ? "" : ", ") + e.condition;
    return not_found("constructed square fails validation (" + why + ")");
  }
  v.found = true;
  v.depth = 1;
  v.cover = SimpleCover::square(sq, SimpleCover::iso(sq.y), SimpleCover::iso(sq.c));
  v.constructed.push_back(std::move(sq));
  v.note = std::move(note);
  return v;
}

bool factors_through_i(const ToricCorners& k, SquareKind kind, const ToricObject& w) {
  if (kind == SquareKind::localization) return false;
  auto images = toric::cell_images(w, k.x);
  return images && std::all_of(images->begin(), images->end(), [&](std::size_t c) { return k.c.contains_cell(c); });
}

bool factors_through_p(const ToricCorners& k, SquareKind kind, const ToricObject& w) {
  if (kind == SquareKind::localization) return toric::is_proper_map(w, k.y);
  return toric::is_proper_map(w, k.y);
}

CCompleteVerdict pull_back_blowup(const ToricCorners& k, const ToricObject& z) {
  ToricObject yz, cz;
  cz = toric::preimage(z, k.c);
  if (same_fan(z, k.x)) {
    yz = toric::preimage(k.y, z);
  } else {
    auto refinement = std::make_shared<const toric::Fan>(toric::common_refinement(z.fan(), k.y.fan()));
    yz = toric::preimage(toric::preimage(ToricObject::whole(refinement), z), k.y);
  }
  const auto ez = toric::preimage(yz, cz);
  auto sq = toric_square(SquareKind::abstract_blowup, ez, yz, cz, z);
  if (same_fan(z, k.x)) sq.toric->ray = k.ray;
  return found_square(std::move(sq), "pulled-back square");
}

CCompleteVerdict extend_blowup(const ToricCorners& k, const ToricObject& z, const ToricObject& w) {
  if (!k.ray) return not_found("square has no subdivision ray, so no toric Nagata extension is known");
  const auto& fz = z.fan_ptr();
  auto sigma = fz->locate(*k.ray);
  if (!sigma) return not_found("subdivision ray lies outside the source fan");
  toric::FanPtr yfan = fz;
  if (fz->cone(*sigma).dim >= 2) yfan = toric::star_subdivide(fz, *k.ray).fan;
  const auto y = toric::preimage(ToricObject::whole(yfan), z);
  const auto cw = toric::preimage(w, k.c);
  const auto c = cw.closure().intersect(z).unite(z.minus(w));
  const auto e = toric::preimage(y, c);
  // The legs composed with f must land in C and factor through Y.
  if (!(c.intersect(w) == cw)) return not_found("extended center meets the window beyond the pulled-back center");
  const auto y_over_w = toric::preimage(y, w);
  if (!y_over_w.empty() && !toric::is_proper_map(y_over_w, k.y))
    return not_found("extended blowup does not factor through Y over the window");
  return found_square(toric_square(SquareKind::abstract_blowup, e, y, c, z), "Nagata extension of the pulled-back square");
}

CCompleteVerdict glue_localization(const ToricCorners& k, const ToricObject& z, const ToricObject& w) {
  const std::string non_toric = "non-toric glue required";
  // Work in the source's fan, which refines the base's fan over the window.
  const auto ambient = toric::preimage(ToricObject::whole(z.fan_ptr()), k.y);
  const auto closure = w.closure().intersect(ambient);
  if (!(closure.intersect(z) == w)) return not_found(non_toric + ": the source meets the closure of the window");
  const auto glued = z.unite(closure).with_label(z.label());
  if (!glued.is_locally_closed() || !toric::is_open_immersion(z, glued) || !toric::is_open_immersion(closure, glued))
    return not_found(non_toric + ": the union is not a toric variety with the expected opens");
  if (!toric::is_proper_map(closure, k.y))
    return not_found(non_toric + ": the closure of the window does not map properly to X");
  return found_square(localization_square(glued, z), "localization square of the glued object");
}

}  // namespace

CCompleteVerdict check_c_complete(const SitePresentation& site, const DistinguishedSquare& sq, const SpanMorphism& f,
                                  int depth) {
  if (depth < 0) return not_found("negative depth");
  if (sq.backend == Backend::declared) {
    if (f.target != sq.base()) throw SiteError("morphism " + f.name + " does not target the base of " + sq.id);
    if (f.is_zero()) return found_iso(f.source, "zero span: the sieve is maximal");
    if (f.is_identity()) {
      if (depth < 1) return not_found("needs depth 1");
      CCompleteVerdict v;
      v.found = true;
      v.depth = 1;
      v.cover = SimpleCover::square(sq, SimpleCover::iso(sq.y), SimpleCover::iso(sq.c));
      v.note = "the square's own cover";
      return v;
    }
    if (auto id = site.pullback(f.name, sq.id)) {
      if (depth < 1) return not_found("needs depth 1");
      const auto& pulled = site.square(*id);
      CCompleteVerdict v;
      v.found = true;
      v.depth = 1;
      v.cover = SimpleCover::square(pulled, SimpleCover::iso(pulled.y), SimpleCover::iso(pulled.c));
      v.note = "declared pullback square";
      return v;
    }
    return not_found("declared backend: no pullback of " + sq.id + " along " + f.name + " is declared");
  }

  const auto& k = corners(sq);
  if (f.backend != Backend::toric || !f.target_obj || !(*f.target_obj == k.x))
    throw SiteError("morphism does not target the base of " + sq.id);
  const auto& z = *f.source_obj;
  const auto& w = *f.window_obj;
  if (f.is_zero()) return found_iso(f.source, "zero span: the sieve is maximal");
  if (factors_through_i(k, sq.kind, w)) return found_iso(f.source, "f factors through i");
  if (factors_through_p(k, sq.kind, w)) return found_iso(f.source, "f factors through p");
  if (depth < 1) return not_found("no cover at depth 0");
  if (sq.kind == SquareKind::localization) return glue_localization(k, z, w);
  if (w == z) return pull_back_blowup(k, z);
  return extend_blowup(k, z, w);
}

// ---------------------------------------------------------------------------
// Dimension compatibility

bool dimensions_direct(int e, int y, int c, int base) { return c <= base && y <= base && e < base; }

namespace {

bool square_direct(const DistinguishedSquare& sq) {
  const auto& k = corners(sq);
  return dimensions_direct(k.e.dimension(), k.y.dimension(), k.c.dimension(), k.x.dimension());
}

DimVerdict finish(std::vector<DistinguishedSquare> squares, std::string note) {
  DimVerdict v;
  for (const auto& s : squares) {
    if (!square_direct(s)) {
      v.kind = DimVerdict::Kind::fail;
      v.note = "refinement square " + s.id + " is not direct";
      return v;
    }
    if (!validate_square(s).ok()) {
      v.kind = DimVerdict::Kind::fail;
      v.note = "refinement square " + s.id + " fails validation";
      return v;
    }
  }
  v.kind = DimVerdict::Kind::refined;
  v.refinement = std::move(squares);
  v.note = std::move(note);
  return v;
}

DimVerdict refine_toric(const DistinguishedSquare& sq) {
  const auto& k = corners(sq);
  if (sq.kind == SquareKind::localization) {
    if (k.x.empty()) return finish({}, "empty base: covered by its identity");
    const auto closure = k.x.closure().intersect(k.y).with_label(k.y.label());
    return finish({localization_square(closure, k.x)}, "square over the closure of U");
  }
  std::vector<DistinguishedSquare> out;
  const auto comps = k.x.components();
  // Peel off one irreducible component at a time.
  ToricObject rest = k.x;
  for (std::size_t j = 0; j + 1 < comps.size(); ++j) {
    ToricObject later = ToricObject::empty_in(k.x.fan_ptr());
    for (std::size_t i = j + 1; i < comps.size(); ++i) later = later.unite(comps[i]);
    out.push_back(toric_square(SquareKind::abstract_blowup, comps[j].intersect(later), comps[j], later, rest,
                               sq.id + "/component" + std::to_string(j)));
    rest = later;
  }
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const auto& xi = comps[i];
    const auto ci = k.c.intersect(xi);
    const auto yi = toric::preimage(k.y, xi);
    const auto ei = toric::preimage(yi, ci);
    const auto strict = yi.minus(ei).closure().intersect(yi);
    out.push_back(toric_square(SquareKind::abstract_blowup, strict.intersect(ei), strict, ci, xi,
                               sq.id + "/strict" + std::to_string(i)));
  }
  return finish(std::move(out), "irreducible components and strict transforms");
}

}  // namespace

DimVerdict check_dim_compatible(const DistinguishedSquare& sq, const SitePresentation* site) {
  if (sq.backend == Backend::toric) {
    if (square_direct(sq)) return {DimVerdict::Kind::direct, {}, {}};
    return refine_toric(sq);
  }
  if (!site) throw SiteError("declared square " + sq.id + " needs its site for dimension data");
  auto dims = [&](const DistinguishedSquare& s) {
    return dimensions_direct(site->object(s.e).dim, site->object(s.y).dim, site->object(s.c).dim,
                             site->object(s.x).dim);
  };
  if (dims(sq)) return {DimVerdict::Kind::direct, {}, {}};
  if (sq.refinement.empty()) return {DimVerdict::Kind::fail, {}, "not direct and no refinement is declared"};
  DimVerdict v;
  for (const auto& id : sq.refinement) {
    const auto& r = site->square(id);
    if (!dims(r)) return {DimVerdict::Kind::fail, {}, "declared refinement square " + id + " is not direct"};
    v.refinement.push_back(r);
  }
  v.kind = DimVerdict::Kind::refined;
  v.note = "declared refinement";
  return v;
}

}  // namespace motivic::site
