#include "motivic/io.hpp"

#include <fstream>
#include <sstream>

#include "motivic/error.hpp"

namespace motivic::io {

using toric::CellSet;
using toric::Fan;
using toric::ToricObject;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot write " + path);
  out << text;
}

json load_json(const std::string& path) {
  const auto text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

namespace {

const json& field(const json& doc, const char* key, const std::string& where) {
  if (!doc.is_object() || !doc.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
  return doc.at(key);
}

std::string text_of(const json& v, const std::string& where) {
  if (!v.is_string()) throw SchemaError(where + ": expected a string");
  return v.get<std::string>();
}

Integer integer_of(const json& v, const std::string& where) {
  if (v.is_number_integer()) return Integer(v.get<long long>());
  if (v.is_string()) {
    try {
      return Integer(v.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw SchemaError(where + ": expected an integer");
}

std::size_t index_of(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    throw SchemaError(where + ": expected a non-negative index");
  return v.get<std::size_t>();
}

json integer_to_json(const Integer& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return v.convert_to<long long>();
  return v.str();
}

std::vector<std::size_t> indices_of(const json& v, const std::string& where) {
  if (!v.is_array()) throw SchemaError(where + ": expected an array of indices");
  std::vector<std::size_t> out;
  for (const auto& x : v) out.push_back(index_of(x, where));
  return out;
}

}  // namespace

RelationSet relations_from_json(const json& doc) {
  if (!doc.is_array()) throw SchemaError("relation file: expected an array of records");
  RelationSet rels;
  std::size_t n = 0;
  for (const auto& rec : doc) {
    const std::string where = "relation " + std::to_string(n++);
    Relation r;
    try {
      r.kind = relation_kind_from_string(text_of(field(rec, "kind", where), where));
    } catch (const RelationError& e) {
      throw SchemaError(where + ": " + e.what());
    }
    const auto& slots = field(rec, "slots", where);
    if (!slots.is_object()) throw SchemaError(where + ": slots must be an object");
    for (const auto& [k, v] : slots.items()) r.slots[k] = text_of(v, where + " slot " + k);
    if (rec.contains("dims")) {
      const auto& dims = rec.at("dims");
      const json compact = rec.value("compact", json::object());
      for (const auto& [name, d] : dims.items()) {
        if (!d.is_number_integer()) throw SchemaError(where + ": dimension of " + name + " must be an integer");
        if (!compact.contains(name) || !compact.at(name).is_boolean())
          throw SchemaError(where + ": compactness of " + name + " is missing");
        rels.declare(name, d.get<int>(), compact.at(name).get<bool>());
      }
    }
    rels.add(std::move(r));
  }
  return rels;
}

Fan fan_from_json(const json& doc) {
  if (doc.is_string()) {
    const auto name = doc.get<std::string>();
    if (auto fan = toric::named_fan(name)) return *fan;
    throw SchemaError("unknown builtin fan '" + name + "'");
  }
  const std::string where = "fan";
  const auto& rank = field(doc, "rank", where);
  if (!rank.is_number_integer() || rank.get<long long>() < 0) throw SchemaError("fan: rank must be a non-negative integer");
  const auto n = rank.get<std::size_t>();
  std::vector<IntVector> rays;
  for (const auto& r : field(doc, "rays", where)) {
    if (!r.is_array() || r.size() != n) throw SchemaError("fan: every ray needs " + std::to_string(n) + " coordinates");
    IntVector v;
    for (const auto& x : r) v.push_back(integer_of(x, "fan ray"));
    rays.push_back(std::move(v));
  }
  std::vector<std::vector<std::size_t>> cones;
  for (const auto& c : field(doc, "maximal_cones", where)) cones.push_back(indices_of(c, "fan cone"));
  return Fan::build(n, std::move(rays), cones);
}

Fan load_fan(const std::string& name_or_path) {
  if (auto fan = toric::named_fan(name_or_path)) return *fan;
  return fan_from_json(load_json(name_or_path));
}

json fan_to_json(const Fan& fan) {
  json out;
  out["rank"] = fan.rank();
  json rays = json::array();
  for (const auto& r : fan.rays()) {
    json v = json::array();
    for (const auto& x : r) v.push_back(integer_to_json(x));
    rays.push_back(std::move(v));
  }
  out["rays"] = std::move(rays);
  json cones = json::array();
  for (auto m : fan.maximal())
    if (fan.cone(m).dim > 0) cones.push_back(fan.cone(m).rays);
  out["maximal_cones"] = std::move(cones);
  return out;
}

MeasureRegistry registry_from_json(const json& doc) {
  MeasureRegistry reg;
  auto one = [&](const json& rec) {
    const std::string where = "registry entry";
    const auto gen = text_of(field(rec, "generator", where), where);
    const auto measure = text_of(field(rec, "measure", where), where);
    const auto family = measure == "count" ? std::string("count") : MeasureSpec::parse(measure).family();
    std::vector<Integer> coeffs;
    const auto& value = field(rec, "value", where);
    if (value.is_array())
      for (const auto& x : value) coeffs.push_back(integer_of(x, where));
    else
      coeffs.push_back(integer_of(value, where));
    reg.set(gen, family, std::move(coeffs));
  };
  if (doc.is_array())
    for (const auto& rec : doc) one(rec);
  else
    one(doc);
  return reg;
}

ToricObject object_from_json(const json& doc) {
  const std::string where = "object";
  auto fan = std::make_shared<const Fan>(fan_from_json(field(doc, "fan", where)));
  const std::string label = doc.value("label", doc.contains("fan") && doc.at("fan").is_string()
                                                    ? doc.at("fan").get<std::string>()
                                                    : std::string());
  ToricObject obj = ToricObject::whole(fan, label);
  if (doc.contains("cells")) {
    auto cells = indices_of(doc.at("cells"), where);
    for (auto c : cells)
      if (c >= fan->size()) throw SchemaError("object: cell " + std::to_string(c) + " out of range");
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    obj = ToricObject(fan, cells, label);
  }
  if (doc.contains("open_rays")) {
    const auto rays = indices_of(doc.at("open_rays"), where);
    CellSet cells;
    for (std::size_t c = 0; c < fan->size(); ++c) {
      const auto& r = fan->cone(c).rays;
      if (std::all_of(r.begin(), r.end(), [&](std::size_t i) { return std::count(rays.begin(), rays.end(), i) > 0; }))
        cells.push_back(c);
    }
    obj = obj.intersect(ToricObject(fan, cells));
  }
  auto closures = [&](const char* key) {
    ToricObject out = ToricObject::empty_in(fan);
    for (const auto& rs : doc.at(key)) {
      auto rays = indices_of(rs, where);
      std::sort(rays.begin(), rays.end());
      auto cone = fan->find(rays);
      if (!cone) throw SchemaError(std::string("object: ") + key + " names a ray set that is not a cone");
      out = out.unite(ToricObject(fan, {*cone}).closure());
    }
    return out;
  };
  if (doc.contains("orbit_closures")) obj = obj.intersect(closures("orbit_closures"));
  if (doc.contains("remove")) obj = obj.minus(closures("remove"));
  if (!obj.is_locally_closed()) throw SchemaError("object: cell set is not locally closed");
  return obj.with_label(label);
}

json object_to_json(const ToricObject& obj) {
  json out;
  out["fan"] = fan_to_json(obj.fan());
  out["cells"] = obj.cells();
  if (!obj.label().empty()) out["label"] = obj.label();
  return out;
}

namespace {

std::array<std::string, 4> corner_names(const json& sq, const std::string& where) {
  const auto& c = field(sq, "corners", where);
  std::array<std::string, 4> out;
  if (c.is_array()) {
    if (c.size() != 4) throw SchemaError(where + ": corners must list E, Y, C, X");
    for (std::size_t i = 0; i < 4; ++i) out[i] = text_of(c[i], where);
  } else {
    const char* keys[] = {"E", "Y", "C", "X"};
    for (std::size_t i = 0; i < 4; ++i) out[i] = text_of(field(c, keys[i], where), where);
  }
  return out;
}

}  // namespace

site::SitePresentation site_from_json(const json& doc) {
  using namespace site;
  const auto& objects = field(doc, "objects", "site");
  bool toric = !objects.empty();
  for (const auto& o : objects)
    if (!o.contains("backend_ref") || o.at("backend_ref").is_null()) toric = false;
  SitePresentation out(toric ? Backend::toric : Backend::declared);
  for (const auto& o : objects) {
    const auto name = text_of(field(o, "name", "site object"), "site object");
    const std::string where = "object " + name;
    if (toric) {
      auto obj = object_from_json(o.at("backend_ref"));
      if (o.contains("dim") && o.at("dim").get<int>() != obj.dimension())
        throw SchemaError(where + ": declared dimension does not match the fan data");
      if (o.contains("compact") && o.at("compact").get<bool>() != (obj.empty() || obj.is_compact()))
        throw SchemaError(where + ": declared compactness does not match the fan data");
      out.add_object({name, obj.dimension(), obj.empty() || obj.is_compact(), obj.with_label(name)});
    } else {
      const auto& dim = field(o, "dim", where);
      if (!dim.is_number_integer()) throw SchemaError(where + ": dim must be an integer");
      out.add_object({name, dim.get<int>(), o.value("compact", false), std::nullopt});
    }
  }
  auto toric_object = [&](const std::string& name) -> const ToricObject& {
    const auto& obj = out.object(name);
    if (!obj.toric) throw SchemaError("object " + name + " has no fan data");
    return *obj.toric;
  };
  for (const auto& m : doc.value("morphisms", json::array())) {
    const std::string where = "morphism";
    const auto src = text_of(field(m, "src", where), where);
    const auto tgt = text_of(field(m, "tgt", where), where);
    const std::string window = m.contains("window") && !m.at("window").is_null() ? text_of(m.at("window"), where) : "";
    SpanMorphism span;
    if (toric) {
      const auto& s = toric_object(src);
      span = toric_span(s, window.empty() ? ToricObject::empty_in(s.fan_ptr()) : toric_object(window), toric_object(tgt));
    } else {
      span.backend = Backend::declared;
      span.source = src;
      span.target = tgt;
      span.window = window;
      span.map = m.value("map", window.empty() ? std::string("zero") : std::string());
    }
    span.name = m.value("name", std::string());
    out.add_morphism(std::move(span));
  }
  for (const auto& s : doc.value("squares", json::array())) {
    const std::string where = "square";
    const auto kind = square_kind_from_string(text_of(field(s, "kind", where), where));
    const std::string id = s.value("id", std::string());
    DistinguishedSquare sq;
    if (toric) {
      if (kind == SquareKind::localization && s.contains("U")) {
        sq = localization_square(toric_object(text_of(field(s, "X", where), where)),
                                 toric_object(text_of(s.at("U"), where)), id);
      } else {
        const auto names = corner_names(s, where);
        sq = toric_square(kind, toric_object(names[0]), toric_object(names[1]), toric_object(names[2]),
                          toric_object(names[3]), id);
      }
      if (s.contains("ray")) {
        IntVector v;
        for (const auto& x : s.at("ray")) v.push_back(integer_of(x, where));
        sq.toric->ray = std::move(v);
      }
    } else {
      const auto names = corner_names(s, where);
      sq.backend = Backend::declared;
      sq.kind = kind;
      sq.id = id;
      sq.e = names[0];
      sq.y = names[1];
      sq.c = names[2];
      sq.x = names[3];
    }
    const json flags = s.value("flags", json::object());
    for (const auto& [k, v] : flags.items()) sq.flags[k] = v.get<bool>();
    for (const auto& r : s.value("refinement", json::array())) sq.refinement.push_back(text_of(r, where));
    out.add_square(std::move(sq));
  }
  for (const auto& p : doc.value("pullbacks", json::array())) {
    const std::string where = "pullback";
    out.add_pullback(text_of(field(p, "first", where), where), text_of(field(p, "second", where), where),
                     text_of(field(p, "composite", where), where));
  }
  return out;
}

json site_to_json(const site::SitePresentation& s) {
  json out;
  json objects = json::array();
  for (const auto& o : s.objects()) {
    json j{{"name", o.name}, {"dim", o.dim}, {"compact", o.compact}};
    j["backend_ref"] = o.toric ? object_to_json(o.toric->with_label(o.name)) : json(nullptr);
    objects.push_back(std::move(j));
  }
  out["objects"] = std::move(objects);
  json morphisms = json::array();
  for (const auto& m : s.morphisms())
    morphisms.push_back({{"name", m.name}, {"src", m.source}, {"window", m.window}, {"map", m.map}, {"tgt", m.target}});
  out["morphisms"] = std::move(morphisms);
  json squares = json::array();
  for (const auto& sq : s.squares()) {
    json j{{"id", sq.id},
           {"kind", site::to_string(sq.kind)},
           {"corners", {{"E", sq.e}, {"Y", sq.y}, {"C", sq.c}, {"X", sq.x}}},
           {"maps", {{"i", sq.c + " -> " + sq.x}, {"p", sq.y + " -> " + sq.x}}}};
    if (!sq.flags.empty()) j["flags"] = sq.flags;
    if (!sq.refinement.empty()) j["refinement"] = sq.refinement;
    if (sq.toric && sq.toric->ray) {
      json v = json::array();
      for (const auto& x : *sq.toric->ray) v.push_back(integer_to_json(x));
      j["ray"] = std::move(v);
    }
    squares.push_back(std::move(j));
  }
  out["squares"] = std::move(squares);
  if (!s.pullbacks().empty()) {
    json pullbacks = json::array();
    for (const auto& [key, composite] : s.pullbacks())
      pullbacks.push_back({{"first", key.first}, {"second", key.second}, {"composite", composite}});
    out["pullbacks"] = std::move(pullbacks);
  }
  return out;
}

json value_to_json(const MeasureValue& v) { return v.to_string(); }

json kclass_to_json(const KClass& k) { return k.to_string(); }

}  // namespace motivic::io
