#include "motivic/runner.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>

#include "motivic/csupport.hpp"
#include "motivic/error.hpp"

namespace motivic::run {

using csupport::CheckReport;
using csupport::MeasureOnCompacts;
using toric::ToricObject;

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
  }
  return "fail";
}

Summary Report::summary() const {
  Summary s;
  for (const auto& r : records) {
    ++s.total;
    if (r.status == Status::pass) ++s.pass;
    if (r.status == Status::fail) ++s.fail;
    if (r.status == Status::skipped) ++s.skipped;
  }
  return s;
}

io::json Report::to_json(bool timing) const {
  io::json out = header;
  io::json recs = io::json::array();
  for (const auto& r : records) {
    io::json j;
    j["id"] = r.id;
    j["kind"] = r.kind;
    if (!r.measure.empty()) j["measure"] = r.measure;
    j["object"] = r.object;
    j["status"] = r.status == Status::skipped ? "skipped(" + r.reason + ")" : to_string(r.status);
    if (r.status == Status::fail && !r.reason.empty()) j["reason"] = r.reason;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["trace"] = r.trace;
    if (!r.note.empty()) j["note"] = r.note;
    if (timing) j["timing_ms"] = r.millis;
    recs.push_back(std::move(j));
  }
  out["records"] = std::move(recs);
  const auto s = summary();
  out["summary"] = {{"total", s.total}, {"pass", s.pass}, {"fail", s.fail}, {"skipped", s.skipped}};
  return out;
}

std::string Report::to_text(bool timing) const {
  std::vector<const Record*> order;
  for (const auto& r : records) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](const Record* a, const Record* b) {
    return std::tie(a->object, a->kind) < std::tie(b->object, b->kind);
  });
  std::ostringstream out;
  std::string current;
  bool first = true;
  for (const auto* r : order) {
    if (first || r->object != current) {
      out << "[" << r->object << "]\n";
      current = r->object;
      first = false;
    }
    std::string status = to_string(r->status);
    std::transform(status.begin(), status.end(), status.begin(), ::toupper);
    out << "  " << status << "  " << r->id;
    if (r->status == Status::skipped) out << "  (" << r->reason << ")";
    if (!r->lhs.empty() || !r->rhs.empty()) out << "  " << r->lhs << (r->status == Status::fail ? " != " : " == ") << r->rhs;
    if (r->status == Status::fail && !r->reason.empty()) out << "  " << r->reason;
    if (!r->note.empty() && r->status != Status::pass && r->note != r->reason) out << "  -- " << r->note;
    if (timing) out << "  [" << r->millis << " ms]";
    out << "\n";
  }
  const auto s = summary();
  out << s.total << " checks: " << s.pass << " passed, " << s.fail << " failed, " << s.skipped << " skipped\n";
  return out.str();
}

bool Options::wants(const std::string& kind) const {
  return kinds.empty() || std::find(kinds.begin(), kinds.end(), kind) != kinds.end();
}

const std::vector<std::string>& corpus_kinds() {
  static const std::vector<std::string> kinds{"additivity",      "independence", "blowup_relation", "blowup_descent",
                                              "round_trip",      "point_count",  "kunneth",         "mayer_vietoris",
                                              "purity",          "validate",     "c_complete",      "covers",
                                              "dim_compatible"};
  return kinds;
}

Integer orbit_point_count(const ToricObject& obj, const Integer& q) {
  Integer total = 0;
  const auto n = obj.fan().rank();
  for (auto c : obj.cells()) total += boost::multiprecision::pow(Integer(q - 1), static_cast<unsigned>(n - obj.fan().cone(c).dim));
  return total;
}

namespace {

using Clock = std::chrono::steady_clock;

// Runs one check; motivic errors become failed records.
Record timed(Record base, const std::function<void(Record&)>& body) {
  const auto start = Clock::now();
  try {
    body(base);
  } catch (const Error& e) {
    base.status = Status::fail;
    base.reason = std::string("error: ") + e.what();
  }
  base.millis = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return base;
}

std::vector<std::string> trace_lines(const std::vector<csupport::TraceStep>& trace) {
  std::vector<std::string> out;
  for (const auto& s : trace)
    out.push_back(std::to_string(s.depth) + ": " + s.object + " in " + s.compactification + ", boundary " + s.boundary);
  return out;
}

void fill(Record& r, const CheckReport& c) {
  r.status = c.pass ? Status::pass : Status::fail;
  r.lhs = c.lhs.to_string();
  r.rhs = c.rhs.to_string();
  r.trace = trace_lines(c.trace);
  r.note = c.note;
  if (!c.pass && r.reason.empty()) r.reason = c.note.empty() ? "sides differ" : c.note;
}

Record make(std::string id, std::string kind, std::string measure, std::string object) {
  Record r;
  r.id = std::move(id);
  r.kind = std::move(kind);
  r.measure = std::move(measure);
  r.object = std::move(object);
  return r;
}

std::string join(const std::vector<Integer>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i].str();
  return out;
}

// --- individual checks -------------------------------------------------------

Record additivity(const std::string& id, const MeasureOnCompacts& phi, const ToricObject& x, const ToricObject& u) {
  return timed(make(id, "additivity", phi.name(), x.describe()),
               [&](Record& r) { fill(r, csupport::additivity_check(phi, x, u)); });
}

Record independence(const std::string& id, const MeasureOnCompacts& phi, const csupport::CompactificationChoice& a,
                    const csupport::CompactificationChoice& b) {
  return timed(make(id, "independence", phi.name(), a.open.describe()),
               [&](Record& r) { fill(r, csupport::independence_check(phi, a, b)); });
}

Record blowup_descent(const std::string& id, const MeasureOnCompacts& phi, const toric::StarSubdivision& s) {
  return timed(make(id, "blowup_descent", phi.name(), s.x.describe()),
               [&](Record& r) { fill(r, csupport::blowup_descent_check(phi, s.e, s.y, s.c, s.x)); });
}

Record blowup_relation(const std::string& id, const toric::StarSubdivision& s) {
  return timed(make(id, "blowup_relation", "", s.x.describe()), [&](Record& r) {
    const auto rep = verify_square_relation(s.e.klass(), s.y.klass(), s.c.klass(), s.x.klass());
    r.status = rep.holds ? Status::pass : Status::fail;
    r.lhs = rep.lhs.to_string();
    r.rhs = rep.rhs.to_string();
    if (!rep.holds) r.reason = "[E] + [X] != [C] + [Y]";
  });
}

Record round_trip(const std::string& id, const std::string& text) {
  return timed(make(id, "round_trip", "", text), [&](Record& r) {
    static const auto rels = RelationSet::standard();
    static const auto table = CompactificationTable::defaults(rels);
    const auto e = parse_expr(text, rels);
    const auto k = normalize(e, rels);
    const auto g = g_map(e, rels, table);
    const auto fg = f_map(g, rels);
    const bool ok = fg == k && g_map(fg, rels, table) == g && g_map(k, rels, table) == g;
    r.status = ok ? Status::pass : Status::fail;
    r.lhs = fg.to_string();
    r.rhs = k.to_string();
    r.note = "g = " + g.to_string();
    if (!ok) r.reason = "f and g are not mutually inverse here";
  });
}

Record point_count(const std::string& id, const ToricObject& obj, long q) {
  return timed(make(id, "point_count", "e", obj.describe()), [&](Record& r) {
    const auto e = csupport::extend_measure(MeasureOnCompacts(MeasureSpec::parse("e")), obj).value;
    const auto lhs = e.at(q);
    const auto rhs = orbit_point_count(obj, q);
    r.status = lhs == rhs ? Status::pass : Status::fail;
    r.lhs = lhs.str();
    r.rhs = rhs.str();
    r.note = "q = " + std::to_string(q);
    if (lhs != rhs) r.reason = "E(q, q) differs from the orbit count";
  });
}

Record kunneth(const std::string& id, const MeasureOnCompacts& phi, const ToricObject& x, const ToricObject& y) {
  auto base = make(id, "kunneth", phi.name(), x.describe() + " x " + y.describe());
  if (!phi.multiplicative()) {
    base.status = Status::skipped;
    base.reason = "measure is not multiplicative";
    return base;
  }
  return timed(base, [&](Record& r) { fill(r, csupport::kunneth_check(phi, x, y)); });
}

Record mayer_vietoris(const std::string& id, const MeasureOnCompacts& phi, const corpus::CoverTriple& t) {
  return timed(make(id, "mayer_vietoris", phi.name(), t.x.describe()),
               [&](Record& r) { fill(r, csupport::mayer_vietoris_check(phi, t.x, t.u, t.v)); });
}

Record purity(const std::string& id, const ToricObject& obj) {
  return timed(make(id, "purity", "e", obj.describe()), [&](Record& r) {
    const auto e = csupport::extend_measure(MeasureOnCompacts(MeasureSpec::parse("e")), obj).value;
    const bool smooth = obj.is_smooth(), compact = obj.is_compact();
    std::optional<std::vector<Integer>> h;
    if (obj.is_whole() && smooth && compact) h = toric::h_vector(obj.fan());
    const auto w = weight_report(e, smooth, compact, h);
    r.lhs = e.to_string();
    r.rhs = h ? join(*h) : std::string("-");
    r.note = w.note;
    if (!w.pure) {
      r.status = Status::skipped;
      r.reason = "not smooth and compact";
    } else {
      r.status = *w.pure ? Status::pass : Status::fail;
      if (!*w.pure) r.reason = "weights are not pure or differ from the h-vector";
    }
  });
}

Record validate(const std::string& id, const site::DistinguishedSquare& sq, const site::SitePresentation* s) {
  return timed(make(id, "validate", "", sq.base()), [&](Record& r) {
    const auto v = site::validate_square(sq, s);
    r.status = v.ok() ? Status::pass : Status::fail;
    for (const auto& e : v.entries)
      r.trace.push_back(e.condition + ": " + site::to_string(e.status) + (e.detail.empty() ? "" : " (" + e.detail + ")"));
    r.lhs = site::to_string(sq.kind);
    r.rhs = v.jointly_surjective ? (*v.jointly_surjective ? "jointly surjective" : "not jointly surjective") : "surjectivity unknown";
    if (v.jointly_surjective == std::optional<bool>(false)) r.status = Status::fail;
    if (r.status == Status::fail) r.reason = "square conditions fail";
  });
}

Record c_complete(const std::string& id, const site::SitePresentation& s, const site::DistinguishedSquare& sq,
                  const site::SpanMorphism& f, int depth) {
  return timed(make(id, "c_complete", "", sq.base()), [&](Record& r) {
    const auto v = site::check_c_complete(s, sq, f, depth);
    r.status = v.found ? Status::pass : Status::fail;
    r.lhs = v.found ? "cover at depth " + std::to_string(v.depth) : "no cover";
    r.rhs = "depth <= " + std::to_string(depth);
    if (v.cover)
      for (const auto& leaf : v.cover->leaves()) r.trace.push_back(leaf.key());
    r.note = v.note;
    if (!v.found) r.reason = v.note;
  });
}

Record covers(const std::string& id, const site::SitePresentation& s, const std::string& object, int depth) {
  return timed(make(id, "covers", "", object), [&](Record& r) {
    std::set<std::string> previous;
    std::string counts;
    bool monotone = true, surjective = true;
    for (int d = 0; d <= depth; ++d) {
      std::set<std::string> keys;
      for (const auto& c : site::enumerate_simple_covers(s, object, d)) {
        keys.insert(c.key());
        if (d == depth && site::jointly_surjective(s, c) == std::optional<bool>(false)) surjective = false;
      }
      if (!std::includes(keys.begin(), keys.end(), previous.begin(), previous.end())) monotone = false;
      counts += (d ? "," : "") + std::to_string(keys.size());
      previous = std::move(keys);
    }
    r.status = monotone && surjective ? Status::pass : Status::fail;
    r.lhs = "covers by depth " + counts;
    r.rhs = monotone ? "monotone" : "not monotone";
    if (!surjective) r.reason = "a cover is not jointly surjective";
    if (!monotone) r.reason = "enumeration is not monotone in depth";
  });
}

Record dim_compatible(const std::string& id, const site::DistinguishedSquare& sq, const site::SitePresentation* s) {
  return timed(make(id, "dim_compatible", "", sq.base()), [&](Record& r) {
    const auto v = site::check_dim_compatible(sq, s);
    r.lhs = site::to_string(v.kind);
    r.rhs = "direct or refined";
    r.note = v.note;
    bool ok = v.kind != site::DimVerdict::Kind::fail;
    for (const auto& q : v.refinement) {
      const auto inner = site::check_dim_compatible(q, s);
      r.trace.push_back(q.id + ": " + site::to_string(inner.kind));
      if (inner.kind != site::DimVerdict::Kind::direct) ok = false;
    }
    r.status = ok ? Status::pass : Status::fail;
    if (!ok) r.reason = v.kind == site::DimVerdict::Kind::fail ? v.note : "a refinement square is not direct";
  });
}

std::vector<MeasureOnCompacts> measures_of(const std::vector<std::string>& names) {
  std::vector<MeasureOnCompacts> out;
  for (const auto& n : names) out.push_back(MeasureOnCompacts::parse(n));
  return out;
}

std::string num(std::size_t i) { return std::to_string(i); }

}  // namespace

Report run_corpus(const corpus::Corpus& c, const Options& options) {
  Report rep;
  rep.header["version"] = kReportVersion;
  rep.header["command"] = "check";
  rep.header["recipe"] = corpus::kRecipe;
  rep.header["seed"] = c.seed;
  rep.header["size"] = c.size;
  rep.header["measures"] = options.measures;
  rep.header["depth"] = options.depth;
  const auto measures = measures_of(options.measures);
  auto& out = rep.records;

  if (options.wants("additivity"))
    for (std::size_t i = 0; i < c.additivity.size(); ++i)
      for (const auto& phi : measures)
        out.push_back(additivity("additivity/" + num(i) + "/" + phi.name(), phi, c.additivity[i].x, c.additivity[i].u));
  if (options.wants("independence"))
    for (std::size_t i = 0; i < c.independence.size(); ++i)
      for (const auto& phi : measures)
        out.push_back(independence("independence/" + num(i) + "/" + phi.name(), phi, c.independence[i].a,
                                   c.independence[i].b));
  if (options.wants("blowup_relation"))
    for (std::size_t i = 0; i < c.blowups.size(); ++i)
      out.push_back(blowup_relation("blowup_relation/" + num(i), c.blowups[i]));
  if (options.wants("blowup_descent"))
    for (std::size_t i = 0; i < c.blowups.size(); ++i)
      for (const auto& phi : measures)
        out.push_back(blowup_descent("blowup_descent/" + num(i) + "/" + phi.name(), phi, c.blowups[i]));
  if (options.wants("round_trip"))
    for (std::size_t i = 0; i < c.expressions.size(); ++i)
      out.push_back(round_trip("round_trip/" + num(i), c.expressions[i]));
  if (options.wants("point_count")) {
    std::vector<ToricObject> objs = c.fans;
    objs.insert(objs.end(), c.partial_fans.begin(), c.partial_fans.end());
    for (const auto& o : objs)
      for (long q : {2, 3, 4, 5}) out.push_back(point_count("point_count/" + o.describe() + "/" + std::to_string(q), o, q));
  }
  if (options.wants("kunneth"))
    for (std::size_t i = 0; i < c.kunneth.size(); ++i)
      for (const auto& phi : measures)
        out.push_back(kunneth("kunneth/" + num(i) + "/" + phi.name(), phi, c.kunneth[i].x, c.kunneth[i].y));
  if (options.wants("mayer_vietoris"))
    for (std::size_t i = 0; i < c.mayer_vietoris.size(); ++i)
      for (const auto& phi : measures)
        out.push_back(mayer_vietoris("mayer_vietoris/" + num(i) + "/" + phi.name(), phi, c.mayer_vietoris[i]));
  if (options.wants("purity"))
    for (const auto& f : c.fans)
      if (f.fan().rank() <= 3) out.push_back(purity("purity/" + f.describe(), f));
  if (options.wants("validate"))
    for (const auto& sq : c.site.squares()) out.push_back(validate("validate/" + sq.id, sq, &c.site));
  if (options.wants("c_complete"))
    for (const auto& sq : c.site.squares())
      for (const auto& m : c.site.morphisms())
        if (m.target == sq.base())
          out.push_back(c_complete("c_complete/" + sq.id + "/" + m.name, c.site, sq, m, options.depth));
  if (options.wants("covers"))
    for (const auto& o : c.site.objects()) out.push_back(covers("covers/" + o.name, c.site, o.name, options.depth));
  if (options.wants("dim_compatible")) {
    for (const auto& sq : c.site.squares()) out.push_back(dim_compatible("dim_compatible/" + sq.id, sq, &c.site));
    for (std::size_t i = 0; i < c.blowups.size(); ++i) {
      const auto sq = site::blowup_square(c.blowups[i], "blowup" + num(i));
      out.push_back(dim_compatible("dim_compatible/blowup" + num(i), sq, nullptr));
    }
  }
  return rep;
}

// --- suites -------------------------------------------------------------------

namespace {

struct SuiteEnv {
  std::string base_dir;
  std::map<std::string, ToricObject> objects;
  std::optional<site::SitePresentation> site;

  std::string path(const std::string& p) const {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? p : (std::filesystem::path(base_dir) / fp).string();
  }

  io::json with_fan_files(io::json spec) const {
    if (spec.contains("fan") && spec.at("fan").is_string() && !toric::named_fan(spec.at("fan").get<std::string>())) {
      const auto file = spec.at("fan").get<std::string>();
      spec["fan"] = io::load_json(path(file));
      if (!spec.contains("label")) spec["label"] = std::filesystem::path(file).stem().string();
    }
    return spec;
  }

  ToricObject object(const std::string& name) const {
    if (auto it = objects.find(name); it != objects.end()) return it->second;
    if (site && site->has_object(name) && site->object(name).toric) return *site->object(name).toric;
    if (auto fan = toric::named_fan(name)) return ToricObject::whole(std::make_shared<const toric::Fan>(*fan), name);
    throw SchemaError("unknown object '" + name + "'");
  }

  toric::FanPtr fan(const io::json& spec) const {
    if (spec.is_string()) {
      const auto name = spec.get<std::string>();
      if (auto f = toric::named_fan(name)) return std::make_shared<const toric::Fan>(*f);
      if (objects.count(name)) return objects.at(name).fan_ptr();
      return std::make_shared<const toric::Fan>(io::fan_from_json(io::load_json(path(name))));
    }
    return std::make_shared<const toric::Fan>(io::fan_from_json(spec));
  }
};

std::string arg(const io::json& args, std::size_t i, const std::string& kind) {
  if (!args.is_array() || args.size() <= i || !args[i].is_string())
    throw SchemaError(kind + ": argument " + std::to_string(i) + " must be a name");
  return args[i].get<std::string>();
}

toric::StarSubdivision subdivision_of(const SuiteEnv& env, const io::json& args, const std::string& kind) {
  if (args.size() == 2 && args[1].is_array()) {
    const auto x = env.object(arg(args, 0, kind));
    IntVector v;
    for (const auto& a : args[1]) v.push_back(a.get<long long>());
    if (!x.is_whole()) throw SchemaError(kind + ": star subdivision needs a whole fan");
    auto s = toric::star_subdivide(x.fan_ptr(), v);
    s.x = s.x.with_label(x.label());
    return s;
  }
  const auto id = arg(args, 0, kind);
  if (!env.site) throw SchemaError(kind + ": no site to look up square '" + id + "'");
  const auto& sq = env.site->square(id);
  if (!sq.toric) throw SchemaError(kind + ": square '" + id + "' has no fan data");
  toric::StarSubdivision s;
  s.fan = sq.toric->y.fan_ptr();
  s.e = sq.toric->e;
  s.y = sq.toric->y;
  s.c = sq.toric->c;
  s.x = sq.toric->x;
  return s;
}

}  // namespace

Report run_suite(const io::json& suite, const Options& options, const std::string& base_dir) {
  SuiteEnv env;
  env.base_dir = base_dir;
  io::json checks = suite;
  if (suite.is_object()) {
    const io::json objects = suite.value("objects", io::json::object());
    for (const auto& [name, spec] : objects.items())
      env.objects.emplace(name, io::object_from_json(env.with_fan_files(spec)).with_label(name));
    if (suite.contains("site")) {
      const auto& s = suite.at("site");
      env.site = io::site_from_json(s.is_string() ? io::load_json(env.path(s.get<std::string>())) : s);
    }
    checks = suite.value("checks", io::json::array());
  }
  if (!checks.is_array()) throw SchemaError("suite: expected a list of checks");

  Report rep;
  rep.header["version"] = kReportVersion;
  rep.header["command"] = "check";
  rep.header["suite"] = suite.is_object() ? suite.value("name", std::string("suite")) : std::string("suite");
  rep.header["depth"] = options.depth;
  auto& out = rep.records;
  std::size_t index = 0;
  for (const auto& entry : checks) {
    const std::string kind = entry.value("kind", std::string());
    if (kind.empty()) throw SchemaError("suite entry " + std::to_string(index) + ": missing kind");
    const io::json args = entry.value("args", io::json::array());
    std::vector<std::string> names;
    if (entry.contains("measure")) names.push_back(entry.at("measure").get<std::string>());
    else names = options.measures;
    const auto measures = measures_of(names);
    const std::string prefix = entry.value("id", kind + "/" + std::to_string(index));
    const int depth = entry.value("depth", options.depth);
    ++index;
    auto id_for = [&](const MeasureOnCompacts& phi) {
      return measures.size() > 1 || !entry.contains("id") ? prefix + "/" + phi.name() : prefix;
    };

    if (kind == "additivity") {
      const auto x = env.object(arg(args, 0, kind)), u = env.object(arg(args, 1, kind));
      for (const auto& phi : measures) out.push_back(additivity(id_for(phi), phi, x, u));
    } else if (kind == "independence") {
      const auto u = env.object(arg(args, 0, kind));
      const csupport::CompactificationProvider provider;
      csupport::CompactificationChoice a, b;
      if (args.size() >= 3) {
        a = csupport::make_choice(u, env.fan(args[1]), args[1].is_string() ? args[1].get<std::string>() : "explicit");
        b = csupport::make_choice(u, env.fan(args[2]), args[2].is_string() ? args[2].get<std::string>() : "explicit");
      } else {
        a = provider.choose(u);
        auto alt = csupport::alternative_completion(u, a.compact.fan_ptr());
        if (!alt) throw SchemaError("independence: no alternative completion for " + u.describe());
        b = csupport::make_choice(u, *alt, "subdivided");
      }
      for (const auto& phi : measures) out.push_back(independence(id_for(phi), phi, a, b));
    } else if (kind == "blowup_descent") {
      const auto s = subdivision_of(env, args, kind);
      for (const auto& phi : measures) out.push_back(blowup_descent(id_for(phi), phi, s));
    } else if (kind == "blowup_relation") {
      out.push_back(blowup_relation(prefix, subdivision_of(env, args, kind)));
    } else if (kind == "mayer_vietoris") {
      const corpus::CoverTriple t{env.object(arg(args, 0, kind)), env.object(arg(args, 1, kind)),
                                  env.object(arg(args, 2, kind))};
      for (const auto& phi : measures) out.push_back(mayer_vietoris(id_for(phi), phi, t));
    } else if (kind == "kunneth") {
      const auto x = env.object(arg(args, 0, kind)), y = env.object(arg(args, 1, kind));
      for (const auto& phi : measures) out.push_back(kunneth(id_for(phi), phi, x, y));
    } else if (kind == "round_trip") {
      out.push_back(round_trip(prefix, arg(args, 0, kind)));
    } else if (kind == "point_count") {
      const auto obj = env.object(arg(args, 0, kind));
      for (long q : {2L, 3L, 4L, 5L}) out.push_back(point_count(prefix + "/" + std::to_string(q), obj, q));
    } else if (kind == "purity") {
      out.push_back(purity(prefix, env.object(arg(args, 0, kind))));
    } else if (kind == "validate" || kind == "dim_compatible" || kind == "c_complete" || kind == "covers") {
      if (!env.site) throw SchemaError(kind + ": the suite declares no site");
      const auto& s = *env.site;
      if (kind == "covers") {
        out.push_back(covers(prefix, s, arg(args, 0, kind), depth));
      } else {
        const auto& sq = s.square(arg(args, 0, kind));
        if (kind == "validate") out.push_back(validate(prefix, sq, &s));
        if (kind == "dim_compatible") out.push_back(dim_compatible(prefix, sq, &s));
        if (kind == "c_complete") out.push_back(c_complete(prefix, s, sq, s.morphism(arg(args, 1, kind)), depth));
      }
    } else {
      throw SchemaError("suite: unknown check kind '" + kind + "'");
    }
  }
  return rep;
}

}  // namespace motivic::run
