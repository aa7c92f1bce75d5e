// motivic: evaluate classes and measures, inspect fans, run check suites.

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "motivic/corpus.hpp"
#include "motivic/error.hpp"
#include "motivic/io.hpp"
#include "motivic/runner.hpp"

namespace {

using namespace motivic;
using io::json;

struct Common {
  std::vector<std::string> measures;
  int depth = 3;
  std::string format = "text";
  std::string out;
  std::string relations;
  std::string registry;
  bool timing = false;
};

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) std::cout << text;
  else io::write_text(c.out, text);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_eval(const Common& c, const std::string& input) {
  const RelationSet rels = c.relations.empty() ? RelationSet::standard() : io::relations_from_json(io::load_json(c.relations));
  const MeasureRegistry registry = c.registry.empty() ? MeasureRegistry{} : io::registry_from_json(io::load_json(c.registry));
  const std::vector<std::string> names = c.measures.empty() ? std::vector<std::string>{"euler", "e"} : c.measures;

  KClass cls;
  std::string source = "expression";
  try {
    cls = normalize(parse_expr(input, rels), rels);
  } catch (const ParseError&) {
    // Not an expression; a fan name or file describes the whole toric variety.
    const std::filesystem::path p(input);
    if (!toric::named_fan(input) && !std::filesystem::exists(p)) throw;
    cls = toric::class_of(io::load_fan(input));
    source = "fan";
  }

  json j;
  j["command"] = "eval";
  j["input"] = input;
  j["source"] = source;
  j["class"] = cls.to_string();
  json values = json::object();
  std::optional<MeasureValue> e_value;
  for (const auto& n : names) {
    const auto spec = MeasureSpec::parse(n);
    const auto v = apply_measure(spec, cls, registry);
    values[spec.name()] = v.to_string();
    if (spec.selector == MeasureSpec::Selector::e_poly) e_value = v;
  }
  j["measures"] = values;
  if (e_value) {
    const auto w = weight_report(*e_value, false, false);
    json weights = json::array();
    for (const auto& [weight, coeff] : w.weights) weights.push_back({{"weight", weight}, {"coefficient", coeff.str()}});
    j["weights"] = weights;
  }

  if (c.format == "json") {
    emit(c, dump(j));
    return 0;
  }
  std::ostringstream out;
  out << "class: " << cls.to_string() << "\n";
  for (const auto& [k, v] : values.items()) out << k << ": " << v.get<std::string>() << "\n";
  if (e_value) {
    out << "weight  coefficient\n";
    for (const auto& w : j["weights"])
      out << "  " << w["weight"].get<int>() << "     " << w["coefficient"].get<std::string>() << "\n";
  }
  emit(c, out.str());
  return 0;
}

int cmd_fan(const Common& c, const std::string& input, bool props, bool klass, bool complete) {
  const auto fan = io::load_fan(input);
  if (!props && !klass && !complete) props = klass = true;
  json j;
  j["command"] = "fan";
  j["input"] = input;
  std::ostringstream out;
  if (props) {
    const auto p = fan.properties();
    json f = json::array();
    for (auto n : fan.f_vector()) f.push_back(n);
    j["rank"] = fan.rank();
    j["rays"] = fan.rays().size();
    j["complete"] = p.complete;
    j["smooth"] = p.smooth;
    j["f_vector"] = f;
    out << "rank: " << fan.rank() << "\nrays: " << fan.rays().size() << "\ncomplete: " << (p.complete ? "yes" : "no")
        << "\nsmooth: " << (p.smooth ? "yes" : "no") << "\nf-vector: " << f.dump() << "\n";
  }
  if (klass) {
    const auto cls = toric::class_of(fan);
    j["class"] = cls.to_string();
    out << "class: " << cls.to_string() << "\n";
  }
  if (complete) {
    if (fan.rank() > 2) throw GeometryError("completion is implemented for rank <= 2");
    const auto full = toric::complete_surface(fan);
    j["completion"] = io::fan_to_json(full);
    out << "completion: " << io::fan_to_json(full).dump() << "\n";
  }
  emit(c, c.format == "json" ? dump(j) : out.str());
  return 0;
}

int cmd_check(const Common& c, const std::string& suite, std::optional<std::uint64_t> seed, std::size_t size,
              const std::vector<std::string>& kinds) {
  run::Options opt;
  if (!c.measures.empty()) opt.measures = c.measures;
  opt.depth = c.depth;
  opt.kinds = kinds;
  for (const auto& m : opt.measures) MeasureSpec::parse(m);
  for (const auto& k : kinds)
    if (std::find(run::corpus_kinds().begin(), run::corpus_kinds().end(), k) == run::corpus_kinds().end())
      throw SchemaError("unknown check kind '" + k + "'");

  run::Report rep;
  if (!suite.empty()) {
    const auto base = std::filesystem::path(suite).parent_path().string();
    rep = run::run_suite(io::load_json(suite), opt, base.empty() ? "." : base);
  } else {
    if (!seed) throw SchemaError("check needs --suite or --corpus-seed");
    rep = run::run_corpus(corpus::generate(*seed, size), opt);
  }
  emit(c, c.format == "json" ? dump(rep.to_json(c.timing)) : rep.to_text(c.timing));
  return rep.ok() ? 0 : 1;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--measure", c.measures, "euler | e | poincare | count:<q> | perturbed:<base> (repeatable)");
  app->add_option("--depth", c.depth, "Cover depth bound")->check(CLI::Range(0, 16));
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app->add_option("--out", c.out, "Write the report to a file");
  app->add_option("--relations", c.relations, "Relation set (JSON)");
  app->add_option("--registry", c.registry, "Measure values of residual generators (JSON)");
  app->add_flag("--timing", c.timing, "Include per-check timings");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Motivic measures on toric varieties and span sites"};
  app.require_subcommand(1);
  Common common;

  auto* eval = app.add_subcommand("eval", "Normalize an expression and evaluate measures");
  std::string expr;
  eval->add_option("expr", expr, "Expression, builtin fan name or fan file")->required();
  add_common(eval, common);

  auto* check = app.add_subcommand("check", "Run a check suite or a seeded corpus");
  std::string suite;
  std::optional<std::uint64_t> seed;
  std::size_t size = 50;
  std::vector<std::string> kinds;
  auto* suite_opt = check->add_option("--suite", suite, "Suite file (JSON)")->check(CLI::ExistingFile);
  check->add_option("--corpus-seed", seed, "Corpus seed")->excludes(suite_opt);
  check->add_option("--corpus-size", size, "Corpus size")->check(CLI::Range(1, 100000));
  check->add_option("--kind", kinds, "Restrict to these check kinds (repeatable)");
  add_common(check, common);

  auto* fan = app.add_subcommand("fan", "Inspect a fan");
  std::string fan_input;
  bool props = false, klass = false, complete = false;
  fan->add_option("fan", fan_input, "Fan file or builtin name")->required();
  fan->add_flag("--props", props, "Rank, completeness, smoothness, f-vector");
  fan->add_flag("--class", klass, "Class in K0(Var)");
  fan->add_flag("--complete", complete, "Angular completion (rank <= 2)");
  add_common(fan, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (eval->parsed()) return cmd_eval(common, expr);
    if (fan->parsed()) return cmd_fan(common, fan_input, props, klass, complete);
    return cmd_check(common, suite, seed, size, kinds);
  } catch (const motivic::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
