// Python bindings. Structured results cross the boundary as JSON text and are
// decoded in motivic/__init__.py.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "motivic/corpus.hpp"
#include "motivic/error.hpp"
#include "motivic/io.hpp"
#include "motivic/runner.hpp"

namespace py = pybind11;
using namespace motivic;

namespace {

RelationSet relations_of(const std::optional<std::string>& relations) {
  return relations ? io::relations_from_json(io::json::parse(*relations)) : RelationSet::standard();
}

std::string normalize_text(const std::string& expr, const std::optional<std::string>& relations) {
  const auto rels = relations_of(relations);
  return normalize(parse_expr(expr, rels), rels).to_string();
}

std::string evaluate(const std::string& expr, const std::vector<std::string>& measures,
                     const std::optional<std::string>& relations) {
  const auto rels = relations_of(relations);
  const auto cls = normalize(parse_expr(expr, rels), rels);
  io::json out;
  out["class"] = cls.to_string();
  io::json values = io::json::object();
  for (const auto& m : measures) {
    const auto spec = MeasureSpec::parse(m);
    values[spec.name()] = io::value_to_json(apply_measure(spec, cls, {}));
  }
  out["measures"] = std::move(values);
  return out.dump();
}

std::string fan_info(const std::string& fan_spec) {
  const auto doc = io::json::parse(fan_spec, nullptr, false);
  const auto fan = io::fan_from_json(doc.is_discarded() ? io::json(fan_spec) : doc);
  const auto p = fan.properties();
  io::json out;
  out["rank"] = fan.rank();
  out["rays"] = fan.rays().size();
  out["complete"] = p.complete;
  out["smooth"] = p.smooth;
  out["f_vector"] = fan.f_vector();
  out["class"] = toric::class_of(fan).to_string();
  return out.dump();
}

std::string check_corpus(std::uint64_t seed, std::size_t size, const std::vector<std::string>& measures, int depth,
                         const std::vector<std::string>& kinds) {
  run::Options opt;
  opt.measures = measures;
  opt.depth = depth;
  opt.kinds = kinds;
  py::gil_scoped_release release;
  return run::run_corpus(corpus::generate(seed, size), opt).to_json().dump();
}

std::string check_suite(const std::string& suite, const std::vector<std::string>& measures, int depth,
                        const std::string& base_dir) {
  run::Options opt;
  opt.measures = measures;
  opt.depth = depth;
  return run::run_suite(io::json::parse(suite), opt, base_dir).to_json().dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Motivic measures on toric varieties";
  py::register_exception<Error>(m, "MotivicError", PyExc_ValueError);

  m.def("normalize", &normalize_text, py::arg("expr"), py::arg("relations") = std::nullopt,
        "Canonical class of an expression; `relations` is a relation file as JSON text.");
  m.def("_evaluate", &evaluate, py::arg("expr"), py::arg("measures"), py::arg("relations") = std::nullopt);
  m.def("_fan_info", &fan_info, py::arg("fan"));
  m.def("_check_corpus", &check_corpus, py::arg("seed"), py::arg("size"), py::arg("measures"), py::arg("depth"),
        py::arg("kinds"));
  m.def("_check_suite", &check_suite, py::arg("suite"), py::arg("measures"), py::arg("depth"), py::arg("base_dir"));
  m.attr("corpus_recipe") = corpus::kRecipe;
  m.attr("report_version") = run::kReportVersion;
}
