#pragma once

// Check records, reports, and the drivers behind `motivic check`.

#include <optional>
#include <string>
#include <vector>

#include "motivic/corpus.hpp"
#include "motivic/io.hpp"

namespace motivic::run {

inline constexpr const char* kReportVersion = "motivic-report/1";

enum class Status { pass, fail, skipped };
std::string to_string(Status s);

struct Record {
  std::string id;
  std::string kind;
  std::string measure;  // empty for measure-free checks
  std::string object;   // primary object, for the text ordering
  Status status = Status::pass;
  std::string reason;  // skipped and failed records
  std::string lhs, rhs;
  std::vector<std::string> trace;
  std::string note;
  double millis = 0;
};

struct Summary {
  std::size_t total = 0, pass = 0, fail = 0, skipped = 0;
};

struct Report {
  /// Key/value pairs identifying the run (command, recipe, seed, ...).
  io::json header = io::json::object();
  std::vector<Record> records;

  Summary summary() const;
  bool ok() const { return summary().fail == 0; }
  /// Records in run order; timings only when asked, since they break
  /// byte-for-byte reproducibility.
  io::json to_json(bool timing = false) const;
  /// One line per record, ordered by object then check kind.
  std::string to_text(bool timing = false) const;
};

struct Options {
  std::vector<std::string> measures{"euler", "e"};
  int depth = 3;
  /// Check kinds to run; empty runs all.
  std::vector<std::string> kinds;
  bool wants(const std::string& kind) const;
};

/// Every check kind the corpus driver knows, in run order.
const std::vector<std::string>& corpus_kinds();

Report run_corpus(const corpus::Corpus& corpus, const Options& options);

/// Suite: a list of {kind, measure, args}, or {objects, site, checks}; object
/// names also resolve to builtin fans. Relative paths resolve against `base_dir`.
Report run_suite(const io::json& suite, const Options& options, const std::string& base_dir = ".");

/// Independent point count of a toric object: the sum over its orbits of (q-1)^(rank - dim).
Integer orbit_point_count(const toric::ToricObject& obj, const Integer& q);

}  // namespace motivic::run
