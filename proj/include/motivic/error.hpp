#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace motivic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in an expression; `position` is a 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A name that does not resolve to a builtin or declared generator, or a
/// square-derived term that matches no relation.
class ResolveError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent relation set.
class RelationError : public Error {
 public:
  using Error::Error;
};

/// The rewrite step budget was exhausted.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Invalid lattice or fan data, or a geometric precondition that does not hold.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class CompactificationError : public Error {
 public:
  using Error::Error;
};

class MeasureError : public Error {
 public:
  using Error::Error;
};

/// A span or square that does not fit the site: backend mismatch, missing
/// declared pullback, unknown object.
class SiteError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or JSON document.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace motivic
