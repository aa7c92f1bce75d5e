#pragma once

// Motivic measures: ring maps out of K0(Var) with exact integer values.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "motivic/integer.hpp"
#include "motivic/kring.hpp"

namespace motivic {

/// An exact measure value: an integer, or an integer polynomial in t, q or uv.
class MeasureValue {
 public:
  enum class Kind { integer, t, q, uv };

  MeasureValue() = default;
  static MeasureValue integer(Integer value);
  /// Dense coefficients, lowest degree first.
  static MeasureValue polynomial(Kind kind, std::vector<Integer> coeffs);
  static MeasureValue zero_of(Kind kind);
  static MeasureValue one_of(Kind kind);

  Kind kind() const { return kind_; }
  /// Dense coefficients without trailing zeros (integer values have at most one).
  const std::vector<Integer>& coefficients() const { return coeffs_; }
  Integer coefficient(std::size_t degree) const;
  bool is_zero() const { return coeffs_.empty(); }

  /// Evaluates the polynomial at an integer (integer values are returned as is).
  Integer at(const Integer& x) const;

  MeasureValue& operator+=(const MeasureValue& other);
  MeasureValue& operator-=(const MeasureValue& other);
  friend MeasureValue operator+(MeasureValue a, const MeasureValue& b) { return a += b; }
  friend MeasureValue operator-(MeasureValue a, const MeasureValue& b) { return a -= b; }
  friend MeasureValue operator*(const MeasureValue& a, const MeasureValue& b);
  MeasureValue operator-() const;
  bool operator==(const MeasureValue&) const = default;

  /// e.g. "7", "1 + t^2", "1 + 2uv + (uv)^2", "uv - 1" is rendered "-1 + uv".
  std::string to_string() const;

 private:
  void trim();
  Kind kind_ = Kind::integer;
  std::vector<Integer> coeffs_;
};

std::string to_string(MeasureValue::Kind kind);

/// Which measure: L |-> 1 (euler), uv (e), t^2 (poincare), q (count).
struct MeasureSpec {
  enum class Selector { euler, e_poly, virtual_poincare, point_count };

  Selector selector = Selector::euler;
  /// Evaluation point for point_count; nullopt keeps q formal.
  std::optional<Integer> q;

  /// Parses "euler", "e", "poincare", "count:<q>" or "count:q".
  static MeasureSpec parse(const std::string& text);
  /// The canonical selector string accepted by parse.
  std::string name() const;
  /// The registry key shared by every q of point_count.
  std::string family() const;
  MeasureValue::Kind value_kind() const;
  /// Image of L.
  MeasureValue lefschetz() const;
  /// q given but not a prime power: a formal evaluation only.
  bool formal() const;
};

bool is_prime_power(const Integer& q);

/// User-registered values of residual generators, per measure family.
class MeasureRegistry {
 public:
  /// `value` is a coefficient list in the measure's variable.
  void set(const std::string& generator, const std::string& family, std::vector<Integer> value);
  std::optional<MeasureValue> lookup(const std::string& generator, const MeasureSpec& spec) const;
  bool empty() const { return values_.empty(); }

 private:
  std::map<std::pair<std::string, std::string>, std::vector<Integer>> values_;
};

/// Ring substitution; throws MeasureError on an unregistered residual generator.
MeasureValue apply_measure(const MeasureSpec& spec, const KClass& cls, const MeasureRegistry& registry = {});

/// Weight-graded reading of an E-polynomial.
struct WeightReport {
  std::vector<std::pair<int, Integer>> weights;  // (2k, coefficient of (uv)^k), nonzero only
  std::optional<bool> pure;                      // verdict only for smooth compact objects
  bool mixed = false;                            // several weights and no purity verdict
  std::string note;
};

/// `h_vector`, when given, must match the coefficients for purity.
WeightReport weight_report(const MeasureValue& e_value, bool smooth, bool compact,
                           const std::optional<std::vector<Integer>>& h_vector = std::nullopt);

}  // namespace motivic
