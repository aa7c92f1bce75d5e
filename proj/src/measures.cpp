#include "motivic/measures.hpp"

#include <algorithm>
#include <cctype>

#include "motivic/error.hpp"

namespace motivic {

// ---------------------------------------------------------------------------
// MeasureValue

MeasureValue MeasureValue::integer(Integer value) {
  MeasureValue v;
  v.coeffs_.push_back(std::move(value));
  v.trim();
  return v;
}

MeasureValue MeasureValue::polynomial(Kind kind, std::vector<Integer> coeffs) {
  if (kind == Kind::integer && coeffs.size() > 1)
    throw MeasureError("integer measure value given a polynomial");
  MeasureValue v;
  v.kind_ = kind;
  v.coeffs_ = std::move(coeffs);
  v.trim();
  return v;
}

MeasureValue MeasureValue::zero_of(Kind kind) { return polynomial(kind, {}); }

MeasureValue MeasureValue::one_of(Kind kind) { return polynomial(kind, {Integer(1)}); }

void MeasureValue::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Integer MeasureValue::coefficient(std::size_t degree) const {
  return degree < coeffs_.size() ? coeffs_[degree] : Integer(0);
}

Integer MeasureValue::at(const Integer& x) const {
  Integer total = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) total = total * x + *it;
  return total;
}

namespace {

void require_compatible(const MeasureValue& a, const MeasureValue& b) {
  if (a.kind() != b.kind())
    throw MeasureError("cannot combine measure values of kinds " + to_string(a.kind()) + " and " + to_string(b.kind()));
}

}  // namespace

MeasureValue& MeasureValue::operator+=(const MeasureValue& other) {
  require_compatible(*this, other);
  if (coeffs_.size() < other.coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  trim();
  return *this;
}

MeasureValue& MeasureValue::operator-=(const MeasureValue& other) { return *this += -other; }

MeasureValue operator*(const MeasureValue& a, const MeasureValue& b) {
  require_compatible(a, b);
  if (a.is_zero() || b.is_zero()) return MeasureValue::zero_of(a.kind());
  std::vector<Integer> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return MeasureValue::polynomial(a.kind(), std::move(out));
}

MeasureValue MeasureValue::operator-() const {
  MeasureValue v = *this;
  for (auto& c : v.coeffs_) c = -c;
  return v;
}

std::string MeasureValue::to_string() const {
  if (coeffs_.empty()) return "0";
  if (kind_ == Kind::integer) return coeffs_[0].str();
  auto power = [&](std::size_t k) -> std::string {
    const std::string var = kind_ == Kind::uv ? "uv" : (kind_ == Kind::t ? "t" : "q");
    if (k == 1) return var;
    const std::string base = kind_ == Kind::uv ? "(uv)" : var;
    return base + "^" + std::to_string(k);
  };
  std::string out;
  bool first = true;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const Integer& c = coeffs_[k];
    if (c == 0) continue;
    const bool negative = c < 0;
    const Integer mag = negative ? Integer(-c) : c;
    std::string piece;
    if (k == 0)
      piece = mag.str();
    else
      piece = (mag == 1 ? "" : mag.str()) + power(k);
    if (first)
      out += (negative ? "-" : "") + piece;
    else
      out += (negative ? " - " : " + ") + piece;
    first = false;
  }
  return out;
}

std::string to_string(MeasureValue::Kind kind) {
  switch (kind) {
    case MeasureValue::Kind::integer: return "integer";
    case MeasureValue::Kind::t: return "t";
    case MeasureValue::Kind::q: return "q";
    case MeasureValue::Kind::uv: return "uv";
  }
  return "integer";
}

// ---------------------------------------------------------------------------
// MeasureSpec

MeasureSpec MeasureSpec::parse(const std::string& text) {
  MeasureSpec spec;
  if (text == "euler") {
    spec.selector = Selector::euler;
  } else if (text == "e" || text == "e_poly") {
    spec.selector = Selector::e_poly;
  } else if (text == "poincare" || text == "virtual_poincare") {
    spec.selector = Selector::virtual_poincare;
  } else if (text.rfind("count:", 0) == 0) {
    spec.selector = Selector::point_count;
    const std::string arg = text.substr(6);
    if (arg != "q") {
      if (arg.empty() || arg.size() > 30 || !std::all_of(arg.begin(), arg.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw MeasureError("count measure needs a positive integer or 'q', got '" + arg + "'");
      spec.q = Integer(arg);
      if (*spec.q < 1) throw MeasureError("count measure needs q >= 1");
    }
  } else {
    throw MeasureError("unknown measure '" + text + "' (expected euler, e, poincare, count:<q>)");
  }
  return spec;
}

std::string MeasureSpec::name() const {
  switch (selector) {
    case Selector::euler: return "euler";
    case Selector::e_poly: return "e";
    case Selector::virtual_poincare: return "poincare";
    case Selector::point_count: return "count:" + (q ? q->str() : std::string("q"));
  }
  return "euler";
}

std::string MeasureSpec::family() const { return selector == Selector::point_count ? "count" : name(); }

MeasureValue::Kind MeasureSpec::value_kind() const {
  switch (selector) {
    case Selector::euler: return MeasureValue::Kind::integer;
    case Selector::e_poly: return MeasureValue::Kind::uv;
    case Selector::virtual_poincare: return MeasureValue::Kind::t;
    case Selector::point_count: return q ? MeasureValue::Kind::integer : MeasureValue::Kind::q;
  }
  return MeasureValue::Kind::integer;
}

MeasureValue MeasureSpec::lefschetz() const {
  switch (selector) {
    case Selector::euler: return MeasureValue::integer(1);
    case Selector::e_poly: return MeasureValue::polynomial(MeasureValue::Kind::uv, {0, 1});
    case Selector::virtual_poincare: return MeasureValue::polynomial(MeasureValue::Kind::t, {0, 0, 1});
    case Selector::point_count:
      return q ? MeasureValue::integer(*q) : MeasureValue::polynomial(MeasureValue::Kind::q, {0, 1});
  }
  return MeasureValue::integer(1);
}

bool MeasureSpec::formal() const { return selector == Selector::point_count && q && !is_prime_power(*q); }

bool is_prime_power(const Integer& q) {
  if (q < 2) return false;
  Integer n = q;
  for (Integer p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    return n == 1;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Registry

void MeasureRegistry::set(const std::string& generator, const std::string& family, std::vector<Integer> value) {
  values_[{generator, family}] = std::move(value);
}

std::optional<MeasureValue> MeasureRegistry::lookup(const std::string& generator, const MeasureSpec& spec) const {
  auto it = values_.find({generator, spec.family()});
  if (it == values_.end()) return std::nullopt;
  const auto kind = spec.value_kind();
  if (spec.selector == MeasureSpec::Selector::point_count && spec.q) {
    return MeasureValue::integer(MeasureValue::polynomial(MeasureValue::Kind::q, it->second).at(*spec.q));
  }
  if (kind == MeasureValue::Kind::integer && it->second.size() > 1)
    throw MeasureError("registered " + spec.family() + " value of " + generator + " must be a single integer");
  return MeasureValue::polynomial(kind, it->second);
}

// ---------------------------------------------------------------------------
// Substitution and weights

MeasureValue apply_measure(const MeasureSpec& spec, const KClass& cls, const MeasureRegistry& registry) {
  const auto kind = spec.value_kind();
  const MeasureValue l = spec.lefschetz();
  std::vector<MeasureValue> powers{MeasureValue::one_of(kind)};
  MeasureValue total = MeasureValue::zero_of(kind);
  for (const auto& [m, c] : cls.terms()) {
    while (powers.size() <= static_cast<std::size_t>(m.lefschetz)) powers.push_back(powers.back() * l);
    MeasureValue term = MeasureValue::polynomial(kind, {c}) * powers[static_cast<std::size_t>(m.lefschetz)];
    for (const auto& g : m.generators) {
      auto v = registry.lookup(g, spec);
      if (!v) throw MeasureError("no " + spec.family() + " value registered for residual generator " + g);
      term = term * *v;
    }
    total += term;
  }
  return total;
}

WeightReport weight_report(const MeasureValue& e_value, bool smooth, bool compact,
                           const std::optional<std::vector<Integer>>& h_vector) {
  if (e_value.kind() != MeasureValue::Kind::uv)
    throw MeasureError("weight report needs an E-polynomial (balanced uv value), got " + to_string(e_value.kind()));
  WeightReport report;
  const auto& c = e_value.coefficients();
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] != 0) report.weights.emplace_back(static_cast<int>(2 * k), c[k]);
  if (smooth && compact) {
    bool pure = std::all_of(c.begin(), c.end(), [](const Integer& x) { return x >= 0; });
    if (h_vector) {
      std::vector<Integer> h = *h_vector;
      while (!h.empty() && h.back() == 0) h.pop_back();
      if (h != c) {
        pure = false;
        report.note = "coefficients differ from the h-vector";
      }
    }
    report.pure = pure;
  } else {
    report.mixed = report.weights.size() > 1;
    report.note = compact ? "singular: no purity verdict" : "non-compact: no purity verdict";
  }
  return report;
}

}  // namespace motivic
