#include "motivic/kring.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "motivic/error.hpp"

namespace motivic {

// ---------------------------------------------------------------------------
// Builtins

namespace {

std::optional<int> parse_index(std::string_view digits) {
  if (digits.empty() || digits.size() > 5) return std::nullopt;
  int n = 0;
  for (char ch : digits) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return std::nullopt;
    n = n * 10 + (ch - '0');
  }
  return n;
}

KClass builtin_class(std::string_view name) {
  if (name == "pt") return KClass::constant(1);
  if (name == "empty") return {};
  if (name == "Gm") return KClass::lefschetz(1) - KClass::constant(1);
  const int n = *parse_index(name.substr(1));
  if (name[0] == 'A') return KClass::lefschetz(n);
  std::vector<Integer> ones(static_cast<std::size_t>(n) + 1, Integer(1));
  return KClass::polynomial(ones);
}

bool valid_name(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) return false;
  return std::all_of(name.begin(), name.end(),
                     [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)); });
}

}  // namespace

std::optional<GeneratorInfo> builtin_generator(std::string_view name) {
  GeneratorInfo info;
  info.name = std::string(name);
  info.builtin = true;
  if (name == "pt") {
    info.dim = 0;
    info.compact = true;
    return info;
  }
  if (name == "empty") {
    info.dim = -1;
    info.compact = true;
    return info;
  }
  if (name == "Gm") {
    info.dim = 1;
    info.compact = false;
    return info;
  }
  if (name.size() >= 2 && (name[0] == 'A' || name[0] == 'P')) {
    if (auto n = parse_index(name.substr(1))) {
      info.dim = *n;
      info.compact = name[0] == 'P' || *n == 0;
      return info;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// KClass

KClass KClass::constant(Integer c) {
  KClass k;
  k.add_term(Monomial{}, c);
  return k;
}

KClass KClass::lefschetz(int power) {
  KClass k;
  k.add_term(Monomial{{}, power}, 1);
  return k;
}

KClass KClass::generator(const std::string& name) {
  KClass k;
  k.add_term(Monomial{{name}, 0}, 1);
  return k;
}

KClass KClass::polynomial(const std::vector<Integer>& coeffs) {
  KClass k;
  for (std::size_t i = 0; i < coeffs.size(); ++i) k.add_term(Monomial{{}, static_cast<int>(i)}, coeffs[i]);
  return k;
}

void KClass::add_term(const Monomial& m, const Integer& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

bool KClass::is_polynomial() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.is_pure(); });
}

std::vector<Integer> KClass::lefschetz_coefficients() const {
  std::vector<Integer> out;
  for (const auto& [m, c] : terms_) {
    if (!m.is_pure()) continue;
    const auto k = static_cast<std::size_t>(m.lefschetz);
    if (out.size() <= k) out.resize(k + 1);
    out[k] = c;
  }
  return out;
}

std::vector<std::pair<Monomial, Integer>> KClass::residual() const {
  std::vector<std::pair<Monomial, Integer>> out;
  for (const auto& t : terms_)
    if (!t.first.is_pure()) out.push_back(t);
  return out;
}

std::vector<std::string> KClass::residual_generators() const {
  std::vector<std::string> out;
  for (const auto& [m, c] : terms_) out.insert(out.end(), m.generators.begin(), m.generators.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Integer KClass::evaluate(const Integer& lefschetz_value) const {
  if (!is_polynomial()) throw MeasureError("class has residual generators: " + to_string());
  Integer total = 0;
  for (const auto& [m, c] : terms_) total += c * boost::multiprecision::pow(lefschetz_value, static_cast<unsigned>(m.lefschetz));
  return total;
}

KClass& KClass::operator+=(const KClass& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

KClass& KClass::operator-=(const KClass& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

KClass operator*(const KClass& a, const KClass& b) {
  KClass out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m;
      m.lefschetz = ma.lefschetz + mb.lefschetz;
      m.generators.reserve(ma.generators.size() + mb.generators.size());
      std::merge(ma.generators.begin(), ma.generators.end(), mb.generators.begin(), mb.generators.end(),
                 std::back_inserter(m.generators));
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

KClass& KClass::operator*=(const KClass& other) { return *this = *this * other; }

KClass KClass::operator-() const {
  KClass out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

namespace {

std::string monomial_text(const Monomial& m) {
  std::string out;
  if (m.lefschetz == 1)
    out = "L";
  else if (m.lefschetz > 1)
    out = "L^" + std::to_string(m.lefschetz);
  for (const auto& g : m.generators) {
    if (!out.empty()) out += "*";
    out += g;
  }
  return out;
}

template <typename Terms, typename Text>
std::string signed_sum(const Terms& ordered, Text text) {
  if (ordered.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : ordered) {
    const bool negative = c < 0;
    const Integer mag = negative ? Integer(-c) : c;
    const std::string body = text(m);
    std::string piece;
    if (body.empty())
      piece = mag.str();
    else if (mag == 1)
      piece = body;
    else
      piece = mag.str() + "*" + body;
    if (first)
      out += (negative ? "-" : "") + piece;
    else
      out += (negative ? " - " : " + ") + piece;
    first = false;
  }
  return out;
}

}  // namespace

std::string KClass::to_string() const {
  // Pure part by descending degree, then residual terms in canonical order.
  std::vector<std::pair<Monomial, Integer>> ordered;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
    if (it->first.is_pure()) ordered.push_back(*it);
  for (const auto& t : terms_)
    if (!t.first.is_pure()) ordered.push_back(t);
  return signed_sum(ordered, monomial_text);
}

// ---------------------------------------------------------------------------
// Relations

std::string to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::open: return "open";
    case RelationKind::abstract_blowup: return "abstract_blowup";
    case RelationKind::smooth_blowup: return "smooth_blowup";
  }
  return "open";
}

RelationKind relation_kind_from_string(std::string_view s) {
  if (s == "open") return RelationKind::open;
  if (s == "abstract_blowup") return RelationKind::abstract_blowup;
  if (s == "smooth_blowup") return RelationKind::smooth_blowup;
  throw RelationError("unknown relation kind '" + std::string(s) + "'");
}

const std::string& Relation::slot(const std::string& key) const {
  auto it = slots.find(key);
  if (it == slots.end()) throw RelationError("relation of kind " + to_string(kind) + " lacks slot " + key);
  return it->second;
}

namespace {

const std::vector<std::string>& slot_keys(RelationKind kind) {
  static const std::vector<std::string> open{"X", "U", "complement"};
  static const std::vector<std::string> blowup{"E", "Y", "C", "X"};
  return kind == RelationKind::open ? open : blowup;
}

}  // namespace

void RelationSet::declare(const std::string& name, int dim, bool compact) {
  if (auto b = builtin_generator(name)) {
    if (b->dim != dim || b->compact != compact)
      throw RelationError("builtin " + name + " redeclared with dim " + std::to_string(dim));
    return;
  }
  if (!valid_name(name) || name == "L") throw RelationError("invalid generator name '" + name + "'");
  if (dim < -1) throw RelationError("generator " + name + " has dimension below -1");
  for (const auto& g : declared_) {
    if (g.name != name) continue;
    if (g.dim != dim || g.compact != compact)
      throw RelationError("generator " + name + " redeclared with different data");
    return;
  }
  GeneratorInfo info;
  info.name = name;
  info.dim = dim;
  info.compact = compact;
  info.index = declared_.size() + 1;
  declared_.push_back(info);
}

std::optional<GeneratorInfo> RelationSet::lookup(std::string_view name) const {
  if (auto b = builtin_generator(name)) return b;
  for (const auto& g : declared_)
    if (g.name == name) return g;
  return std::nullopt;
}

void RelationSet::add(Relation relation) {
  const auto& keys = slot_keys(relation.kind);
  if (relation.slots.size() != keys.size())
    throw RelationError("relation of kind " + to_string(relation.kind) + " needs exactly " +
                        std::to_string(keys.size()) + " slots");
  std::map<std::string, int> dims;
  for (const auto& key : keys) {
    const auto& name = relation.slot(key);
    auto info = lookup(name);
    if (!info) throw RelationError("relation slot " + key + " names undeclared generator '" + name + "'");
    dims[key] = info->dim;
  }
  if (relation.kind == RelationKind::open) {
    if (dims["U"] > dims["X"] || dims["complement"] > dims["X"])
      throw RelationError("open relation on " + relation.slot("X") + " violates dimension bounds");
  } else {
    if (dims["C"] > dims["X"]) throw RelationError("blowup relation: dim(C) exceeds dim(X)");
    if (dims["E"] > dims["Y"]) throw RelationError("blowup relation: dim(E) exceeds dim(Y)");
  }
  relations_.push_back(std::move(relation));
}

std::optional<std::size_t> RelationSet::find_blowup(const std::string& base, const std::string& center) const {
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    const auto& r = relations_[i];
    if (r.kind == RelationKind::open) continue;
    if (r.slot("X") == base && r.slot("C") == center) return i;
  }
  return std::nullopt;
}

RelationSet RelationSet::standard() {
  RelationSet rels;
  rels.declare("F1", 2, true);
  rels.add(Relation{RelationKind::smooth_blowup, {{"E", "P1"}, {"Y", "F1"}, {"C", "pt"}, {"X", "P2"}}});
  return rels;
}

// ---------------------------------------------------------------------------
// Expressions

struct VarietyExpr::Node {
  Kind kind = Kind::integer;
  std::string name;    // generator / base
  std::string center;  // blowup / exceptional
  Integer value;
  std::size_t relation = 0;
  std::vector<VarietyExpr> children;
  std::vector<bool> negated;
  std::size_t size = 1;
};

VarietyExpr VarietyExpr::generator(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::generator;
  n->name = std::move(name);
  return VarietyExpr(std::move(n));
}

VarietyExpr VarietyExpr::integer(Integer value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::integer;
  n->value = std::move(value);
  return VarietyExpr(std::move(n));
}

VarietyExpr VarietyExpr::lefschetz() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::lefschetz;
  return VarietyExpr(std::move(n));
}

VarietyExpr VarietyExpr::sum(std::vector<VarietyExpr> terms, std::vector<bool> negated) {
  if (terms.size() != negated.size()) throw Error("sum: sign vector does not match term count");
  auto n = std::make_shared<Node>();
  n->kind = Kind::sum;
  for (const auto& t : terms) n->size += t.node_count();
  n->children = std::move(terms);
  n->negated = std::move(negated);
  return VarietyExpr(std::move(n));
}

VarietyExpr VarietyExpr::product(std::vector<VarietyExpr> factors) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::product;
  for (const auto& t : factors) n->size += t.node_count();
  n->children = std::move(factors);
  return VarietyExpr(std::move(n));
}

VarietyExpr VarietyExpr::blowup(std::string base, std::string center, std::size_t relation) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::blowup;
  n->name = std::move(base);
  n->center = std::move(center);
  n->relation = relation;
  return VarietyExpr(std::move(n));
}

VarietyExpr VarietyExpr::exceptional(std::string base, std::string center, std::size_t relation) {
  auto e = blowup(std::move(base), std::move(center), relation);
  const_cast<Node&>(*e.node_).kind = Kind::exceptional;
  return e;
}

VarietyExpr::Kind VarietyExpr::kind() const { return node_->kind; }
const std::string& VarietyExpr::name() const { return node_->name; }
const Integer& VarietyExpr::value() const { return node_->value; }
const std::vector<VarietyExpr>& VarietyExpr::children() const { return node_->children; }
const std::vector<bool>& VarietyExpr::negated() const { return node_->negated; }
const std::string& VarietyExpr::base() const { return node_->name; }
const std::string& VarietyExpr::center() const { return node_->center; }
std::size_t VarietyExpr::relation() const { return node_->relation; }
std::size_t VarietyExpr::node_count() const { return node_->size; }

std::string VarietyExpr::structure() const {
  switch (kind()) {
    case Kind::generator: return "Gen(" + name() + ")";
    case Kind::integer: return "Int(" + value().str() + ")";
    case Kind::lefschetz: return "L";
    case Kind::blowup: return "Bl(" + base() + ";" + center() + ")";
    case Kind::exceptional: return "E(" + base() + ";" + center() + ")";
    case Kind::sum:
    case Kind::product: {
      std::string out = kind() == Kind::sum ? "Sum(" : "Prod(";
      for (std::size_t i = 0; i < children().size(); ++i) {
        if (i) out += ", ";
        if (kind() == Kind::sum && negated()[i]) out += "-";
        out += children()[i].structure();
      }
      return out + ")";
    }
  }
  return {};
}

std::string VarietyExpr::to_string() const {
  switch (kind()) {
    case Kind::generator: return name();
    case Kind::integer: return value().str();
    case Kind::lefschetz: return "L";
    case Kind::blowup: return "Bl(" + base() + ";" + center() + ")";
    case Kind::exceptional: return "E(" + base() + ";" + center() + ")";
    case Kind::sum: {
      if (children().empty()) return "0";
      std::string out;
      for (std::size_t i = 0; i < children().size(); ++i) {
        if (i)
          out += negated()[i] ? " - " : " + ";
        else if (negated()[i])
          out += "0 - ";
        const auto& c = children()[i];
        out += c.kind() == Kind::sum ? "(" + c.to_string() + ")" : c.to_string();
      }
      return out;
    }
    case Kind::product: {
      if (children().empty()) return "1";
      std::string out;
      for (std::size_t i = 0; i < children().size(); ++i) {
        if (i) out += "*";
        const auto& c = children()[i];
        const bool paren = c.kind() == Kind::sum;
        out += paren ? "(" + c.to_string() + ")" : c.to_string();
      }
      return out;
    }
  }
  return {};
}

VarietyExpr operator+(const VarietyExpr& a, const VarietyExpr& b) {
  std::vector<VarietyExpr> terms;
  std::vector<bool> neg;
  if (a.kind() == VarietyExpr::Kind::sum) {
    terms = a.children();
    neg = a.negated();
  } else {
    terms.push_back(a);
    neg.push_back(false);
  }
  terms.push_back(b);
  neg.push_back(false);
  return VarietyExpr::sum(std::move(terms), std::move(neg));
}

VarietyExpr operator-(const VarietyExpr& a, const VarietyExpr& b) {
  std::vector<VarietyExpr> terms;
  std::vector<bool> neg;
  if (a.kind() == VarietyExpr::Kind::sum) {
    terms = a.children();
    neg = a.negated();
  } else {
    terms.push_back(a);
    neg.push_back(false);
  }
  terms.push_back(b);
  neg.push_back(true);
  return VarietyExpr::sum(std::move(terms), std::move(neg));
}

VarietyExpr operator*(const VarietyExpr& a, const VarietyExpr& b) {
  std::vector<VarietyExpr> factors;
  if (a.kind() == VarietyExpr::Kind::product)
    factors = a.children();
  else
    factors.push_back(a);
  factors.push_back(b);
  return VarietyExpr::product(std::move(factors));
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, const RelationSet& rels) : text_(text), rels_(rels) {}

  VarietyExpr parse() {
    auto e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char ch) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char ch) {
    if (!accept(ch)) fail(std::string("expected '") + ch + "'");
  }

  VarietyExpr expr() {
    std::vector<VarietyExpr> terms{term()};
    std::vector<bool> neg{false};
    while (true) {
      if (accept('+'))
        neg.push_back(false);
      else if (accept('-'))
        neg.push_back(true);
      else
        break;
      terms.push_back(term());
    }
    if (terms.size() == 1) return terms.front();
    return VarietyExpr::sum(std::move(terms), std::move(neg));
  }

  VarietyExpr term() {
    std::vector<VarietyExpr> factors{factor()};
    while (accept('*')) factors.push_back(factor());
    if (factors.size() == 1) return factors.front();
    return VarietyExpr::product(std::move(factors));
  }

  std::string name() {
    skip();
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || !std::isalpha(static_cast<unsigned char>(text_[pos_]))) fail("expected a name");
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  VarietyExpr factor() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      auto e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return VarietyExpr::integer(Integer(std::string(text_.substr(start, pos_ - start))));
    }
    if (!std::isalpha(static_cast<unsigned char>(ch))) fail("unexpected '" + std::string(1, ch) + "'");
    const std::size_t start = pos_;
    const std::string id = name();
    if ((id == "Bl" || id == "E") && pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      const std::string base = name();
      expect(';');
      const std::string center = name();
      expect(')');
      auto rel = rels_.find_blowup(base, center);
      if (!rel) {
        pos_ = start;
        throw ResolveError(id + "(" + base + ";" + center + ") matches no declared blowup relation (position " +
                           std::to_string(start) + ")");
      }
      return id == "Bl" ? VarietyExpr::blowup(base, center, *rel) : VarietyExpr::exceptional(base, center, *rel);
    }
    if (id == "L") return VarietyExpr::lefschetz();
    if (!rels_.lookup(id))
      throw ResolveError("unknown generator '" + id + "' (position " + std::to_string(start) + ")");
    return VarietyExpr::generator(id);
  }

  std::string_view text_;
  const RelationSet& rels_;
  std::size_t pos_ = 0;
};

}  // namespace

VarietyExpr parse_expr(std::string_view text, const RelationSet& rels) { return Parser(text, rels).parse(); }

// ---------------------------------------------------------------------------
// Normalization

namespace {

struct StepCounter {
  std::size_t steps = 0;
  std::size_t budget = 0;
  void tick(std::size_t n = 1) {
    steps += n;
    if (steps > budget)
      throw BudgetExceeded("rewrite budget of " + std::to_string(budget) +
                           " steps exceeded (cyclic or oversized relation set)");
  }
};

}  // namespace

Normalizer::Normalizer(const RelationSet& rels, std::size_t step_budget)
    : rels_(std::make_shared<const RelationSet>(rels)), budget_(step_budget) {
  // Symbol class before rewriting: builtins expand, dimension -1 generators vanish.
  auto symbol = [&](const std::string& name) -> KClass {
    const auto info = rels_->lookup(name);
    if (info->builtin) return builtin_class(name);
    if (info->dim == -1) return {};
    return KClass::generator(name);
  };

  struct Pending {
    GeneratorInfo target;
    KClass replacement;
    std::size_t relation;
  };
  std::vector<Pending> pending;
  const auto& relations = rels_->relations();
  for (std::size_t ri = 0; ri < relations.size(); ++ri) {
    const auto& r = relations[ri];
    KClass combination;  // == 0 in K0
    if (r.kind == RelationKind::open) {
      combination = symbol(r.slot("X")) - symbol(r.slot("U")) - symbol(r.slot("complement"));
    } else {
      combination = symbol(r.slot("E")) + symbol(r.slot("X")) - symbol(r.slot("C")) - symbol(r.slot("Y"));
    }
    std::optional<GeneratorInfo> best;
    Integer coefficient;
    for (const auto& [m, c] : combination.terms()) {
      if (m.generators.size() != 1) continue;
      const auto info = rels_->lookup(m.generators.front());
      if (!best || info->key() > best->key()) {
        best = info;
        coefficient = c;
      }
    }
    if (!best) {
      if (!combination.is_zero())
        throw RelationError("relation " + std::to_string(ri) + " (" + to_string(r.kind) +
                            ") is inconsistent: it forces " + combination.to_string() + " = 0");
      continue;
    }
    if (coefficient != 1 && coefficient != -1)
      throw RelationError("relation " + std::to_string(ri) + " cannot be oriented: generator " + best->name +
                          " occurs with coefficient " + coefficient.str());
    KClass rest = combination - KClass::generator(best->name) * KClass::constant(coefficient);
    pending.push_back({*best, -rest * KClass::constant(coefficient), ri});
  }
  std::stable_sort(pending.begin(), pending.end(),
                   [](const Pending& a, const Pending& b) { return a.target.key() < b.target.key(); });

  StepCounter counter{0, budget_};
  for (auto& p : pending) {
    // Every generator in the replacement has a smaller key, so its rule (if
    // any) is already fully reduced.
    KClass reduced;
    for (const auto& [m, c] : p.replacement.terms()) {
      KClass term = KClass::constant(c) * KClass::lefschetz(m.lefschetz);
      for (const auto& g : m.generators) {
        auto it = rule_index_.find(g);
        if (it != rule_index_.end()) {
          counter.tick();
          term *= rules_[it->second].replacement;
        } else {
          term *= KClass::generator(g);
        }
      }
      reduced += term;
    }
    auto existing = rule_index_.find(p.target.name);
    if (existing != rule_index_.end()) {
      const auto& prior = rules_[existing->second];
      if (!(prior.replacement == reduced))
        throw RelationError("inconsistent relations " + std::to_string(prior.relation) + " and " +
                            std::to_string(p.relation) + ": generator " + p.target.name + " rewrites to both " +
                            prior.replacement.to_string() + " and " + reduced.to_string());
      continue;
    }
    rule_index_.emplace(p.target.name, rules_.size());
    rules_.push_back({p.target.name, std::move(reduced), p.relation});
  }
}

KClass Normalizer::generator_class(const std::string& name) const {
  auto it = rule_index_.find(name);
  if (it != rule_index_.end()) return rules_[it->second].replacement;
  const auto info = rels_->lookup(name);
  if (!info) throw ResolveError("unknown generator '" + name + "'");
  if (info->builtin) return builtin_class(name);
  if (info->dim == -1) return {};
  return KClass::generator(name);
}

KClass Normalizer::reduce(const KClass& cls) const {
  StepCounter counter{0, budget_};
  KClass out;
  for (const auto& [m, c] : cls.terms()) {
    KClass term = KClass::constant(c) * KClass::lefschetz(m.lefschetz);
    for (const auto& g : m.generators) {
      if (rule_index_.count(g)) counter.tick();
      term *= generator_class(g);
    }
    out += term;
  }
  return out;
}

KClass Normalizer::normalize(const VarietyExpr& expr) const {
  StepCounter counter{0, budget_};
  std::function<KClass(const VarietyExpr&)> eval = [&](const VarietyExpr& e) -> KClass {
    using Kind = VarietyExpr::Kind;
    switch (e.kind()) {
      case Kind::generator:
        if (rule_index_.count(e.name())) counter.tick();
        return generator_class(e.name());
      case Kind::integer: return KClass::constant(e.value());
      case Kind::lefschetz: return KClass::lefschetz(1);
      case Kind::blowup:
      case Kind::exceptional: {
        const auto& rels = rels_->relations();
        if (e.relation() >= rels.size() || rels[e.relation()].kind == RelationKind::open)
          throw ResolveError("square-derived term " + e.to_string() + " is not bound to a blowup relation");
        const auto& r = rels[e.relation()];
        if (r.slot("X") != e.base() || r.slot("C") != e.center())
          throw ResolveError("square-derived term " + e.to_string() + " does not match its relation");
        counter.tick();
        return generator_class(r.slot(e.kind() == Kind::blowup ? "Y" : "E"));
      }
      case Kind::sum: {
        KClass acc;
        for (std::size_t i = 0; i < e.children().size(); ++i) {
          if (e.negated()[i])
            acc -= eval(e.children()[i]);
          else
            acc += eval(e.children()[i]);
        }
        return acc;
      }
      case Kind::product: {
        KClass acc = KClass::constant(1);
        for (const auto& c : e.children()) {
          acc *= eval(c);
          if (acc.is_zero()) break;
        }
        return acc;
      }
    }
    return {};
  };
  return eval(expr);
}

KClass normalize(const VarietyExpr& expr, const RelationSet& rels) { return Normalizer(rels).normalize(expr); }

SquareRelationReport verify_square_relation(const KClass& e, const KClass& y, const KClass& c, const KClass& x) {
  SquareRelationReport report;
  report.lhs = e + x;
  report.rhs = c + y;
  report.holds = report.lhs == report.rhs;
  return report;
}

SquareRelationReport verify_square_relation(const VarietyExpr& e, const VarietyExpr& y, const VarietyExpr& c,
                                            const VarietyExpr& x, const RelationSet& rels) {
  const Normalizer n(rels);
  return verify_square_relation(n.normalize(e), n.normalize(y), n.normalize(c), n.normalize(x));
}

// ---------------------------------------------------------------------------
// Compact presentation

void CompactClass::add_term(const Basis& b, const Integer& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(b, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

CompactClass CompactClass::from_kclass(const KClass& cls) {
  // Group by generator multiset; within a group L^j = [P^j] - [P^(j-1)].
  std::map<std::vector<std::string>, std::vector<Integer>> groups;
  for (const auto& [m, c] : cls.terms()) {
    auto& coeffs = groups[m.generators];
    const auto j = static_cast<std::size_t>(m.lefschetz);
    if (coeffs.size() <= j) coeffs.resize(j + 1);
    coeffs[j] += c;
  }
  CompactClass out;
  for (const auto& [gens, coeffs] : groups) {
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      const Integer next = k + 1 < coeffs.size() ? coeffs[k + 1] : Integer(0);
      out.add_term(Basis{static_cast<int>(k), gens}, coeffs[k] - next);
    }
  }
  return out;
}

KClass CompactClass::to_kclass() const {
  KClass out;
  for (const auto& [b, c] : terms_) {
    for (int j = 0; j <= b.projective; ++j) out.add_term(Monomial{b.generators, j}, c);
  }
  return out;
}

std::string CompactClass::to_string() const {
  std::vector<std::pair<Basis, Integer>> ordered;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it)
    if (it->first.generators.empty()) ordered.push_back(*it);
  for (const auto& t : terms_)
    if (!t.first.generators.empty()) ordered.push_back(t);
  return signed_sum(ordered, [](const Basis& b) {
    std::string out;
    if (b.projective > 0 || b.generators.empty())
      out = b.projective == 0 ? "[pt]" : "[P" + std::to_string(b.projective) + "]";
    for (const auto& g : b.generators) {
      if (!out.empty()) out += "*";
      out += "[" + g + "]";
    }
    return out;
  });
}

void CompactificationTable::set(const std::string& generator, VarietyExpr compactification, VarietyExpr boundary) {
  entries_.insert_or_assign(generator, Entry{std::move(compactification), std::move(boundary)});
}

std::optional<CompactificationTable::Entry> CompactificationTable::find(const std::string& generator) const {
  auto it = entries_.find(generator);
  if (it != entries_.end()) return it->second;
  if (generator == "Gm") return Entry{VarietyExpr::generator("P1"), VarietyExpr::integer(2)};
  if (auto info = builtin_generator(generator); info && generator[0] == 'A' && info->dim >= 1) {
    const auto n = std::to_string(info->dim);
    const auto m = std::to_string(info->dim - 1);
    return Entry{VarietyExpr::generator("P" + n), VarietyExpr::generator("P" + m)};
  }
  return std::nullopt;
}

CompactificationTable CompactificationTable::defaults(const RelationSet& rels) {
  CompactificationTable table;
  for (const auto& r : rels.relations()) {
    if (r.kind != RelationKind::open) continue;
    const auto x = rels.lookup(r.slot("X"));
    const auto u = rels.lookup(r.slot("U"));
    if (x->compact && !u->compact && !u->builtin && !table.entries_.count(u->name))
      table.set(u->name, VarietyExpr::generator(x->name), VarietyExpr::generator(r.slot("complement")));
  }
  return table;
}

int expr_dimension(const VarietyExpr& expr, const RelationSet& rels) {
  using Kind = VarietyExpr::Kind;
  switch (expr.kind()) {
    case Kind::generator: {
      auto info = rels.lookup(expr.name());
      if (!info) throw ResolveError("unknown generator '" + expr.name() + "'");
      return info->dim;
    }
    case Kind::integer: return expr.value() == 0 ? -1 : 0;
    case Kind::lefschetz: return 1;
    case Kind::blowup:
    case Kind::exceptional: {
      const auto& r = rels.relations().at(expr.relation());
      return rels.lookup(r.slot(expr.kind() == Kind::blowup ? "Y" : "E"))->dim;
    }
    case Kind::sum: {
      int d = -1;
      for (const auto& c : expr.children()) d = std::max(d, expr_dimension(c, rels));
      return d;
    }
    case Kind::product: {
      int d = 0;
      for (const auto& c : expr.children()) {
        const int k = expr_dimension(c, rels);
        if (k < 0) return -1;
        d += k;
      }
      return d;
    }
  }
  return -1;
}

bool expr_is_compact(const VarietyExpr& expr, const RelationSet& rels) {
  using Kind = VarietyExpr::Kind;
  switch (expr.kind()) {
    case Kind::generator: {
      auto info = rels.lookup(expr.name());
      if (!info) throw ResolveError("unknown generator '" + expr.name() + "'");
      return info->compact;
    }
    case Kind::integer: return true;
    case Kind::lefschetz: return false;
    case Kind::blowup:
    case Kind::exceptional: {
      const auto& r = rels.relations().at(expr.relation());
      return rels.lookup(r.slot(expr.kind() == Kind::blowup ? "Y" : "E"))->compact;
    }
    case Kind::sum:
    case Kind::product:
      return std::all_of(expr.children().begin(), expr.children().end(),
                         [&](const VarietyExpr& c) { return expr_is_compact(c, rels); });
  }
  return false;
}

namespace {

constexpr int kMaxCompactificationDepth = 64;

class CompactSubstitution {
 public:
  CompactSubstitution(const RelationSet& rels, const CompactificationTable& table)
      : rels_(rels), table_(table), normalizer_(rels) {}

  // Expression with every non-compact generator replaced by Xbar - boundary.
  VarietyExpr substitute(const VarietyExpr& e, int depth) const {
    using Kind = VarietyExpr::Kind;
    switch (e.kind()) {
      case Kind::integer: return e;
      case Kind::lefschetz: return replace("A1", depth);
      case Kind::generator: {
        const auto info = rels_.lookup(e.name());
        if (!info) throw ResolveError("unknown generator '" + e.name() + "'");
        return info->compact ? e : replace(e.name(), depth);
      }
      case Kind::blowup:
      case Kind::exceptional: {
        const auto& r = rels_.relations().at(e.relation());
        const auto& slot = r.slot(e.kind() == Kind::blowup ? "Y" : "E");
        return rels_.lookup(slot)->compact ? e : replace(slot, depth);
      }
      case Kind::sum: {
        std::vector<VarietyExpr> terms;
        for (const auto& c : e.children()) terms.push_back(substitute(c, depth));
        return VarietyExpr::sum(std::move(terms), e.negated());
      }
      case Kind::product: {
        std::vector<VarietyExpr> factors;
        for (const auto& c : e.children()) factors.push_back(substitute(c, depth));
        return VarietyExpr::product(std::move(factors));
      }
    }
    return e;
  }

  // Class-level g: normalized class with only compact residual generators.
  KClass compact_class(const KClass& cls, int depth) const {
    if (depth > kMaxCompactificationDepth) throw CompactificationError("compactification recursion too deep");
    KClass out;
    for (const auto& [m, c] : cls.terms()) {
      KClass term = KClass::constant(c) * KClass::lefschetz(m.lefschetz);
      for (const auto& g : m.generators) {
        if (rels_.lookup(g)->compact) {
          term *= KClass::generator(g);
        } else {
          const auto replaced = substitute(VarietyExpr::generator(g), depth + 1);
          term *= compact_class(normalizer_.normalize(replaced), depth + 1);
        }
      }
      out += term;
    }
    return out;
  }

  const Normalizer& normalizer() const { return normalizer_; }

 private:
  VarietyExpr replace(const std::string& name, int depth) const {
    if (depth > kMaxCompactificationDepth) throw CompactificationError("compactification recursion too deep");
    const auto entry = table_.find(name);
    if (!entry) throw CompactificationError("no compactification registered for non-compact generator " + name);
    if (!expr_is_compact(entry->compactification, rels_))
      throw CompactificationError("compactification of " + name + " is not compact: " +
                                  entry->compactification.to_string());
    const int dim_x = expr_dimension(entry->compactification, rels_);
    const int dim_b = expr_dimension(entry->boundary, rels_);
    const int dim_u = rels_.lookup(name)->dim;
    if (dim_x != dim_u || dim_b >= dim_x)
      throw CompactificationError("boundary of " + name + " in " + entry->compactification.to_string() +
                                  " fails the dimension precondition (dim " + std::to_string(dim_b) + " vs " +
                                  std::to_string(dim_x) + ")");
    return entry->compactification - substitute(entry->boundary, depth + 1);
  }

  const RelationSet& rels_;
  const CompactificationTable& table_;
  Normalizer normalizer_;
};

}  // namespace

CompactClass g_map(const VarietyExpr& expr, const RelationSet& rels, const CompactificationTable& table) {
  CompactSubstitution sub(rels, table);
  const KClass normalized = sub.normalizer().normalize(sub.substitute(expr, 0));
  return CompactClass::from_kclass(sub.compact_class(normalized, 0));
}

CompactClass g_map(const KClass& cls, const RelationSet& rels, const CompactificationTable& table) {
  CompactSubstitution sub(rels, table);
  return CompactClass::from_kclass(sub.compact_class(sub.normalizer().reduce(cls), 0));
}

KClass f_map(const CompactClass& cls, const RelationSet& rels) { return Normalizer(rels).reduce(cls.to_kclass()); }

}  // namespace motivic
