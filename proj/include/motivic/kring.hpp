#pragma once

// Classes of varieties in the Grothendieck ring K0(Var): expression trees,
// declared relations, and normalization to a canonical form.

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "motivic/integer.hpp"

namespace motivic {

/// A generator symbol: either a builtin (`pt`, `empty`, `Gm`, `A<n>`, `P<n>`)
/// or a name declared in a RelationSet.
struct GeneratorInfo {
  std::string name;
  int dim = 0;
  bool compact = false;
  bool builtin = false;
  std::size_t index = 0;  // declaration order; builtins are 0

  /// Orientation key for rewriting: larger keys are eliminated first.
  std::pair<int, std::size_t> key() const { return {dim, index}; }
};

/// Builtin generators recognised by name.
std::optional<GeneratorInfo> builtin_generator(std::string_view name);

/// One term of a KClass: L^lefschetz times a product of residual generators.
struct Monomial {
  std::vector<std::string> generators;  // sorted multiset
  int lefschetz = 0;

  auto operator<=>(const Monomial&) const = default;
  bool is_pure() const { return generators.empty(); }
};

/// Canonical element of K0(Var): an integer polynomial in the Lefschetz class L
/// plus residual terms over generators that do not reduce to L-polynomials.
///
/// Terms are kept in a sorted map with no zero coefficients, so equal classes
/// compare and serialize identically.
class KClass {
 public:
  KClass() = default;

  static KClass constant(Integer c);
  static KClass lefschetz(int power = 1);
  static KClass generator(const std::string& name);
  /// sum_k coeffs[k] L^k
  static KClass polynomial(const std::vector<Integer>& coeffs);

  const std::map<Monomial, Integer>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// True when no residual generators remain.
  bool is_polynomial() const;

  /// Dense coefficients of the pure L-part, lowest degree first, no trailing zeros.
  std::vector<Integer> lefschetz_coefficients() const;
  /// Residual terms grouped by generator multiset.
  std::vector<std::pair<Monomial, Integer>> residual() const;
  std::vector<std::string> residual_generators() const;

  Integer evaluate(const Integer& lefschetz_value) const;

  KClass& operator+=(const KClass& other);
  KClass& operator-=(const KClass& other);
  KClass& operator*=(const KClass& other);
  friend KClass operator+(KClass a, const KClass& b) { return a += b; }
  friend KClass operator-(KClass a, const KClass& b) { return a -= b; }
  friend KClass operator*(const KClass& a, const KClass& b);
  KClass operator-() const;
  bool operator==(const KClass&) const = default;

  void add_term(const Monomial& m, const Integer& c);

  /// e.g. "L^2 + 2*L + 1", "L*X - 1", "0"
  std::string to_string() const;

 private:
  std::map<Monomial, Integer> terms_;
};

enum class RelationKind { open, abstract_blowup, smooth_blowup };

std::string to_string(RelationKind kind);
RelationKind relation_kind_from_string(std::string_view s);

/// A declared relation. Slot keys: open uses X, U, complement
/// ([X] = [U] + [complement]); the blowup kinds use E, Y, C, X ([E] + [X] = [C] + [Y]).
struct Relation {
  RelationKind kind = RelationKind::open;
  std::map<std::string, std::string> slots;

  const std::string& slot(const std::string& key) const;
};

/// Declared generators together with the relations among them.
class RelationSet {
 public:
  /// Declares (or re-confirms) a generator. Redeclaring with different data,
  /// or declaring a builtin with non-builtin data, throws RelationError.
  void declare(const std::string& name, int dim, bool compact);
  /// Adds a relation whose slots are all declared or builtin; checks the
  /// dimension constraints dim(C) <= dim(X), dim(E) <= dim(Y) (blowups) and
  /// dim(U), dim(complement) <= dim(X) (open).
  void add(Relation relation);

  std::optional<GeneratorInfo> lookup(std::string_view name) const;
  const std::vector<Relation>& relations() const { return relations_; }
  const std::vector<GeneratorInfo>& declared() const { return declared_; }

  /// Index of the first blowup relation with the given X and C slots.
  std::optional<std::size_t> find_blowup(const std::string& base, const std::string& center) const;

  /// The blowup of P2 at a point: E = P1, Y = F1, C = pt, X = P2.
  static RelationSet standard();

 private:
  std::vector<GeneratorInfo> declared_;
  std::vector<Relation> relations_;
};

/// Immutable expression tree over varieties.
class VarietyExpr {
 public:
  enum class Kind { generator, integer, lefschetz, sum, product, blowup, exceptional };

  static VarietyExpr generator(std::string name);
  static VarietyExpr integer(Integer value);
  static VarietyExpr lefschetz();
  /// n-ary signed sum; `negated[i]` marks subtracted terms.
  static VarietyExpr sum(std::vector<VarietyExpr> terms, std::vector<bool> negated);
  static VarietyExpr product(std::vector<VarietyExpr> factors);
  /// Bl(X;C) and E(X;C), bound to blowup relation `relation`.
  static VarietyExpr blowup(std::string base, std::string center, std::size_t relation);
  static VarietyExpr exceptional(std::string base, std::string center, std::size_t relation);

  Kind kind() const;
  const std::string& name() const;  // generator
  const Integer& value() const;     // integer
  const std::vector<VarietyExpr>& children() const;
  const std::vector<bool>& negated() const;
  const std::string& base() const;    // blowup / exceptional
  const std::string& center() const;  // blowup / exceptional
  std::size_t relation() const;

  std::size_t node_count() const;
  /// Tree rendering, e.g. "Sum(Gen(P2), Prod(L, Gen(Gm)))".
  std::string structure() const;
  /// Rendering in the input grammar.
  std::string to_string() const;

  friend VarietyExpr operator+(const VarietyExpr& a, const VarietyExpr& b);
  friend VarietyExpr operator-(const VarietyExpr& a, const VarietyExpr& b);
  friend VarietyExpr operator*(const VarietyExpr& a, const VarietyExpr& b);

 private:
  struct Node;
  explicit VarietyExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Parses the expression grammar
///   expr := term {("+"|"-") term};  term := factor {"*" factor};
///   factor := INT | "L" | NAME | "Bl(" NAME ";" NAME ")" | "E(" NAME ";" NAME ")" | "(" expr ")"
/// resolving every name against builtins and `rels`.
VarietyExpr parse_expr(std::string_view text, const RelationSet& rels);

/// Confluent rewrite system built from a RelationSet.
///
/// Each relation is oriented to eliminate its slot generator of maximal
/// (dimension, declaration index); builtins reduce by their cellular
/// decompositions and are never eliminated. Every rule rewrites a generator
/// into generators of strictly smaller key, so rewriting terminates.
class Normalizer {
 public:
  static constexpr std::size_t kDefaultBudget = 1'000'000;

  explicit Normalizer(const RelationSet& rels, std::size_t step_budget = kDefaultBudget);

  KClass normalize(const VarietyExpr& expr) const;
  /// Rewrites every residual generator that has a rule.
  KClass reduce(const KClass& cls) const;
  /// Class of a single generator name after all rewrites.
  KClass generator_class(const std::string& name) const;

  struct Rule {
    std::string target;
    KClass replacement;  // fully reduced
    std::size_t relation = 0;
  };
  const std::vector<Rule>& rules() const { return rules_; }
  const RelationSet& relations() const { return *rels_; }

 private:
  std::shared_ptr<const RelationSet> rels_;
  std::vector<Rule> rules_;
  std::map<std::string, std::size_t> rule_index_;
  std::size_t budget_;
};

/// normalize(expr) under a fresh Normalizer for `rels`.
KClass normalize(const VarietyExpr& expr, const RelationSet& rels);

/// Result of comparing [E] + [X] with [C] + [Y].
struct SquareRelationReport {
  bool holds = false;
  KClass lhs;  // [E] + [X]
  KClass rhs;  // [C] + [Y]
};

SquareRelationReport verify_square_relation(const KClass& e, const KClass& y, const KClass& c,
                                            const KClass& x);
SquareRelationReport verify_square_relation(const VarietyExpr& e, const VarietyExpr& y,
                                            const VarietyExpr& c, const VarietyExpr& x,
                                            const RelationSet& rels);

// ---------------------------------------------------------------------------
// Compact presentation and the maps f, g between presentations.

/// A class written in the compact presentation: sum of c * [P^k x G1 x ... x Gm]
/// with every Gi a compact generator. The projective spaces {P^k} form a
/// Z-basis of Z[L], so this representation is canonical.
class CompactClass {
 public:
  struct Basis {
    int projective = 0;  // k in P^k
    std::vector<std::string> generators;
    auto operator<=>(const Basis&) const = default;
  };

  const std::map<Basis, Integer>& terms() const { return terms_; }
  bool operator==(const CompactClass&) const = default;
  /// e.g. "[P1] - [P0]"
  std::string to_string() const;

  /// Basis change of a class whose residual generators are all compact.
  static CompactClass from_kclass(const KClass& cls);
  /// The forgetful image before any relation rewriting.
  KClass to_kclass() const;

  void add_term(const Basis& b, const Integer& c);

 private:
  std::map<Basis, Integer> terms_;
};

/// Compactification data for non-compact generators: U -> (Xbar, Xbar \ U).
class CompactificationTable {
 public:
  struct Entry {
    VarietyExpr compactification;
    VarietyExpr boundary;
  };

  void set(const std::string& generator, VarietyExpr compactification, VarietyExpr boundary);
  /// Explicit entries first; builtins A<n> and Gm fall back to their standard
  /// projective compactifications.
  std::optional<Entry> find(const std::string& generator) const;

  /// A<n> -> (P<n>, P<n-1>), Gm -> (P1, 2), and U -> (X, complement) for every
  /// open relation of `rels` whose X is compact and U is not.
  static CompactificationTable defaults(const RelationSet& rels);

 private:
  std::map<std::string, Entry> entries_;
};

/// g: K0(Var) -> K0(Comp). Replaces every non-compact generator [U] (including L,
/// read as A1) by [Xbar] - [Xbar \ U], recursively, then normalizes.
/// Throws CompactificationError when an entry is missing or a boundary does
/// not drop dimension.
CompactClass g_map(const VarietyExpr& expr, const RelationSet& rels,
                   const CompactificationTable& table);
/// g on an already-normalized class.
CompactClass g_map(const KClass& cls, const RelationSet& rels, const CompactificationTable& table);

/// f: K0(Comp) -> K0(Var), the forgetful map followed by normalization.
KClass f_map(const CompactClass& cls, const RelationSet& rels);

/// Dimension of an expression: max over sums, additive over products, -1 for empty.
int expr_dimension(const VarietyExpr& expr, const RelationSet& rels);
/// True when every generator in the expression is compact (L counts as non-compact).
bool expr_is_compact(const VarietyExpr& expr, const RelationSet& rels);

}  // namespace motivic
