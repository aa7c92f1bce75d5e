#pragma once

// Compactly supported extension of measures on compact varieties, and the
// identities it must satisfy.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "motivic/kring.hpp"
#include "motivic/measures.hpp"
#include "motivic/toric.hpp"

namespace motivic::csupport {

/// A measure on compact objects. The builtin rule normalizes and substitutes;
/// the perturbed rule adds 1 on every object isomorphic to P2, which keeps it
/// unital but breaks blowup descent and multiplicativity.
class MeasureOnCompacts {
 public:
  explicit MeasureOnCompacts(MeasureSpec spec, MeasureRegistry registry = {});
  static MeasureOnCompacts perturbed(MeasureSpec spec, MeasureRegistry registry = {});
  /// "euler", "e", ... or "perturbed:<base>".
  static MeasureOnCompacts parse(const std::string& name, MeasureRegistry registry = {});

  std::string name() const;
  const MeasureSpec& spec() const { return spec_; }
  const MeasureRegistry& registry() const { return registry_; }
  bool is_perturbed() const { return perturbed_; }
  bool multiplicative() const { return !perturbed_; }
  bool unital() const { return true; }

  MeasureValue zero() const { return MeasureValue::zero_of(spec_.value_kind()); }
  MeasureValue one() const { return MeasureValue::one_of(spec_.value_kind()); }

  /// Throws MeasureError unless `obj` is compact.
  MeasureValue evaluate(const toric::ToricObject& obj) const;
  /// A compact class; `p2` marks the object as isomorphic to P2.
  MeasureValue evaluate_class(const KClass& cls, bool p2 = false) const;

 private:
  MeasureSpec spec_;
  MeasureRegistry registry_;
  bool perturbed_ = false;
};

/// Irreducible, compact, smooth, of dimension 2 with three boundary divisors.
bool is_p2_like(const toric::ToricObject& obj);

/// U together with a compact object containing it as a dense open.
struct CompactificationChoice {
  toric::ToricObject open;      // U in its own fan
  toric::ToricObject compact;   // closure of U in the completion fan
  toric::ToricObject boundary;  // compact minus U
  std::string provider;
};

/// Places U inside `completion` (a complete fan containing U's cones).
CompactificationChoice make_choice(const toric::ToricObject& u, const toric::FanPtr& completion,
                                   std::string provider = "explicit");

/// Chooses completion fans: the ambient fan when it is complete, (P1)^k for
/// tori, registered completions, then angular completion in rank <= 2.
class CompactificationProvider {
 public:
  void add(const toric::Fan& fan, toric::FanPtr completion);
  /// Completion fan for the ambient fan of an object; throws CompactificationError.
  toric::FanPtr completion_of(const toric::FanPtr& fan, std::string* provider = nullptr) const;
  CompactificationChoice choose(const toric::ToricObject& obj) const;

 private:
  std::vector<std::pair<toric::Fan, toric::FanPtr>> explicit_;
};

/// A completion different from `completion`, made by star subdividing a
/// boundary cone of dimension >= 2 (the `which`-th such cone, cyclically).
std::optional<toric::FanPtr> alternative_completion(const toric::ToricObject& u, const toric::FanPtr& completion,
                                                    std::size_t which = 0);

struct TraceStep {
  int depth = 0;
  std::string object;
  std::string compactification;
  std::string boundary;
  auto operator<=>(const TraceStep&) const = default;
};

struct ExtensionResult {
  std::string object;
  MeasureValue value;
  std::vector<TraceStep> trace;
  /// Agreement with the substitution image of the class, when computed.
  std::optional<bool> oracle_agrees;

  int depth() const;
};

/// Phi_c(obj) = Phi(obj) for compact obj, else Phi(Xbar) - Phi_c(Xbar \ obj) with
/// the boundary decomposed into torus orbits.
ExtensionResult extend_measure(const MeasureOnCompacts& phi, const toric::ToricObject& obj,
                               const CompactificationProvider& provider = {});
/// The same recursion through a fixed first compactification.
ExtensionResult extend_measure(const MeasureOnCompacts& phi, const CompactificationChoice& choice,
                               const CompactificationProvider& provider = {});
/// Declared objects: evaluates Phi on the compact presentation g(expr).
ExtensionResult extend_measure(const MeasureOnCompacts& phi, const VarietyExpr& expr, const RelationSet& rels,
                               const CompactificationTable& table);

struct CheckReport {
  std::string kind;
  bool pass = false;
  MeasureValue lhs;
  MeasureValue rhs;
  std::vector<TraceStep> trace;
  std::string note;
};

CheckReport independence_check(const MeasureOnCompacts& phi, const CompactificationChoice& a,
                               const CompactificationChoice& b, const CompactificationProvider& provider = {});
/// Phi_c(U) + Phi_c(X \ U) against Phi_c(X); U is an open cell subset of X.
CheckReport additivity_check(const MeasureOnCompacts& phi, const toric::ToricObject& x, const toric::ToricObject& u,
                             const CompactificationProvider& provider = {});
/// Phi_c(X) + Phi_c(E) against Phi_c(C) + Phi_c(Y).
CheckReport blowup_descent_check(const MeasureOnCompacts& phi, const toric::ToricObject& e,
                                 const toric::ToricObject& y, const toric::ToricObject& c,
                                 const toric::ToricObject& x, const CompactificationProvider& provider = {});
/// Phi_c(U n V) + Phi_c(X) against Phi_c(U) + Phi_c(V), with U, V open and X = U u V.
CheckReport mayer_vietoris_check(const MeasureOnCompacts& phi, const toric::ToricObject& x,
                                 const toric::ToricObject& u, const toric::ToricObject& v,
                                 const CompactificationProvider& provider = {});
/// Phi_c(X x Y) against Phi_c(X) Phi_c(Y); the product is formed inside the
/// product of the factors' completions. Throws MeasureError if phi is not
/// multiplicative.
CheckReport kunneth_check(const MeasureOnCompacts& phi, const toric::ToricObject& x, const toric::ToricObject& y,
                          const CompactificationProvider& provider = {});

}  // namespace motivic::csupport
