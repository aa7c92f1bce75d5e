#include "motivic/csupport.hpp"

#include <algorithm>
#include <set>

#include "motivic/error.hpp"
#include "motivic/lattice.hpp"

namespace motivic::csupport {

using toric::CellSet;
using toric::Fan;
using toric::FanPtr;
using toric::ToricObject;

// ---------------------------------------------------------------------------
// Measures on compact objects

MeasureOnCompacts::MeasureOnCompacts(MeasureSpec spec, MeasureRegistry registry)
    : spec_(std::move(spec)), registry_(std::move(registry)) {}

MeasureOnCompacts MeasureOnCompacts::perturbed(MeasureSpec spec, MeasureRegistry registry) {
  MeasureOnCompacts phi(std::move(spec), std::move(registry));
  phi.perturbed_ = true;
  return phi;
}

MeasureOnCompacts MeasureOnCompacts::parse(const std::string& name, MeasureRegistry registry) {
  const std::string prefix = "perturbed:";
  if (name.rfind(prefix, 0) == 0) return perturbed(MeasureSpec::parse(name.substr(prefix.size())), std::move(registry));
  return MeasureOnCompacts(MeasureSpec::parse(name), std::move(registry));
}

std::string MeasureOnCompacts::name() const { return perturbed_ ? "perturbed:" + spec_.name() : spec_.name(); }

MeasureValue MeasureOnCompacts::evaluate_class(const KClass& cls, bool p2) const {
  MeasureValue v = apply_measure(spec_, cls, registry_);
  if (perturbed_ && p2) v += one();
  return v;
}

MeasureValue MeasureOnCompacts::evaluate(const ToricObject& obj) const {
  if (!obj.is_compact()) throw MeasureError("measure on compacts evaluated on non-compact " + obj.describe());
  return evaluate_class(obj.klass(), is_p2_like(obj));
}

bool is_p2_like(const ToricObject& obj) {
  if (obj.dimension() != 2) return false;
  const auto comps = obj.components();
  if (comps.size() != 1 || !obj.is_compact() || !obj.is_smooth()) return false;
  const auto& fan = obj.fan();
  int low = static_cast<int>(fan.rank());
  for (auto c : obj.cells()) low = std::min(low, fan.cone(c).dim);
  std::size_t divisors = 0;
  for (auto c : obj.cells())
    if (fan.cone(c).dim == low + 1) ++divisors;
  return divisors == 3;
}

// ---------------------------------------------------------------------------
// Compactifications

CompactificationChoice make_choice(const ToricObject& u, const FanPtr& completion, std::string provider) {
  if (!completion->is_complete()) throw CompactificationError("completion fan is not complete");
  if (!u.is_locally_closed()) throw CompactificationError(u.describe() + " is not locally closed");
  auto cells = toric::transfer_cells(u.fan(), u.cells(), *completion);
  if (!cells) throw CompactificationError("completion does not contain the cones of " + u.describe());
  CompactificationChoice choice;
  choice.open = u;
  ToricObject placed(completion, *cells);
  choice.compact = placed.closure().with_label(provider);
  choice.boundary = choice.compact.minus(placed).with_label(provider);
  choice.provider = std::move(provider);
  if (!choice.boundary.empty() && choice.boundary.dimension() >= choice.compact.dimension())
    throw CompactificationError("boundary of " + u.describe() + " does not drop dimension");
  return choice;
}

void CompactificationProvider::add(const Fan& fan, FanPtr completion) {
  if (!completion->is_complete()) throw CompactificationError("registered completion is not complete");
  explicit_.emplace_back(fan, std::move(completion));
}

namespace {

FanPtr torus_completion(std::size_t k) {
  Fan f = toric::torus(0);
  for (std::size_t i = 0; i < k; ++i) f = toric::product(f, toric::projective_space(1));
  return std::make_shared<const Fan>(std::move(f));
}

}  // namespace

FanPtr CompactificationProvider::completion_of(const FanPtr& fan, std::string* provider) const {
  auto tag = [&](const char* name) {
    if (provider) *provider = name;
  };
  if (fan->is_complete()) {
    tag("ambient");
    return fan;
  }
  if (fan->rays().empty()) {
    tag("torus");
    return torus_completion(fan->rank());
  }
  for (const auto& [f, completion] : explicit_)
    if (f == *fan) {
      tag("registered");
      return completion;
    }
  if (fan->rank() <= 2) {
    tag("angular");
    return std::make_shared<const Fan>(toric::complete_surface(*fan));
  }
  throw CompactificationError("no completion available for a non-complete rank " + std::to_string(fan->rank()) +
                              " fan; register one");
}

CompactificationChoice CompactificationProvider::choose(const ToricObject& obj) const {
  std::string provider;
  auto completion = completion_of(obj.fan_ptr(), &provider);
  return make_choice(obj, completion, provider);
}

std::optional<FanPtr> alternative_completion(const ToricObject& u, const FanPtr& completion, std::size_t which) {
  auto cells = toric::transfer_cells(u.fan(), u.cells(), *completion);
  if (!cells) return std::nullopt;
  const ToricObject placed(completion, *cells);
  std::vector<std::size_t> candidates;
  for (std::size_t c = 0; c < completion->size(); ++c) {
    if (completion->cone(c).dim < 2) continue;
    const auto up = completion->star(c);
    if (std::none_of(up.begin(), up.end(), [&](std::size_t s) { return placed.contains_cell(s); }))
      candidates.push_back(c);
  }
  if (candidates.empty()) return std::nullopt;
  const std::size_t sigma = candidates[which % candidates.size()];
  auto sub = toric::star_subdivide(completion, lattice::primitive(completion->interior_point(sigma)));
  return sub.fan;
}

int ExtensionResult::depth() const {
  int d = 0;
  for (const auto& s : trace) d = std::max(d, s.depth + 1);
  return d;
}

// ---------------------------------------------------------------------------
// The recursion

namespace {

class Extender {
 public:
  Extender(const MeasureOnCompacts& phi, const CompactificationProvider& provider) : phi_(phi), provider_(provider) {}

  MeasureValue object(const ToricObject& obj, int depth) {
    if (obj.empty()) return phi_.zero();
    if (obj.is_compact()) return phi_.evaluate(obj);
    return via(provider_.choose(obj), depth);
  }

  MeasureValue via(const CompactificationChoice& choice, int depth) {
    record({depth, choice.open.describe(), choice.provider + ":" + choice.compact.describe(),
            choice.boundary.describe()});
    return phi_.evaluate(choice.compact) - boundary(choice.boundary, depth + 1);
  }

  // Orbit by orbit: O(sigma) is a torus of dimension rank - dim(sigma).
  MeasureValue boundary(const ToricObject& b, int depth) {
    MeasureValue total = phi_.zero();
    const std::size_t n = b.fan().rank();
    for (auto c : b.cells()) total += torus(n - static_cast<std::size_t>(b.fan().cone(c).dim), depth);
    return total;
  }

  MeasureValue torus(std::size_t k, int depth) {
    if (k == 0) return phi_.one();
    auto it = tori_.find(k);
    if (it != tori_.end()) return it->second;
    auto fan = torus_completion(k);
    const ToricObject whole = ToricObject::whole(fan, "P1^" + std::to_string(k));
    const ToricObject t(fan, {0});
    const ToricObject rest = whole.minus(t).with_label(whole.label());
    record({depth, "Gm^" + std::to_string(k), "torus:" + whole.label(), rest.describe()});
    MeasureValue v = phi_.evaluate(whole) - boundary(rest, depth + 1);
    tori_.emplace(k, v);
    return v;
  }

  std::vector<TraceStep> take_trace() { return std::move(trace_); }

 private:
  void record(TraceStep step) {
    if (seen_.insert(step).second) trace_.push_back(std::move(step));
  }

  const MeasureOnCompacts& phi_;
  const CompactificationProvider& provider_;
  std::map<std::size_t, MeasureValue> tori_;
  std::set<TraceStep> seen_;
  std::vector<TraceStep> trace_;
};

void attach_oracle(const MeasureOnCompacts& phi, const ToricObject& obj, ExtensionResult& r) {
  if (phi.is_perturbed()) return;
  r.oracle_agrees = apply_measure(phi.spec(), obj.klass(), phi.registry()) == r.value;
}

}  // namespace

ExtensionResult extend_measure(const MeasureOnCompacts& phi, const ToricObject& obj,
                               const CompactificationProvider& provider) {
  Extender ex(phi, provider);
  ExtensionResult r;
  r.object = obj.describe();
  r.value = ex.object(obj, 0);
  r.trace = ex.take_trace();
  attach_oracle(phi, obj, r);
  return r;
}

ExtensionResult extend_measure(const MeasureOnCompacts& phi, const CompactificationChoice& choice,
                               const CompactificationProvider& provider) {
  Extender ex(phi, provider);
  ExtensionResult r;
  r.object = choice.open.describe();
  r.value = ex.via(choice, 0);
  r.trace = ex.take_trace();
  attach_oracle(phi, choice.open, r);
  return r;
}

ExtensionResult extend_measure(const MeasureOnCompacts& phi, const VarietyExpr& expr, const RelationSet& rels,
                               const CompactificationTable& table) {
  const CompactClass g = g_map(expr, rels, table);
  ExtensionResult r;
  r.object = expr.to_string();
  r.value = phi.zero();
  for (const auto& [basis, c] : g.terms()) {
    CompactClass single;
    single.add_term(basis, 1);
    const bool p2 = basis.projective == 2 && basis.generators.empty();
    r.value += MeasureValue::polynomial(phi.spec().value_kind(), {c}) * phi.evaluate_class(f_map(single, rels), p2);
  }
  if (!expr_is_compact(expr, rels)) r.trace.push_back({0, r.object, "table", g.to_string()});
  if (!phi.is_perturbed()) r.oracle_agrees = apply_measure(phi.spec(), normalize(expr, rels), phi.registry()) == r.value;
  return r;
}

// ---------------------------------------------------------------------------
// Checks

namespace {

CheckReport compare(std::string kind, MeasureValue lhs, MeasureValue rhs, std::vector<TraceStep> trace = {}) {
  CheckReport r;
  r.kind = std::move(kind);
  r.pass = lhs == rhs;
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  r.trace = std::move(trace);
  return r;
}

std::vector<TraceStep> merged(std::initializer_list<const ExtensionResult*> parts) {
  std::vector<TraceStep> out;
  std::set<TraceStep> seen;
  for (const auto* p : parts)
    for (const auto& s : p->trace)
      if (seen.insert(s).second) out.push_back(s);
  return out;
}

}  // namespace

CheckReport independence_check(const MeasureOnCompacts& phi, const CompactificationChoice& a,
                               const CompactificationChoice& b, const CompactificationProvider& provider) {
  if (!(a.open == b.open)) throw MeasureError("independence check needs two compactifications of one object");
  const auto ra = extend_measure(phi, a, provider);
  const auto rb = extend_measure(phi, b, provider);
  auto r = compare("independence", ra.value, rb.value, merged({&ra, &rb}));
  if (!r.pass)
    r.note = "descent violation: " + phi.name() + " gives different values through " + a.compact.describe() +
             " and " + b.compact.describe();
  return r;
}

CheckReport additivity_check(const MeasureOnCompacts& phi, const ToricObject& x, const ToricObject& u,
                             const CompactificationProvider& provider) {
  if (!toric::is_open_immersion(u, x)) throw MeasureError(u.describe() + " is not open in " + x.describe());
  const auto ru = extend_measure(phi, u, provider);
  const auto rz = extend_measure(phi, x.minus(u).with_label(x.label()), provider);
  const auto rx = extend_measure(phi, x, provider);
  auto r = compare("additivity", ru.value + rz.value, rx.value, merged({&ru, &rz, &rx}));
  if (!r.pass) r.note = "Phi_c(U) + Phi_c(X \\ U) differs from Phi_c(X)";
  return r;
}

CheckReport blowup_descent_check(const MeasureOnCompacts& phi, const ToricObject& e, const ToricObject& y,
                                 const ToricObject& c, const ToricObject& x, const CompactificationProvider& provider) {
  const auto re = extend_measure(phi, e, provider);
  const auto ry = extend_measure(phi, y, provider);
  const auto rc = extend_measure(phi, c, provider);
  const auto rx = extend_measure(phi, x, provider);
  auto r = compare("blowup_descent", rx.value + re.value, rc.value + ry.value, merged({&re, &ry, &rc, &rx}));
  if (!r.pass) r.note = "descent violation on the blowup square";
  return r;
}

CheckReport mayer_vietoris_check(const MeasureOnCompacts& phi, const ToricObject& x, const ToricObject& u,
                                 const ToricObject& v, const CompactificationProvider& provider) {
  if (!toric::is_open_immersion(u, x) || !toric::is_open_immersion(v, x))
    throw MeasureError("Mayer-Vietoris needs two opens of " + x.describe());
  if (!(u.unite(v) == x)) throw MeasureError("the two opens do not cover " + x.describe());
  const auto ruv = extend_measure(phi, u.intersect(v), provider);
  const auto rx = extend_measure(phi, x, provider);
  const auto ru = extend_measure(phi, u, provider);
  const auto rv = extend_measure(phi, v, provider);
  auto r = compare("mayer_vietoris", ruv.value + rx.value, ru.value + rv.value, merged({&ruv, &rx, &ru, &rv}));
  if (!r.pass) r.note = "four-term identity fails";
  return r;
}

CheckReport kunneth_check(const MeasureOnCompacts& phi, const ToricObject& x, const ToricObject& y,
                          const CompactificationProvider& provider) {
  if (!phi.multiplicative()) throw MeasureError("Kunneth check needs a multiplicative measure, got " + phi.name());
  auto place = [&](const ToricObject& obj) {
    auto fan = provider.completion_of(obj.fan_ptr());
    auto cells = toric::transfer_cells(obj.fan(), obj.cells(), *fan);
    if (!cells) throw CompactificationError("completion lost the cones of " + obj.describe());
    return ToricObject(fan, *cells, obj.label());
  };
  const ToricObject prod = toric::product(place(x), place(y));
  const auto rp = extend_measure(phi, prod, provider);
  const auto rx = extend_measure(phi, x, provider);
  const auto ry = extend_measure(phi, y, provider);
  auto r = compare("kunneth", rp.value, rx.value * ry.value, merged({&rp, &rx, &ry}));
  if (!r.pass) r.note = "Phi_c(X x Y) differs from Phi_c(X) Phi_c(Y)";
  return r;
}

}  // namespace motivic::csupport
