#pragma once

// The category of spans X <- U -> Y (U open in X, U -> Y proper), its
// distinguished squares, simple covers and the instance checks built on them.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "motivic/kring.hpp"
#include "motivic/toric.hpp"

namespace motivic::site {

enum class Backend { toric, declared };
std::string to_string(Backend b);

/// X ~> Y: a window open in X and a proper map from the window to Y. An
/// empty window is the zero span.
struct SpanMorphism {
  Backend backend = Backend::toric;
  std::string name;  // declared morphisms only
  std::string source;
  std::string target;
  std::string window;  // declared: an object name, "" for the empty window
  std::string map;     // map descriptor

  // Toric payload; every toric map is the identity on the lattice.
  std::optional<toric::ToricObject> source_obj;
  std::optional<toric::ToricObject> window_obj;
  std::optional<toric::ToricObject> target_obj;

  bool is_zero() const;
  bool is_identity() const;
  /// Source, window, map and target; equal keys mean equal spans.
  std::string key() const;
};

/// Validates that `window` is open in `source` and maps properly to `target`.
SpanMorphism toric_span(const toric::ToricObject& source, const toric::ToricObject& window,
                        const toric::ToricObject& target);
SpanMorphism identity_span(const toric::ToricObject& obj);
SpanMorphism zero_span(const toric::ToricObject& source, const toric::ToricObject& target);

enum class SquareKind { smooth_blowup, abstract_blowup, localization };
std::string to_string(SquareKind k);
SquareKind square_kind_from_string(const std::string& s);

struct ToricCorners {
  toric::ToricObject e, y, c, x;
  /// The ray of the star subdivision that produced the square, if any.
  std::optional<IntVector> ray;
};

/// (E, Y, C, X) with i: C -> X and p: Y -> X; a localization square of U in X
/// is (X \ U, X, empty, U), with p the span X ~> U of window U.
struct DistinguishedSquare {
  std::string id;
  SquareKind kind = SquareKind::abstract_blowup;
  Backend backend = Backend::toric;
  std::string e, y, c, x;
  std::optional<ToricCorners> toric;
  /// Declared backend: asserted conditions (cartesian, closed_immersion,
  /// proper, restriction_iso, open).
  std::map<std::string, bool> flags;
  /// Declared backend: ids of squares that refine this one.
  std::vector<std::string> refinement;

  /// The corner the square covers: X, or U for localization.
  const std::string& base() const { return x; }
};

DistinguishedSquare localization_square(const toric::ToricObject& x, const toric::ToricObject& u,
                                        std::string id = {});
DistinguishedSquare blowup_square(const toric::StarSubdivision& sub, std::string id = {});
/// A toric abstract blowup square from its four corners.
DistinguishedSquare toric_square(SquareKind kind, const toric::ToricObject& e, const toric::ToricObject& y,
                                 const toric::ToricObject& c, const toric::ToricObject& x, std::string id = {});

/// The legs i: C -> X (A -> U) and p: Y -> X as spans; toric squares only.
SpanMorphism leg_i(const DistinguishedSquare& sq);
SpanMorphism leg_p(const DistinguishedSquare& sq);

struct ValidationEntry {
  enum class Status { pass, fail, trusted };
  std::string condition;
  Status status = Status::pass;
  std::string detail;
};
std::string to_string(ValidationEntry::Status s);

struct ValidationReport {
  std::vector<ValidationEntry> entries;
  /// Whether C and Y together hit every orbit of X; unknown on the declared backend.
  std::optional<bool> jointly_surjective;
  bool ok() const;
};

struct SiteObject {
  std::string name;
  int dim = 0;
  bool compact = false;
  std::optional<toric::ToricObject> toric;
};

/// Objects, generating spans and distinguished squares of a finite site.
class SitePresentation {
 public:
  explicit SitePresentation(Backend backend = Backend::toric) : backend_(backend) {}
  Backend backend() const { return backend_; }

  /// Declared objects; dimensions must be >= -1.
  void add_object(SiteObject obj);
  /// Toric objects are named by `describe()`, made unique; equal objects share a name.
  std::string intern(const toric::ToricObject& obj);
  bool has_object(const std::string& name) const;
  const SiteObject& object(const std::string& name) const;
  const std::vector<SiteObject>& objects() const { return objects_; }

  void add_morphism(SpanMorphism m);
  const std::vector<SpanMorphism>& morphisms() const { return morphisms_; }
  const SpanMorphism& morphism(const std::string& name) const;

  /// Toric squares have their corners interned; returns the stored id.
  std::string add_square(DistinguishedSquare sq);
  const std::vector<DistinguishedSquare>& squares() const { return squares_; }
  const DistinguishedSquare& square(const std::string& id) const;
  std::vector<const DistinguishedSquare*> squares_over(const std::string& base) const;

  /// Declared backend: the composite of `first` then `second` is `composite`.
  void add_pullback(const std::string& first, const std::string& second, const std::string& composite);
  std::optional<std::string> pullback(const std::string& first, const std::string& second) const;
  const std::map<std::pair<std::string, std::string>, std::string>& pullbacks() const { return pullbacks_; }

 private:
  Backend backend_;
  std::vector<SiteObject> objects_;
  std::map<std::string, std::size_t> object_index_;
  std::vector<SpanMorphism> morphisms_;
  std::vector<DistinguishedSquare> squares_;
  std::map<std::pair<std::string, std::string>, std::string> pullbacks_;
};

/// second o first. Declared spans need the site's pullback table unless one
/// side is an identity or zero.
SpanMorphism compose(const SpanMorphism& second, const SpanMorphism& first, const SitePresentation* site = nullptr);

ValidationReport validate_square(const DistinguishedSquare& sq, const SitePresentation* site = nullptr);

/// A tree built from isomorphism leaves and square nodes.
class SimpleCover {
 public:
  struct Node {
    std::string object;
    std::string square;  // empty for an isomorphism leaf
    std::shared_ptr<const Node> over_y;
    std::shared_ptr<const Node> over_c;
  };
  struct Leaf {
    std::string source;
    /// Legs from the leaf down to the root, e.g. {"sq1.p", "sq0.i"}.
    std::vector<std::string> path;
    std::string key() const;
    auto operator<=>(const Leaf&) const = default;
  };

  static SimpleCover iso(std::string object);
  static SimpleCover square(const DistinguishedSquare& sq, const SimpleCover& over_y, const SimpleCover& over_c);

  const std::string& root() const { return root_->object; }
  const Node& tree() const { return *root_; }
  /// Replays the two rules from the tree.
  std::vector<Leaf> leaves() const;
  /// Sorted leaf keys, joined; covers with the same leaf family have equal keys.
  std::string key() const;
  /// Square nodes on the longest root-to-leaf path.
  int depth() const;

 private:
  explicit SimpleCover(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

/// All covers of `object` with at most `depth` nested square nodes, sorted by key.
std::vector<SimpleCover> enumerate_simple_covers(const SitePresentation& site, const std::string& object, int depth);

/// Toric sites: the leaves' images jointly reach every orbit of the root.
std::optional<bool> jointly_surjective(const SitePresentation& site, const SimpleCover& cover);

struct CCompleteVerdict {
  bool found = false;
  std::optional<SimpleCover> cover;
  int depth = 0;
  /// Squares built for the pulled-back sieve (pullback, Nagata extension or glue).
  std::vector<DistinguishedSquare> constructed;
  std::string note;
};

/// Looks for a simple cover inside the pullback of the sieve <i, p> along f.
CCompleteVerdict check_c_complete(const SitePresentation& site, const DistinguishedSquare& sq, const SpanMorphism& f,
                                  int depth);

struct DimVerdict {
  enum class Kind { direct, refined, fail };
  Kind kind = Kind::fail;
  std::vector<DistinguishedSquare> refinement;
  std::string note;
};
std::string to_string(DimVerdict::Kind k);

/// dim(C) <= dim(base), dim(Y) <= dim(base), dim(E) < dim(base).
bool dimensions_direct(int e, int y, int c, int base);

DimVerdict check_dim_compatible(const DistinguishedSquare& sq, const SitePresentation* site = nullptr);

}  // namespace motivic::site
