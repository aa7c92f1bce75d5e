#pragma once

// Rational polyhedral fans and locally closed unions of torus orbits.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "motivic/integer.hpp"
#include "motivic/kring.hpp"

namespace motivic::toric {

/// Sorted indices of cones of one fan. Each index stands for the torus orbit
/// O(sigma); a cell set is the union of those orbits.
using CellSet = std::vector<std::size_t>;

/// A cone of a fan, given by indices into the fan's ray list.
struct Cone {
  std::vector<std::size_t> rays;  // sorted
  int dim = 0;
  /// span(cone) = {x : e.x = 0 for every e}
  std::vector<IntVector> equations;
  /// Inward facet normals; `facets[k]` lists the rays on facet k.
  std::vector<IntVector> facet_normals;
  std::vector<std::vector<std::size_t>> facets;

  bool simplicial() const { return static_cast<int>(rays.size()) == dim; }
};

struct FanProperties {
  bool complete = false;
  bool smooth = false;
  int dimension = 0;
};

/// A fan in N_R = R^rank. Cones are closed under faces and ordered by
/// (dimension, ray set); index 0 is always the zero cone. A fan with no rays
/// is the fan of the torus.
class Fan {
 public:
  /// Validates primitivity, strong convexity, extremality of every listed
  /// ray and the fan condition on every pair of maximal cones.
  static Fan build(std::size_t rank, std::vector<IntVector> rays,
                   const std::vector<std::vector<std::size_t>>& maximal_cones);

  std::size_t rank() const { return rank_; }
  const std::vector<IntVector>& rays() const { return rays_; }
  const std::vector<Cone>& cones() const { return cones_; }
  const Cone& cone(std::size_t index) const { return cones_.at(index); }
  std::size_t size() const { return cones_.size(); }

  std::optional<std::size_t> find(const std::vector<std::size_t>& ray_set) const;
  std::optional<std::size_t> find_ray(const IntVector& ray) const;
  /// Maximal cones in index order.
  std::vector<std::size_t> maximal() const;

  /// `face` is a face of `cone` (ray-set inclusion).
  bool is_face(std::size_t face, std::size_t cone) const;
  std::vector<std::size_t> faces(std::size_t cone) const;
  /// Cones having `cone` as a face.
  std::vector<std::size_t> star(std::size_t cone) const;

  bool contains(std::size_t cone, const IntVector& v) const;
  bool in_relative_interior(std::size_t cone, const IntVector& v) const;
  /// The cone whose relative interior contains v, if v lies in the support.
  std::optional<std::size_t> locate(const IntVector& v) const;
  /// Sum of the rays of a cone, a point of its relative interior.
  IntVector interior_point(std::size_t cone) const;

  bool is_complete() const;
  bool is_smooth() const;
  FanProperties properties() const;
  /// f[k] = number of k-dimensional cones.
  std::vector<std::size_t> f_vector() const;

  /// Same rays in the same order and the same cones.
  bool operator==(const Fan& other) const;

  /// Assembles a fan from maximal cones known to satisfy the fan condition.
  static Fan assemble(std::size_t rank, std::vector<IntVector> rays,
                      const std::vector<std::vector<std::size_t>>& maximal_cones, bool validate);

 private:
  std::size_t rank_ = 0;
  std::vector<IntVector> rays_;
  std::vector<Cone> cones_;
  std::map<std::vector<std::size_t>, std::size_t> index_;
};

using FanPtr = std::shared_ptr<const Fan>;

// Builtin fans.
Fan projective_space(std::size_t n);
Fan affine_space(std::size_t n);
Fan torus(std::size_t n);
/// Rays e1, e2, -e1 + a e2, -e2.
Fan hirzebruch(long a);
Fan product(const Fan& a, const Fan& b);
/// P<n>, A<n>, Gm, P1xP1, P1^<k>, Hirzebruch(<a>); nullopt for other names.
std::optional<Fan> named_fan(const std::string& name);

/// Sum over cones of (L - 1)^(rank - dim); `cells` defaults to every cone.
KClass class_of(const Fan& fan, const std::optional<CellSet>& cells = std::nullopt);

/// Coefficients of sum_k f_k (t - 1)^(rank - k), lowest degree first. For a
/// complete simplicial fan these are the h-numbers.
std::vector<Integer> h_vector(const Fan& fan);

/// Completion of a fan of rank <= 2 by angular gap filling. Existing rays
/// keep their indices; new rays are appended. Complete input is returned
/// unchanged.
Fan complete_surface(const Fan& fan);

/// Extreme rays (primitive) of the intersection of two cones of the same rank.
std::vector<IntVector> intersection_rays(const Fan& a, std::size_t cone_a, const Fan& b, std::size_t cone_b);

/// The fan of all intersections of cones of `a` and `b`; it refines both over
/// the common support. Rays of `a` come first, then new rays in order.
Fan common_refinement(const Fan& a, const Fan& b);

/// A locally closed (or arbitrary) union of torus orbits of a fan.
class ToricObject {
 public:
  ToricObject() = default;
  ToricObject(FanPtr fan, CellSet cells, std::string label = {});
  static ToricObject whole(FanPtr fan, std::string label = {});
  static ToricObject empty_in(FanPtr fan);

  const Fan& fan() const { return *fan_; }
  const FanPtr& fan_ptr() const { return fan_; }
  const CellSet& cells() const { return cells_; }
  const std::string& label() const { return label_; }
  ToricObject with_label(std::string label) const;

  bool empty() const { return cells_.empty(); }
  bool contains_cell(std::size_t cone) const;
  bool is_whole() const { return cells_.size() == fan_->size(); }
  /// Largest orbit dimension, -1 when empty.
  int dimension() const;

  /// Down-closed: an open subvariety of the fan's variety.
  bool is_open() const;
  /// Up-closed: a closed subvariety.
  bool is_closed() const;
  /// Convex in the face order: open in its closure.
  bool is_locally_closed() const;
  /// Complete (proper over the base field). Requires local closedness.
  bool is_compact() const;
  /// Irreducible with every cone smooth.
  bool is_smooth() const;

  /// Orbits in the closure (cones having some cell as a face).
  ToricObject closure() const;
  /// Cells of *this not in `other` (same fan).
  ToricObject minus(const ToricObject& other) const;
  ToricObject intersect(const ToricObject& other) const;
  ToricObject unite(const ToricObject& other) const;
  /// `other`'s cells are a subset of ours (same fan).
  bool includes(const ToricObject& other) const;
  /// Closures, inside *this, of the minimal cells.
  std::vector<ToricObject> components() const;

  KClass klass() const;
  /// e.g. "P2{0,1,4}"
  std::string describe() const;

  /// Same fan (structurally) and same cells.
  bool operator==(const ToricObject& other) const;

 private:
  FanPtr fan_;
  CellSet cells_;
  std::string label_;
};

/// The subfan on `cells` as an open subvariety; throws unless face-closed.
ToricObject open_subfan(FanPtr fan, CellSet cells);

/// Product object in the product fan.
ToricObject product(const ToricObject& a, const ToricObject& b);

/// Cells of `cells` (a cell set of `from`) re-indexed in `to` by ray vectors;
/// nullopt when some cone has no counterpart.
std::optional<CellSet> transfer_cells(const Fan& from, const CellSet& cells, const Fan& to);

// Maps between objects over the identity of the lattice.

/// For each source cell, the smallest target-fan cone containing it; nullopt
/// if some source cone lies in no target cone or lands outside the target cells.
std::optional<std::vector<std::size_t>> cell_images(const ToricObject& source, const ToricObject& target);
/// The identity-lattice map source -> target exists and is proper.
bool is_proper_map(const ToricObject& source, const ToricObject& target);
/// Same fan, source cells form a closed subset of the target cells.
bool is_closed_immersion(const ToricObject& source, const ToricObject& target);
/// Same fan, source cells form an open subset of the target cells.
bool is_open_immersion(const ToricObject& source, const ToricObject& target);
/// Cells of `source` whose image lies in `region` (a target cell set).
ToricObject preimage(const ToricObject& source, const ToricObject& region);

/// Star subdivision of a fan at a primitive vector, with the corners of the
/// resulting abstract blowup square.
struct StarSubdivision {
  FanPtr fan;
  std::size_t center = 0;  // cone of the input fan whose interior holds the ray
  ToricObject e;           // preimage of C
  ToricObject y;           // subdivided variety
  ToricObject c;           // orbit closure V(center)
  ToricObject x;           // input variety
  bool smooth_blowup = false;
};

StarSubdivision star_subdivide(const FanPtr& fan, const IntVector& ray);

}  // namespace motivic::toric
