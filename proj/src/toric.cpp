#include "motivic/toric.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "motivic/error.hpp"
#include "motivic/lattice.hpp"

namespace motivic::toric {

namespace {

using RaySet = std::vector<std::size_t>;

std::string vec_text(const IntVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i].str();
  return out + ")";
}

std::string set_text(const RaySet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

bool subset(const RaySet& a, const RaySet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

RaySet without(const RaySet& s, std::size_t k) {
  RaySet out;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i != k) out.push_back(s[i]);
  return out;
}

// A functional vanishing on `on`, nonzero on some generator.
IntVector normal_to(const std::vector<IntVector>& on, const std::vector<IntVector>& gens, std::size_t n) {
  for (auto& b : lattice::kernel(on, n))
    for (const auto& g : gens)
      if (lattice::dot(b, g) != 0) return b;
  throw GeometryError("degenerate facet computation");
}

Cone make_cone(std::size_t n, const std::vector<IntVector>& all, RaySet idx) {
  Cone c;
  c.rays = std::move(idx);
  std::vector<IntVector> gens;
  for (auto i : c.rays) gens.push_back(all[i]);
  c.dim = static_cast<int>(lattice::rank(gens));
  c.equations = lattice::kernel(gens, n);
  if (c.dim == 0) return c;
  if (c.simplicial()) {
    for (std::size_t k = 0; k < gens.size(); ++k) {
      std::vector<IntVector> rest;
      for (std::size_t j = 0; j < gens.size(); ++j)
        if (j != k) rest.push_back(gens[j]);
      IntVector u = normal_to(rest, {gens[k]}, n);
      if (lattice::dot(u, gens[k]) < 0) u = lattice::negate(std::move(u));
      c.facet_normals.push_back(std::move(u));
      c.facets.push_back(without(c.rays, k));
    }
    return c;
  }
  // Non-simplicial: candidate hyperplanes through dim-1 independent rays.
  const std::size_t m = gens.size(), k = static_cast<std::size_t>(c.dim - 1);
  std::set<RaySet> seen;
  std::vector<bool> choose(m, false);
  std::fill(choose.begin(), choose.begin() + static_cast<long>(k), true);
  do {
    std::vector<IntVector> on;
    for (std::size_t j = 0; j < m; ++j)
      if (choose[j]) on.push_back(gens[j]);
    if (lattice::rank(on) != k) continue;
    IntVector u = normal_to(on, gens, n);
    int sign = 0;
    bool mixed = false;
    RaySet facet;
    for (std::size_t j = 0; j < m; ++j) {
      const Integer d = lattice::dot(u, gens[j]);
      if (d == 0) {
        facet.push_back(c.rays[j]);
        continue;
      }
      const int s = d > 0 ? 1 : -1;
      if (sign == 0) sign = s;
      if (s != sign) mixed = true;
    }
    if (mixed || !seen.insert(facet).second) continue;
    if (sign < 0) u = lattice::negate(std::move(u));
    c.facet_normals.push_back(std::move(u));
    c.facets.push_back(std::move(facet));
  } while (std::prev_permutation(choose.begin(), choose.end()));
  return c;
}

// Ray-set faces of a cone by recursion through facets.
void collect_faces(const RaySet& cone, std::map<RaySet, Cone>& geometry, std::set<RaySet>& out, std::size_t n,
                   const std::vector<IntVector>& rays) {
  if (!out.insert(cone).second) return;
  auto it = geometry.find(cone);
  if (it == geometry.end()) it = geometry.emplace(cone, make_cone(n, rays, cone)).first;
  const auto facets = it->second.facets;
  for (const auto& f : facets) collect_faces(f, geometry, out, n, rays);
  if (facets.empty() && !cone.empty()) collect_faces({}, geometry, out, n, rays);
}

bool pointed(std::size_t n, const std::vector<IntVector>& gens) {
  // Infeasible: lambda >= 0, sum lambda > 0, sum lambda_i g_i = 0.
  lattice::HomogeneousSystem sys;
  sys.variables = gens.size();
  IntVector total(gens.size(), Integer(1));
  for (std::size_t i = 0; i < gens.size(); ++i) {
    IntVector unit(gens.size());
    unit[i] = 1;
    sys.nonnegative.push_back(unit);
  }
  sys.positive.push_back(total);
  for (std::size_t k = 0; k < n; ++k) {
    IntVector row(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) row[i] = gens[i][k];
    sys.zero.push_back(row);
  }
  return !lattice::feasible(sys);
}

bool extreme(std::size_t n, const std::vector<IntVector>& gens, std::size_t which) {
  // Infeasible: lambda_j >= 0 (j != which), mu > 0, sum lambda_j g_j = mu g_which.
  lattice::HomogeneousSystem sys;
  const std::size_t vars = gens.size();  // slot `which` holds mu
  sys.variables = vars;
  for (std::size_t i = 0; i < vars; ++i) {
    IntVector unit(vars);
    unit[i] = 1;
    (i == which ? sys.positive : sys.nonnegative).push_back(unit);
  }
  for (std::size_t k = 0; k < n; ++k) {
    IntVector row(vars);
    for (std::size_t i = 0; i < vars; ++i) row[i] = i == which ? Integer(-gens[i][k]) : gens[i][k];
    sys.zero.push_back(row);
  }
  return !lattice::feasible(sys);
}

// Angular order in the plane, starting at the positive x-axis.
int half_plane(const IntVector& v) { return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1; }

Integer cross(const IntVector& a, const IntVector& b) { return a[0] * b[1] - a[1] * b[0]; }

bool angle_less(const IntVector& a, const IntVector& b) {
  const int ha = half_plane(a), hb = half_plane(b);
  if (ha != hb) return ha < hb;
  return cross(a, b) > 0;
}

std::vector<Integer> binomial_row(std::size_t k) {
  std::vector<Integer> row(k + 1);
  row[0] = 1;
  for (std::size_t i = 1; i <= k; ++i) row[i] = row[i - 1] * Integer(k - i + 1) / Integer(i);
  return row;
}

// Coefficients of (t - 1)^k.
std::vector<Integer> shifted_power(std::size_t k) {
  auto row = binomial_row(k);
  std::vector<Integer> out(k + 1);
  for (std::size_t i = 0; i <= k; ++i) out[i] = ((k - i) % 2 ? -row[i] : row[i]);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Fan

Fan Fan::build(std::size_t rank, std::vector<IntVector> rays, const std::vector<std::vector<std::size_t>>& maximal_cones) {
  return assemble(rank, std::move(rays), maximal_cones, true);
}

Fan Fan::assemble(std::size_t rank, std::vector<IntVector> rays,
                  const std::vector<std::vector<std::size_t>>& maximal_cones, bool validate) {
  Fan fan;
  fan.rank_ = rank;
  std::vector<RaySet> listed;
  for (const auto& mc : maximal_cones) {
    RaySet s(mc.begin(), mc.end());
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw GeometryError("maximal cone " + set_text(s) + " repeats a ray");
    for (auto i : s)
      if (i >= rays.size()) throw GeometryError("maximal cone " + set_text(s) + " uses unknown ray " + std::to_string(i));
    listed.push_back(std::move(s));
  }
  std::sort(listed.begin(), listed.end());
  listed.erase(std::unique(listed.begin(), listed.end()), listed.end());

  if (validate) {
    std::set<IntVector> distinct;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      const auto& r = rays[i];
      if (r.size() != rank)
        throw GeometryError("ray " + std::to_string(i) + " has length " + std::to_string(r.size()) + ", expected " +
                            std::to_string(rank));
      if (lattice::is_zero(r)) throw GeometryError("ray " + std::to_string(i) + " is zero");
      if (lattice::content(r) != 1) throw GeometryError("ray " + std::to_string(i) + " " + vec_text(r) + " is not primitive");
      if (!distinct.insert(r).second) throw GeometryError("ray " + vec_text(r) + " is listed twice");
    }
    std::vector<bool> used(rays.size(), false);
    for (const auto& s : listed) {
      std::vector<IntVector> gens;
      for (auto i : s) {
        gens.push_back(rays[i]);
        used[i] = true;
      }
      if (!pointed(rank, gens)) throw GeometryError("cone " + set_text(s) + " is not strongly convex");
      if (lattice::rank(gens) != gens.size())
        for (std::size_t k = 0; k < gens.size(); ++k)
          if (!extreme(rank, gens, k))
            throw GeometryError("ray " + std::to_string(s[k]) + " is not an extreme ray of cone " + set_text(s));
    }
    for (std::size_t i = 0; i < rays.size(); ++i)
      if (!used[i]) throw GeometryError("ray " + std::to_string(i) + " belongs to no cone");
  }

  std::map<RaySet, Cone> geometry;
  std::vector<std::set<RaySet>> face_sets(listed.size());
  std::set<RaySet> all{RaySet{}};
  for (std::size_t k = 0; k < listed.size(); ++k) {
    collect_faces(listed[k], geometry, face_sets[k], rank, rays);
    all.insert(face_sets[k].begin(), face_sets[k].end());
  }
  if (!geometry.count({})) geometry.emplace(RaySet{}, make_cone(rank, rays, {}));

  if (validate) {
    for (std::size_t a = 0; a < listed.size(); ++a) {
      for (std::size_t b = 0; b < listed.size(); ++b) {
        if (a == b) continue;
        RaySet common;
        std::set_intersection(listed[a].begin(), listed[a].end(), listed[b].begin(), listed[b].end(),
                              std::back_inserter(common));
        if (!face_sets[a].count(common) || !face_sets[b].count(common))
          throw GeometryError("cones " + set_text(listed[a]) + " and " + set_text(listed[b]) +
                              " do not meet in a common face");
        const Cone& ca = geometry.at(listed[a]);
        const Cone& cb = geometry.at(listed[b]);
        for (std::size_t f = 0; f < ca.facets.size(); ++f) {
          if (!subset(common, ca.facets[f])) continue;
          lattice::HomogeneousSystem sys;
          sys.variables = rank;
          sys.zero = ca.equations;
          sys.zero.insert(sys.zero.end(), cb.equations.begin(), cb.equations.end());
          sys.nonnegative = ca.facet_normals;
          sys.nonnegative.insert(sys.nonnegative.end(), cb.facet_normals.begin(), cb.facet_normals.end());
          sys.positive.push_back(ca.facet_normals[f]);
          if (lattice::feasible(sys))
            throw GeometryError("cones " + set_text(listed[a]) + " and " + set_text(listed[b]) +
                                " overlap beyond a common face");
        }
      }
    }
  }

  std::vector<RaySet> order(all.begin(), all.end());
  for (const auto& s : order)
    if (!geometry.count(s)) geometry.emplace(s, make_cone(rank, rays, s));
  std::stable_sort(order.begin(), order.end(), [&](const RaySet& x, const RaySet& y) {
    const int dx = geometry.at(x).dim, dy = geometry.at(y).dim;
    if (dx != dy) return dx < dy;
    return x < y;
  });
  fan.rays_ = std::move(rays);
  for (const auto& s : order) {
    fan.index_.emplace(s, fan.cones_.size());
    fan.cones_.push_back(geometry.at(s));
  }
  return fan;
}

std::optional<std::size_t> Fan::find(const std::vector<std::size_t>& ray_set) const {
  auto it = index_.find(ray_set);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Fan::find_ray(const IntVector& ray) const {
  for (std::size_t i = 0; i < rays_.size(); ++i)
    if (rays_[i] == ray) return i;
  return std::nullopt;
}

std::vector<std::size_t> Fan::maximal() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cones_.size(); ++i) {
    bool is_max = true;
    for (std::size_t j = i + 1; j < cones_.size() && is_max; ++j)
      if (cones_[j].dim > cones_[i].dim && subset(cones_[i].rays, cones_[j].rays)) is_max = false;
    if (is_max) out.push_back(i);
  }
  return out;
}

bool Fan::is_face(std::size_t face, std::size_t cone) const {
  return subset(cones_.at(face).rays, cones_.at(cone).rays);
}

std::vector<std::size_t> Fan::faces(std::size_t cone) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cones_.size(); ++i)
    if (is_face(i, cone)) out.push_back(i);
  return out;
}

std::vector<std::size_t> Fan::star(std::size_t cone) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cones_.size(); ++i)
    if (is_face(cone, i)) out.push_back(i);
  return out;
}

bool Fan::contains(std::size_t cone, const IntVector& v) const {
  const Cone& c = cones_.at(cone);
  for (const auto& e : c.equations)
    if (lattice::dot(e, v) != 0) return false;
  for (const auto& u : c.facet_normals)
    if (lattice::dot(u, v) < 0) return false;
  return true;
}

bool Fan::in_relative_interior(std::size_t cone, const IntVector& v) const {
  const Cone& c = cones_.at(cone);
  for (const auto& e : c.equations)
    if (lattice::dot(e, v) != 0) return false;
  for (const auto& u : c.facet_normals)
    if (lattice::dot(u, v) <= 0) return false;
  return true;
}

std::optional<std::size_t> Fan::locate(const IntVector& v) const {
  if (v.size() != rank_) throw GeometryError("vector " + vec_text(v) + " has the wrong length for this fan");
  for (std::size_t i = 0; i < cones_.size(); ++i)
    if (in_relative_interior(i, v)) return i;
  return std::nullopt;
}

IntVector Fan::interior_point(std::size_t cone) const {
  IntVector p(rank_);
  for (auto r : cones_.at(cone).rays) p = lattice::add(p, rays_[r]);
  return p;
}

bool Fan::is_complete() const {
  const std::size_t n = rank_;
  if (n == 0) return true;
  if (n == 1) return find_ray({Integer(1)}).has_value() && find_ray({Integer(-1)}).has_value();
  if (n == 2) {
    std::vector<std::size_t> order(rays_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (order.size() < 3) return false;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return angle_less(rays_[a], rays_[b]); });
    for (std::size_t k = 0; k < order.size(); ++k) {
      RaySet pair{order[k], order[(k + 1) % order.size()]};
      std::sort(pair.begin(), pair.end());
      auto c = find(pair);
      if (!c || cones_[*c].dim != 2) return false;
    }
    return true;
  }
  bool any = false;
  for (auto m : maximal()) {
    if (cones_[m].dim != static_cast<int>(n)) return false;
    any = true;
  }
  if (!any) return false;
  for (std::size_t i = 0; i < cones_.size(); ++i) {
    if (cones_[i].dim != static_cast<int>(n) - 1) continue;
    std::size_t count = 0;
    for (auto j : star(i))
      if (cones_[j].dim == static_cast<int>(n)) ++count;
    if (count != 2) return false;
  }
  return true;
}

bool Fan::is_smooth() const {
  for (const auto& c : cones_) {
    if (!c.simplicial()) return false;
    std::vector<IntVector> gens;
    for (auto r : c.rays) gens.push_back(rays_[r]);
    if (!lattice::extends_to_basis(gens, rank_)) return false;
  }
  return true;
}

FanProperties Fan::properties() const { return {is_complete(), is_smooth(), static_cast<int>(rank_)}; }

std::vector<std::size_t> Fan::f_vector() const {
  std::vector<std::size_t> f(rank_ + 1, 0);
  for (const auto& c : cones_) ++f[static_cast<std::size_t>(c.dim)];
  return f;
}

bool Fan::operator==(const Fan& other) const {
  if (this == &other) return true;
  return rank_ == other.rank_ && rays_ == other.rays_ && index_.size() == other.index_.size() &&
         std::equal(index_.begin(), index_.end(), other.index_.begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first; });
}

// ---------------------------------------------------------------------------
// Builtin fans

namespace {

IntVector unit_vector(std::size_t n, std::size_t i, long value = 1) {
  IntVector v(n);
  v[i] = value;
  return v;
}

}  // namespace

Fan projective_space(std::size_t n) {
  std::vector<IntVector> rays;
  for (std::size_t i = 0; i < n; ++i) rays.push_back(unit_vector(n, i));
  std::vector<std::vector<std::size_t>> maximal;
  if (n > 0) {
    rays.push_back(IntVector(n, Integer(-1)));
    for (std::size_t skip = 0; skip <= n; ++skip) {
      std::vector<std::size_t> cone;
      for (std::size_t i = 0; i <= n; ++i)
        if (i != skip) cone.push_back(i);
      maximal.push_back(cone);
    }
  }
  return Fan::assemble(n, std::move(rays), maximal, false);
}

Fan affine_space(std::size_t n) {
  std::vector<IntVector> rays;
  std::vector<std::size_t> cone;
  for (std::size_t i = 0; i < n; ++i) {
    rays.push_back(unit_vector(n, i));
    cone.push_back(i);
  }
  return Fan::assemble(n, std::move(rays), {cone}, false);
}

Fan torus(std::size_t n) { return Fan::assemble(n, {}, {}, false); }

Fan hirzebruch(long a) {
  std::vector<IntVector> rays{{1, 0}, {0, 1}, {-1, a}, {0, -1}};
  return Fan::build(2, std::move(rays), {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

Fan product(const Fan& a, const Fan& b) {
  const std::size_t n = a.rank() + b.rank();
  std::vector<IntVector> rays;
  for (const auto& r : a.rays()) {
    IntVector v(r);
    v.resize(n);
    rays.push_back(std::move(v));
  }
  for (const auto& r : b.rays()) {
    IntVector v(a.rank());
    v.insert(v.end(), r.begin(), r.end());
    rays.push_back(std::move(v));
  }
  std::vector<std::vector<std::size_t>> maximal;
  const std::size_t offset = a.rays().size();
  for (auto ma : a.maximal()) {
    for (auto mb : b.maximal()) {
      std::vector<std::size_t> cone = a.cone(ma).rays;
      for (auto r : b.cone(mb).rays) cone.push_back(r + offset);
      maximal.push_back(cone);
    }
  }
  return Fan::assemble(n, std::move(rays), maximal, false);
}

std::optional<Fan> named_fan(const std::string& name) {
  auto number = [](const std::string& digits) -> std::optional<long> {
    if (digits.empty() || digits.size() > 4) return std::nullopt;
    std::size_t start = digits[0] == '-' ? 1 : 0;
    if (start == digits.size()) return std::nullopt;
    for (std::size_t i = start; i < digits.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(digits[i]))) return std::nullopt;
    return std::stol(digits);
  };
  if (name == "Gm") return torus(1);
  if (name == "P1xP1") return product(projective_space(1), projective_space(1));
  if (name.rfind("P1^", 0) == 0) {
    auto k = number(name.substr(3));
    if (!k || *k < 1 || *k > 8) return std::nullopt;
    Fan f = projective_space(1);
    for (long i = 1; i < *k; ++i) f = product(f, projective_space(1));
    return f;
  }
  if (name.rfind("Gm^", 0) == 0) {
    auto k = number(name.substr(3));
    if (!k || *k < 0 || *k > 8) return std::nullopt;
    return torus(static_cast<std::size_t>(*k));
  }
  if (name.rfind("Hirzebruch(", 0) == 0 && name.back() == ')') {
    auto a = number(name.substr(11, name.size() - 12));
    if (!a) return std::nullopt;
    return hirzebruch(*a);
  }
  if (name.size() >= 2 && (name[0] == 'P' || name[0] == 'A' || name[0] == 'F')) {
    auto k = number(name.substr(1));
    if (!k || *k < 0) return std::nullopt;
    if (name[0] == 'F') return hirzebruch(*k);
    if (*k > 8) return std::nullopt;
    return name[0] == 'P' ? projective_space(static_cast<std::size_t>(*k)) : affine_space(static_cast<std::size_t>(*k));
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Classes

KClass class_of(const Fan& fan, const std::optional<CellSet>& cells) {
  std::vector<std::size_t> count(fan.rank() + 1, 0);
  if (cells) {
    for (auto c : *cells) {
      if (c >= fan.size()) throw GeometryError("cell " + std::to_string(c) + " is not a cone of the fan");
      ++count[fan.rank() - static_cast<std::size_t>(fan.cone(c).dim)];
    }
  } else {
    for (const auto& c : fan.cones()) ++count[fan.rank() - static_cast<std::size_t>(c.dim)];
  }
  std::vector<Integer> coeffs(fan.rank() + 1);
  for (std::size_t k = 0; k <= fan.rank(); ++k) {
    if (!count[k]) continue;
    const auto p = shifted_power(k);
    for (std::size_t i = 0; i <= k; ++i) coeffs[i] += Integer(count[k]) * p[i];
  }
  return KClass::polynomial(coeffs);
}

std::vector<Integer> h_vector(const Fan& fan) {
  const auto f = fan.f_vector();
  const std::size_t n = fan.rank();
  std::vector<Integer> h(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const auto p = shifted_power(n - k);
    for (std::size_t i = 0; i < p.size(); ++i) h[i] += Integer(f[k]) * p[i];
  }
  return h;
}

Fan complete_surface(const Fan& fan) {
  if (fan.rank() > 2)
    throw GeometryError("automatic completion is limited to rank <= 2; supply a completion for rank " +
                        std::to_string(fan.rank()));
  if (fan.is_complete()) return fan;
  std::vector<IntVector> rays = fan.rays();
  if (fan.rank() == 1) {
    std::vector<std::vector<std::size_t>> maximal;
    for (long s : {1L, -1L}) {
      IntVector r{Integer(s)};
      auto it = std::find(rays.begin(), rays.end(), r);
      if (it == rays.end()) {
        rays.push_back(r);
        it = rays.end() - 1;
      }
      maximal.push_back({static_cast<std::size_t>(it - rays.begin())});
    }
    return Fan::build(1, std::move(rays), maximal);
  }
  if (rays.empty()) {
    rays.push_back({1, 0});
    rays.push_back({0, 1});
  }
  // Insert rays until every angular gap is below pi.
  while (true) {
    std::vector<std::size_t> order(rays.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return angle_less(rays[a], rays[b]); });
    bool inserted = false;
    for (std::size_t k = 0; k < order.size() && !inserted; ++k) {
      const IntVector& a = rays[order[k]];
      const IntVector& b = rays[order[(k + 1) % order.size()]];
      const Integer cr = cross(a, b);
      const bool wide = order.size() == 1 || cr < 0 || (cr == 0 && lattice::dot(a, b) < 0);
      if (!wide) continue;
      IntVector sum = lattice::add(a, b);
      IntVector fresh = lattice::is_zero(sum) ? IntVector{-a[1], a[0]} : lattice::primitive(lattice::negate(sum));
      rays.push_back(lattice::primitive(std::move(fresh)));
      inserted = true;
    }
    if (!inserted) break;
  }
  std::vector<std::size_t> order(rays.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return angle_less(rays[a], rays[b]); });
  std::vector<std::vector<std::size_t>> maximal;
  for (std::size_t k = 0; k < order.size(); ++k) maximal.push_back({order[k], order[(k + 1) % order.size()]});
  return Fan::build(2, std::move(rays), maximal);
}

std::vector<IntVector> intersection_rays(const Fan& a, std::size_t cone_a, const Fan& b, std::size_t cone_b) {
  if (a.rank() != b.rank()) throw GeometryError("cannot intersect cones of different rank");
  const std::size_t n = a.rank();
  const Cone& ca = a.cone(cone_a);
  const Cone& cb = b.cone(cone_b);
  std::vector<IntVector> eqs = ca.equations;
  eqs.insert(eqs.end(), cb.equations.begin(), cb.equations.end());
  std::vector<IntVector> ineqs = ca.facet_normals;
  ineqs.insert(ineqs.end(), cb.facet_normals.begin(), cb.facet_normals.end());
  auto admissible = [&](const IntVector& v) {
    return std::all_of(ineqs.begin(), ineqs.end(), [&](const IntVector& u) { return lattice::dot(u, v) >= 0; });
  };
  std::set<IntVector> found;
  const std::size_t m = ineqs.size();
  // Every extreme ray is cut out by the equations and some set of tight inequalities.
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) >= n) continue;
    std::vector<IntVector> rows = eqs;
    for (std::size_t k = 0; k < m; ++k)
      if (mask >> k & 1) rows.push_back(ineqs[k]);
    const auto ker = lattice::kernel(rows, n);
    if (ker.size() != 1) continue;
    for (const auto& v : {ker[0], lattice::negate(ker[0])})
      if (admissible(v)) found.insert(lattice::primitive(v));
  }
  return {found.begin(), found.end()};
}

Fan common_refinement(const Fan& a, const Fan& b) {
  if (a.rank() != b.rank()) throw GeometryError("cannot refine fans of different rank");
  std::vector<IntVector> rays = a.rays();
  auto index_of = [&](const IntVector& r) {
    auto it = std::find(rays.begin(), rays.end(), r);
    if (it != rays.end()) return static_cast<std::size_t>(it - rays.begin());
    rays.push_back(r);
    return rays.size() - 1;
  };
  std::vector<std::vector<std::size_t>> cones;
  for (auto ma : a.maximal())
    for (auto mb : b.maximal()) {
      std::vector<std::size_t> idx;
      for (const auto& r : intersection_rays(a, ma, b, mb)) idx.push_back(index_of(r));
      if (!idx.empty()) cones.push_back(std::move(idx));
    }
  return Fan::assemble(a.rank(), std::move(rays), cones, false);
}

// ---------------------------------------------------------------------------
// ToricObject

ToricObject::ToricObject(FanPtr fan, CellSet cells, std::string label)
    : fan_(std::move(fan)), cells_(std::move(cells)), label_(std::move(label)) {
  if (!fan_) throw GeometryError("toric object without a fan");
  std::sort(cells_.begin(), cells_.end());
  cells_.erase(std::unique(cells_.begin(), cells_.end()), cells_.end());
  if (!cells_.empty() && cells_.back() >= fan_->size())
    throw GeometryError("cell " + std::to_string(cells_.back()) + " is not a cone of the fan");
}

ToricObject ToricObject::whole(FanPtr fan, std::string label) {
  CellSet all(fan->size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return ToricObject(std::move(fan), std::move(all), std::move(label));
}

ToricObject ToricObject::empty_in(FanPtr fan) { return ToricObject(std::move(fan), {}, "empty"); }

ToricObject ToricObject::with_label(std::string label) const {
  ToricObject out = *this;
  out.label_ = std::move(label);
  return out;
}

bool ToricObject::contains_cell(std::size_t cone) const {
  return std::binary_search(cells_.begin(), cells_.end(), cone);
}

int ToricObject::dimension() const {
  int d = -1;
  for (auto c : cells_) d = std::max(d, static_cast<int>(fan_->rank()) - fan_->cone(c).dim);
  return d;
}

bool ToricObject::is_open() const {
  for (auto c : cells_)
    for (auto f : fan_->faces(c))
      if (!contains_cell(f)) return false;
  return true;
}

bool ToricObject::is_closed() const {
  for (auto c : cells_)
    for (auto s : fan_->star(c))
      if (!contains_cell(s)) return false;
  return true;
}

bool ToricObject::is_locally_closed() const {
  for (std::size_t b = 0; b < fan_->size(); ++b) {
    if (contains_cell(b)) continue;
    bool above = false, below = false;
    for (auto c : cells_) {
      if (fan_->is_face(c, b)) above = true;
      if (fan_->is_face(b, c)) below = true;
    }
    if (above && below) return false;
  }
  return true;
}

bool ToricObject::is_compact() const {
  if (!is_locally_closed()) return false;
  const int n = static_cast<int>(fan_->rank());
  for (const auto& component : components()) {
    const auto& t = component.cells();
    for (auto c : t) {
      const int d = fan_->cone(c).dim;
      bool maximal = true;
      std::size_t top = 0;
      for (auto s : t) {
        if (s == c || !fan_->is_face(c, s)) continue;
        maximal = false;
        if (fan_->cone(s).dim == n) ++top;
      }
      if (maximal && d != n) return false;
      if (d == n - 1 && top != 2) return false;
    }
  }
  return true;
}

bool ToricObject::is_smooth() const {
  if (empty()) return true;
  if (components().size() != 1) return false;
  for (auto c : cells_) {
    const auto& cone = fan_->cone(c);
    if (!cone.simplicial()) return false;
    std::vector<IntVector> gens;
    for (auto r : cone.rays) gens.push_back(fan_->rays()[r]);
    if (!lattice::extends_to_basis(gens, fan_->rank())) return false;
  }
  return true;
}

ToricObject ToricObject::closure() const {
  CellSet out;
  for (std::size_t b = 0; b < fan_->size(); ++b)
    for (auto c : cells_)
      if (fan_->is_face(c, b)) {
        out.push_back(b);
        break;
      }
  return ToricObject(fan_, std::move(out));
}

namespace {

void require_same_fan(const ToricObject& a, const ToricObject& b) {
  if (a.fan_ptr() != b.fan_ptr() && !(a.fan() == b.fan()))
    throw GeometryError("toric objects live in different fans");
}

}  // namespace

ToricObject ToricObject::minus(const ToricObject& other) const {
  require_same_fan(*this, other);
  CellSet out;
  std::set_difference(cells_.begin(), cells_.end(), other.cells_.begin(), other.cells_.end(), std::back_inserter(out));
  return ToricObject(fan_, std::move(out));
}

ToricObject ToricObject::intersect(const ToricObject& other) const {
  require_same_fan(*this, other);
  CellSet out;
  std::set_intersection(cells_.begin(), cells_.end(), other.cells_.begin(), other.cells_.end(),
                        std::back_inserter(out));
  return ToricObject(fan_, std::move(out));
}

ToricObject ToricObject::unite(const ToricObject& other) const {
  require_same_fan(*this, other);
  CellSet out;
  std::set_union(cells_.begin(), cells_.end(), other.cells_.begin(), other.cells_.end(), std::back_inserter(out));
  return ToricObject(fan_, std::move(out));
}

bool ToricObject::includes(const ToricObject& other) const {
  require_same_fan(*this, other);
  return std::includes(cells_.begin(), cells_.end(), other.cells_.begin(), other.cells_.end());
}

std::vector<ToricObject> ToricObject::components() const {
  std::vector<ToricObject> out;
  for (auto c : cells_) {
    bool minimal = true;
    for (auto d : cells_)
      if (d != c && fan_->is_face(d, c)) {
        minimal = false;
        break;
      }
    if (!minimal) continue;
    CellSet comp;
    for (auto d : cells_)
      if (fan_->is_face(c, d)) comp.push_back(d);
    out.emplace_back(fan_, std::move(comp));
  }
  return out;
}

KClass ToricObject::klass() const { return class_of(*fan_, cells_); }

std::string ToricObject::describe() const {
  const std::string base = label_.empty() ? "fan" : label_;
  if (!label_.empty() && is_whole()) return label_;
  return base + set_text(cells_);
}

bool ToricObject::operator==(const ToricObject& other) const {
  return cells_ == other.cells_ && (fan_ == other.fan_ || *fan_ == *other.fan_);
}

ToricObject open_subfan(FanPtr fan, CellSet cells) {
  ToricObject u(std::move(fan), std::move(cells));
  if (!u.is_open()) throw GeometryError("cone subset is not face-closed, so it is not an open subfan");
  return u;
}

ToricObject product(const ToricObject& a, const ToricObject& b) {
  auto fan = std::make_shared<const Fan>(product(a.fan(), b.fan()));
  const std::size_t offset = a.fan().rays().size();
  CellSet cells;
  for (auto ca : a.cells()) {
    for (auto cb : b.cells()) {
      std::vector<std::size_t> rays = a.fan().cone(ca).rays;
      for (auto r : b.fan().cone(cb).rays) rays.push_back(r + offset);
      cells.push_back(*fan->find(rays));
    }
  }
  std::string label;
  if (!a.label().empty() && !b.label().empty()) label = a.label() + "x" + b.label();
  return ToricObject(fan, std::move(cells), std::move(label));
}

std::optional<CellSet> transfer_cells(const Fan& from, const CellSet& cells, const Fan& to) {
  if (from.rank() != to.rank()) return std::nullopt;
  std::vector<std::optional<std::size_t>> ray_map(from.rays().size());
  for (std::size_t i = 0; i < from.rays().size(); ++i) ray_map[i] = to.find_ray(from.rays()[i]);
  CellSet out;
  for (auto c : cells) {
    std::vector<std::size_t> rays;
    for (auto r : from.cone(c).rays) {
      if (!ray_map[r]) return std::nullopt;
      rays.push_back(*ray_map[r]);
    }
    std::sort(rays.begin(), rays.end());
    auto found = to.find(rays);
    if (!found) return std::nullopt;
    out.push_back(*found);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Maps

namespace {

// Smallest cone of `target` containing cone `c` of `source`.
std::optional<std::size_t> image_cone(const Fan& source, std::size_t c, const Fan& target) {
  auto t = target.locate(source.interior_point(c));
  if (!t) return std::nullopt;
  for (auto r : source.cone(c).rays)
    if (!target.contains(*t, source.rays()[r])) return std::nullopt;
  return t;
}

// The cones of `source` inside cone `t` of `target` subdivide it.
bool covers(const Fan& source, const Fan& target, std::size_t t) {
  const int d = target.cone(t).dim;
  std::vector<std::size_t> inside;
  for (std::size_t c = 0; c < source.size(); ++c) {
    bool in = true;
    for (auto r : source.cone(c).rays)
      if (!target.contains(t, source.rays()[r])) {
        in = false;
        break;
      }
    if (in) inside.push_back(c);
  }
  bool top = false;
  for (auto c : inside) {
    const int dc = source.cone(c).dim;
    bool maximal = true;
    std::size_t above = 0;
    for (auto s : inside) {
      if (s == c || !source.is_face(c, s)) continue;
      maximal = false;
      if (source.cone(s).dim == d) ++above;
    }
    if (maximal && dc != d) return false;
    if (dc == d) top = true;
    if (dc == d - 1) {
      const bool interior = target.in_relative_interior(t, source.interior_point(c));
      if (above != (interior ? 2u : 1u)) return false;
    }
  }
  return top;
}

}  // namespace

std::optional<std::vector<std::size_t>> cell_images(const ToricObject& source, const ToricObject& target) {
  if (source.fan().rank() != target.fan().rank()) return std::nullopt;
  std::vector<std::size_t> out;
  for (auto c : source.cells()) {
    auto t = image_cone(source.fan(), c, target.fan());
    if (!t || !target.contains_cell(*t)) return std::nullopt;
    out.push_back(*t);
  }
  return out;
}

bool is_proper_map(const ToricObject& source, const ToricObject& target) {
  if (!cell_images(source, target)) return false;
  const Fan& sf = source.fan();
  std::vector<bool> in_preimage(sf.size(), false);
  for (std::size_t c = 0; c < sf.size(); ++c) {
    auto t = image_cone(sf, c, target.fan());
    in_preimage[c] = t && target.contains_cell(*t);
  }
  for (auto c : source.cells())
    for (auto s : sf.star(c))
      if (in_preimage[s] && !source.contains_cell(s)) return false;
  for (auto t : target.cells())
    if (!covers(sf, target.fan(), t)) return false;
  return true;
}

bool is_closed_immersion(const ToricObject& source, const ToricObject& target) {
  if (!(source.fan() == target.fan())) return false;
  if (!std::includes(target.cells().begin(), target.cells().end(), source.cells().begin(), source.cells().end()))
    return false;
  for (auto c : source.cells())
    for (auto s : source.fan().star(c))
      if (target.contains_cell(s) && !source.contains_cell(s)) return false;
  return true;
}

bool is_open_immersion(const ToricObject& source, const ToricObject& target) {
  if (!(source.fan() == target.fan())) return false;
  if (!std::includes(target.cells().begin(), target.cells().end(), source.cells().begin(), source.cells().end()))
    return false;
  for (auto c : source.cells())
    for (auto f : source.fan().faces(c))
      if (target.contains_cell(f) && !source.contains_cell(f)) return false;
  return true;
}

ToricObject preimage(const ToricObject& source, const ToricObject& region) {
  CellSet out;
  for (auto c : source.cells()) {
    auto t = image_cone(source.fan(), c, region.fan());
    if (t && region.contains_cell(*t)) out.push_back(c);
  }
  return ToricObject(source.fan_ptr(), std::move(out));
}

// ---------------------------------------------------------------------------
// Star subdivision

StarSubdivision star_subdivide(const FanPtr& fan, const IntVector& ray) {
  const Fan& f = *fan;
  if (ray.size() != f.rank())
    throw GeometryError("ray " + vec_text(ray) + " has the wrong length for a rank " + std::to_string(f.rank()) + " fan");
  if (lattice::is_zero(ray)) throw GeometryError("cannot subdivide at the zero vector");
  if (lattice::content(ray) != 1) throw GeometryError("ray " + vec_text(ray) + " is not primitive");
  auto sigma = f.locate(ray);
  if (!sigma) throw GeometryError("ray " + vec_text(ray) + " lies outside the support of the fan");
  if (f.cone(*sigma).dim <= 1)
    throw GeometryError("ray " + vec_text(ray) + " is already a ray of the fan (it lies on a 1-cone)");

  std::vector<IntVector> rays = f.rays();
  const std::size_t fresh = rays.size();
  rays.push_back(ray);
  std::vector<std::vector<std::size_t>> maximal;
  for (auto m : f.maximal()) {
    if (!f.is_face(*sigma, m)) {
      maximal.push_back(f.cone(m).rays);
      continue;
    }
    for (const auto& facet : f.cone(m).facets) {
      if (subset(f.cone(*sigma).rays, facet)) continue;
      auto cone = facet;
      cone.push_back(fresh);
      maximal.push_back(cone);
    }
  }
  StarSubdivision out;
  out.fan = std::make_shared<const Fan>(Fan::assemble(f.rank(), std::move(rays), maximal, false));
  out.center = *sigma;
  out.x = ToricObject::whole(fan);
  out.y = ToricObject::whole(out.fan);
  out.c = ToricObject(fan, f.star(*sigma));
  out.e = preimage(out.y, out.c);
  out.smooth_blowup = f.is_smooth() && ray == f.interior_point(*sigma);
  return out;
}

}  // namespace motivic::toric
