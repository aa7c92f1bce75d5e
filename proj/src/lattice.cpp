#include "motivic/lattice.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace motivic::lattice {

namespace {

// Reduced row echelon form over Q; returns pivot columns.
std::vector<std::size_t> rref(std::vector<std::vector<Rational>>& m, std::size_t n) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[sel], m[row]);
    const Rational inv = 1 / m[row][col];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const Rational f = m[r][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::vector<std::vector<Rational>> to_rational(const std::vector<IntVector>& rows, std::size_t n) {
  std::vector<std::vector<Rational>> m;
  m.reserve(rows.size());
  for (const auto& r : rows) {
    std::vector<Rational> q(n);
    for (std::size_t i = 0; i < n && i < r.size(); ++i) q[i] = r[i];
    m.push_back(std::move(q));
  }
  return m;
}

struct Constraint {
  IntVector a;
  bool strict = false;
  auto operator<=>(const Constraint&) const = default;
};

}  // namespace

Integer dot(const IntVector& a, const IntVector& b) {
  Integer s = 0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

Integer content(const IntVector& v) {
  Integer g = 0;
  for (const auto& x : v) g = boost::multiprecision::gcd(g, abs(x));
  return g;
}

IntVector primitive(IntVector v) {
  const Integer g = content(v);
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

bool is_zero(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

IntVector add(const IntVector& a, const IntVector& b) {
  IntVector r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i < a.size()) r[i] += a[i];
    if (i < b.size()) r[i] += b[i];
  }
  return r;
}

IntVector negate(IntVector v) {
  for (auto& x : v) x = -x;
  return v;
}

std::size_t rank(const std::vector<IntVector>& rows) {
  if (rows.empty()) return 0;
  std::size_t n = 0;
  for (const auto& r : rows) n = std::max(n, r.size());
  auto m = to_rational(rows, n);
  return rref(m, n).size();
}

std::vector<IntVector> kernel(const std::vector<IntVector>& rows, std::size_t n) {
  auto m = to_rational(rows, n);
  const auto pivots = rref(m, n);
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;

  std::vector<IntVector> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> x(n);
    x[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -m[r][free];
    Integer lcm = 1;
    for (const auto& q : x) lcm = boost::multiprecision::lcm(lcm, denominator(q));
    IntVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = numerator(x[i]) * (lcm / denominator(x[i]));
    basis.push_back(primitive(std::move(v)));
  }
  return basis;
}

Integer determinant(const std::vector<IntVector>& square) {
  // Bareiss fraction-free elimination.
  const std::size_t n = square.size();
  if (n == 0) return 1;
  std::vector<IntVector> m = square;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t sel = k + 1;
      while (sel < n && m[sel][k] == 0) ++sel;
      if (sel == n) return 0;
      std::swap(m[sel], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

bool extends_to_basis(const std::vector<IntVector>& rows, std::size_t n) {
  const std::size_t k = rows.size();
  if (k == 0) return true;
  if (k > n) return false;
  // gcd of all k x k minors.
  std::vector<std::size_t> cols(k);
  for (std::size_t i = 0; i < k; ++i) cols[i] = i;
  Integer g = 0;
  while (true) {
    std::vector<IntVector> minor(k, IntVector(k));
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c) minor[r][c] = rows[r][cols[c]];
    g = boost::multiprecision::gcd(g, abs(determinant(minor)));
    if (g == 1) return true;
    // next combination
    std::size_t i = k;
    while (i > 0 && cols[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++cols[i - 1];
    for (std::size_t j = i; j < k; ++j) cols[j] = cols[j - 1] + 1;
  }
  return false;
}

bool feasible(const HomogeneousSystem& system) {
  const std::size_t n = system.variables;
  std::vector<Constraint> ineqs;
  for (const auto& a : system.nonnegative) ineqs.push_back({a, false});
  for (const auto& a : system.positive) ineqs.push_back({a, true});
  std::vector<IntVector> eqs = system.zero;
  for (auto& c : ineqs) c.a.resize(n);
  for (auto& e : eqs) e.resize(n);

  // Substitute equalities away.
  for (std::size_t e = 0; e < eqs.size(); ++e) {
    const IntVector& eq = eqs[e];
    std::size_t j = 0;
    while (j < n && eq[j] == 0) ++j;
    if (j == n) continue;
    const Integer pivot = eq[j];
    const Integer mag = abs(pivot);
    const int sgn = pivot > 0 ? 1 : -1;
    auto eliminate = [&](IntVector& c) {
      if (c[j] == 0) return;
      const Integer cj = c[j];
      for (std::size_t i = 0; i < n; ++i) c[i] = mag * c[i] - sgn * cj * eq[i];
      c = primitive(std::move(c));
    };
    for (auto& c : ineqs) eliminate(c.a);
    for (std::size_t f = e + 1; f < eqs.size(); ++f) eliminate(eqs[f]);
  }

  auto normalize = [](std::vector<Constraint> in, bool& contradiction) {
    std::set<Constraint> out;
    for (auto& c : in) {
      c.a = primitive(std::move(c.a));
      if (is_zero(c.a)) {
        if (c.strict) contradiction = true;
        continue;
      }
      out.insert(std::move(c));
    }
    return std::vector<Constraint>(out.begin(), out.end());
  };

  bool contradiction = false;
  ineqs = normalize(std::move(ineqs), contradiction);
  if (contradiction) return false;

  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Constraint> pos, neg, next;
    for (auto& c : ineqs) {
      if (c.a[j] > 0)
        pos.push_back(std::move(c));
      else if (c.a[j] < 0)
        neg.push_back(std::move(c));
      else
        next.push_back(std::move(c));
    }
    if (!pos.empty() && !neg.empty()) {
      for (const auto& p : pos)
        for (const auto& q : neg) {
          Constraint combined;
          combined.a.resize(n);
          const Integer fp = -q.a[j];
          const Integer fq = p.a[j];
          for (std::size_t i = 0; i < n; ++i) combined.a[i] = fp * p.a[i] + fq * q.a[i];
          combined.strict = p.strict || q.strict;
          next.push_back(std::move(combined));
        }
    }
    ineqs = normalize(std::move(next), contradiction);
    if (contradiction) return false;
  }
  return true;
}

}  // namespace motivic::lattice
