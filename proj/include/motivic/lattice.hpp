#pragma once

#include <cstddef>
#include <vector>

#include "motivic/integer.hpp"

/// Exact linear algebra over Z and Q for small lattices.
namespace motivic::lattice {

Integer dot(const IntVector& a, const IntVector& b);

/// gcd of the entries (0 for the zero vector).
Integer content(const IntVector& v);

/// `v` divided by its content; the zero vector is returned unchanged.
IntVector primitive(IntVector v);

bool is_zero(const IntVector& v);

IntVector add(const IntVector& a, const IntVector& b);
IntVector negate(IntVector v);

std::size_t rank(const std::vector<IntVector>& rows);

/// Primitive integer basis of {x in Q^n : row . x = 0 for every row}.
std::vector<IntVector> kernel(const std::vector<IntVector>& rows, std::size_t n);

Integer determinant(const std::vector<IntVector>& square);

/// True iff the rows are part of a Z-basis of Z^n (all invariant factors 1).
bool extends_to_basis(const std::vector<IntVector>& rows, std::size_t n);

/// Homogeneous linear system over Q:
///   a.x >= 0 for a in `nonnegative`, a.x > 0 for a in `positive`, a.x = 0 for a in `zero`.
struct HomogeneousSystem {
  std::size_t variables = 0;
  std::vector<IntVector> nonnegative;
  std::vector<IntVector> positive;
  std::vector<IntVector> zero;
};

/// Decides solvability exactly by Fourier-Motzkin elimination.
bool feasible(const HomogeneousSystem& system);

}  // namespace motivic::lattice
