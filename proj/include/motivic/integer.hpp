#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace motivic {

/// Arbitrary-precision integer used for every lattice and coefficient computation.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A lattice vector in Z^n.
using IntVector = std::vector<Integer>;

inline std::string to_string(const Integer& value) { return value.str(); }

}  // namespace motivic
