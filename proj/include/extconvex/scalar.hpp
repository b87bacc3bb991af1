#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <string>

namespace extconvex {

// Exact arithmetic mode uses arbitrary-precision rationals.
using Rational = boost::multiprecision::cpp_rational;

template <class S>
inline bool scalar_is_zero(const S& v) {
  return v == S(0);
}

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.template convert_to<double>(); }

inline double scalar_abs(double v) { return std::abs(v); }
inline Rational scalar_abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }

inline std::string scalar_to_string(const Rational& v) { return v.str(); }

}  // namespace extconvex
