#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

// Under C++20 the boost::rational mixed (==, !=) templates rewrite into each
// other and recurse without end. Exact-match overloads take precedence.
namespace boost {
#define CTL_RATIONAL_EQ(T)                                                            \
  inline bool operator==(const rational<std::int64_t>& a, T b) {                      \
    return a.denominator() == 1 && a.numerator() == static_cast<std::int64_t>(b);     \
  }                                                                                   \
  inline bool operator==(T b, const rational<std::int64_t>& a) { return a == b; }     \
  inline bool operator!=(const rational<std::int64_t>& a, T b) { return !(a == b); }  \
  inline bool operator!=(T b, const rational<std::int64_t>& a) { return !(a == b); }
CTL_RATIONAL_EQ(int)
CTL_RATIONAL_EQ(long)
CTL_RATIONAL_EQ(long long)
#undef CTL_RATIONAL_EQ
}  // namespace boost

namespace ctl {

/// Exact rational used for heights, metric values and region predicates.
using Rational = boost::rational<std::int64_t>;

/// 2^-j as an exact rational.
inline Rational pow2_neg(int j) {
  return Rational(1, std::int64_t{1} << j);
}

inline Rational abs_diff(const Rational& a, const Rational& b) {
  return a < b ? b - a : a - b;
}

/// "n/d" or "n" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

/// Parses "n", "n/d" or a finite decimal such as "0.08" into an exact rational.
Rational parse_rational(const std::string& text);

}  // namespace ctl
