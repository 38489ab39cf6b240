// Exact rational scalars shared by the algebraic modules.

#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace goh_atlas {

using Rational = mpq_class;

/// Parses "p", "p/q", or a finite decimal such as "-0.25".
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form (integers print without a denominator).
std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

template <class Scalar>
inline bool is_zero_scalar(const Scalar& s) {
  return s == Scalar(0);
}

inline bool is_zero_scalar(const Rational& s) { return sgn(s) == 0; }

}  // namespace goh_atlas
