// Frames shared by several test suites.

#pragma once

#include <random>

#include "goh_atlas/polyfield.hpp"

namespace fixtures {

using namespace goh_atlas;

/// Closed form of the free rank-2 step-3 frame in second-kind coordinates.
inline Frame f23_closed_form() {
  Frame f = make_frame({parse_field({"1", "0", "0", "0", "0"}, 5),
                        parse_field({"0", "1", "x1", "1/2*x1^2", "x1*x2"}, 5)});
  f.weights = {1, 1, 2, 3, 3};
  f.normal_form = true;
  return f;
}

inline Rational random_rational(std::mt19937_64& rng, int lo = -4, int hi = 4, int max_den = 3) {
  std::uniform_int_distribution<int> num(lo, hi), den(1, max_den);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline Poly random_poly(std::mt19937_64& rng, int n, int max_degree, int terms) {
  std::uniform_int_distribution<int> deg(0, max_degree);
  std::uniform_int_distribution<int> var(0, n - 1);
  Poly p(n);
  for (int t = 0; t < terms; ++t) {
    Exponent e(static_cast<std::size_t>(n), 0);
    const int d = deg(rng);
    for (int k = 0; k < d; ++k) ++e[static_cast<std::size_t>(var(rng))];
    p.add_term(e, random_rational(rng));
  }
  return p;
}

inline PolyVec random_field(std::mt19937_64& rng, int n, int max_degree, int terms) {
  PolyVec v;
  for (int i = 0; i < n; ++i) v.push_back(random_poly(rng, n, max_degree, terms));
  return v;
}

inline std::vector<Rational> random_point(std::mt19937_64& rng, int n) {
  std::vector<Rational> p;
  for (int i = 0; i < n; ++i) p.push_back(random_rational(rng));
  return p;
}

}  // namespace fixtures
