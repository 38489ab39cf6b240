// The metabelian property: [X_I, X_J] = 0 for all brackets of length >= 2.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "goh_atlas/polyfield.hpp"

namespace goh_atlas {

struct MetabelianWitness {
  MultiIndex I;
  MultiIndex J;
  int component = 0;  // first nonzero component of [X_I, X_J], 1-based
  std::string value;  // that component
};

struct MetabelianVerdict {
  bool metabelian = true;
  int depth = 0;  // the verdict holds up to this total bracket length
  std::optional<MetabelianWitness> witness;
};

/// Checks [X_I, X_J] = 0 for 2 <= |I| <= |J| and |I| + |J| <= depth.
/// The witness is the first failing pair with I, then J, in lexicographic order.
MetabelianVerdict is_metabelian(const Frame& frame, int depth);

/// True when the span of basis elements of weight >= 2 is abelian.
bool is_metabelian_algebra(const StructureTable& table);

struct DependenceVerdict {
  bool only_first_variables = true;
  // (k, j, m), 1-based: A_{k,j} depends on x_m with m > r
  std::vector<std::array<int, 3>> offending;
};

/// Whether every coefficient A_{k,j} of a normal-form frame depends on x_1..x_r only.
DependenceVerdict coefficient_dependence(const Frame& frame);

struct TranslationSample {
  std::vector<double> x;    // point of R^n
  std::vector<double> tau;  // shift of the last n - r coordinates
};

/// sup over samples and k <= r of |X_k(x + (0, tau)) - X_k(x)|_inf.
double translation_invariance(const Frame& frame, const std::vector<TranslationSample>& samples);

}  // namespace goh_atlas
