// Polynomial vector fields on R^n with exact rational coefficients.

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "goh_atlas/freelie.hpp"
#include "goh_atlas/polynomial.hpp"

namespace goh_atlas {

/// A frame X_1..X_r of polynomial fields on R^n, optionally completed by
/// designated fields X_{r+1}..X_n (a stratified basis).
struct Frame {
  int n = 0;
  int r = 0;
  std::vector<PolyVec> fields;
  std::vector<int> weights;            // coordinate weights; empty when unknown
  bool normal_form = false;
  std::vector<std::string> labels;     // coordinate labels; empty when unknown
  std::vector<MultiIndex> brackets;    // right-nested multi-index per coordinate
  std::vector<PolyVec> completion;     // X_{r+1}..X_n when present

  /// Throws InvalidArgument on inconsistent dimensions.
  void validate() const;
  bool has_completion() const { return static_cast<int>(completion.size()) == n - r; }
  /// X_1..X_n; requires a completion.
  std::vector<PolyVec> stratified_fields() const;
};

/// Frame from fields alone; n is read off the fields.
Frame make_frame(std::vector<PolyVec> fields);

/// [X, Y]_j = sum_i X_i d_i Y_j - Y_i d_i X_j.
PolyVec lie_bracket_fields(const PolyVec& X, const PolyVec& Y);

/// Right-nested [X_{j1},[X_{j2},[...,X_{jk}]]], letters 1..r.
PolyVec iterated_bracket_fields(const Frame& frame, const MultiIndex& J);

/// All right-nested brackets X_J with 1 <= |J| <= max_len.
std::map<MultiIndex, PolyVec> iterated_brackets_up_to(const Frame& frame, int max_len);

PolyVec field_derivative(const PolyVec& X, int var);

inline constexpr int kDefaultPicardBound = 10;

/// Flow of a nilpotent field in closed form: polynomials in (x0_1..x0_n, t).
/// Throws NotNilpotentError when Picard iteration does not stabilize.
PolyVec exact_flow_symbolic(const PolyVec& X, int picard_bound = kDefaultPicardBound);

/// Time-t point of the flow from x0, exactly.
std::vector<Rational> exact_flow(const PolyVec& X, std::span<const Rational> x0, const Rational& t,
                                 int picard_bound = kDefaultPicardBound);

struct GrowthVector {
  std::vector<int> dims;  // dim D^1_p .. dim D^depth_p
  bool bracket_generating = false;
};

GrowthVector growth_vector(const Frame& frame, std::span<const Rational> p, int depth);

/// Heisenberg frame {d1, d2 + x1 d3} on R^3.
Frame heisenberg_frame();

/// Martinet frame {d1, d2 + (x1^2/2) d3} on R^3, in normal form.
Frame martinet_frame();

std::vector<Rational> evaluate_field(const PolyVec& X, std::span<const Rational> x);
std::vector<double> evaluate_field(const PolyVec& X, std::span<const double> x);

}  // namespace goh_atlas
