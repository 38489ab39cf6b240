// Left-invariant frames of free nilpotent groups in exponential coordinates
// of the second kind, q = exp(x_n E_n) ... exp(x_1 E_1), and checks of the
// normal form X_k = d_k + sum_{j>r} A_{k,j} d_j.
//
// E_1..E_n is the right-nested stratified basis of freelie.hpp; coordinate i
// carries the Lyndon word of basis position i as its label.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "goh_atlas/freelie.hpp"
#include "goh_atlas/polyfield.hpp"

namespace goh_atlas {

/// Polynomial maps between second-kind (x) and first-kind (y) coordinates.
struct CoordinateMaps {
  PolyVec psi;          // y = psi(x)
  PolyVec psi_inverse;  // x = psi_inverse(y)
};

struct Realization {
  LyndonBasis basis;
  RightNestedBasis stratified;
  Frame frame;  // X_1..X_r, completed by X_{r+1}..X_n
  std::optional<CoordinateMaps> maps;
};

/// Realizes the frame. The coordinate maps cost far more than the frame
/// itself at higher steps, so they are optional.
Realization realize_frame(const LyndonBasis& basis, bool with_coordinate_maps = true);

/// psi and its inverse for a realization.
CoordinateMaps coordinate_maps(const RightNestedBasis& stratified, const LyndonBasis& basis);

/// Left-invariant fields in first-kind coordinates: Z_k(y) = psi(ad_y) E_k
/// with psi(z) = z / (1 - e^{-z}).
std::vector<PolyVec> first_kind_fields(const StructureTable& table);

/// Bernoulli-type coefficients of z / (1 - e^{-z}) up to z^m.
std::vector<Rational> left_trivialized_coefficients(int m);

struct NormalFormFailure {
  int k = 0;  // field, 1-based
  int j = 0;  // component, 1-based
  std::string found;
};

struct NormalFormReport {
  bool pass = true;
  std::vector<NormalFormFailure> failures;
};

NormalFormReport verify_normal_form(const Frame& frame);

struct SecondKindResidual {
  double residual = 0.0;
  bool pass = true;
  std::vector<double> reached;
};

/// Composes the coordinate flows from 0 by RK4, x_n first and x_1 last.
SecondKindResidual verify_second_kind(const Frame& frame, const std::vector<double>& x, double tol,
                                      int steps_per_unit = 256);

}  // namespace goh_atlas
