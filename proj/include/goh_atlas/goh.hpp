// Goh polynomials F^{h,k}(x) = sum_{j>r} lambda_j (d_h A_{k,j} - d_k A_{h,j})
// of a metabelian normal-form frame, their zero set V, and a plane tracer
// for V when r = 2.

#pragma once

#include <Eigen/Dense>
#include <map>
#include <utility>
#include <vector>

#include "goh_atlas/metabelian.hpp"
#include "goh_atlas/normalform.hpp"
#include "goh_atlas/polyfield.hpp"

namespace goh_atlas {

template <class Scalar>
struct GohSystem {
  int r = 0;
  std::vector<Scalar> lambda;
  std::map<std::pair<int, int>, Polynomial<Scalar>> F;  // keys (h, k), 1 <= h < k <= r

  /// F^{h,k} for any h != k, using F^{k,h} = -F^{h,k}.
  Polynomial<Scalar> at(int h, int k) const {
    if (h == k) return Polynomial<Scalar>(r);
    if (h > k) return -F.at({k, h});
    return F.at({h, k});
  }

  template <class T>
  GohSystem<T> cast() const {
    GohSystem<T> out;
    out.r = r;
    for (const auto& l : lambda) out.lambda.push_back(scalar_cast<T>(l));
    for (const auto& [hk, p] : F) out.F.emplace(hk, p.template cast<T>());
    return out;
  }
};

/// Throws PreconditionError unless the frame is in normal form with
/// coefficients depending on x_1..x_r only.
void require_metabelian_shape(const Frame& frame);

template <class Scalar>
GohSystem<Scalar> goh_polynomials(const Frame& frame, const std::vector<Scalar>& lambda) {
  frame.validate();
  if (static_cast<int>(lambda.size()) != frame.n) throw InvalidArgument("goh_polynomials: covector has wrong dimension");
  if (std::all_of(lambda.begin(), lambda.end(), [](const Scalar& l) { return is_zero_scalar(l); }))
    throw InvalidArgument("goh_polynomials: covector must be nonzero");
  require_metabelian_shape(frame);
  const int r = frame.r;
  auto A = [&](int k, int j) {
    return frame.fields[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)].with_nvars(r).template cast<Scalar>();
  };
  GohSystem<Scalar> sys;
  sys.r = r;
  sys.lambda = lambda;
  for (int h = 0; h < r; ++h) {
    for (int k = h + 1; k < r; ++k) {
      Polynomial<Scalar> f(r);
      for (int j = r; j < frame.n; ++j) {
        const Scalar& l = lambda[static_cast<std::size_t>(j)];
        if (is_zero_scalar(l)) continue;
        f += (A(k, j).derivative(h) - A(h, j).derivative(k)) * l;
      }
      sys.F.emplace(std::pair{h + 1, k + 1}, std::move(f));
    }
  }
  return sys;
}

/// sup over the points and pairs h < k of |F^{h,k}(point)|; 0 for no points.
template <class Scalar>
double variety_membership(const GohSystem<Scalar>& sys, const std::vector<std::vector<double>>& curve) {
  double sup = 0.0;
  for (const auto& p : curve) {
    if (static_cast<int>(p.size()) != sys.r) throw InvalidArgument("variety_membership: point has wrong dimension");
    for (const auto& [hk, f] : sys.F) sup = std::max(sup, std::abs(f.template cast<double>().evaluate(std::span<const double>(p))));
  }
  return sup;
}

struct Window {
  double x1_min = -2.0, x1_max = 2.0, x2_min = -2.0, x2_max = 2.0;
};

struct SingularCandidate {
  Eigen::Vector2d point;
  int order = 0;                // degree of the lowest nonvanishing Taylor part
  std::vector<double> tangents;  // branch directions as angles in [0, pi)
};

struct VarietyTrace {
  Window window;
  int resolution = 0;
  bool whole_plane = false;
  double max_abs = 0.0;    // max |F| over the grid nodes
  double tolerance = 0.0;  // absolute bound met by every vertex
  std::vector<std::vector<Eigen::Vector2d>> polylines;
  std::vector<SingularCandidate> singular_candidates;
};

inline constexpr int kDefaultResolution = 512;
inline constexpr double kDefaultTraceTolerance = 1e-9;

/// Traces {F = 0} by marching squares; vertices are refined on their grid
/// edge until |F| <= rel_tol * (1 + max |F|).
VarietyTrace trace_variety(const Polynomial<double>& F, const Window& window = {},
                           int resolution = kDefaultResolution, double rel_tol = kDefaultTraceTolerance);

template <class Scalar>
VarietyTrace trace_variety(const GohSystem<Scalar>& sys, const Window& window = {},
                           int resolution = kDefaultResolution, double rel_tol = kDefaultTraceTolerance) {
  if (sys.r != 2) throw InvalidArgument("trace_variety: needs rank 2");
  return trace_variety(sys.F.at({1, 2}).template cast<double>(), window, resolution, rel_tol);
}

/// Angles in [0, pi) where the homogeneous form sum_i c_i u^i v^{m-i} vanishes.
std::vector<double> homogeneous_roots(const std::vector<double>& coeffs);

}  // namespace goh_atlas
