// Controls, horizontal lifts, the variational flow and the abnormal/Goh
// residuals along them. All integration is classical RK4 on the control grid.

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "goh_atlas/polyfield.hpp"

namespace goh_atlas {

inline constexpr int kDefaultSubsteps = 2;
inline constexpr double kAbnormalThreshold = 1e-6;
inline constexpr double kContainmentThreshold = 1e-8;

/// Control on a uniform grid t_0 < ... < t_N, piecewise linear between
/// nodes unless an exact form is attached.
class Control {
 public:
  using Function = std::function<Eigen::VectorXd(double)>;

  Control() = default;
  /// values is r x (N+1).
  Control(double t0, double t1, Eigen::MatrixXd values);
  /// Samples f on the grid and keeps f for evaluation between nodes.
  static Control analytic(Function f, int r, double t0, double t1, int steps);
  /// Checks that t is uniform; values[i] = u(t_i).
  static Control from_samples(const std::vector<double>& t, const std::vector<std::vector<double>>& values);

  int rank() const { return static_cast<int>(values_.rows()); }
  int steps() const { return static_cast<int>(values_.cols()) - 1; }
  double t0() const { return t0_; }
  double dt() const { return dt_; }
  double time(int i) const { return t0_ + i * dt_; }
  std::vector<double> times() const;
  const Eigen::MatrixXd& values() const { return values_; }
  bool has_exact() const { return static_cast<bool>(exact_); }

  /// u(t) for t in grid interval i. Exact forms are evaluated inside the
  /// open interval, so jumps at grid nodes are integrated exactly.
  Eigen::VectorXd on_interval(int i, double t) const;

 private:
  double t0_ = 0.0;
  double dt_ = 1.0;
  Eigen::MatrixXd values_;
  Function exact_;
};

struct SampledCurve {
  std::vector<double> t;
  Eigen::MatrixXd points;  // m x (N+1)

  int dim() const { return static_cast<int>(points.rows()); }
  int size() const { return static_cast<int>(t.size()); }
  void validate() const;
};

struct JacobianPath {
  std::vector<double> t;
  std::vector<Eigen::MatrixXd> J;
};

SampledCurve flow_control(const Frame& frame, const Control& u, const Eigen::VectorXd& x0,
                          int substeps = kDefaultSubsteps);

struct Lift {
  SampledCurve curve;
  Control control;
};

/// Lift of a sampled base curve: the control is the symmetric difference
/// quotient at interior nodes (second-order one-sided at the ends).
Lift horizontal_lift(const Frame& frame, const SampledCurve& kappa, const Eigen::VectorXd& x0,
                     int substeps = kDefaultSubsteps);

/// Lift of a base curve with known velocity.
Lift horizontal_lift(const Frame& frame, const Control::Function& kappa, const Control::Function& velocity,
                     double t0, double t1, int steps, const Eigen::VectorXd& x0, int substeps = kDefaultSubsteps);

JacobianPath jacobian_flow(const Frame& frame, const Control& u, const Eigen::VectorXd& x0,
                           int substeps = kDefaultSubsteps);

/// sup over grid times and i > r of |J(t) e_i - e_i|_inf.
double pushforward_identity_residual(const Frame& frame, const Control& u, const Eigen::VectorXd& x0,
                                     int substeps = kDefaultSubsteps);

struct ExtremalResiduals {
  std::vector<double> t;
  Eigen::MatrixXd rho;                    // r x (N+1): lambda^T J^{-1} X_i(gamma)
  std::vector<std::pair<int, int>> pairs;  // (h, k), 1-based, h < k
  Eigen::MatrixXd sigma;                  // pairs x (N+1): lambda^T J^{-1} [X_h, X_k](gamma)
  double rho_sup = 0.0;
  double sigma_sup = 0.0;
};

/// lambda^T J(t)^{-1} is carried by the adjoint equation mu' = -D X_u^T mu.
ExtremalResiduals extremal_residuals(const Frame& frame, const Control& u, const Eigen::VectorXd& x0,
                                     const Eigen::VectorXd& lambda, int substeps = kDefaultSubsteps);

struct AbnormalRecovery {
  std::vector<Eigen::VectorXd> candidates;  // unit covectors, smallest singular value first
  Eigen::VectorXd singular_values;          // descending
  double sigma_ratio_min = 0.0;
  double stack_norm = 0.0;  // largest row norm of the stacked matrix
  double threshold = kAbnormalThreshold;
};

/// Stacks the rows (J(t_i)^{-1} X_k(gamma(t_i)))^T and returns the right
/// singular vectors whose singular value ratio is below the threshold.
AbnormalRecovery recover_abnormal_covector(const Frame& frame, const Control& u, const Eigen::VectorXd& x0,
                                           double threshold = kAbnormalThreshold, int substeps = kDefaultSubsteps);

/// kappa(t) = t (cos(-log t), sin(-log t)).
Eigen::VectorXd spiral_point(double t);
Eigen::VectorXd spiral_velocity(double t);

/// N samples of the spiral on a uniform grid over [eps, 1].
SampledCurve spiral_curve(double eps, int N);

struct Containment {
  int degree = 0;
  int null_space_dim = 0;
  double sigma_min_ratio = 0.0;
  Eigen::VectorXd singular_values;
};

/// Numerical dimension of the space of polynomials of degree <= d vanishing
/// on the points (2 x M).
Containment polynomial_containment(const Eigen::MatrixXd& points, int degree,
                                   double threshold = kContainmentThreshold);

}  // namespace goh_atlas
