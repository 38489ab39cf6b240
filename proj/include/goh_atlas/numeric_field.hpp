// Double-precision evaluation of polynomial vector fields.

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "goh_atlas/polynomial.hpp"

namespace goh_atlas {

/// A PolyVec flattened into a term list for fast evaluation at double points.
class CompiledField {
 public:
  CompiledField() = default;
  explicit CompiledField(const PolyVec& X);

  int dim() const { return n_; }
  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
  /// D X at x, entry (i, j) = d_j X_i.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

 private:
  struct Term {
    int row = 0;
    int col = 0;  // only used by the Jacobian
    double coef = 0.0;
    std::vector<std::pair<int, int>> factors;  // (variable, power)
  };
  void powers(const Eigen::VectorXd& x) const;
  double monomial(const Term& t) const;

  int n_ = 0;
  int max_power_ = 0;
  std::vector<Term> terms_;
  std::vector<Term> jac_terms_;
  mutable std::vector<double> pow_;  // pow_[v * (max_power_ + 1) + k] = x_v^k
};

/// Classical RK4 for the autonomous flow of X over time t in `steps` steps.
Eigen::VectorXd rk4_flow(const CompiledField& X, Eigen::VectorXd x, double t, int steps);

}  // namespace goh_atlas
