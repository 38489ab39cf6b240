#include "goh_atlas/numeric_field.hpp"

#include <cmath>

#include "goh_atlas/errors.hpp"

namespace goh_atlas {
namespace {

std::vector<std::pair<int, int>> factors_of(const Exponent& e, int& max_power) {
  std::vector<std::pair<int, int>> f;
  for (std::size_t v = 0; v < e.size(); ++v) {
    if (e[v] == 0) continue;
    f.emplace_back(static_cast<int>(v), e[v]);
    max_power = std::max(max_power, static_cast<int>(e[v]));
  }
  return f;
}

}  // namespace

CompiledField::CompiledField(const PolyVec& X) : n_(static_cast<int>(X.size())) {
  for (int i = 0; i < n_; ++i) {
    const Poly& p = X[static_cast<std::size_t>(i)];
    if (p.nvars() != n_) throw InvalidArgument("compiled field: component has wrong ambient dimension");
    for (const auto& [e, c] : p.terms()) terms_.push_back({i, 0, c.get_d(), factors_of(e, max_power_)});
    for (int j = 0; j < n_; ++j) {
      if (!p.depends_on(j)) continue;
      const Poly d = p.derivative(j);
      for (const auto& [e, c] : d.terms())
        jac_terms_.push_back({i, j, c.get_d(), factors_of(e, max_power_)});
    }
  }
  pow_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(max_power_ + 1), 1.0);
}

void CompiledField::powers(const Eigen::VectorXd& x) const {
  if (x.size() != n_) throw InvalidArgument("compiled field: point has wrong dimension");
  const std::size_t stride = static_cast<std::size_t>(max_power_ + 1);
  for (int v = 0; v < n_; ++v) {
    double* row = pow_.data() + static_cast<std::size_t>(v) * stride;
    for (int k = 1; k <= max_power_; ++k) row[k] = row[k - 1] * x[v];
  }
}

double CompiledField::monomial(const Term& t) const {
  const std::size_t stride = static_cast<std::size_t>(max_power_ + 1);
  double m = t.coef;
  for (auto [v, k] : t.factors) m *= pow_[static_cast<std::size_t>(v) * stride + static_cast<std::size_t>(k)];
  return m;
}

Eigen::VectorXd CompiledField::operator()(const Eigen::VectorXd& x) const {
  powers(x);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_);
  for (const auto& t : terms_) out[t.row] += monomial(t);
  return out;
}

Eigen::MatrixXd CompiledField::jacobian(const Eigen::VectorXd& x) const {
  powers(x);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_, n_);
  for (const auto& t : jac_terms_) out(t.row, t.col) += monomial(t);
  return out;
}

Eigen::VectorXd rk4_flow(const CompiledField& X, Eigen::VectorXd x, double t, int steps) {
  if (steps < 1) throw InvalidArgument("rk4_flow: need at least one step");
  const double h = t / steps;
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXd k1 = X(x);
    const Eigen::VectorXd k2 = X(x + 0.5 * h * k1);
    const Eigen::VectorXd k3 = X(x + 0.5 * h * k2);
    const Eigen::VectorXd k4 = X(x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) throw NumericError("rk4_flow: non-finite state");
  }
  return x;
}

}  // namespace goh_atlas
