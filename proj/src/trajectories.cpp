#include "goh_atlas/trajectories.hpp"

#include <cmath>

#include "goh_atlas/normalform.hpp"
#include "goh_atlas/numeric_field.hpp"

namespace goh_atlas {
namespace {

// Log-determinant of J beyond which the variational flow counts as singular.
constexpr double kMaxLogDet = 27.6;  // det J outside [1e-12, 1e12]

struct CompiledFrame {
  explicit CompiledFrame(const Frame& frame) : n(frame.n), r(frame.r) {
    frame.validate();
    for (const auto& X : frame.fields) fields.emplace_back(X);
  }

  Eigen::VectorXd velocity(const Eigen::VectorXd& u, const Eigen::VectorXd& x) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < r; ++k)
      if (u[k] != 0.0) v += u[k] * fields[static_cast<std::size_t>(k)](x);
    return v;
  }
  Eigen::MatrixXd derivative(const Eigen::VectorXd& u, const Eigen::VectorXd& x) const {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < r; ++k)
      if (u[k] != 0.0) D += u[k] * fields[static_cast<std::size_t>(k)].jacobian(x);
    return D;
  }

  int n, r;
  std::vector<CompiledField> fields;
};

void check_inputs(const Frame& frame, const Control& u, const Eigen::VectorXd& x0) {
  if (u.rank() != frame.r) throw InvalidArgument("control has " + std::to_string(u.rank()) + " components, frame rank is " +
                                                 std::to_string(frame.r));
  if (x0.size() != frame.n) throw InvalidArgument("start point has wrong dimension");
  if (!x0.allFinite()) throw InvalidArgument("start point is not finite");
}

// RK4 over the control grid; rhs(u, y) gives y', observe(i, y) sees grid node i.
template <class Rhs, class Observe>
void integrate(const Control& u, int substeps, Eigen::VectorXd y, Rhs&& rhs, Observe&& observe) {
  if (substeps < 1) throw InvalidArgument("substeps must be positive");
  observe(0, y);
  const double h = u.dt() / substeps;
  for (int i = 0; i < u.steps(); ++i) {
    for (int s = 0; s < substeps; ++s) {
      const double t = u.time(i) + s * h;
      const Eigen::VectorXd k1 = rhs(u.on_interval(i, t), y);
      const Eigen::VectorXd k2 = rhs(u.on_interval(i, t + 0.5 * h), y + 0.5 * h * k1);
      const Eigen::VectorXd k3 = rhs(u.on_interval(i, t + 0.5 * h), y + 0.5 * h * k2);
      const Eigen::VectorXd k4 = rhs(u.on_interval(i, t + h), y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!y.allFinite()) throw NumericError("integration produced non-finite values at t = " + std::to_string(u.time(i + 1)));
    observe(i + 1, y);
  }
}

void check_log_det(double log_det, double t) {
  if (std::abs(log_det) > kMaxLogDet)
    throw ConditioningError("variational flow is numerically singular at t = " + std::to_string(t));
}

bool is_uniform(const std::vector<double>& t) {
  if (t.size() < 2) return false;
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(dt > 0)) return false;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (std::abs(t[i] - (t.front() + static_cast<double>(i) * dt)) > 1e-9 * (std::abs(dt) + std::abs(t[i]))) return false;
  return true;
}

Eigen::VectorXd make_unit_positive(Eigen::VectorXd v) {
  v.normalize();
  Eigen::Index k;
  v.cwiseAbs().maxCoeff(&k);
  if (v[k] < 0) v = -v;
  return v;
}

}  // namespace

Control::Control(double t0, double t1, Eigen::MatrixXd values) : t0_(t0), values_(std::move(values)) {
  if (values_.cols() < 2) throw InvalidArgument("control needs at least one grid interval");
  if (values_.rows() < 1) throw InvalidArgument("control needs at least one component");
  if (!(t1 > t0)) throw InvalidArgument("control grid must be increasing");
  if (!values_.allFinite()) throw InvalidArgument("control values must be finite");
  dt_ = (t1 - t0) / static_cast<double>(values_.cols() - 1);
}

Control Control::analytic(Function f, int r, double t0, double t1, int steps) {
  if (steps < 1) throw InvalidArgument("control needs at least one grid interval");
  Eigen::MatrixXd values(r, steps + 1);
  for (int i = 0; i <= steps; ++i) {
    const Eigen::VectorXd v = f(t0 + (t1 - t0) * i / steps);
    if (v.size() != r) throw InvalidArgument("control function has wrong dimension");
    values.col(i) = v;
  }
  Control c(t0, t1, std::move(values));
  c.exact_ = std::move(f);
  return c;
}

Control Control::from_samples(const std::vector<double>& t, const std::vector<std::vector<double>>& values) {
  if (t.size() != values.size()) throw InvalidArgument("control: times and values differ in length");
  if (!is_uniform(t)) throw InvalidArgument("control: time grid must be uniform and increasing");
  const int r = static_cast<int>(values.front().size());
  Eigen::MatrixXd m(r, static_cast<Eigen::Index>(t.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (static_cast<int>(values[i].size()) != r) throw InvalidArgument("control: ragged values");
    for (int k = 0; k < r; ++k) m(k, static_cast<Eigen::Index>(i)) = values[i][static_cast<std::size_t>(k)];
  }
  return Control(t.front(), t.back(), std::move(m));
}

std::vector<double> Control::times() const {
  std::vector<double> t;
  for (int i = 0; i <= steps(); ++i) t.push_back(time(i));
  return t;
}

Eigen::VectorXd Control::on_interval(int i, double t) const {
  const double lo = time(i), hi = time(i + 1);
  if (exact_) return exact_(std::clamp(t, std::nextafter(lo, hi), std::nextafter(hi, lo)));
  const double s = std::clamp((t - lo) / dt_, 0.0, 1.0);
  return (1.0 - s) * values_.col(i) + s * values_.col(i + 1);
}

void SampledCurve::validate() const {
  if (static_cast<Eigen::Index>(t.size()) != points.cols()) throw InvalidArgument("curve: times and points differ in length");
  if (t.size() < 2) throw InvalidArgument("curve needs at least two samples");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw InvalidArgument("curve: times must be strictly increasing");
  if (!points.allFinite()) throw InvalidArgument("curve: points must be finite");
}

SampledCurve flow_control(const Frame& frame, const Control& u, const Eigen::VectorXd& x0, int substeps) {
  check_inputs(frame, u, x0);
  const CompiledFrame cf(frame);
  SampledCurve out;
  out.t = u.times();
  out.points.resize(frame.n, u.steps() + 1);
  integrate(
      u, substeps, x0, [&](const Eigen::VectorXd& uk, const Eigen::VectorXd& x) { return cf.velocity(uk, x); },
      [&](int i, const Eigen::VectorXd& x) { out.points.col(i) = x; });
  return out;
}

Lift horizontal_lift(const Frame& frame, const SampledCurve& kappa, const Eigen::VectorXd& x0, int substeps) {
  kappa.validate();
  if (kappa.dim() != frame.r) throw InvalidArgument("base curve must live in R^r");
  if (!is_uniform(kappa.t)) throw InvalidArgument("base curve must be sampled on a uniform grid");
  if (!verify_normal_form(frame).pass) throw PreconditionError("horizontal_lift needs a normal-form frame");
  if (x0.size() != frame.n) throw InvalidArgument("start point has wrong dimension");
  const Eigen::VectorXd k0 = kappa.points.col(0);
  if ((x0.head(frame.r) - k0).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + k0.cwiseAbs().maxCoeff()))
    throw InvalidArgument("start point does not project onto the first point of the base curve");

  const int N = kappa.size() - 1;
  const double h = (kappa.t.back() - kappa.t.front()) / N;
  Eigen::MatrixXd u(frame.r, N + 1);
  const auto& P = kappa.points;
  for (int i = 1; i < N; ++i) u.col(i) = (P.col(i + 1) - P.col(i - 1)) / (2.0 * h);
  if (N >= 2) {
    u.col(0) = (-3.0 * P.col(0) + 4.0 * P.col(1) - P.col(2)) / (2.0 * h);
    u.col(N) = (3.0 * P.col(N) - 4.0 * P.col(N - 1) + P.col(N - 2)) / (2.0 * h);
  } else {
    u.col(0) = u.col(1) = (P.col(1) - P.col(0)) / h;
  }
  Control control(kappa.t.front(), kappa.t.back(), std::move(u));
  SampledCurve curve = flow_control(frame, control, x0, substeps);
  curve.t = kappa.t;
  return {std::move(curve), std::move(control)};
}

Lift horizontal_lift(const Frame& frame, const Control::Function& kappa, const Control::Function& velocity, double t0,
                     double t1, int steps, const Eigen::VectorXd& x0, int substeps) {
  if (!verify_normal_form(frame).pass) throw PreconditionError("horizontal_lift needs a normal-form frame");
  if (x0.size() != frame.n) throw InvalidArgument("start point has wrong dimension");
  const Eigen::VectorXd k0 = kappa(t0);
  if (k0.size() != frame.r) throw InvalidArgument("base curve must live in R^r");
  if ((x0.head(frame.r) - k0).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + k0.cwiseAbs().maxCoeff()))
    throw InvalidArgument("start point does not project onto the first point of the base curve");
  Control control = Control::analytic(velocity, frame.r, t0, t1, steps);
  SampledCurve curve = flow_control(frame, control, x0, substeps);
  return {std::move(curve), std::move(control)};
}

JacobianPath jacobian_flow(const Frame& frame, const Control& u, const Eigen::VectorXd& x0, int substeps) {
  check_inputs(frame, u, x0);
  const CompiledFrame cf(frame);
  const int n = frame.n;
  Eigen::VectorXd y(n + n * n);
  y.head(n) = x0;
  Eigen::Map<Eigen::MatrixXd>(y.data() + n, n, n).setIdentity();
  JacobianPath out;
  out.t = u.times();
  integrate(
      u, substeps, y,
      [&](const Eigen::VectorXd& uk, const Eigen::VectorXd& s) {
        const Eigen::VectorXd x = s.head(n);
        Eigen::VectorXd ds(s.size());
        ds.head(n) = cf.velocity(uk, x);
        Eigen::Map<Eigen::MatrixXd>(ds.data() + n, n, n) =
            cf.derivative(uk, x) * Eigen::Map<const Eigen::MatrixXd>(s.data() + n, n, n);
        return ds;
      },
      [&](int, const Eigen::VectorXd& s) { out.J.emplace_back(Eigen::Map<const Eigen::MatrixXd>(s.data() + n, n, n)); });
  return out;
}

double pushforward_identity_residual(const Frame& frame, const Control& u, const Eigen::VectorXd& x0, int substeps) {
  const auto path = jacobian_flow(frame, u, x0, substeps);
  double sup = 0.0;
  for (const auto& J : path.J)
    for (int i = frame.r; i < frame.n; ++i) {
      Eigen::VectorXd d = J.col(i);
      d[i] -= 1.0;
      sup = std::max(sup, d.cwiseAbs().maxCoeff());
    }
  return sup;
}

ExtremalResiduals extremal_residuals(const Frame& frame, const Control& u, const Eigen::VectorXd& x0,
                                     const Eigen::VectorXd& lambda, int substeps) {
  check_inputs(frame, u, x0);
  if (lambda.size() != frame.n) throw InvalidArgument("covector has wrong dimension");
  if (lambda.cwiseAbs().maxCoeff() == 0.0) throw InvalidArgument("covector must be nonzero");
  const CompiledFrame cf(frame);
  const int n = frame.n, r = frame.r;

  ExtremalResiduals out;
  out.t = u.times();
  std::vector<CompiledField> brackets;
  for (int h = 0; h < r; ++h)
    for (int k = h + 1; k < r; ++k) {
      out.pairs.emplace_back(h + 1, k + 1);
      brackets.emplace_back(lie_bracket_fields(frame.fields[static_cast<std::size_t>(h)], frame.fields[static_cast<std::size_t>(k)]));
    }
  out.rho.resize(r, u.steps() + 1);
  out.sigma.resize(static_cast<Eigen::Index>(out.pairs.size()), u.steps() + 1);

  // State: x, mu = J^{-T} lambda, log det J.
  Eigen::VectorXd y(2 * n + 1);
  y << x0, lambda, 0.0;
  integrate(
      u, substeps, y,
      [&](const Eigen::VectorXd& uk, const Eigen::VectorXd& s) {
        const Eigen::VectorXd x = s.head(n);
        const Eigen::MatrixXd D = cf.derivative(uk, x);
        Eigen::VectorXd ds(s.size());
        ds.head(n) = cf.velocity(uk, x);
        ds.segment(n, n) = -D.transpose() * s.segment(n, n);
        ds[2 * n] = D.trace();
        return ds;
      },
      [&](int i, const Eigen::VectorXd& s) {
        check_log_det(s[2 * n], u.time(i));
        const Eigen::VectorXd x = s.head(n), mu = s.segment(n, n);
        for (int k = 0; k < r; ++k) out.rho(k, i) = mu.dot(cf.fields[static_cast<std::size_t>(k)](x));
        for (std::size_t p = 0; p < brackets.size(); ++p) out.sigma(static_cast<Eigen::Index>(p), i) = mu.dot(brackets[p](x));
      });
  out.rho_sup = out.rho.cwiseAbs().maxCoeff();
  out.sigma_sup = out.sigma.size() ? out.sigma.cwiseAbs().maxCoeff() : 0.0;
  return out;
}

AbnormalRecovery recover_abnormal_covector(const Frame& frame, const Control& u, const Eigen::VectorXd& x0,
                                           double threshold, int substeps) {
  check_inputs(frame, u, x0);
  const CompiledFrame cf(frame);
  const int n = frame.n, r = frame.r, N = u.steps();
  Eigen::MatrixXd stack((N + 1) * r, n);

  // State: x, K = J^{-1} (K' = -K D), log det J.
  Eigen::VectorXd y(n + n * n + 1);
  y.head(n) = x0;
  Eigen::Map<Eigen::MatrixXd>(y.data() + n, n, n).setIdentity();
  y[n + n * n] = 0.0;
  integrate(
      u, substeps, y,
      [&](const Eigen::VectorXd& uk, const Eigen::VectorXd& s) {
        const Eigen::VectorXd x = s.head(n);
        const Eigen::MatrixXd D = cf.derivative(uk, x);
        Eigen::VectorXd ds(s.size());
        ds.head(n) = cf.velocity(uk, x);
        Eigen::Map<Eigen::MatrixXd>(ds.data() + n, n, n).noalias() =
            -Eigen::Map<const Eigen::MatrixXd>(s.data() + n, n, n) * D;
        ds[n + n * n] = D.trace();
        return ds;
      },
      [&](int i, const Eigen::VectorXd& s) {
        check_log_det(s[n + n * n], u.time(i));
        const Eigen::VectorXd x = s.head(n);
        const Eigen::Map<const Eigen::MatrixXd> K(s.data() + n, n, n);
        for (int k = 0; k < r; ++k) stack.row(i * r + k) = (K * cf.fields[static_cast<std::size_t>(k)](x)).transpose();
      });

  AbnormalRecovery out;
  out.threshold = threshold;
  out.stack_norm = stack.rowwise().norm().maxCoeff();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(stack, Eigen::ComputeThinV);
  out.singular_values = svd.singularValues();
  const double smax = out.singular_values[0];
  out.sigma_ratio_min = smax > 0 ? out.singular_values[out.singular_values.size() - 1] / smax : 0.0;
  // Most nearly null direction first.
  for (Eigen::Index i = out.singular_values.size() - 1; i >= 0; --i)
    if (smax == 0.0 || out.singular_values[i] / smax < threshold)
      out.candidates.push_back(make_unit_positive(svd.matrixV().col(i)));
  return out;
}

Eigen::VectorXd spiral_point(double t) {
  const double phase = -std::log(t);
  return Eigen::Vector2d(t * std::cos(phase), t * std::sin(phase));
}

Eigen::VectorXd spiral_velocity(double t) {
  const double c = std::cos(std::log(t)), s = std::sin(std::log(t));
  return Eigen::Vector2d(c - s, -s - c);
}

SampledCurve spiral_curve(double eps, int N) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw InvalidArgument("spiral: need 0 < eps < 1");
  if (N < 2) throw InvalidArgument("spiral: need at least two samples");
  SampledCurve c;
  c.points.resize(2, N);
  for (int i = 0; i < N; ++i) {
    const double t = i == N - 1 ? 1.0 : eps + (1.0 - eps) * i / (N - 1);
    c.t.push_back(t);
    c.points.col(i) = spiral_point(t);
  }
  return c;
}

Containment polynomial_containment(const Eigen::MatrixXd& points, int degree, double threshold) {
  if (points.rows() != 2) throw InvalidArgument("containment: points must be planar");
  if (degree < 0) throw InvalidArgument("containment: degree must be non-negative");
  const int monomials = (degree + 1) * (degree + 2) / 2;
  if (points.cols() < 3 * monomials)
    throw InvalidArgument("containment: need at least " + std::to_string(3 * monomials) + " points for degree " +
                          std::to_string(degree));
  Eigen::MatrixXd V(points.cols(), monomials);
  int col = 0;
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a, ++col)
      for (Eigen::Index i = 0; i < points.cols(); ++i)
        V(i, col) = std::pow(points(0, i), a) * std::pow(points(1, i), d - a);
  for (int c = 0; c < monomials; ++c) {
    const double norm = V.col(c).norm();
    if (norm > 0.0) V.col(c) /= norm;
  }
  Containment out;
  out.degree = degree;
  out.singular_values = Eigen::BDCSVD<Eigen::MatrixXd>(V).singularValues();
  const double smax = out.singular_values[0];
  out.sigma_min_ratio = smax > 0 ? out.singular_values[monomials - 1] / smax : 0.0;
  for (int i = 0; i < monomials; ++i)
    if (smax == 0.0 || out.singular_values[i] / smax < threshold) ++out.null_space_dim;
  return out;
}

}  // namespace goh_atlas
