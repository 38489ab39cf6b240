#include "goh_atlas/normalform.hpp"

#include <cmath>

#include "goh_atlas/numeric_field.hpp"

namespace goh_atlas {
namespace {

using PolyColumn = std::vector<Poly>;

PolyColumn unit_column(int n, int j) {
  PolyColumn v(static_cast<std::size_t>(n), Poly(n));
  v[static_cast<std::size_t>(j)] = Poly::constant(n, Rational(1));
  return v;
}

bool is_zero_column(const PolyColumn& v) {
  return std::all_of(v.begin(), v.end(), [](const Poly& p) { return p.is_zero(); });
}

// exp(c ad_{E_i}) v for a polynomial scalar c.
PolyColumn exp_ad(const StructureTable& table, int i, const Poly& c, PolyColumn v) {
  const int n = table.size();
  const Poly zero(n);
  PolyColumn out = v;
  Poly factor = Poly::constant(n, Rational(1));
  for (int k = 1; k <= table.step(); ++k) {
    v = table.ad(i, v, zero);
    if (is_zero_column(v)) break;
    factor = factor * c * Rational(1, k);
    for (std::size_t m = 0; m < v.size(); ++m)
      if (!v[m].is_zero()) out[m] += factor * v[m];
  }
  return out;
}

// ad_y v with y the vector of first-kind coordinate functions.
PolyColumn ad_coordinates(const StructureTable& table, const PolyColumn& v) {
  const int n = table.size();
  const Poly zero(n);
  PolyColumn out(static_cast<std::size_t>(n), zero);
  for (int i = 0; i < n; ++i) {
    const PolyColumn w = table.ad(i, v, zero);
    const Poly yi = Poly::variable(n, i);
    for (std::size_t m = 0; m < w.size(); ++m)
      if (!w[m].is_zero()) out[m] += yi * w[m];
  }
  return out;
}


}  // namespace

std::vector<Rational> left_trivialized_coefficients(int m) {
  // (1 - e^{-z}) / z = sum_k (-1)^k z^k / (k+1)!, inverted as a power series.
  std::vector<Rational> a(static_cast<std::size_t>(m + 1));
  mpz_class fact = 1;
  for (int k = 0; k <= m; ++k) {
    fact *= k + 1;
    a[static_cast<std::size_t>(k)] = Rational(k % 2 == 0 ? 1 : -1) / Rational(fact);
  }
  std::vector<Rational> b(static_cast<std::size_t>(m + 1), Rational(0));
  b[0] = 1;
  for (int k = 1; k <= m; ++k) {
    Rational s = 0;
    for (int j = 1; j <= k; ++j) s += a[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(k - j)];
    b[static_cast<std::size_t>(k)] = -s;
  }
  return b;
}

Realization realize_frame(const LyndonBasis& basis, bool with_coordinate_maps) {
  Realization out;
  out.basis = basis;
  out.stratified = right_nested_basis(basis);
  const StructureTable& table = out.stratified.table;
  const int n = basis.size();
  const int r = basis.rank();

  // Column j of M is the left-trivialized derivative of q along x_j:
  // exp(-x_1 ad E_1) ... exp(-x_{j-1} ad E_{j-1}) E_j.
  std::vector<PolyColumn> M;
  M.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    PolyColumn v = unit_column(n, j);
    for (int i = j - 1; i >= 0; --i) v = exp_ad(table, i, -Poly::variable(n, i), std::move(v));
    M.push_back(std::move(v));
  }

  // X_k solves M V = e_k; M is unipotent lower triangular.
  std::vector<PolyVec> fields;
  for (int k = 0; k < n; ++k) {
    PolyVec V = zero_field(n);
    V[static_cast<std::size_t>(k)] = Poly::constant(n, Rational(1));
    for (int i = k + 1; i < n; ++i) {
      Poly s(n);
      for (int j = k; j < i; ++j) {
        const Poly& mij = M[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
        const Poly& vj = V[static_cast<std::size_t>(j)];
        if (!mij.is_zero() && !vj.is_zero()) s += mij * vj;
      }
      V[static_cast<std::size_t>(i)] = -s;
    }
    fields.push_back(std::move(V));
  }

  Frame& f = out.frame;
  f.n = n;
  f.r = r;
  f.fields.assign(fields.begin(), fields.begin() + r);
  f.completion.assign(fields.begin() + r, fields.end());
  f.weights = basis.weights();
  f.labels = basis.words();
  f.brackets = out.stratified.generators;
  f.normal_form = true;
  f.validate();

  if (with_coordinate_maps) out.maps = coordinate_maps(out.stratified, basis);
  return out;
}

CoordinateMaps coordinate_maps(const RightNestedBasis& stratified, const LyndonBasis& basis) {
  const int n = basis.size();
  const int s = basis.step();
  const Poly one = Poly::constant(n, Rational(1));
  const Poly zero(n);

  auto product = TensorElement<Poly>::unit(s, one);
  for (int i = n - 1; i >= 0; --i) {
    TensorElement<Poly> a(s);
    a.add_scaled(basis.to_tensor(stratified.elements[static_cast<std::size_t>(i)]), Poly::variable(n, i));
    product = product * tensor_exp(a, one);
  }
  const std::vector<Poly> lyndon = basis.project<Poly>(tensor_log(product, one), zero);

  CoordinateMaps maps;
  maps.psi.assign(static_cast<std::size_t>(n), zero);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Rational& c = stratified.from_lyndon[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      if (sgn(c) != 0 && !lyndon[static_cast<std::size_t>(k)].is_zero())
        maps.psi[static_cast<std::size_t>(i)] += lyndon[static_cast<std::size_t>(k)] * c;
    }

  // psi_i = x_i + R_i(x_1..x_{i-1}), so the inverse follows by substitution.
  PolyVec subs;
  for (int i = 0; i < n; ++i) subs.push_back(Poly::variable(n, i));
  maps.psi_inverse.assign(static_cast<std::size_t>(n), zero);
  for (int i = 0; i < n; ++i) {
    const Poly rest = maps.psi[static_cast<std::size_t>(i)] - Poly::variable(n, i);
    Poly inv = Poly::variable(n, i) - rest.compose(std::span<const Poly>(subs));
    subs[static_cast<std::size_t>(i)] = inv;
    maps.psi_inverse[static_cast<std::size_t>(i)] = std::move(inv);
  }
  return maps;
}

std::vector<PolyVec> first_kind_fields(const StructureTable& table) {
  const int n = table.size();
  const auto coef = left_trivialized_coefficients(table.step());
  std::vector<PolyVec> out;
  for (int k = 0; k < n; ++k) {
    PolyColumn term = unit_column(n, k);
    PolyVec Z = term;
    for (int m = 1; m < table.step(); ++m) {
      term = ad_coordinates(table, term);
      if (is_zero_column(term)) break;
      const Rational& c = coef[static_cast<std::size_t>(m)];
      if (sgn(c) == 0) continue;
      for (std::size_t i = 0; i < term.size(); ++i)
        if (!term[i].is_zero()) Z[i] += term[i] * c;
    }
    out.push_back(std::move(Z));
  }
  return out;
}

NormalFormReport verify_normal_form(const Frame& frame) {
  frame.validate();
  NormalFormReport report;
  auto expect = [&](int k, int j, const Poly& p, bool one) {
    const bool ok = one ? p == Poly::constant(frame.n, Rational(1)) : p.is_zero();
    if (!ok) report.failures.push_back({k + 1, j + 1, p.str()});
  };
  for (int k = 0; k < frame.r; ++k) {
    const PolyVec& X = frame.fields[static_cast<std::size_t>(k)];
    const int upto = k == 0 ? frame.n : frame.r;
    for (int j = 0; j < upto; ++j) expect(k, j, X[static_cast<std::size_t>(j)], j == k);
  }
  report.pass = report.failures.empty();
  return report;
}

SecondKindResidual verify_second_kind(const Frame& frame, const std::vector<double>& x, double tol,
                                      int steps_per_unit) {
  const auto fields = frame.stratified_fields();
  if (static_cast<int>(x.size()) != frame.n) throw InvalidArgument("verify_second_kind: point has wrong dimension");
  Eigen::VectorXd q = Eigen::VectorXd::Zero(frame.n);
  for (int i = frame.n - 1; i >= 0; --i) {
    const double t = x[static_cast<std::size_t>(i)];
    if (t == 0.0) continue;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(t) * steps_per_unit)));
    q = rk4_flow(CompiledField(fields[static_cast<std::size_t>(i)]), q, t, steps);
  }
  SecondKindResidual out;
  for (int i = 0; i < frame.n; ++i) {
    out.reached.push_back(q[i]);
    out.residual = std::max(out.residual, std::abs(q[i] - x[static_cast<std::size_t>(i)]));
  }
  out.pass = out.residual <= tol;
  return out;
}

}  // namespace goh_atlas
