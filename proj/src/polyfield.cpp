#include "goh_atlas/polyfield.hpp"

#include <algorithm>

#include "goh_atlas/exact_linalg.hpp"

namespace goh_atlas {
namespace {

void check_field(const PolyVec& X, int n) {
  if (static_cast<int>(X.size()) != n) throw InvalidArgument("vector field has wrong number of components");
  for (const auto& p : X)
    if (p.nvars() != n) throw InvalidArgument("vector field component has wrong ambient dimension");
}

// Picard iteration x <- x0 + int_0^tau X(x(s)) ds with tau the last variable.
PolyVec picard(const PolyVec& X, const PolyVec& x0, int tau, int bound) {
  PolyVec x = x0;
  for (int iter = 0; iter < bound; ++iter) {
    PolyVec next(x.size());
    for (std::size_t i = 0; i < X.size(); ++i)
      next[i] = x0[i] + X[i].compose(std::span<const Poly>(x)).antiderivative(tau);
    if (next == x) return x;
    x = std::move(next);
  }
  throw NotNilpotentError("Picard iteration did not stabilize within " + std::to_string(bound) +
                          " iterations; integrate this field numerically");
}

}  // namespace

void Frame::validate() const {
  if (r < 1 || r > n) throw InvalidArgument("frame: need 1 <= r <= n");
  if (static_cast<int>(fields.size()) != r) throw InvalidArgument("frame: field count differs from r");
  for (const auto& X : fields) check_field(X, n);
  if (!weights.empty() && static_cast<int>(weights.size()) != n) throw InvalidArgument("frame: weight count differs from n");
  if (!labels.empty() && static_cast<int>(labels.size()) != n) throw InvalidArgument("frame: label count differs from n");
  if (!brackets.empty() && static_cast<int>(brackets.size()) != n) throw InvalidArgument("frame: bracket count differs from n");
  if (!completion.empty()) {
    if (!has_completion()) throw InvalidArgument("frame: completion must hold n - r fields");
    for (const auto& X : completion) check_field(X, n);
  }
}

std::vector<PolyVec> Frame::stratified_fields() const {
  if (!has_completion()) throw InvalidArgument("frame carries no completion to a stratified basis");
  std::vector<PolyVec> all = fields;
  all.insert(all.end(), completion.begin(), completion.end());
  return all;
}

Frame make_frame(std::vector<PolyVec> fields) {
  if (fields.empty()) throw InvalidArgument("frame needs at least one field");
  Frame f;
  f.n = static_cast<int>(fields.front().size());
  f.r = static_cast<int>(fields.size());
  f.fields = std::move(fields);
  f.validate();
  return f;
}

PolyVec field_derivative(const PolyVec& X, int var) {
  PolyVec out;
  out.reserve(X.size());
  for (const auto& p : X) out.push_back(p.derivative(var));
  return out;
}

PolyVec lie_bracket_fields(const PolyVec& X, const PolyVec& Y) {
  if (X.size() != Y.size()) throw InvalidArgument("lie bracket: dimension mismatch");
  const int n = static_cast<int>(X.size());
  check_field(X, n);
  check_field(Y, n);
  PolyVec out = zero_field(n);
  for (int i = 0; i < n; ++i) {
    const auto& xi = X[static_cast<std::size_t>(i)];
    const auto& yi = Y[static_cast<std::size_t>(i)];
    if (xi.is_zero() && yi.is_zero()) continue;
    for (int j = 0; j < n; ++j) {
      const auto& yj = Y[static_cast<std::size_t>(j)];
      const auto& xj = X[static_cast<std::size_t>(j)];
      if (!xi.is_zero() && yj.depends_on(i)) out[static_cast<std::size_t>(j)] += xi * yj.derivative(i);
      if (!yi.is_zero() && xj.depends_on(i)) out[static_cast<std::size_t>(j)] -= yi * xj.derivative(i);
    }
  }
  return out;
}

PolyVec iterated_bracket_fields(const Frame& frame, const MultiIndex& J) {
  if (J.empty()) throw InvalidArgument("multi-index must be non-empty");
  for (int j : J)
    if (j < 1 || j > frame.r) throw InvalidArgument("multi-index entry outside 1..r");
  PolyVec acc = frame.fields[static_cast<std::size_t>(J.back() - 1)];
  for (auto it = J.rbegin() + 1; it != J.rend(); ++it) {
    if (is_zero_field(acc)) break;
    acc = lie_bracket_fields(frame.fields[static_cast<std::size_t>(*it - 1)], acc);
  }
  return acc;
}

std::map<MultiIndex, PolyVec> iterated_brackets_up_to(const Frame& frame, int max_len) {
  std::map<MultiIndex, PolyVec> out;
  std::vector<MultiIndex> previous;
  for (int j = 1; j <= frame.r; ++j) {
    out.emplace(MultiIndex{j}, frame.fields[static_cast<std::size_t>(j - 1)]);
    previous.push_back({j});
  }
  for (int len = 2; len <= max_len; ++len) {
    std::vector<MultiIndex> current;
    for (int j = 1; j <= frame.r; ++j) {
      for (const auto& tail : previous) {
        MultiIndex J{j};
        J.insert(J.end(), tail.begin(), tail.end());
        const PolyVec& inner = out.at(tail);
        PolyVec value = is_zero_field(inner) ? zero_field(frame.n)
                                             : lie_bracket_fields(frame.fields[static_cast<std::size_t>(j - 1)], inner);
        out.emplace(J, std::move(value));
        current.push_back(std::move(J));
      }
    }
    previous = std::move(current);
  }
  return out;
}

PolyVec exact_flow_symbolic(const PolyVec& X, int picard_bound) {
  const int n = static_cast<int>(X.size());
  check_field(X, n);
  PolyVec x0;
  for (int i = 0; i < n; ++i) x0.push_back(Poly::variable(n + 1, i));
  return picard(X, x0, n, picard_bound);
}

std::vector<Rational> exact_flow(const PolyVec& X, std::span<const Rational> x0, const Rational& t, int picard_bound) {
  const int n = static_cast<int>(X.size());
  check_field(X, n);
  if (static_cast<int>(x0.size()) != n) throw InvalidArgument("exact_flow: start point has wrong dimension");
  PolyVec start;
  for (const auto& c : x0) start.push_back(Poly::constant(1, c));
  const PolyVec path = picard(X, start, 0, picard_bound);
  const Rational tt[1] = {t};
  std::vector<Rational> out;
  for (const auto& p : path) out.push_back(p.evaluate<Rational>(std::span<const Rational>(tt, 1)));
  return out;
}

Frame heisenberg_frame() {
  Frame f = make_frame({parse_field({"1", "0", "0"}, 3), parse_field({"0", "1", "x1"}, 3)});
  f.weights = {1, 1, 2};
  f.labels = {"1", "2", "12"};
  f.brackets = {{1}, {2}, {1, 2}};
  f.completion = {coordinate_field(3, 2)};
  f.normal_form = true;
  return f;
}

Frame martinet_frame() {
  Frame f = make_frame({parse_field({"1", "0", "0"}, 3), parse_field({"0", "1", "1/2*x1^2"}, 3)});
  f.normal_form = true;
  return f;
}

std::vector<Rational> evaluate_field(const PolyVec& X, std::span<const Rational> x) {
  std::vector<Rational> out;
  out.reserve(X.size());
  for (const auto& p : X) out.push_back(p.evaluate<Rational>(x));
  return out;
}

std::vector<double> evaluate_field(const PolyVec& X, std::span<const double> x) {
  std::vector<double> out;
  out.reserve(X.size());
  for (const auto& p : X) out.push_back(p.evaluate<double>(x));
  return out;
}

GrowthVector growth_vector(const Frame& frame, std::span<const Rational> p, int depth) {
  frame.validate();
  if (depth < 1) throw InvalidArgument("growth_vector: depth must be at least 1");
  if (static_cast<int>(p.size()) != frame.n) throw InvalidArgument("growth_vector: point has wrong dimension");
  const auto brackets = iterated_brackets_up_to(frame, depth);
  GrowthVector out;
  RationalMatrix rows;
  for (int len = 1; len <= depth; ++len) {
    for (const auto& [J, X] : brackets) {
      if (static_cast<int>(J.size()) != len || is_zero_field(X)) continue;
      rows.push_back(evaluate_field(X, p));
    }
    out.dims.push_back(exact_rank(rows));
  }
  out.bracket_generating = out.dims.back() == frame.n;
  return out;
}

}  // namespace goh_atlas
