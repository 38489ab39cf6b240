#include "goh_atlas/metabelian.hpp"

#include <cmath>

#include "goh_atlas/normalform.hpp"

namespace goh_atlas {

MetabelianVerdict is_metabelian(const Frame& frame, int depth) {
  frame.validate();
  MetabelianVerdict out;
  out.depth = depth;
  if (depth < 4) return out;
  const auto brackets = iterated_brackets_up_to(frame, depth - 2);
  // The map is ordered lexicographically, which fixes the witness order.
  for (const auto& [I, XI] : brackets) {
    if (I.size() < 2 || is_zero_field(XI)) continue;
    for (const auto& [J, XJ] : brackets) {
      if (J.size() < I.size() || static_cast<int>(I.size() + J.size()) > depth) continue;
      if (J.size() == I.size() && !(I < J)) continue;
      if (is_zero_field(XJ)) continue;
      const PolyVec b = lie_bracket_fields(XI, XJ);
      for (std::size_t c = 0; c < b.size(); ++c) {
        if (b[c].is_zero()) continue;
        out.metabelian = false;
        out.witness = MetabelianWitness{I, J, static_cast<int>(c) + 1, b[c].str()};
        return out;
      }
    }
  }
  return out;
}

bool is_metabelian_algebra(const StructureTable& table) {
  const auto& w = table.weights();
  for (int i = 0; i < table.size(); ++i)
    for (int j = i + 1; j < table.size(); ++j)
      if (w[static_cast<std::size_t>(i)] >= 2 && w[static_cast<std::size_t>(j)] >= 2 && !table.at(i, j).is_zero())
        return false;
  return true;
}

DependenceVerdict coefficient_dependence(const Frame& frame) {
  const auto report = verify_normal_form(frame);
  if (!report.pass)
    throw InvalidArgument("coefficient_dependence: frame is not in normal form at (k=" +
                          std::to_string(report.failures.front().k) + ", j=" + std::to_string(report.failures.front().j) + ")");
  DependenceVerdict out;
  for (int k = 0; k < frame.r; ++k)
    for (int j = frame.r; j < frame.n; ++j)
      for (int m = frame.r; m < frame.n; ++m)
        if (frame.fields[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)].depends_on(m))
          out.offending.push_back({k + 1, j + 1, m + 1});
  out.only_first_variables = out.offending.empty();
  return out;
}

double translation_invariance(const Frame& frame, const std::vector<TranslationSample>& samples) {
  frame.validate();
  double sup = 0.0;
  for (const auto& s : samples) {
    if (static_cast<int>(s.x.size()) != frame.n || static_cast<int>(s.tau.size()) != frame.n - frame.r)
      throw InvalidArgument("translation_invariance: sample has wrong dimension");
    std::vector<double> shifted = s.x;
    for (int m = frame.r; m < frame.n; ++m) shifted[static_cast<std::size_t>(m)] += s.tau[static_cast<std::size_t>(m - frame.r)];
    for (const auto& X : frame.fields) {
      const auto a = evaluate_field(X, std::span<const double>(s.x));
      const auto b = evaluate_field(X, std::span<const double>(shifted));
      for (std::size_t i = 0; i < a.size(); ++i) sup = std::max(sup, std::abs(a[i] - b[i]));
    }
  }
  return sup;
}

}  // namespace goh_atlas
