#include "goh_atlas/freelie.hpp"

#include <algorithm>
#include <sstream>

#include "goh_atlas/exact_linalg.hpp"

namespace goh_atlas {
namespace {

void check_rank_step(int rank, int step) {
  if (rank < 1 || step < 1) throw InvalidArgument("rank and step must be at least 1");
  if (rank > kMaxRank) throw InvalidArgument("rank above 9 is not supported");
}

int mobius(int n) {
  int result = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  if (n > 1) result = -result;
  return result;
}

char letter(int i) { return static_cast<char>('1' + i); }

// Lyndon words of length <= step in lexicographic order (Duval's algorithm).
std::vector<Word> lyndon_words_lex(int rank, int step) {
  std::vector<Word> out;
  std::vector<int> w{0};
  while (!w.empty()) {
    Word s;
    for (int c : w) s.push_back(letter(c));
    out.push_back(std::move(s));
    const std::size_t m = w.size();
    while (static_cast<int>(w.size()) < step) w.push_back(w[w.size() - m]);
    while (!w.empty() && w.back() == rank - 1) w.pop_back();
    if (!w.empty()) ++w.back();
  }
  return out;
}

std::vector<int> generator_indices(const MultiIndex& J, int rank) {
  if (J.empty()) throw InvalidArgument("multi-index must be non-empty");
  for (int j : J)
    if (j < 1 || j > rank) throw InvalidArgument("multi-index entry outside 1..rank");
  return J;
}

}  // namespace

WittDimensions witt_dimension(int rank, int step) {
  check_rank_step(rank, step);
  WittDimensions out;
  for (int len = 1; len <= step; ++len) {
    long long sum = 0;
    for (int d = 1; d <= len; ++d) {
      if (len % d != 0) continue;
      long long power = 1;
      for (int k = 0; k < len / d; ++k) power *= rank;
      sum += mobius(d) * power;
    }
    out.per_length.push_back(static_cast<int>(sum / len));
    out.total += out.per_length.back();
  }
  return out;
}

LyndonBasis::LyndonBasis(int rank, int step) : rank_(rank), step_(step) {
  check_rank_step(rank, step);
  words_ = lyndon_words_lex(rank, step);
  std::stable_sort(words_.begin(), words_.end(),
                   [](const Word& a, const Word& b) { return a.size() < b.size(); });
  for (std::size_t i = 0; i < words_.size(); ++i) {
    index_.emplace(words_[i], static_cast<int>(i));
    weights_.push_back(static_cast<int>(words_[i].size()));
  }

  factors_.resize(words_.size(), {-1, -1});
  expansions_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const Word& w = words_[i];
    if (w.size() == 1) {
      TensorElement<Rational> t(step_);
      t.add(w, Rational(1));
      expansions_.push_back(std::move(t));
      continue;
    }
    // Standard factorization: v is the longest proper suffix that is Lyndon.
    for (std::size_t cut = 1; cut < w.size(); ++cut) {
      const int v = index_of(w.substr(cut));
      if (v < 0) continue;
      const int u = index_of(w.substr(0, cut));
      factors_[i] = {u, v};
      break;
    }
    const auto [u, v] = factors_[i];
    expansions_.push_back(tensor_bracket(expansions_[static_cast<std::size_t>(u)],
                                         expansions_[static_cast<std::size_t>(v)]));
  }
}

int LyndonBasis::index_of(const Word& w) const {
  auto it = index_.find(w);
  return it == index_.end() ? -1 : it->second;
}

void LyndonBasis::check(const LieElement& a) const {
  for (const auto& [i, c] : a.coeffs())
    if (i < 0 || i >= size()) throw InvalidArgument("Lie element index out of range");
}

TensorElement<Rational> LyndonBasis::to_tensor(const LieElement& a) const {
  check(a);
  TensorElement<Rational> t(step_);
  for (const auto& [i, c] : a.coeffs()) t.add_scaled(expansion(i), c);
  return t;
}

LieElement LyndonBasis::project(const TensorElement<Rational>& t) const {
  const auto dense = project<Rational>(t, Rational(0));
  LieElement out;
  for (std::size_t i = 0; i < dense.size(); ++i) out.add(static_cast<int>(i), dense[i]);
  return out;
}

LyndonBasis generate_basis(int rank, int step) { return LyndonBasis(rank, step); }

LieElement bracket(const LieElement& a, const LieElement& b, const LyndonBasis& basis) {
  return basis.project(tensor_bracket(basis.to_tensor(a), basis.to_tensor(b)));
}

LieElement iterated_bracket_index(const MultiIndex& J, const LyndonBasis& basis) {
  generator_indices(J, basis.rank());
  if (static_cast<int>(J.size()) > basis.step()) return {};
  LieElement acc = LieElement::basis(J.back() - 1);
  for (auto it = J.rbegin() + 1; it != J.rend(); ++it) acc = bracket(LieElement::basis(*it - 1), acc, basis);
  return acc;
}

LieElement bch(const LieElement& a, const LieElement& b, const LyndonBasis& basis) {
  const Rational one(1);
  const auto ea = tensor_exp(basis.to_tensor(a), one);
  const auto eb = tensor_exp(basis.to_tensor(b), one);
  return basis.project(tensor_log(ea * eb, one));
}

// ---------------------------------------------------------------------------

StructureTable::StructureTable(int rank, std::vector<int> weights, std::vector<std::string> labels)
    : rank_(rank), weights_(std::move(weights)), labels_(std::move(labels)) {
  const std::size_t n = weights_.size();
  if (rank_ < 0 || static_cast<std::size_t>(rank_) > n) throw InvalidArgument("structure table: bad rank");
  if (!labels_.empty() && labels_.size() != n) throw InvalidArgument("structure table: label count mismatch");
  c_.assign(n, std::vector<LieElement>(n));
}

int StructureTable::step() const {
  return weights_.empty() ? 0 : *std::max_element(weights_.begin(), weights_.end());
}

void StructureTable::set(int i, int j, const LieElement& value) {
  if (i < 0 || j < 0 || i >= size() || j >= size()) throw InvalidArgument("structure table: index out of range");
  if (value.max_index() >= size()) throw InvalidArgument("structure table: value index out of range");
  if (i == j && !value.is_zero()) throw InvalidArgument("structure table: [e_i, e_i] must vanish");
  c_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = value;
  c_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = -value;
}

LieElement StructureTable::bracket(const LieElement& a, const LieElement& b) const {
  LieElement out;
  for (const auto& [i, ca] : a.coeffs()) {
    for (const auto& [j, cb] : b.coeffs()) {
      const auto& cij = at(i, j);
      if (cij.is_zero()) continue;
      const Rational f = ca * cb;
      for (const auto& [k, c] : cij.coeffs()) out.add(k, f * c);
    }
  }
  return out;
}

bool StructureTable::is_antisymmetric() const {
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      if (!(at(i, j) == -at(j, i))) return false;
  return true;
}

bool StructureTable::is_graded() const {
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j)
      for (const auto& [k, c] : at(i, j).coeffs())
        if (weights_[static_cast<std::size_t>(k)] != weights_[static_cast<std::size_t>(i)] + weights_[static_cast<std::size_t>(j)])
          return false;
  return true;
}

bool StructureTable::jacobi_holds_on_basis() const {
  const int n = size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        const auto ei = LieElement::basis(i), ej = LieElement::basis(j), ek = LieElement::basis(k);
        const auto sum = bracket(ei, at(j, k)) + bracket(ej, at(k, i)) + bracket(ek, at(i, j));
        if (!sum.is_zero()) return false;
      }
    }
  }
  return true;
}

StructureTable structure_table(const LyndonBasis& basis) {
  StructureTable table(basis.rank(), basis.weights(), basis.words());
  const int n = basis.size();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (basis.weight(i) + basis.weight(j) > basis.step()) continue;
      table.set(i, j, basis.project(tensor_bracket(basis.expansion(i), basis.expansion(j))));
    }
  }
  return table;
}

StructureTable abelian_table(int n) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i + 1));
  return StructureTable(n, std::vector<int>(static_cast<std::size_t>(n), 1), labels);
}

std::string format_multi_index(const MultiIndex& J) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < J.size(); ++i) os << (i ? "," : "") << J[i];
  os << ")";
  return os.str();
}

RightNestedBasis right_nested_basis(const LyndonBasis& basis) {
  const int n = basis.size();
  const int r = basis.rank();
  RightNestedBasis out;
  out.generators.resize(static_cast<std::size_t>(n));
  out.elements.resize(static_cast<std::size_t>(n));

  // Reduced vectors already chosen in the current degree, keyed by pivot.
  std::map<int, LieElement> pivots;
  int current_len = 0;
  for (int i = 0; i < n; ++i) {
    const int len = basis.weight(i);
    if (len != current_len) {
      pivots.clear();
      current_len = len;
    }
    MultiIndex J(static_cast<std::size_t>(len), 1);
    bool found = false;
    while (!found) {
      LieElement x = iterated_bracket_index(J, basis);
      LieElement reduced = x;
      for (const auto& [p, v] : pivots) {
        const Rational c = reduced.coeff(p);
        if (sgn(c) != 0) reduced -= c * v;
      }
      if (sgn(reduced.coeff(i)) != 0) {
        const Rational lead = reduced.coeff(i);
        reduced *= Rational(1) / lead;
        // Keep pivots fully reduced against each other.
        for (auto& [p, v] : pivots) {
          const Rational c = v.coeff(i);
          if (sgn(c) != 0) v -= c * reduced;
        }
        pivots.emplace(i, reduced);
        out.generators[static_cast<std::size_t>(i)] = J;
        out.elements[static_cast<std::size_t>(i)] = x;
        found = true;
        break;
      }
      // Next multi-index in lexicographic order.
      int pos = len - 1;
      while (pos >= 0 && J[static_cast<std::size_t>(pos)] == r) J[static_cast<std::size_t>(pos--)] = 1;
      if (pos < 0) throw std::logic_error("right-nested brackets fail to span a Lyndon degree");
      ++J[static_cast<std::size_t>(pos)];
    }
  }

  out.to_lyndon.assign(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n), Rational(0)));
  for (int i = 0; i < n; ++i)
    for (const auto& [k, c] : out.elements[static_cast<std::size_t>(i)].coeffs())
      out.to_lyndon[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = c;
  auto inv = exact_inverse(out.to_lyndon);
  if (!inv) throw std::logic_error("right-nested basis is singular");
  out.from_lyndon = std::move(*inv);

  std::vector<std::string> labels;
  for (const auto& J : out.generators) {
    std::string s;
    for (int j : J) s.push_back(letter(j - 1));
    labels.push_back(s);
  }
  out.table = StructureTable(r, basis.weights(), labels);
  const auto lyndon = structure_table(basis);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (basis.weight(i) + basis.weight(j) > basis.step()) continue;
      const LieElement b = lyndon.bracket(out.elements[static_cast<std::size_t>(i)], out.elements[static_cast<std::size_t>(j)]);
      std::vector<Rational> dense(static_cast<std::size_t>(n), Rational(0));
      for (const auto& [k, c] : b.coeffs()) dense[static_cast<std::size_t>(k)] = c;
      const auto coords = mat_vec(out.from_lyndon, dense);
      LieElement value;
      for (int k = 0; k < n; ++k) value.add(k, coords[static_cast<std::size_t>(k)]);
      out.table.set(i, j, value);
    }
  }
  return out;
}

}  // namespace goh_atlas
