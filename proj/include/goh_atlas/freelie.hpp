// Free nilpotent Lie algebras of rank r and step s.
//
// Storage basis: Lyndon words ordered by (length, lex), each standing for
// its standard (right-factorization) bracketing. Brackets and BCH are
// evaluated in the truncated tensor algebra and projected back to the
// Lyndon basis by triangular elimination on lexicographically minimal words.
//
// Letters of words are the characters '1'..'9', so rank is limited to 9.
// Multi-indices use letters 1..r; basis indices are 0-based.

#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "goh_atlas/errors.hpp"
#include "goh_atlas/polynomial.hpp"
#include "goh_atlas/rational.hpp"

namespace goh_atlas {

using Word = std::string;
using MultiIndex = std::vector<int>;

inline constexpr int kMaxRank = 9;

struct WittDimensions {
  std::vector<int> per_length;  // entry l-1 holds the dimension of degree l
  int total = 0;
};

WittDimensions witt_dimension(int rank, int step);

/// Element of the tensor algebra truncated above degree `step`.
template <class Scalar>
class TensorElement {
 public:
  using Map = std::map<Word, Scalar>;

  TensorElement() = default;
  explicit TensorElement(int step) : step_(step) {}

  static TensorElement unit(int step, const Scalar& one) {
    TensorElement t(step);
    t.add(Word{}, one);
    return t;
  }

  int step() const { return step_; }
  const Map& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  void add(const Word& w, const Scalar& c) {
    if (static_cast<int>(w.size()) > step_) return;
    if (is_zero_scalar(c)) return;
    auto [it, inserted] = coeffs_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (is_zero_scalar(it->second)) coeffs_.erase(it);
    }
  }

  /// this += factor * other, where other has rational coefficients.
  void add_scaled(const TensorElement<Rational>& other, const Scalar& factor) {
    for (const auto& [w, c] : other.coeffs()) add(w, factor * c);
  }

  TensorElement& operator+=(const TensorElement& o) {
    for (const auto& [w, c] : o.coeffs_) add(w, c);
    return *this;
  }
  TensorElement& operator-=(const TensorElement& o) {
    for (const auto& [w, c] : o.coeffs_) add(w, -c);
    return *this;
  }
  TensorElement& scale(const Rational& q) {
    if (sgn(q) == 0) {
      coeffs_.clear();
      return *this;
    }
    for (auto& [w, c] : coeffs_) c *= q;
    return *this;
  }

  friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
  friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }

  /// Concatenation product, truncated at step.
  friend TensorElement operator*(const TensorElement& a, const TensorElement& b) {
    TensorElement out(a.step_);
    for (const auto& [wa, ca] : a.coeffs_) {
      const auto room = static_cast<std::size_t>(a.step_) - wa.size();
      for (const auto& [wb, cb] : b.coeffs_) {
        if (wb.size() > room) continue;
        out.add(wa + wb, ca * cb);
      }
    }
    return out;
  }

  friend bool operator==(const TensorElement& a, const TensorElement& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  int step_ = 0;
  Map coeffs_;
};

template <class Scalar>
TensorElement<Scalar> tensor_bracket(const TensorElement<Scalar>& a, const TensorElement<Scalar>& b) {
  return a * b - b * a;
}

/// exp(a) for a without constant term.
template <class Scalar>
TensorElement<Scalar> tensor_exp(const TensorElement<Scalar>& a, const Scalar& one) {
  auto result = TensorElement<Scalar>::unit(a.step(), one);
  auto term = result;
  for (int k = 1; k <= a.step(); ++k) {
    term = term * a;
    term.scale(Rational(1, k));
    if (term.is_zero()) break;
    result += term;
  }
  return result;
}

/// log(x) for x with constant term one.
template <class Scalar>
TensorElement<Scalar> tensor_log(const TensorElement<Scalar>& x, const Scalar& one) {
  auto z = x - TensorElement<Scalar>::unit(x.step(), one);
  TensorElement<Scalar> result(x.step());
  auto power = z;
  for (int k = 1; k <= x.step() && !power.is_zero(); ++k) {
    auto term = power;
    term.scale(Rational(k % 2 == 1 ? 1 : -1, k));
    result += term;
    power = power * z;
  }
  return result;
}

/// Sparse Lie algebra element over a fixed basis (0-based indices).
class LieElement {
 public:
  using Map = std::map<int, Rational>;

  LieElement() = default;
  static LieElement basis(int i) {
    LieElement e;
    e.add(i, Rational(1));
    return e;
  }

  const Map& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  Rational coeff(int i) const {
    auto it = coeffs_.find(i);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }
  int max_index() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }

  void add(int i, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = coeffs_.try_emplace(i, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) coeffs_.erase(it);
    }
  }

  LieElement& operator+=(const LieElement& o) {
    for (const auto& [i, c] : o.coeffs_) add(i, c);
    return *this;
  }
  LieElement& operator-=(const LieElement& o) {
    for (const auto& [i, c] : o.coeffs_) add(i, -c);
    return *this;
  }
  LieElement& operator*=(const Rational& q) {
    if (sgn(q) == 0) coeffs_.clear();
    for (auto& [i, c] : coeffs_) c *= q;
    return *this;
  }
  LieElement operator-() const {
    LieElement e = *this;
    return e *= Rational(-1);
  }

  friend LieElement operator+(LieElement a, const LieElement& b) { return a += b; }
  friend LieElement operator-(LieElement a, const LieElement& b) { return a -= b; }
  friend LieElement operator*(const Rational& q, LieElement a) { return a *= q; }
  friend bool operator==(const LieElement& a, const LieElement& b) { return a.coeffs_ == b.coeffs_; }

 private:
  Map coeffs_;
};

class LyndonBasis {
 public:
  LyndonBasis() = default;
  LyndonBasis(int rank, int step);

  int rank() const { return rank_; }
  int step() const { return step_; }
  int size() const { return static_cast<int>(words_.size()); }
  const std::vector<Word>& words() const { return words_; }
  const std::vector<int>& weights() const { return weights_; }
  const Word& word(int i) const { return words_.at(static_cast<std::size_t>(i)); }
  int weight(int i) const { return weights_.at(static_cast<std::size_t>(i)); }

  /// Position of a word in the basis, or -1.
  int index_of(const Word& w) const;

  /// Standard factorization w = uv of a non-letter word, as basis indices.
  std::pair<int, int> factorization(int i) const { return factors_.at(static_cast<std::size_t>(i)); }

  /// Tensor expansion of the standard bracketing of basis element i.
  const TensorElement<Rational>& expansion(int i) const { return expansions_.at(static_cast<std::size_t>(i)); }

  TensorElement<Rational> to_tensor(const LieElement& a) const;

  /// Coordinates of a Lie polynomial in the Lyndon basis.
  /// Throws InvalidArgument when `t` is not a Lie polynomial.
  template <class Scalar>
  std::vector<Scalar> project(TensorElement<Scalar> t, const Scalar& zero) const {
    std::vector<Scalar> out(words_.size(), zero);
    while (!t.is_zero()) {
      const auto& [w, c] = *t.coeffs().begin();
      const int idx = index_of(w);
      if (idx < 0) throw InvalidArgument("tensor element is not a Lie polynomial (leading word " + w + ")");
      const Scalar coef = c;
      out[static_cast<std::size_t>(idx)] += coef;
      t.add_scaled(expansion(idx), -coef);
    }
    return out;
  }

  LieElement project(const TensorElement<Rational>& t) const;

  void check(const LieElement& a) const;

 private:
  int rank_ = 0;
  int step_ = 0;
  std::vector<Word> words_;
  std::vector<int> weights_;
  std::unordered_map<Word, int> index_;
  std::vector<std::pair<int, int>> factors_;
  std::vector<TensorElement<Rational>> expansions_;
};

LyndonBasis generate_basis(int rank, int step);

/// Lie bracket, truncated silently at the basis step.
LieElement bracket(const LieElement& a, const LieElement& b, const LyndonBasis& basis);

/// Right-nested bracket [X_{j1},[X_{j2},[...,X_{jk}]]] of generators (letters 1..r).
LieElement iterated_bracket_index(const MultiIndex& J, const LyndonBasis& basis);

/// log(exp(a) exp(b)) in the truncated free nilpotent algebra.
LieElement bch(const LieElement& a, const LieElement& b, const LyndonBasis& basis);

/// Graded Lie algebra given by structure constants on a basis whose first
/// `rank` elements generate.
class StructureTable {
 public:
  StructureTable() = default;
  StructureTable(int rank, std::vector<int> weights, std::vector<std::string> labels);

  int size() const { return static_cast<int>(weights_.size()); }
  int rank() const { return rank_; }
  int step() const;
  const std::vector<int>& weights() const { return weights_; }
  const std::vector<std::string>& labels() const { return labels_; }

  const LieElement& at(int i, int j) const {
    return c_.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j));
  }
  /// Sets [e_i, e_j] and, by antisymmetry, [e_j, e_i].
  void set(int i, int j, const LieElement& value);

  LieElement bracket(const LieElement& a, const LieElement& b) const;

  /// ad_{e_i} applied to a dense coefficient vector over any coefficient ring.
  template <class S>
  std::vector<S> ad(int i, const std::vector<S>& v, const S& zero) const {
    std::vector<S> out(v.size(), zero);
    const auto& row = c_.at(static_cast<std::size_t>(i));
    for (std::size_t m = 0; m < v.size(); ++m) {
      if (is_zero_scalar(v[m])) continue;
      for (const auto& [k, c] : row[m].coeffs()) out[static_cast<std::size_t>(k)] += v[m] * c;
    }
    return out;
  }

  /// First (i, j, k) violating the Jacobi identity on basis triples, if any.
  bool jacobi_holds_on_basis() const;
  bool is_antisymmetric() const;
  bool is_graded() const;

 private:
  int rank_ = 0;
  std::vector<int> weights_;
  std::vector<std::string> labels_;
  std::vector<std::vector<LieElement>> c_;
};

StructureTable structure_table(const LyndonBasis& basis);

/// Abelian algebra R^n with all weights one.
StructureTable abelian_table(int n);

/// A stratified basis of right-nested brackets X_J, one per Lyndon word.
///
/// For each Lyndon word w (in basis order) the lexicographically first
/// multi-index J of length |w| is chosen whose bracket, reduced against the
/// earlier choices of the same degree, has a nonzero coefficient on w.
struct RightNestedBasis {
  std::vector<MultiIndex> generators;   // J for each basis position
  std::vector<LieElement> elements;     // X_J in Lyndon coordinates
  StructureTable table;                 // structure constants in the X_J basis
  std::vector<std::vector<Rational>> to_lyndon;    // column i = elements[i]
  std::vector<std::vector<Rational>> from_lyndon;  // inverse of to_lyndon
};

RightNestedBasis right_nested_basis(const LyndonBasis& basis);

std::string format_multi_index(const MultiIndex& J);

}  // namespace goh_atlas
