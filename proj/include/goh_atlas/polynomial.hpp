// Sparse multivariate polynomials over an arbitrary coefficient field.
//
// Terms are stored as a sorted map from dense exponent vectors to nonzero
// coefficients. The coefficient type is a template parameter so the same
// container serves exact work (Rational) and numeric work (double).

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "goh_atlas/errors.hpp"
#include "goh_atlas/rational.hpp"

namespace goh_atlas {

using Exponent = std::vector<std::uint8_t>;

template <class To, class From>
inline To scalar_cast(const From& s) {
  return static_cast<To>(s);
}

template <>
inline double scalar_cast<double, Rational>(const Rational& s) {
  return s.get_d();
}

template <>
inline Rational scalar_cast<Rational, Rational>(const Rational& s) {
  return s;
}

template <class Scalar>
class Polynomial {
 public:
  using TermMap = std::map<Exponent, Scalar>;

  Polynomial() = default;
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const Scalar& c) {
    Polynomial p(nvars);
    p.add_term(Exponent(static_cast<std::size_t>(nvars), 0), c);
    return p;
  }

  /// The coordinate function x_{var}, var 0-based.
  static Polynomial variable(int nvars, int var) {
    check_var(nvars, var);
    Exponent e(static_cast<std::size_t>(nvars), 0);
    e[static_cast<std::size_t>(var)] = 1;
    Polynomial p(nvars);
    p.add_term(e, Scalar(1));
    return p;
  }

  static Polynomial monomial(const Exponent& e, const Scalar& c) {
    Polynomial p(static_cast<int>(e.size()));
    p.add_term(e, c);
    return p;
  }

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && is_zero_exponent(terms_.begin()->first));
  }

  Scalar constant_term() const {
    auto it = terms_.find(Exponent(static_cast<std::size_t>(nvars_), 0));
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  /// Total degree; -1 for the zero polynomial.
  int total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, degree_of(e));
    return d;
  }

  /// Largest sum of weights[i] * e[i]; -1 for the zero polynomial.
  int weighted_degree(std::span<const int> weights) const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
      int w = 0;
      for (std::size_t i = 0; i < e.size(); ++i) w += weights[i] * e[i];
      d = std::max(d, w);
    }
    return d;
  }

  /// Smallest weighted degree over the terms; -1 for zero.
  int min_weighted_degree(std::span<const int> weights) const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
      int w = 0;
      for (std::size_t i = 0; i < e.size(); ++i) w += weights[i] * e[i];
      d = d < 0 ? w : std::min(d, w);
    }
    return d;
  }

  bool depends_on(int var) const {
    for (const auto& [e, c] : terms_)
      if (e[static_cast<std::size_t>(var)] != 0) return true;
    return false;
  }

  void add_term(const Exponent& e, const Scalar& c) {
    if (static_cast<int>(e.size()) != nvars_)
      throw InvalidArgument("polynomial: exponent length does not match ambient dimension");
    if (is_zero_scalar(c)) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (is_zero_scalar(it->second)) terms_.erase(it);
    }
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    check_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }

  Polynomial& operator*=(const Scalar& s) {
    if (is_zero_scalar(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  Polynomial operator-() const {
    Polynomial p = *this;
    for (auto& [e, c] : p.terms_) c = -c;
    return p;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Scalar& s) { return a *= s; }
  friend Polynomial operator*(const Scalar& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same(b);
    Polynomial p(a.nvars_);
    if (a.is_zero() || b.is_zero()) return p;
    Exponent e(static_cast<std::size_t>(a.nvars_));
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint8_t>(ea[i] + eb[i]);
        p.add_term(e, ca * cb);
      }
    }
    return p;
  }

  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  Polynomial derivative(int var) const {
    check_var(nvars_, var);
    const auto v = static_cast<std::size_t>(var);
    Polynomial p(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[v] == 0) continue;
      Exponent d = e;
      --d[v];
      p.add_term(d, c * Scalar(static_cast<int>(e[v])));
    }
    return p;
  }

  /// Antiderivative in `var` vanishing on {x_var = 0}.
  Polynomial antiderivative(int var) const {
    check_var(nvars_, var);
    const auto v = static_cast<std::size_t>(var);
    Polynomial p(nvars_);
    for (const auto& [e, c] : terms_) {
      Exponent d = e;
      ++d[v];
      p.add_term(d, c / Scalar(static_cast<int>(d[v])));
    }
    return p;
  }

  /// Evaluates at a point; coefficients are converted to T.
  template <class T>
  T evaluate(std::span<const T> x) const {
    if (static_cast<int>(x.size()) != nvars_)
      throw InvalidArgument("polynomial: evaluation point has wrong dimension");
    T sum(0);
    for (const auto& [e, c] : terms_) {
      T term = scalar_cast<T>(c);
      for (std::size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) term *= x[i];
      sum += term;
    }
    return sum;
  }

  /// Substitutes subs[i] for x_i. All substitutes share one ambient dimension.
  Polynomial compose(std::span<const Polynomial> subs) const {
    if (static_cast<int>(subs.size()) != nvars_)
      throw InvalidArgument("polynomial: substitution count does not match variables");
    const int m = subs.empty() ? 0 : subs.front().nvars();
    for (const auto& s : subs)
      if (s.nvars() != m) throw InvalidArgument("polynomial: substitutes disagree on dimension");
    std::vector<std::vector<Polynomial>> powers(subs.size());
    auto power = [&](std::size_t i, int k) -> const Polynomial& {
      auto& cache = powers[i];
      if (cache.empty()) cache.push_back(Polynomial::constant(m, Scalar(1)));
      while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * subs[i]);
      return cache[static_cast<std::size_t>(k)];
    };
    Polynomial out(m);
    for (const auto& [e, c] : terms_) {
      Polynomial term = Polynomial::constant(m, c);
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] != 0) term = term * power(i, e[i]);
      out += term;
    }
    return out;
  }

  /// Re-embeds in `m` variables: appends unused variables or drops trailing
  /// ones (which must not occur).
  Polynomial with_nvars(int m) const {
    Polynomial p(m);
    for (const auto& [e, c] : terms_) {
      Exponent d(static_cast<std::size_t>(m), 0);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (static_cast<int>(i) < m)
          d[i] = e[i];
        else if (e[i] != 0)
          throw InvalidArgument("polynomial: cannot drop a variable that occurs");
      }
      p.add_term(d, c);
    }
    return p;
  }

  template <class T>
  Polynomial<T> cast() const {
    Polynomial<T> p(nvars_);
    for (const auto& [e, c] : terms_) p.add_term(e, scalar_cast<T>(c));
    return p;
  }

  /// Human-readable form such as "x1*x2 + 1/2*x1^2".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      std::ostringstream cs;
      cs << c;
      std::string coef = cs.str();
      const bool negative = !coef.empty() && coef[0] == '-';
      if (negative) coef.erase(0, 1);
      os << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
      first = false;
      std::string mono;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += "x" + std::to_string(i + 1);
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      if (mono.empty())
        os << coef;
      else if (coef == "1")
        os << mono;
      else
        os << coef << "*" << mono;
    }
    return os.str();
  }

 private:
  static bool is_zero_exponent(const Exponent& e) {
    return std::all_of(e.begin(), e.end(), [](auto k) { return k == 0; });
  }
  static int degree_of(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }
  static void check_var(int nvars, int var) {
    if (var < 0 || var >= nvars) throw InvalidArgument("polynomial: variable index out of range");
  }
  void check_same(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw InvalidArgument("polynomial: ambient dimension mismatch");
  }

  int nvars_ = 0;
  TermMap terms_;
};

template <class S>
inline bool is_zero_scalar(const Polynomial<S>& p) {
  return p.is_zero();
}

using Poly = Polynomial<Rational>;
using PolyVec = std::vector<Poly>;

/// Parses sums of terms such as "x1*x2 - 1/2*x1^2 + 3" in n variables.
Poly parse_poly(std::string_view text, int n);

/// One polynomial per component.
PolyVec parse_field(const std::vector<std::string>& components, int n);

inline PolyVec zero_field(int n) { return PolyVec(static_cast<std::size_t>(n), Poly(n)); }

/// The coordinate field d/dx_{var}, var 0-based.
inline PolyVec coordinate_field(int n, int var) {
  PolyVec v = zero_field(n);
  v[static_cast<std::size_t>(var)] = Poly::constant(n, Rational(1));
  return v;
}

inline bool is_zero_field(const PolyVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Poly& p) { return p.is_zero(); });
}

}  // namespace goh_atlas
