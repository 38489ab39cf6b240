// Independent reference computations used only by the tests.

#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "goh_atlas/freelie.hpp"

namespace oracle {

inline std::vector<std::string> all_words(int rank, int len) {
  std::vector<std::string> out{""};
  for (int k = 0; k < len; ++k) {
    std::vector<std::string> next;
    for (const auto& w : out)
      for (int c = 0; c < rank; ++c) next.push_back(w + char('1' + c));
    out = std::move(next);
  }
  return out;
}

/// Lyndon by definition: strictly smaller than each proper suffix.
inline bool is_lyndon(const std::string& w) {
  for (std::size_t k = 1; k < w.size(); ++k)
    if (!(w < w.substr(k))) return false;
  return !w.empty();
}

inline std::vector<std::string> lyndon_words_brute_force(int rank, int step) {
  std::vector<std::string> out;
  for (int len = 1; len <= step; ++len)
    for (const auto& w : all_words(rank, len))
      if (is_lyndon(w)) out.push_back(w);
  return out;
}

/// Counts aperiodic necklaces: primitive words of length l divided by l.
inline std::vector<int> primitive_necklace_counts(int rank, int step) {
  std::vector<int> out;
  for (int len = 1; len <= step; ++len) {
    int primitive = 0;
    for (const auto& w : all_words(rank, len)) {
      bool periodic = false;
      for (int p = 1; p < len && !periodic; ++p)
        if (len % p == 0 && w == std::string(w.substr(0, p)) + w.substr(0, len - p)) periodic = true;
      if (!periodic) ++primitive;
    }
    out.push_back(primitive / len);
  }
  return out;
}

/// Dynkin's explicit series for log(exp X1 exp X2), truncated at the basis step.
inline goh_atlas::LieElement dynkin_bch_generators(const goh_atlas::LyndonBasis& basis) {
  using goh_atlas::Rational;
  const int s = basis.step();
  goh_atlas::LieElement z;
  auto factorial = [](int k) {
    mpz_class f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  std::vector<std::pair<int, int>> pairs;
  std::function<void(int, int)> rec = [&](int k_target, int used) {
    if (static_cast<int>(pairs.size()) == k_target) {
      goh_atlas::MultiIndex J;
      mpz_class denom = 1;
      for (auto [rx, sy] : pairs) {
        for (int i = 0; i < rx; ++i) J.push_back(1);
        for (int i = 0; i < sy; ++i) J.push_back(2);
        denom *= factorial(rx) * factorial(sy);
      }
      const int k = k_target;
      Rational coef(k % 2 == 1 ? 1 : -1, k);
      coef /= Rational(denom * static_cast<int>(J.size()));
      z += coef * goh_atlas::iterated_bracket_index(J, basis);
      return;
    }
    for (int rx = 0; rx + used <= s; ++rx)
      for (int sy = 0; rx + sy + used <= s; ++sy)
        if (rx + sy > 0) {
          pairs.emplace_back(rx, sy);
          rec(k_target, used + rx + sy);
          pairs.pop_back();
        }
  };
  for (int k = 1; k <= s; ++k) rec(k, 0);
  return z;
}

}  // namespace oracle
