#include "goh_atlas/exact_linalg.hpp"

#include <utility>

#include "goh_atlas/errors.hpp"

namespace goh_atlas {

int exact_rank(const RationalMatrix& rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::vector<std::vector<mpz_class>> m;
  m.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() != cols) throw InvalidArgument("exact_rank: ragged matrix");
    mpz_class lcm = 1;
    for (const auto& q : row) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
    std::vector<mpz_class> ints(cols);
    for (std::size_t j = 0; j < cols; ++j) ints[j] = row[j].get_num() * (lcm / row[j].get_den());
    m.push_back(std::move(ints));
  }

  int rank = 0;
  mpz_class prev = 1;
  const std::size_t nrows = m.size();
  for (std::size_t col = 0; col < cols && static_cast<std::size_t>(rank) < nrows; ++col) {
    const auto r = static_cast<std::size_t>(rank);
    std::size_t pivot = r;
    while (pivot < nrows && m[pivot][col] == 0) ++pivot;
    if (pivot == nrows) continue;
    std::swap(m[pivot], m[r]);
    for (std::size_t i = r + 1; i < nrows; ++i) {
      for (std::size_t j = col + 1; j < cols; ++j) {
        m[i][j] = (m[r][col] * m[i][j] - m[i][col] * m[r][j]) / prev;
      }
      m[i][col] = 0;
    }
    prev = m[r][col];
    ++rank;
  }
  return rank;
}

std::optional<RationalMatrix> exact_inverse(RationalMatrix a) {
  const std::size_t n = a.size();
  RationalMatrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw InvalidArgument("exact_inverse: matrix is not square");
    inv[i][i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(a[pivot][col]) == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    const Rational p = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || sgn(a[i][col]) == 0) continue;
      const Rational f = a[i][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[col][j];
        inv[i][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

std::vector<Rational> mat_vec(const RationalMatrix& a, const std::vector<Rational>& x) {
  std::vector<Rational> y(a.size(), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

}  // namespace goh_atlas
