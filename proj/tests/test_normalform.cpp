#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "fixtures.hpp"
#include "goh_atlas/normalform.hpp"

using namespace goh_atlas;

namespace {

// Exact composition of the coordinate flows from 0, x_n first and x_1 last.
std::vector<Rational> compose_flows(const Frame& frame, const std::vector<Rational>& x) {
  const auto fields = frame.stratified_fields();
  std::vector<Rational> q(static_cast<std::size_t>(frame.n), Rational(0));
  for (int i = frame.n - 1; i >= 0; --i) q = exact_flow(fields[static_cast<std::size_t>(i)], q, x[static_cast<std::size_t>(i)]);
  return q;
}

// Field of the standard bracketing of Lyndon word i, built from the frame alone.
PolyVec lyndon_field(const Realization& R, int i) {
  if (R.basis.weight(i) == 1) return R.frame.fields[static_cast<std::size_t>(i)];
  const auto [u, v] = R.basis.factorization(i);
  return lie_bracket_fields(lyndon_field(R, u), lyndon_field(R, v));
}

}  // namespace

TEST_CASE("closed forms of small realized frames") {
  const auto r22 = realize_frame(generate_basis(2, 2));
  CHECK(r22.frame.fields[0] == coordinate_field(3, 0));
  CHECK(r22.frame.fields[1] == parse_field({"0", "1", "x1"}, 3));
  CHECK(r22.frame.labels == std::vector<std::string>{"1", "2", "12"});

  const auto r23 = realize_frame(generate_basis(2, 3));
  CHECK(r23.frame.fields == fixtures::f23_closed_form().fields);
  CHECK(r23.frame.weights == std::vector<int>{1, 1, 2, 3, 3});

  const auto r11 = realize_frame(generate_basis(1, 1));
  CHECK(r11.frame.n == 1);
  CHECK(r11.frame.fields[0] == coordinate_field(1, 0));
}

TEST_CASE("realized frames reproduce second-kind coordinates exactly") {
  std::mt19937_64 rng(41);
  for (int s = 2; s <= 5; ++s) {
    const auto R = realize_frame(generate_basis(2, s));
    for (int trial = 0; trial < 5; ++trial) {
      const auto x = fixtures::random_point(rng, R.frame.n);
      CHECK(compose_flows(R.frame, x) == x);
    }
  }
  const auto R = realize_frame(generate_basis(3, 3));
  const auto x = fixtures::random_point(rng, R.frame.n);
  CHECK(compose_flows(R.frame, x) == x);
}

TEST_CASE("coordinate change and its inverse compose to the identity") {
  for (int s = 1; s <= 5; ++s) {
    const auto R = realize_frame(generate_basis(2, s));
    REQUIRE(R.maps);
    const int n = R.frame.n;
    for (int i = 0; i < n; ++i) {
      CHECK(R.maps->psi[static_cast<std::size_t>(i)].compose(std::span<const Poly>(R.maps->psi_inverse)) == Poly::variable(n, i));
      CHECK(R.maps->psi_inverse[static_cast<std::size_t>(i)].compose(std::span<const Poly>(R.maps->psi)) == Poly::variable(n, i));
    }
  }
  // q = exp(x_2 E_2) exp(x_1 E_1) in step 2: y_3 = -x_1 x_2 / 2
  const auto R = realize_frame(generate_basis(2, 2));
  CHECK(R.maps->psi[2] == parse_poly("-1/2*x1*x2 + x3", 3));
}

TEST_CASE("first-kind route agrees with the realized frame") {
  CHECK(left_trivialized_coefficients(5) ==
        std::vector<Rational>{1, Rational(1, 2), Rational(1, 12), 0, Rational(-1, 720), 0});
  for (int s = 2; s <= 4; ++s) {
    const auto R = realize_frame(generate_basis(2, s));
    const int n = R.frame.n;
    const auto Z = first_kind_fields(R.stratified.table);
    const auto X = R.frame.stratified_fields();
    const auto& psi = R.maps->psi;
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        Poly lhs(n);
        for (int j = 0; j < n; ++j)
          lhs += psi[static_cast<std::size_t>(i)].derivative(j) * X[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        CHECK(lhs == Z[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)].compose(std::span<const Poly>(psi)));
      }
    }
  }
}

TEST_CASE("realized frame is a Lie algebra homomorphism image") {
  for (int s = 2; s <= 4; ++s) {
    const auto R = realize_frame(generate_basis(2, s));
    const int n = R.frame.n;
    const auto X = R.frame.stratified_fields();
    for (int i = 0; i < n; ++i) {
      CHECK(iterated_bracket_fields(R.frame, R.stratified.generators[static_cast<std::size_t>(i)]) ==
            X[static_cast<std::size_t>(i)]);
      PolyVec expected = zero_field(n);
      for (int k = 0; k < n; ++k) {
        const Rational& c = R.stratified.from_lyndon[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
        if (sgn(c) == 0) continue;
        for (int j = 0; j < n; ++j)
          expected[static_cast<std::size_t>(j)] += X[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] * c;
      }
      CHECK(lyndon_field(R, i) == expected);
    }
  }
}

TEST_CASE("coefficients are graded and triangular") {
  for (int s = 2; s <= 6; ++s) {
    const auto R = realize_frame(generate_basis(2, s));
    const auto& w = R.frame.weights;
    const auto X = R.frame.stratified_fields();
    for (int k = 0; k < R.frame.n; ++k) {
      for (int j = 0; j < R.frame.n; ++j) {
        const Poly& A = X[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        if (A.is_zero()) continue;
        const int expected = w[static_cast<std::size_t>(j)] - w[static_cast<std::size_t>(k)];
        REQUIRE(expected >= 0);
        CHECK(A.weighted_degree(w) == expected);
        CHECK(A.min_weighted_degree(w) == expected);
        for (int m = 0; m < R.frame.n; ++m)
          if (A.depends_on(m)) CHECK(w[static_cast<std::size_t>(m)] < w[static_cast<std::size_t>(j)]);
      }
    }
  }
}

TEST_CASE("verify_normal_form") {
  CHECK(verify_normal_form(realize_frame(generate_basis(2, 3)).frame).pass);
  CHECK(verify_normal_form(martinet_frame()).pass);
  CHECK(verify_normal_form(realize_frame(generate_basis(2, 7), false).frame).pass);

  const auto bad = verify_normal_form(make_frame({parse_field({"1", "0"}, 2), parse_field({"1", "1"}, 2)}));
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.failures.size() == 1);
  CHECK(bad.failures[0].k == 2);
  CHECK(bad.failures[0].j == 1);

  const auto bad1 = verify_normal_form(make_frame({parse_field({"1", "x1"}, 2)}));
  CHECK_FALSE(bad1.pass);
}

TEST_CASE("verify_second_kind") {
  const auto h = heisenberg_frame();
  CHECK(verify_second_kind(h, {1, 1, 1}, 1e-12).residual < 1e-12);
  CHECK(verify_second_kind(h, {0, 0, 0}, 0.0).residual == 0.0);
  CHECK_THROWS_AS(verify_second_kind(martinet_frame(), {0, 0, 0}, 1e-9), InvalidArgument);

  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto f23 = realize_frame(generate_basis(2, 3)).frame;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x;
    for (int i = 0; i < 5; ++i) x.push_back(unit(rng));
    CHECK(verify_second_kind(f23, x, 1e-10).pass);
  }
  for (int s = 2; s <= 4; ++s) {
    const auto frame = realize_frame(generate_basis(2, s)).frame;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> x;
      for (int i = 0; i < frame.n; ++i) x.push_back(unit(rng));
      worst = std::max(worst, verify_second_kind(frame, x, 1e-8).residual);
    }
    CHECK(worst <= 1e-8);
  }
}
