#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "goh_atlas/polyfield.hpp"

using namespace goh_atlas;

namespace {

std::vector<Rational> pt(std::initializer_list<Rational> xs) { return xs; }

}  // namespace

TEST_CASE("polynomial arithmetic and parsing") {
  const Poly p = parse_poly("x1*x2 - 1/2*x1^2 + 3", 2);
  CHECK(p.size() == 3);
  CHECK(p.total_degree() == 2);
  CHECK(p.derivative(0) == parse_poly("x2 - x1", 2));
  CHECK(p.antiderivative(1).derivative(1) == p);
  const auto v = pt({Rational(2), Rational(5)});
  CHECK(p.evaluate<Rational>(v) == Rational(11));
  CHECK(parse_poly("0", 3).is_zero());
  CHECK(parse_poly(p.str(), 2) == p);
  CHECK_THROWS_AS(parse_poly("x3", 2), InvalidArgument);
  CHECK_THROWS_AS(parse_poly("x1 x2", 2), InvalidArgument);
  CHECK_THROWS_AS(p + Poly(3), InvalidArgument);
}

TEST_CASE("lie bracket of fields") {
  const auto h = heisenberg_frame();
  CHECK(lie_bracket_fields(h.fields[0], h.fields[1]) == coordinate_field(3, 2));
  CHECK(is_zero_field(lie_bracket_fields(h.fields[1], h.fields[1])));

  const auto f = fixtures::f23_closed_form();
  const auto x12 = lie_bracket_fields(f.fields[0], f.fields[1]);
  CHECK(lie_bracket_fields(f.fields[1], x12) == coordinate_field(5, 4));
  CHECK_THROWS_AS(lie_bracket_fields(h.fields[0], f.fields[0]), InvalidArgument);
}

TEST_CASE("iterated brackets of a frame") {
  const auto h = heisenberg_frame();
  CHECK(iterated_bracket_fields(h, {2}) == h.fields[1]);
  CHECK(iterated_bracket_fields(h, {1, 2}) == coordinate_field(3, 2));
  CHECK(is_zero_field(iterated_bracket_fields(h, {1, 1, 2})));
  CHECK_THROWS_AS(iterated_bracket_fields(h, {}), InvalidArgument);
  CHECK_THROWS_AS(iterated_bracket_fields(h, {3}), InvalidArgument);

  const auto all = iterated_brackets_up_to(fixtures::f23_closed_form(), 3);
  CHECK(all.size() == 2 + 4 + 8);
  CHECK(all.at({2, 1, 2}) == coordinate_field(5, 4));
}

TEST_CASE("Jacobi and Leibniz identities for polynomial fields") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto X = fixtures::random_field(rng, 3, 2, 3);
    const auto Y = fixtures::random_field(rng, 3, 2, 3);
    const auto Z = fixtures::random_field(rng, 3, 2, 3);
    PolyVec sum = lie_bracket_fields(X, lie_bracket_fields(Y, Z));
    const auto b = lie_bracket_fields(Y, lie_bracket_fields(Z, X));
    const auto c = lie_bracket_fields(Z, lie_bracket_fields(X, Y));
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += b[i] + c[i];
    CHECK(is_zero_field(sum));

    const Poly f = fixtures::random_poly(rng, 3, 2, 3);
    PolyVec fY;
    for (const auto& y : Y) fY.push_back(f * y);
    Poly Xf(3);
    for (int i = 0; i < 3; ++i) Xf += X[static_cast<std::size_t>(i)] * f.derivative(i);
    const auto lhs = lie_bracket_fields(X, fY);
    const auto XY = lie_bracket_fields(X, Y);
    for (std::size_t j = 0; j < 3; ++j) CHECK(lhs[j] == Xf * Y[j] + f * XY[j]);
  }
}

TEST_CASE("exact flows") {
  const auto x0 = pt({0, 0, 0});
  CHECK(exact_flow(coordinate_field(3, 0), x0, Rational(5)) == pt({5, 0, 0}));

  const auto h = heisenberg_frame();
  const Rational a(3, 2), t(-7, 3);
  CHECK(exact_flow(h.fields[1], pt({a, 0, 0}), t) == pt({a, t, a * t}));

  const PolyVec radial = parse_field({"x1", "0"}, 2);
  CHECK_THROWS_AS(exact_flow(radial, pt({1, 0}), Rational(1)), NotNilpotentError);
  CHECK_THROWS_AS(exact_flow(h.fields[1], pt({1, 0}), Rational(1)), InvalidArgument);

  // closed form of the Heisenberg X2 flow in (x0, t)
  const auto sym = exact_flow_symbolic(h.fields[1]);
  CHECK(sym[2] == parse_poly("x3 + x1*x4", 4));
}

TEST_CASE("exact flow group law") {
  std::mt19937_64 rng(23);
  const auto f = fixtures::f23_closed_form();
  const auto X12 = lie_bracket_fields(f.fields[0], f.fields[1]);
  for (const auto& X : {f.fields[1], X12}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto x0 = fixtures::random_point(rng, 5);
      const Rational t = fixtures::random_rational(rng), s = fixtures::random_rational(rng);
      const auto mid = exact_flow(X, x0, t);
      CHECK(exact_flow(X, mid, s) == exact_flow(X, x0, t + s));
    }
  }
}

TEST_CASE("growth vectors") {
  const auto h = heisenberg_frame();
  CHECK(growth_vector(h, pt({0, 0, 0}), 2).dims == std::vector<int>{2, 3});
  CHECK(growth_vector(h, pt({0, 0, 0}), 2).bracket_generating);

  const auto m = martinet_frame();
  CHECK(growth_vector(m, pt({0, 0, 0}), 3).dims == std::vector<int>{2, 2, 3});
  CHECK(growth_vector(m, pt({1, 0, 0}), 2).dims == std::vector<int>{2, 3});
  CHECK_FALSE(growth_vector(m, pt({0, 0, 0}), 2).bracket_generating);

  const auto f = fixtures::f23_closed_form();
  CHECK(growth_vector(f, pt({0, 0, 0, 0, 0}), 3).dims == std::vector<int>{2, 3, 5});

  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial)
    CHECK(growth_vector(f, fixtures::random_point(rng, 5), 3).dims == std::vector<int>{2, 3, 5});

  CHECK_THROWS_AS(growth_vector(h, pt({0, 0, 0}), 0), InvalidArgument);
}
