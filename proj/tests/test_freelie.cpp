#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "goh_atlas/freelie.hpp"
#include "oracles.hpp"

using namespace goh_atlas;

namespace {

LieElement random_element(const LyndonBasis& basis, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
  LieElement a;
  for (int i = 0; i < basis.size(); ++i) {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    a.add(i, q);
  }
  return a;
}

LieElement gen(int letter) { return LieElement::basis(letter - 1); }

}  // namespace

TEST_CASE("witt dimensions") {
  CHECK(witt_dimension(1, 1).per_length == std::vector<int>{1});
  CHECK(witt_dimension(1, 1).total == 1);
  CHECK(witt_dimension(2, 3).per_length == std::vector<int>{2, 1, 2});
  CHECK(witt_dimension(2, 3).total == 5);
  CHECK(witt_dimension(2, 7).per_length == std::vector<int>{2, 1, 2, 3, 6, 9, 18});
  CHECK(witt_dimension(2, 7).total == 41);
  CHECK_THROWS_AS(witt_dimension(0, 3), InvalidArgument);
  CHECK_THROWS_AS(witt_dimension(2, 0), InvalidArgument);

  for (int r = 1; r <= 3; ++r)
    for (int s = 1; s <= 7; ++s)
      CHECK(witt_dimension(r, s).per_length == oracle::primitive_necklace_counts(r, s));
}

TEST_CASE("lyndon basis matches brute-force enumeration") {
  CHECK(generate_basis(2, 2).words() == std::vector<Word>{"1", "2", "12"});
  CHECK(generate_basis(2, 2).weights() == std::vector<int>{1, 1, 2});
  CHECK(generate_basis(2, 3).words() == std::vector<Word>{"1", "2", "12", "112", "122"});
  CHECK(generate_basis(1, 3).words() == std::vector<Word>{"1"});
  CHECK_THROWS_AS(generate_basis(0, 2), InvalidArgument);

  for (int r = 1; r <= 3; ++r) {
    for (int s = 1; s <= 7; ++s) {
      const auto basis = generate_basis(r, s);
      CHECK(basis.words() == oracle::lyndon_words_brute_force(r, s));
      CHECK(basis.size() == witt_dimension(r, s).total);
      for (int i = 0; i < r && i < basis.size(); ++i) CHECK(basis.word(i) == std::string(1, char('1' + i)));
    }
  }
}

TEST_CASE("standard bracketing has its word as lexicographic minimum") {
  const auto basis = generate_basis(2, 6);
  for (int i = 0; i < basis.size(); ++i) {
    const auto& t = basis.expansion(i);
    REQUIRE_FALSE(t.is_zero());
    CHECK(t.coeffs().begin()->first == basis.word(i));
    CHECK(t.coeffs().begin()->second == 1);
  }
}

TEST_CASE("bracket examples") {
  const auto b3 = generate_basis(2, 3);
  CHECK(bracket(gen(1), gen(2), b3) == LieElement::basis(2));
  CHECK(bracket(gen(2), LieElement::basis(2), b3) == -LieElement::basis(b3.index_of("122")));
  const auto b2 = generate_basis(2, 2);
  CHECK(bracket(LieElement::basis(2), LieElement::basis(2), b2).is_zero());
  // truncation above the step is silent
  CHECK(bracket(gen(1), LieElement::basis(2), b2).is_zero());
  CHECK_THROWS_AS(bracket(LieElement::basis(7), gen(1), b2), InvalidArgument);
}

TEST_CASE("iterated brackets are right-nested") {
  const auto b3 = generate_basis(2, 3);
  CHECK(iterated_bracket_index({1, 2}, b3) == LieElement::basis(2));
  CHECK(iterated_bracket_index({2, 1, 2}, b3) == -LieElement::basis(b3.index_of("122")));
  CHECK(iterated_bracket_index({1, 1, 2}, b3) == LieElement::basis(b3.index_of("112")));
  CHECK(iterated_bracket_index({1, 1, 1, 2}, b3).is_zero());
  CHECK_THROWS_AS(iterated_bracket_index({}, b3), InvalidArgument);
  CHECK_THROWS_AS(iterated_bracket_index({1, 3}, b3), InvalidArgument);
}

TEST_CASE("structure tables are antisymmetric, graded and satisfy Jacobi") {
  for (int s = 1; s <= 5; ++s) {
    const auto table = structure_table(generate_basis(2, s));
    CHECK(table.is_antisymmetric());
    CHECK(table.is_graded());
    CHECK(table.jacobi_holds_on_basis());
  }
  const auto t3 = structure_table(generate_basis(3, 3));
  CHECK(t3.jacobi_holds_on_basis());
}

TEST_CASE("Jacobi on random triples in (2,7)") {
  const auto basis = generate_basis(2, 7);
  const auto table = structure_table(basis);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = random_element(basis, rng), b = random_element(basis, rng), c = random_element(basis, rng);
    const auto sum = table.bracket(a, table.bracket(b, c)) + table.bracket(b, table.bracket(c, a)) +
                     table.bracket(c, table.bracket(a, b));
    REQUIRE(sum.is_zero());
  }
}

TEST_CASE("structure-table bracket agrees with the tensor route") {
  const auto basis = generate_basis(2, 5);
  const auto table = structure_table(basis);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_element(basis, rng), b = random_element(basis, rng);
    CHECK(table.bracket(a, b) == bracket(a, b, basis));
  }
}

TEST_CASE("bch examples") {
  const auto b2 = generate_basis(2, 2);
  std::mt19937_64 rng(11);
  const auto a = random_element(b2, rng);
  CHECK(bch(a, LieElement{}, b2) == a);

  LieElement expected = gen(1) + gen(2);
  expected.add(2, Rational(1, 2));
  CHECK(bch(gen(1), gen(2), b2) == expected);

  const auto b3 = generate_basis(2, 3);
  CHECK(bch(gen(1), gen(2), b3).coeff(b3.index_of("112")) == Rational(1, 12));
}

TEST_CASE("bch matches the Dynkin series") {
  for (int s = 2; s <= 4; ++s) {
    const auto basis = generate_basis(2, s);
    CHECK(bch(gen(1), gen(2), basis) == oracle::dynkin_bch_generators(basis));
  }
  const auto b4 = generate_basis(2, 4);
  const auto z = bch(gen(1), gen(2), b4);
  // [X2,[X1,[X1,X2]]] enters with -1/24
  const auto yxxy = iterated_bracket_index({2, 1, 1, 2}, b4);
  REQUIRE(yxxy.coeffs().size() == 1);
  const auto [idx, c] = *yxxy.coeffs().begin();
  CHECK(z.coeff(idx) == Rational(-1, 24) * c);
}

TEST_CASE("bch group laws") {
  const auto basis = generate_basis(2, 4);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_element(basis, rng), b = random_element(basis, rng), c = random_element(basis, rng);
    CHECK(bch(a, bch(b, c, basis), basis) == bch(bch(a, b, basis), c, basis));
    CHECK(bch(a, -a, basis).is_zero());
  }
}

TEST_CASE("right-nested stratified basis") {
  const auto rn = right_nested_basis(generate_basis(2, 3));
  CHECK(rn.generators == std::vector<MultiIndex>{{1}, {2}, {1, 2}, {1, 1, 2}, {2, 1, 2}});
  CHECK(rn.table.is_antisymmetric());
  CHECK(rn.table.is_graded());
  CHECK(rn.table.jacobi_holds_on_basis());
  // [X2, X12] is the fifth stratified element itself
  CHECK(rn.table.at(1, 2) == LieElement::basis(4));

  const auto basis = generate_basis(2, 6);
  const auto rn6 = right_nested_basis(basis);
  for (std::size_t i = 0; i < rn6.generators.size(); ++i) {
    CHECK(static_cast<int>(rn6.generators[i].size()) == basis.weight(static_cast<int>(i)));
    CHECK(iterated_bracket_index(rn6.generators[i], basis) == rn6.elements[i]);
  }
  CHECK(rn6.table.jacobi_holds_on_basis());
}
