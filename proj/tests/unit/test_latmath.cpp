#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "fspec/error.hpp"
#include "fspec/latmath.hpp"

using namespace fspec;

TEST_CASE("expansivity is decided exactly") {
  CHECK(expansivity(IntMatrix::scalar(2)) == Expansivity::Expansive);
  CHECK(expansivity(IntMatrix::scalar(1)) == Expansivity::NotExpansive);
  CHECK(expansivity(IntMatrix::scalar(-3)) == Expansivity::Expansive);
  CHECK(expansivity(IntMatrix::from_rows({{2, 1}, {0, 2}})) == Expansivity::Expansive);
  CHECK(expansivity(IntMatrix::from_rows({{4, 0}, {1, 2}})) == Expansivity::Expansive);
  // eigenvalue exactly on the unit circle
  CHECK(expansivity(IntMatrix::from_rows({{0, -1}, {1, 0}})) == Expansivity::NotExpansive);
  CHECK(expansivity(IntMatrix::from_rows({{2, 0}, {0, 1}})) == Expansivity::NotExpansive);
  // golden-ratio matrix has an eigenvalue of modulus < 1
  CHECK(expansivity(IntMatrix::from_rows({{1, 1}, {1, 0}})) == Expansivity::NotExpansive);
  // rotation-scaling, eigenvalues 1 +- i
  CHECK(expansivity(IntMatrix::from_rows({{1, -1}, {1, 1}})) == Expansivity::Expansive);
}

TEST_CASE("exact and numeric expansivity agree on random matrices") {
  std::mt19937 g(5);
  std::uniform_int_distribution<int> u(-4, 4);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t d = 1 + trial % 3;
    IntMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) m(i, j) = u(g);
    Expansivity num = numeric_expansivity(m, 1e-6);
    if (num == Expansivity::Indeterminate) continue;
    CHECK(expansivity(m) == num);
  }
}

TEST_CASE("characteristic polynomial and determinant") {
  auto p = characteristic_polynomial(IntMatrix::from_rows({{2, 1}, {0, 3}}));
  REQUIRE(p.size() == 3);
  CHECK(p[0] == 6);
  CHECK(p[1] == -5);
  CHECK(p[2] == 1);
  CHECK(determinant(IntMatrix::from_rows({{4, 0}, {1, 2}})) == 8);
  IntMatrix m = IntMatrix::from_rows({{1, 2, 0}, {3, -1, 4}, {0, 5, 2}});
  CHECK(determinant(m) == oracle::det(fixtures::mat(m)));
}

TEST_CASE("inverse is exact") {
  IntMatrix m = IntMatrix::from_rows({{4, 0}, {1, 2}});
  RatMatrix inv = inverse(m);
  CHECK(inv * RatMatrix(m) == RatMatrix::identity(2));
  CHECK(inv(1, 0) == Rational(-1, 8));
}

TEST_CASE("residue tests match adjugate congruence") {
  std::mt19937 g(11);
  std::uniform_int_distribution<int> u(-6, 6);
  IntMatrix r = IntMatrix::from_rows({{2, 1}, {0, 3}});
  for (int k = 0; k < 500; ++k) {
    IntVec a{u(g), u(g)}, b{u(g), u(g)};
    CHECK(congruent(r, a, b) == oracle::congruent(fixtures::mat(r), a, b));
  }
}

TEST_CASE("complete residues hit every coset once") {
  for (const auto& r : {IntMatrix::scalar(5), IntMatrix::from_rows({{2, 1}, {0, 2}}),
                        IntMatrix::from_rows({{4, 0}, {1, 2}}), IntMatrix::from_rows({{1, -1}, {1, 1}}),
                        IntMatrix::from_rows({{3, 1}, {-1, 2}})}) {
    auto res = complete_residues(r);
    CHECK(Integer(static_cast<long>(res.size())) == abs(determinant(r)));
    CHECK(residues_distinct(r, res));
    for (std::size_t i = 0; i < res.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(oracle::congruent(fixtures::mat(r), res[i], res[j]));
  }
}

TEST_CASE("reduce_mod returns a congruent representative") {
  IntMatrix r = IntMatrix::from_rows({{3, 1}, {-1, 2}});
  for (std::int64_t x = -5; x <= 5; ++x)
    for (std::int64_t y = -5; y <= 5; ++y) {
      IntVec v{x, y};
      IntVec red = reduce_mod(r, v);
      CHECK(oracle::congruent(fixtures::mat(r), v, red));
      CHECK(reduce_mod(r, red) == red);
    }
}

TEST_CASE("lattices in Hermite form") {
  std::vector<IntVec> gens{{2, 0}, {0, 2}, {1, 1}};
  Lattice l = Lattice::from_generators(2, std::span<const IntVec>(gens));
  CHECK(l.full_rank());
  CHECK(l.covolume() == 2);
  CHECK(l.contains(IntVec{1, 1}));
  CHECK(l.contains(IntVec{2, 0}));
  CHECK_FALSE(l.contains(IntVec{1, 0}));
  Lattice dual = dual_lattice(l);
  CHECK(dual.covolume() == Rational(1, 2));
  CHECK(dual.contains(RatVec{Rational(1, 2), Rational(1, 2)}));
  CHECK_FALSE(dual.contains(RatVec{Rational(1, 2), Rational(0)}));
  CHECK(dual_lattice(dual) == l);
}

TEST_CASE("smallest invariant lattice") {
  auto q = fixtures::quasi();
  CHECK(smallest_invariant_lattice(q.r(), q.b()) == Lattice::integer_lattice(2));
  // (3, {0, 2}) spans 2Z
  Lattice mt = smallest_invariant_lattice(IntMatrix::scalar(3), DigitSet{0, 2});
  CHECK(mt.covolume() == 2);
  CHECK(mt.is_invariant_under(IntMatrix::scalar(3)));
}

TEST_CASE("overflow is reported") {
  IntMatrix big = IntMatrix::scalar(std::int64_t{1} << 40);
  CHECK_THROWS_AS(big.pow(2), Error);
  try {
    big.pow(2);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }
}
