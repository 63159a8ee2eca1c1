#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "fspec/cyclotomic.hpp"
#include "fspec/fourier.hpp"

using namespace fspec;

TEST_CASE("root-of-unity sums: exact verdict matches the numeric value") {
  std::mt19937 g(3);
  std::uniform_int_distribution<int> den(1, 36), cnt(1, 6);
  int zeros = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    int q = den(g);
    std::uniform_int_distribution<int> num(0, q - 1);
    std::vector<Rational> ph;
    Complex s = 0;
    for (int k = cnt(g); k > 0; --k) {
      Rational x(num(g), q);
      x.canonicalize();
      ph.push_back(x);
      s += std::polar(1.0, 2 * M_PI * x.get_d());
    }
    Vanishing v = root_of_unity_sum_vanishes(ph);
    REQUIRE(v != Vanishing::Inconclusive);
    if (v == Vanishing::Zero) {
      ++zeros;
      CHECK(std::abs(s) < 1e-9);
    } else {
      CHECK(std::abs(s) > 1e-9);
    }
  }
  CHECK(zeros > 0);
}

TEST_CASE("known vanishing sums") {
  std::vector<Rational> cube{Rational(0), Rational(1, 3), Rational(2, 3)};
  CHECK(root_of_unity_sum_vanishes(cube) == Vanishing::Zero);
  // 1 + zeta_6 + zeta_6^5 = 2 != 0, but {1/6, 1/2, 5/6} vanishes
  std::vector<Rational> six{Rational(1, 6), Rational(1, 2), Rational(5, 6)};
  CHECK(root_of_unity_sum_vanishes(six) == Vanishing::Zero);
  std::vector<Rational> mixed{Rational(0), Rational(1, 2), Rational(1, 3), Rational(0)};
  CHECK(root_of_unity_sum_vanishes(mixed) == Vanishing::NonZero);
  CHECK(cyclotomic_polynomial(6) == std::vector<Integer>{1, -1, 1});
  CHECK(frac(Rational(-1, 3)) == Rational(2, 3));
}

TEST_CASE("qmf residual agrees with the direct sum") {
  std::mt19937_64 g(9);
  std::uniform_real_distribution<double> u(-3, 3);
  for (const auto& t : {fixtures::jp(), fixtures::quasi(), fixtures::shear()}) {
    for (int k = 0; k < 50; ++k) {
      std::vector<double> x(t.dim());
      for (auto& v : x) v = u(g);
      double ours = qmf_residual(t.r(), t.b(), t.l(), x);
      double ref = oracle::qmf_residual(fixtures::mat(t.r()), fixtures::vecs(t.b()), fixtures::vecs(t.l()), x);
      CHECK(ours < 1e-12);
      CHECK(std::abs(ours - ref) < 1e-12);
    }
  }
}

TEST_CASE("mu_hat matches a long direct product") {
  std::mt19937_64 g(21);
  std::uniform_real_distribution<double> u(-20, 20);
  for (const auto& t : {fixtures::jp(), fixtures::lebesgue(), fixtures::quasi(), fixtures::shear()}) {
    MuHatEvaluator ev(t.r(), t.b(), 1e-12);
    for (int k = 0; k < 40; ++k) {
      std::vector<double> xi(t.dim());
      for (auto& v : xi) v = u(g);
      MuHatValue ours = ev(xi);
      Complex ref = oracle::mu_hat(fixtures::mat(t.r()), fixtures::vecs(t.b()), xi);
      CHECK(std::abs(ours.value - ref) < 1e-10);
      CHECK(ours.error_bound < 1e-12);
    }
  }
}

TEST_CASE("rational and floating evaluation agree") {
  auto t = fixtures::jp();
  MuHatEvaluator ev(t.r(), t.b());
  for (int num = -30; num <= 30; ++num) {
    RatVec x{Rational(num, 7)};
    x[0].canonicalize();
    double xd[1] = {x[0].get_d()};
    CHECK(std::abs(ev.at(x).value - ev(std::span<const double>(xd, 1)).value) < 1e-8);
  }
}

TEST_CASE("truncation depth honours the tail bound") {
  auto t = fixtures::jp();
  MuHatEvaluator ev(t.r(), t.b());
  for (double norm : {1.0, 100.0, 1e6}) {
    for (double tol : {1e-6, 1e-9, 1e-12}) {
      int j = ev.depth_for(norm, tol);
      CHECK(ev.tail_bound(norm, j) < tol);
      if (j > 0) CHECK(ev.tail_bound(norm, j - 1) >= tol);
    }
  }
}

TEST_CASE("zero certificates and classification") {
  auto t = fixtures::jp();
  MuHatEvaluator ev(t.r(), t.b());
  // mu_hat vanishes at odd integers
  auto z = ev.zero_certificate(RatVec{Rational(1)});
  REQUIRE(z.has_value());
  CHECK(*z == 1);
  CHECK(ev.classify(RatVec{Rational(3)}).status == ZeroStatus::Zero);
  CHECK(ev.classify(RatVec{Rational(4)}).status == ZeroStatus::Zero);  // 4 = 4 * 1
  CHECK(ev.classify(RatVec{Rational(2)}).status == ZeroStatus::NonZero);
  CHECK(ev.classify(RatVec{Rational(0)}).status == ZeroStatus::NonZero);
  CHECK(ev.at(IntVec{1}).exact_zero_level.has_value());
}

TEST_CASE("frame bounds agree with singular values") {
  std::mt19937_64 g(4);
  std::normal_distribution<double> n(0, 1);
  for (int k = 0; k < 20; ++k) {
    Eigen::MatrixXcd f(5, 3);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 3; ++j) f(i, j) = Complex(n(g), n(g));
    auto ours = frame_bounds(f);
    auto ref = oracle::frame_bounds_svd(f);
    CHECK(ours.lower == doctest::Approx(ref.first).epsilon(1e-10));
    CHECK(ours.upper == doctest::Approx(ref.second).epsilon(1e-10));
    CHECK(operator_norm(f) == doctest::Approx(std::sqrt(ref.second)).epsilon(1e-10));
  }
}

TEST_CASE("fourier matrix of a triple is unitary") {
  auto t = fixtures::quasi();
  FourierMatrix h = t.matrix();
  CHECK(unitarity_defect(h) < 1e-12);
  auto fb = frame_bounds(h);
  CHECK(fb.lower == doctest::Approx(1.0));
  CHECK(fb.upper == doctest::Approx(1.0));
}
