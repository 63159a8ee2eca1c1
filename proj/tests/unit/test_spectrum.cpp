#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "fspec/error.hpp"
#include "fspec/spectrum.hpp"

using namespace fspec;

namespace {

// min |mu_hat((R^T)^{-n} l)|^2 over a level, by the direct product
double direct_delta(const HadamardTriple& t, const std::vector<IntVec>& level, int n) {
  RatMatrix s = inverse(t.r().transpose()).pow(static_cast<unsigned>(n));
  double best = 1.0;
  for (const auto& l : level) {
    RealVec xi = to_real(s * l);
    best = std::min(best, std::norm(oracle::mu_hat(fixtures::mat(t.r()), fixtures::vecs(t.b()), xi)));
  }
  return best;
}

}  // namespace

TEST_CASE("canonical levels") {
  auto t = fixtures::jp();
  auto c = canonical_levels(t, 3);
  REQUIRE(c.depth() == 3);
  CHECK(c.levels[0] == std::vector<IntVec>{{0}, {1}});
  CHECK(c.levels[1] == std::vector<IntVec>{{0}, {1}, {4}, {5}});
  CHECK(c.levels[2].size() == 8);
  CHECK(std::is_sorted(c.levels[2].begin(), c.levels[2].end()));
  CHECK(c.provenance == Provenance::Canonical);
}

TEST_CASE("canonical frequencies are mutually orthogonal") {
  for (const auto& t : {fixtures::jp(), fixtures::quasi()}) {
    MuHatEvaluator ev(t.r(), t.b());
    auto c = canonical_levels(t, 3);
    const auto& f = c.levels.back();
    auto rep = orthogonality_check(ev, f);
    CHECK(rep.max_magnitude < 1e-8);
    CHECK(rep.pairs == f.size() * (f.size() - 1) / 2);
    CHECK(rep.exact_zeros == rep.distinct_differences);
    for (std::size_t i = 0; i < f.size(); i += 3)
      for (std::size_t j = i + 1; j < f.size(); j += 5) {
        RealVec d = to_real(sub(f[i], f[j]));
        CHECK(std::abs(oracle::mu_hat(fixtures::mat(t.r()), fixtures::vecs(t.b()), d)) < 1e-9);
      }
  }
}

TEST_CASE("orthogonality check flags a non-orthogonal set") {
  auto t = fixtures::jp();
  MuHatEvaluator ev(t.r(), t.b());
  auto rep = orthogonality_check(ev, {{0}, {2}});
  CHECK(rep.max_magnitude > 0.1);
  CHECK(rep.exact_zeros == 0);
}

TEST_CASE("delta estimate matches the direct product") {
  auto t = fixtures::lebesgue();
  MuHatEvaluator ev(t.r(), t.b());
  auto c = canonical_levels(t, 8);
  auto d = delta_estimate(ev, c, 8);
  REQUIRE(d.by_depth.size() == 8);
  for (int n = 1; n <= 8; ++n) {
    double ref = direct_delta(t, c.levels[static_cast<std::size_t>(n - 1)], n);
    double prev = n == 1 ? 1.0 : d.by_depth[static_cast<std::size_t>(n - 2)];
    CHECK(d.by_depth[static_cast<std::size_t>(n - 1)] == doctest::Approx(std::min(prev, ref)).epsilon(1e-8));
  }
  CHECK(d.lambda == IntVec{255});
}

TEST_CASE("parseval identity on random step functions") {
  auto t = fixtures::jp();
  MuHatEvaluator ev(t.r(), t.b(), 1e-13);
  std::mt19937_64 g(17);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int n = 1; n <= 3; ++n) {
    StepFunction f{n, std::vector<Complex>(static_cast<std::size_t>(std::pow(2, n)))};
    for (auto& w : f.weights) w = Complex(u(g), u(g));
    auto r = parseval_defect(ev, t, f);
    CHECK(r.identity_defect < 1e-10);
    CHECK(r.upper_holds);
    CHECK(r.ratio >= r.delta_level - 1e-9);
    double norm = 0;
    for (auto w : f.weights) norm += std::norm(w);
    CHECK(r.norm_squared == doctest::Approx(norm / std::pow(2, n)));
  }
}

TEST_CASE("completion of the unit interval keeps its lower bound") {
  auto t = fixtures::lebesgue();
  MuHatEvaluator ev(t.r(), t.b());
  CompletionOptions o;
  auto c = complete_spectrum(ev, t, o);
  CHECK(c.provenance == Provenance::OffsetModified);
  CHECK_FALSE(c.offsets.empty());
  const auto& last = c.levels.back();
  CHECK(direct_delta(t, last, c.scale_exponents.back()) >= o.delta0 / 2);
  // still orthogonal, checked on a strided subset
  std::vector<IntVec> sample;
  for (std::size_t i = 0; i < last.size(); i += 37) sample.push_back(last[i]);
  CHECK(orthogonality_check(ev, sample).max_magnitude < 1e-8);
  // and better than the canonical set of the same depth
  auto canon = canonical_levels(t, c.scale_exponents.back());
  CHECK(direct_delta(t, canon.levels.back(), c.scale_exponents.back()) < o.delta0 / 2);
}

TEST_CASE("completion fails on a triple with periodic zeros") {
  auto t = fixtures::quasi();
  MuHatEvaluator ev(t.r(), t.b());
  try {
    complete_spectrum(ev, t);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConstructionFailed);
    CHECK(std::string(e.what()).find("j = (") != std::string::npos);
  }
}

TEST_CASE("orthogonal set search returns certified sets") {
  auto t = fixtures::jp();
  MuHatEvaluator ev(t.r(), t.b());
  auto s = orthogonal_set_search(ev, Rational(0), Rational(6), 2, 4);
  CHECK(s.max_size_reached);
  REQUIRE(s.points.size() == 4);
  for (std::size_t i = 0; i < s.points.size(); ++i)
    for (std::size_t j = i + 1; j < s.points.size(); ++j) {
      RatVec d = sub(s.points[i], s.points[j]);
      CHECK(ev.zero_certificate(d).has_value());
      CHECK(std::abs(oracle::mu_hat({{4}}, {{0}, {2}}, to_real(d))) < 1e-9);
    }
}
