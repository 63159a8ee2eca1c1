#include "fspec/cyclotomic.hpp"

#include <map>
#include <mutex>
#include <unordered_map>

#include "fspec/error.hpp"

namespace fspec {

const char* to_string(Vanishing v) noexcept {
  switch (v) {
    case Vanishing::Zero: return "zero";
    case Vanishing::NonZero: return "nonzero";
    case Vanishing::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

Rational frac(const Rational& x) {
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Rational out = x - Rational(fl);
  out.canonicalize();
  return out;
}

namespace {

constexpr std::uint64_t kTrialLimit = 1'000'000;

const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kTrialLimit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint64_t p = 2; p <= kTrialLimit; ++p) {
      if (composite[p]) continue;
      out.push_back(static_cast<std::uint32_t>(p));
      for (std::uint64_t q = p * p; q <= kTrialLimit; q += p) composite[q] = true;
    }
    return out;
  }();
  return primes;
}

int mobius(std::uint64_t n) {
  int mu = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

using Poly = std::vector<Integer>;

// p * (z^d - 1)
Poly times_binomial(const Poly& p, std::uint64_t d) {
  Poly out(p.size() + d, 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i + d] += p[i];
    out[i] -= p[i];
  }
  return out;
}

// p / (z^d - 1), exact.
Poly over_binomial(const Poly& p, std::uint64_t d) {
  Poly q(p.size() - d, 0);
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = (i >= d ? q[i - d] : Integer(0)) - p[i];
  return q;
}

// Radical of n when it can be established; 0 otherwise.
Integer radical(Integer n) {
  Integer rad = 1;
  for (std::uint32_t p : small_primes()) {
    if (Integer(p) * p > n) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      rad *= p;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    }
  }
  if (n > 1) {
    const Integer limit = Integer(kTrialLimit) * kTrialLimit;
    // No factor below the trial limit: n is prime when n < limit^2 or when
    // trial division already passed sqrt(n).
    const Integer bound = Integer(small_primes().back());
    if (bound * bound < n && n >= limit) return 0;
    rad *= n;
  }
  return rad;
}

bool divisible_by_monic(Poly p, const Poly& divisor) {
  const std::size_t deg = divisor.size() - 1;
  while (!p.empty() && p.back() == 0) p.pop_back();
  while (p.size() > deg) {
    const Integer lead = p.back();
    const std::size_t shift = p.size() - 1 - deg;
    for (std::size_t j = 0; j <= deg; ++j) p[shift + j] -= lead * divisor[j];
    while (!p.empty() && p.back() == 0) p.pop_back();
  }
  return p.empty();
}

}  // namespace

std::vector<Integer> cyclotomic_polynomial(std::uint64_t n) {
  require(n >= 1, ErrorKind::InvalidArgument, "cyclotomic index must be positive");
  static std::mutex mutex;
  static std::unordered_map<std::uint64_t, Poly> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  Poly p{1};
  std::vector<std::uint64_t> denominators;
  for (std::uint64_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    const int mu = mobius(n / d);
    if (mu == 1) p = times_binomial(p, d);
    if (mu == -1) denominators.push_back(d);
  }
  for (auto d : denominators) p = over_binomial(p, d);
  // With an odd number of (z^d - 1) factors the product carries a sign of -1
  // relative to prod (1 - z^d); normalize to a monic polynomial.
  if (p.back() < 0)
    for (auto& c : p) c = -c;
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(n, p);
  return p;
}

Vanishing root_of_unity_sum_vanishes(std::span<const Rational> phases, std::uint64_t max_radical) {
  if (phases.empty()) return Vanishing::Zero;
  std::vector<Rational> reduced;
  reduced.reserve(phases.size());
  Integer denom = 1;
  for (const auto& p : phases) {
    reduced.push_back(frac(p));
    mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), reduced.back().get_den_mpz_t());
  }
  if (denom == 1) return Vanishing::NonZero;

  const Integer rad = radical(denom);
  if (rad == 0 || rad > max_radical) return Vanishing::Inconclusive;
  const std::uint64_t radical_ui = rad.get_ui();
  const Integer stride = denom / rad;

  std::map<Integer, Poly> groups;
  for (const auto& p : reduced) {
    const Integer k = p.get_num() * (denom / p.get_den());
    Integer q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), k.get_mpz_t(), stride.get_mpz_t());
    auto& poly = groups[r];
    if (poly.empty()) poly.assign(radical_ui, 0);
    poly[q.get_ui()] += 1;
  }
  const Poly phi = cyclotomic_polynomial(radical_ui);
  for (const auto& [r, poly] : groups)
    if (!divisible_by_monic(poly, phi)) return Vanishing::NonZero;
  return Vanishing::Zero;
}

}  // namespace fspec
