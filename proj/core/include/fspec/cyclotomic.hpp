#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fspec/types.hpp"

namespace fspec {

enum class Vanishing { Zero, NonZero, Inconclusive };

const char* to_string(Vanishing v) noexcept;

/// Exact test of sum_k e^{2 pi i phase_k} == 0 for rational phases.
///
/// With D the common denominator of the phases, the sum is an integer
/// polynomial evaluated at a primitive D-th root of unity. Writing D = s * rad(D),
/// the powers zeta_D^r (0 <= r < s) form a basis of Q(zeta_D) over
/// Q(zeta_rad), so the sum vanishes iff each of the s coefficient
/// polynomials is divisible by the cyclotomic polynomial Phi_rad.
/// Inconclusive only when D has a prime factor too large to find by trial
/// division or rad(D) exceeds `max_radical`.
Vanishing root_of_unity_sum_vanishes(std::span<const Rational> phases,
                                     std::uint64_t max_radical = 20000);

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first.
std::vector<Integer> cyclotomic_polynomial(std::uint64_t n);

/// x mod 1 in [0, 1).
Rational frac(const Rational& x);

}  // namespace fspec
