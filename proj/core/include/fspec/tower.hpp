#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fspec/fourier.hpp"
#include "fspec/triple.hpp"
#include "fspec/types.hpp"

namespace fspec {

/// One-dimensional level data: F = (1/sqrt M)[e^{2 pi i b l / N}]_{l in L, b in B}.
struct ApfLevelCheck {
  FrameBounds bounds;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double epsilon_measured = 0.0;  ///< max(1 - sigma_min, sigma_max - 1)
};

ApfLevelCheck verify_apf_level(std::int64_t n, const DigitSet& b, const DigitSet& l);

struct TowerSpec {
  std::int64_t m = 0;
  std::int64_t k = 0;
  std::int64_t alpha = 0;
};

/// 2 pi alpha sqrt(M) / K.
double tower_epsilon(const TowerSpec& spec);

struct TowerLevel {
  std::int64_t n = 0;
  DigitSet b;
  DigitSet l;
  double epsilon = 0.0;  ///< bound the level is certified against
  ApfLevelCheck check;
  /// ||F - H|| with H built on denominator M K; set for constructed levels.
  std::optional<double> distance_to_hadamard;
  std::optional<TowerSpec> spec;
};

struct Tower {
  std::vector<TowerLevel> levels;

  double epsilon_sum() const;
};

/// N = M K + alpha, B = {0, K, ..., (M-1)K}, L = {0, ..., M-1}. Throws
/// Precondition when some epsilon >= 1 or alpha is out of range.
Tower build_tower(std::span<const TowerSpec> specs);

/// The same (N, B, L) at every level; epsilon is the measured one.
Tower self_similar_tower(std::int64_t n, const DigitSet& b, const DigitSet& l, int levels);

struct TowerMuHat {
  Complex value;
  int levels = 0;
  std::string note;
};

/// prod_j m_{B_j}(xi / (N_1 ... N_j)) over the built levels; the tail is taken as 1.
TowerMuHat tower_mu_hat(const Tower& t, double xi);

struct TowerFrameSpectrum {
  std::vector<std::int64_t> lambda;  ///< L_1 + N_1 L_2 + ... + (N_1...N_{n-1}) L_n
  double lower = 1.0;                ///< prod (1 - eps_j)^2
  double upper = 1.0;                ///< prod (1 + eps_j)^2
};

TowerFrameSpectrum tower_frame_spectrum(const Tower& t, int n);

// ---------------------------------------------------------------- selection

struct SelectionProblem {
  IntMatrix r;
  int n = 1;
  std::vector<IntVec> universe;  ///< complete residues mod (R^T)^n
  std::vector<IntVec> digits;    ///< B_n
  RatMatrix scale;               ///< R^{-n}
  std::size_t target = 0;        ///< #B_n

  /// Rows for the given universe indices.
  Eigen::MatrixXcd rows(std::span<const std::size_t> index) const;
};

SelectionProblem make_selection_problem(const AffinePair& pair, int n,
                                        std::size_t cap = std::size_t{1} << 16);

enum class SelectionMethod { Exhaustive, Greedy, RandomSwap };

const char* to_string(SelectionMethod m) noexcept;

struct SelectionResult {
  std::vector<std::size_t> index;  ///< into the universe, ascending
  std::vector<IntVec> j;
  FrameBounds bounds;
  SelectionMethod method = SelectionMethod::Exhaustive;
  std::optional<std::uint64_t> seed;
  std::size_t evaluated = 0;
};

/// Maximizes sigma_min^2, then sigma_min^2 / sigma_max^2, then lexicographic index.
SelectionResult exhaustive_select(const SelectionProblem& p, std::size_t cap = 2'000'000);

/// Greedy grows J by the row maximizing the least eigenvalue of F_J F_J^*.
/// RandomSwap starts from a seeded subset and keeps swaps that do not lower
/// sigma_min^2. The generator is x <- 6364136223846793005 x + 1442695040888963407
/// (mod 2^64), draws are (x >> 33) mod range.
SelectionResult heuristic_select(const SelectionProblem& p, SelectionMethod method,
                                 std::uint64_t seed = 1, int iterations = 2000);

}  // namespace fspec
