#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "fspec/fourier.hpp"
#include "fspec/triple.hpp"
#include "fspec/types.hpp"

namespace fspec {

enum class Provenance { Canonical, CycleGenerated, OffsetModified };

const char* to_string(Provenance p) noexcept;

/// Offset chosen for one j at one construction stage: j + (R^T)^n k.
struct Offset {
  int stage = 0;
  IntVec j;
  IntVec k;
};

/// Nested frequency sets. Level i is evaluated against (R^T)^{-scale_exponents[i]}.
struct SpectrumCandidate {
  std::vector<std::vector<IntVec>> levels;
  std::vector<int> scale_exponents;
  Provenance provenance = Provenance::Canonical;
  std::vector<Offset> offsets;  ///< nonzero offsets only

  int depth() const noexcept { return static_cast<int>(levels.size()); }
};

/// Lambda_k = L + R^T L + ... + (R^T)^{k-1} L for k = 1..n.
SpectrumCandidate canonical_levels(const HadamardTriple& t, int n,
                                   std::size_t cap = std::size_t{1} << 22);

struct OrthogonalityReport {
  double max_magnitude = 0.0;  ///< max over pairs of |mu_hat| + certified error
  std::optional<std::pair<IntVec, IntVec>> argmax;
  std::size_t pairs = 0;
  std::size_t distinct_differences = 0;
  std::size_t exact_zeros = 0;
};

OrthogonalityReport orthogonality_check(const MuHatEvaluator& ev, const std::vector<IntVec>& freqs,
                                        double tol = kDefaultTolerance,
                                        std::size_t pair_cap = 50'000'000);

struct DeltaEstimate {
  double value = 1.0;
  int depth = 0;
  int level = 0;  ///< level of the minimizer, 1-based
  IntVec lambda;
  /// Running minimum after each level.
  std::vector<double> by_depth;
};

/// min over levels n <= depth and lambda in level n of |mu_hat((R^T)^{-s_n} lambda)|^2.
/// An upper bound for delta(Lambda) at the examined depth.
DeltaEstimate delta_estimate(const MuHatEvaluator& ev, const SpectrumCandidate& cand, int depth);

/// Weights w_b indexed by B_n in expand_digits order.
struct StepFunction {
  int level = 1;
  std::vector<Complex> weights;
};

struct ParsevalResult {
  double lhs = 0.0;      ///< sum over Lambda_n of |int f e_{-lambda} dmu|^2
  double rhs = 0.0;      ///< (1/N^n) sum |mu_hat|^2 |(H_n w)_lambda|^2
  double identity_defect = 0.0;
  double norm_squared = 0.0;  ///< ||f||^2 = ||w||^2 / N^n
  double ratio = 0.0;         ///< lhs / ||f||^2
  double delta_level = 1.0;   ///< min |mu_hat((R^T)^{-n} lambda)|^2 over Lambda_n
  bool upper_holds = false;   ///< lhs <= ||f||^2 (1 + 1e-9)
};

/// Compares the step-function integrals, computed on a finer level, with the
/// H_n expression. `t` must generate the measure of `ev`.
ParsevalResult parseval_defect(const MuHatEvaluator& ev, const HadamardTriple& t,
                               const StepFunction& f);

struct CompletionOptions {
  double eps0 = 0.1;
  double delta0 = 1e-4;
  int kmax = 5;
  int stages = 3;
  std::size_t cap = std::size_t{1} << 20;
};

/// Builds Lambda_{k+1} = Lambda_k + (R^T)^{m_k} J^_{n_{k+1}} with offsets
/// k(j) found by search. Throws ConstructionFailed naming j when no offset with
/// |k|_inf <= kmax keeps |mu_hat|^2 >= delta0 on the eps0-net.
SpectrumCandidate complete_spectrum(const MuHatEvaluator& ev, const HadamardTriple& t,
                                    const CompletionOptions& opts = {});

struct OrthogonalSet {
  std::vector<RatVec> points;
  bool max_size_reached = false;
  std::size_t grid_points = 0;
  std::size_t edges = 0;
};

/// Largest clique of the graph on rational grid points in [lo, hi]^d
/// (denominators <= bound) whose edges are certified zeros of mu_hat at the
/// difference.
OrthogonalSet orthogonal_set_search(const MuHatEvaluator& ev, const Rational& lo,
                                    const Rational& hi, std::int64_t denominator_bound,
                                    std::size_t max_size, std::size_t grid_cap = 200'000);

}  // namespace fspec
