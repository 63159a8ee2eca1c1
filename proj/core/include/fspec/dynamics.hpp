#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fspec/fourier.hpp"
#include "fspec/latmath.hpp"
#include "fspec/triple.hpp"
#include "fspec/types.hpp"

namespace fspec {

struct Interval {
  Rational lo;
  Rational hi;
};

/// Product of closed intervals.
struct Box {
  std::vector<Interval> axes;

  std::size_t dim() const noexcept { return axes.size(); }
  bool contains(const RatVec& x) const;
  /// Box hull of A(box) + shift, exact.
  Box image(const RatMatrix& a, const RatVec& shift) const;
  bool contains(const Box& other) const;
};

/// A box invariant under x -> M^{-1}(x + l) for every l in `digits`.
/// M must be expansive. Invariance is verified exactly before returning.
Box attractor_box(const IntMatrix& m, const DigitSet& digits);

/// {sum_{k=1..depth} R^{-k} b_k}, in the order of expand_digits.
std::vector<RealVec> attractor_points(const AffinePair& pair, int depth,
                                      std::size_t cap = std::size_t{1} << 22);

/// The maps tau_l(x) = (R^T)^{-1}(x + l), l in L, together with m_B.
class TransitionSystem {
 public:
  explicit TransitionSystem(HadamardTriple t);

  const HadamardTriple& triple() const noexcept { return t_; }
  const Mask& mask() const noexcept { return mask_; }
  std::size_t dim() const noexcept { return t_.dim(); }

  RatVec tau(const IntVec& l, const RatVec& x) const;
  /// |m_B(x)| = 1, i.e. <b, x> in Z for every b.
  bool extreme(const RatVec& x) const { return mask_.has_unit_modulus(x); }

 private:
  HadamardTriple t_;
  Mask mask_;
  RatMatrix rt_inv_;
};

/// word = (l_1, ..., l_m); points[0] is the fixed point x_0 of
/// tau_{l_1} o ... o tau_{l_m}; points[i+1] = tau_{l_{m-i}}(points[i]).
/// The word is the lexicographically least rotation.
struct ExtremeCycle {
  std::vector<IntVec> word;
  std::vector<RatVec> points;

  const RatVec& base_point() const { return points.front(); }
};

struct CycleEnumeration {
  std::vector<ExtremeCycle> cycles;
  Box box;
  Lattice candidate_lattice;
  std::size_t candidates = 0;
  bool complete = true;
};

/// Candidates are the dual of Z[R,B] inside the attractor box; extreme
/// transitions from each candidate form a functional graph whose cycles are
/// reported. Exact throughout.
CycleEnumeration enumerate_extreme_cycles(const TransitionSystem& ts,
                                          std::size_t cap = 1'000'000);

/// {l_0 + R^T l_1 + ... + (R^T)^{K-1} l_{K-1} + (R^T)^K (-c) : K <= n, c a cycle point},
/// sorted and deduplicated.
std::vector<RatVec> dynamically_simple_spectrum(const TransitionSystem& ts,
                                                const std::vector<ExtremeCycle>& cycles, int n,
                                                std::size_t cap = std::size_t{1} << 22);

struct Closure {
  std::vector<RatVec> points;  ///< sorted
  bool cap_reached = false;
  /// Some transition was accepted or rejected on numeric evidence only.
  bool tainted = false;
};

/// Closure of `seeds` under possible transitions (m_B(tau_l x) != 0).
Closure invariant_closure(const TransitionSystem& ts, const std::vector<RatVec>& seeds,
                          std::size_t cap = 5000);

enum class Simplicity { Simple, NotSimple, Unknown };

const char* to_string(Simplicity s) noexcept;

struct SimplicityVerdict {
  Simplicity verdict = Simplicity::Unknown;
  std::string reason;
  std::optional<RatVec> witness_seed;
};

/// d = 1: Simple. Otherwise NotSimple only when some seed has a finite,
/// untainted closure avoiding every cycle point; Unknown else.
SimplicityVerdict dynamical_simplicity(const TransitionSystem& ts,
                                       const std::vector<ExtremeCycle>& cycles,
                                       const std::vector<RatVec>& seeds, std::size_t cap = 5000);

/// Points j/q, 0 <= j < q, per coordinate of the unit cube.
std::vector<RatVec> rational_grid(std::size_t dim, std::int64_t denominator);

struct ZeroScanEntry {
  RatVec xi;
  bool certified = false;  ///< every shift xi + k, |k|_inf <= kmax, has an exact zero
  std::size_t shifts_certified = 0;
  std::optional<IntVec> first_uncertified_shift;
};

std::vector<ZeroScanEntry> periodic_zero_scan(const MuHatEvaluator& ev,
                                              const std::vector<RatVec>& grid, int depth,
                                              int kmax);

}  // namespace fspec
