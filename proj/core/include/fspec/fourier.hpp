#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fspec/cyclotomic.hpp"
#include "fspec/types.hpp"

namespace fspec {

inline constexpr double kDefaultTolerance = 1e-9;

/// e^{2 pi i x} for a rational x, evaluated after exact reduction mod 1.
Complex unit_phase(const Rational& x);

/// m_B(x) = (1/#B) sum_b e^{2 pi i <b, x>}.
class Mask {
 public:
  explicit Mask(DigitSet digits) : digits_(std::move(digits)) {}

  const DigitSet& digits() const noexcept { return digits_; }

  Complex operator()(std::span<const double> x) const;
  /// Phases <b,x> reduced exactly before evaluation.
  Complex operator()(const RatVec& x) const;

  /// |m_B(x)| == 1, decided exactly: <b,x> in Z for every digit.
  bool has_unit_modulus(const RatVec& x) const;
  /// Exact decision of m_B(x) == 0 (see root_of_unity_sum_vanishes).
  Vanishing vanishes(const RatVec& x) const;

 private:
  DigitSet digits_;
};

/// |sum_{l in L} |m_B((R^T)^{-1}(x + l))|^2 - 1|.
double qmf_residual(const IntMatrix& r, const DigitSet& b, const DigitSet& l,
                    std::span<const double> x);

/// Bound ||(R^T)^{-j}||_2 <= prefix * contraction^floor(j / period).
struct DecayBound {
  int period = 1;
  double contraction = 0.0;
  double prefix = 1.0;
};

DecayBound decay_bound(const IntMatrix& r);

struct MuHatValue {
  Complex value;
  int depth = 0;        ///< number of factors multiplied
  double error_bound = 0.0;
  /// Set when a factor vanished exactly (rational arguments only).
  std::optional<int> exact_zero_level;
};

enum class ZeroStatus { Zero, NonZero, Inconclusive };

struct ZeroClassification {
  ZeroStatus status = ZeroStatus::Inconclusive;
  std::optional<int> level;  ///< vanishing level when status == Zero
};

/// Evaluates mu_hat(xi) = prod_{j>=1} m_B((R^T)^{-j} xi) with a truncation
/// depth chosen so that the tail error is provably below the tolerance.
class MuHatEvaluator {
 public:
  MuHatEvaluator(IntMatrix r, DigitSet b, double default_tol = kDefaultTolerance,
                 int max_depth = 4000);

  const IntMatrix& matrix() const noexcept { return r_; }
  const Mask& mask() const noexcept { return mask_; }
  const DecayBound& decay() const noexcept { return decay_; }
  double default_tolerance() const noexcept { return default_tol_; }
  std::size_t dim() const noexcept { return r_.rows(); }

  /// Smallest depth whose certified tail bound for |xi| = xi_norm is < tol.
  /// Throws ToleranceUnreachable if more than max_depth factors are needed.
  int depth_for(double xi_norm, double tol) const;
  /// Tail bound after `depth` factors.
  double tail_bound(double xi_norm, int depth) const;

  MuHatValue operator()(std::span<const double> xi) const { return (*this)(xi, default_tol_); }
  MuHatValue operator()(std::span<const double> xi, double tol) const;
  MuHatValue at(const RatVec& xi) const { return at(xi, default_tol_); }
  /// Rational argument: every level's phases are reduced exactly.
  MuHatValue at(const RatVec& xi, double tol) const;
  MuHatValue at(const IntVec& xi, double tol) const { return at(to_rational(xi), tol); }
  MuHatValue at(const IntVec& xi) const { return at(to_rational(xi), default_tol_); }

  /// First level j <= max_depth with m_B((R^T)^{-j} xi) == 0 exactly.
  std::optional<int> zero_certificate(const RatVec& xi, int max_depth = 256) const;
  /// Zero / certified nonzero / inconclusive. NonZero means every factor up to
  /// the depth where sum of tail bounds drops below 1/2 is exactly nonzero.
  ZeroClassification classify(const RatVec& xi) const;

  /// (R^T)^{-j} xi, exact.
  RatVec scaled(const RatVec& xi, int j) const;

 private:
  IntMatrix r_;
  Mask mask_;
  RatMatrix rt_inv_;
  std::vector<double> rt_inv_real_;
  DecayBound decay_;
  double digit_norm_;
  double default_tol_;
  int max_depth_;
};

/// (1/sqrt(#cols)) [e^{2 pi i <scale b, l>}]_{l in rows, b in cols}.
struct FourierMatrix {
  std::vector<IntVec> rows;
  std::vector<IntVec> cols;
  RatMatrix scale;
  Eigen::MatrixXcd entries;
};

FourierMatrix build_fourier_matrix(const RatMatrix& scale, std::span<const IntVec> digits,
                                   std::span<const IntVec> freqs);

struct FrameBounds {
  double lower = 0.0;  ///< sigma_min^2
  double upper = 0.0;  ///< sigma_max^2
};

/// Extreme eigenvalues of the Gram matrix F^* F.
FrameBounds frame_bounds(const Eigen::MatrixXcd& f);
inline FrameBounds frame_bounds(const FourierMatrix& f) { return frame_bounds(f.entries); }

/// max |(F^* F - I)_{ij}|; F must be square.
double unitarity_defect(const Eigen::MatrixXcd& f);
inline double unitarity_defect(const FourierMatrix& f) { return unitarity_defect(f.entries); }

/// Largest singular value.
double operator_norm(const Eigen::MatrixXcd& a);

}  // namespace fspec
