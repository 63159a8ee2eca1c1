#include "fspec/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fspec/error.hpp"
#include "fspec/latmath.hpp"

namespace fspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Numeric factor magnitudes above this are certified nonzero: the rounding
// error of a mask evaluated from exactly reduced phases is below 1e-13.
constexpr double kCertainlyNonzero = 1e-8;

Complex phase_from_fraction(double f) {
  if (f == 0.0) return {1.0, 0.0};
  if (f == 0.5) return {-1.0, 0.0};
  if (f == 0.25) return {0.0, 1.0};
  if (f == 0.75) return {0.0, -1.0};
  if (f > 0.5) f -= 1.0;
  return std::polar(1.0, kTwoPi * f);
}

Eigen::MatrixXd to_eigen(const RatMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

double spectral_norm(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

}  // namespace

Complex unit_phase(const Rational& x) { return phase_from_fraction(frac(x).get_d()); }

// ---------------------------------------------------------------- Mask

Complex Mask::operator()(std::span<const double> x) const {
  require(x.size() == digits_.dim(), ErrorKind::DimensionMismatch, "mask argument dimension");
  Complex sum = 0.0;
  for (const auto& b : digits_) {
    double phase = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) phase += static_cast<double>(b[i]) * x[i];
    phase -= std::floor(phase);
    sum += phase_from_fraction(phase);
  }
  return sum / static_cast<double>(digits_.size());
}

Complex Mask::operator()(const RatVec& x) const {
  require(x.size() == digits_.dim(), ErrorKind::DimensionMismatch, "mask argument dimension");
  Complex sum = 0.0;
  for (const auto& b : digits_) sum += unit_phase(dot(x, b));
  return sum / static_cast<double>(digits_.size());
}

bool Mask::has_unit_modulus(const RatVec& x) const {
  require(x.size() == digits_.dim(), ErrorKind::DimensionMismatch, "mask argument dimension");
  for (const auto& b : digits_)
    if (dot(x, b).get_den() != 1) return false;
  return true;
}

Vanishing Mask::vanishes(const RatVec& x) const {
  require(x.size() == digits_.dim(), ErrorKind::DimensionMismatch, "mask argument dimension");
  std::vector<Rational> phases;
  phases.reserve(digits_.size());
  for (const auto& b : digits_) phases.push_back(dot(x, b));
  return root_of_unity_sum_vanishes(phases);
}

double qmf_residual(const IntMatrix& r, const DigitSet& b, const DigitSet& l,
                    std::span<const double> x) {
  const std::size_t d = r.dim();
  require(b.dim() == d && l.dim() == d && x.size() == d, ErrorKind::DimensionMismatch,
          "qmf residual dimensions disagree");
  require(b.size() == l.size(), ErrorKind::InvalidArgument, "#B must equal #L");
  const Eigen::MatrixXd inv = to_eigen(inverse(r.transpose()));
  const Mask mask(b);
  double total = 0.0;
  for (const auto& ell : l) {
    Eigen::VectorXd y(d);
    for (std::size_t i = 0; i < d; ++i) y(i) = x[i] + static_cast<double>(ell[i]);
    const Eigen::VectorXd z = inv * y;
    total += std::norm(mask(std::span<const double>(z.data(), d)));
  }
  return std::abs(total - 1.0);
}

DecayBound decay_bound(const IntMatrix& r) {
  const Eigen::MatrixXd a = to_eigen(inverse(r.transpose()));
  const Eigen::Index d = a.rows();
  constexpr double kSafety = 1.0 + 1e-12;
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(d, d);
  double prefix = 1.0;
  for (int m = 1; m <= 256; ++m) {
    power = power * a;
    const double norm = spectral_norm(power) * kSafety;
    if (norm < 1.0) return DecayBound{m, norm, prefix};
    prefix = std::max(prefix, norm);
  }
  fail(ErrorKind::Precondition, "(R^T)^{-m} does not contract for m <= 256; R is not expansive");
}

// ---------------------------------------------------------------- MuHatEvaluator

MuHatEvaluator::MuHatEvaluator(IntMatrix r, DigitSet b, double default_tol, int max_depth)
    : r_(std::move(r)),
      mask_(std::move(b)),
      default_tol_(default_tol),
      max_depth_(max_depth) {
  require(r_.square() && r_.dim() == mask_.digits().dim(), ErrorKind::DimensionMismatch,
          "matrix and digit dimensions disagree");
  require(is_expansive(r_), ErrorKind::Precondition, "matrix is not expansive");
  require(default_tol_ > 0.0, ErrorKind::InvalidArgument, "tolerance must be positive");
  rt_inv_ = inverse(r_.transpose());
  rt_inv_real_ = rt_inv_.to_real_row_major();
  decay_ = decay_bound(r_);
  digit_norm_ = mask_.digits().max_norm();
}

double MuHatEvaluator::tail_bound(double xi_norm, int depth) const {
  if (xi_norm == 0.0 || digit_norm_ == 0.0) return 0.0;
  const int blocks = (depth + 1) / decay_.period;
  const double geometric =
      decay_.period * std::pow(decay_.contraction, blocks) / (1.0 - decay_.contraction);
  return kTwoPi * digit_norm_ * xi_norm * decay_.prefix * geometric;
}

int MuHatEvaluator::depth_for(double xi_norm, double tol) const {
  require(tol > 0.0, ErrorKind::InvalidArgument, "tolerance must be positive");
  for (int depth = 0; depth <= max_depth_; ++depth)
    if (tail_bound(xi_norm, depth) < tol) return depth;
  fail(ErrorKind::ToleranceUnreachable,
       "tolerance " + std::to_string(tol) + " needs more than " + std::to_string(max_depth_) +
           " factors; achieved bound " + std::to_string(tail_bound(xi_norm, max_depth_)));
}

MuHatValue MuHatEvaluator::operator()(std::span<const double> xi, double tol) const {
  const std::size_t d = dim();
  require(xi.size() == d, ErrorKind::DimensionMismatch, "mu_hat argument dimension");
  const int depth = depth_for(euclidean_norm(xi), tol);
  std::vector<double> y(xi.begin(), xi.end()), next(d);
  Complex prod = 1.0;
  for (int j = 1; j <= depth; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += rt_inv_real_[i * d + k] * y[k];
      next[i] = s;
    }
    y.swap(next);
    prod *= mask_(std::span<const double>(y));
  }
  return MuHatValue{prod, depth, tail_bound(euclidean_norm(xi), depth), std::nullopt};
}

MuHatValue MuHatEvaluator::at(const RatVec& xi, double tol) const {
  require(xi.size() == dim(), ErrorKind::DimensionMismatch, "mu_hat argument dimension");
  const RealVec real = to_real(xi);
  const double norm = euclidean_norm(real);
  const int depth = depth_for(norm, tol);
  RatVec y = xi;
  Complex prod = 1.0;
  for (int j = 1; j <= depth; ++j) {
    y = rt_inv_ * y;
    const Complex factor = mask_(y);
    if (std::abs(factor) < kCertainlyNonzero && mask_.vanishes(y) == Vanishing::Zero)
      return MuHatValue{Complex(0.0, 0.0), j, 0.0, j};
    prod *= factor;
  }
  return MuHatValue{prod, depth, tail_bound(norm, depth), std::nullopt};
}

RatVec MuHatEvaluator::scaled(const RatVec& xi, int j) const {
  RatVec y = xi;
  for (int k = 0; k < j; ++k) y = rt_inv_ * y;
  return y;
}

std::optional<int> MuHatEvaluator::zero_certificate(const RatVec& xi, int max_depth) const {
  require(xi.size() == dim(), ErrorKind::DimensionMismatch, "argument dimension");
  const double norm = euclidean_norm(to_real(xi));
  RatVec y = xi;
  for (int j = 1; j <= max_depth; ++j) {
    y = rt_inv_ * y;
    if (std::abs(mask_(y)) < kCertainlyNonzero && mask_.vanishes(y) == Vanishing::Zero) return j;
    // Past this level every factor satisfies |m_B - 1| < 1/2.
    if (tail_bound(norm, j) < 0.5) break;
  }
  return std::nullopt;
}

ZeroClassification MuHatEvaluator::classify(const RatVec& xi) const {
  require(xi.size() == dim(), ErrorKind::DimensionMismatch, "argument dimension");
  const double norm = euclidean_norm(to_real(xi));
  RatVec y = xi;
  bool inconclusive = false;
  for (int j = 1; j <= max_depth_; ++j) {
    y = rt_inv_ * y;
    if (std::abs(mask_(y)) < kCertainlyNonzero) {
      const Vanishing v = mask_.vanishes(y);
      if (v == Vanishing::Zero) return {ZeroStatus::Zero, j};
      if (v == Vanishing::Inconclusive) inconclusive = true;
    }
    // Sum of |f_k - 1| over k > j is below 1/2, so the tail product is nonzero.
    if (tail_bound(norm, j) < 0.5)
      return {inconclusive ? ZeroStatus::Inconclusive : ZeroStatus::NonZero, std::nullopt};
  }
  return {ZeroStatus::Inconclusive, std::nullopt};
}

// ---------------------------------------------------------------- matrices

FourierMatrix build_fourier_matrix(const RatMatrix& scale, std::span<const IntVec> digits,
                                   std::span<const IntVec> freqs) {
  require(!digits.empty(), ErrorKind::InvalidArgument, "Fourier matrix needs at least one digit");
  require(!freqs.empty(), ErrorKind::InvalidArgument, "Fourier matrix needs at least one frequency");
  const std::size_t d = scale.rows();
  require(scale.cols() == d, ErrorKind::DimensionMismatch, "scale matrix must be square");
  for (const auto& b : digits)
    require(b.size() == d, ErrorKind::DimensionMismatch, "digit dimension");
  for (const auto& l : freqs)
    require(l.size() == d, ErrorKind::DimensionMismatch, "frequency dimension");

  FourierMatrix out{std::vector<IntVec>(freqs.begin(), freqs.end()),
                    std::vector<IntVec>(digits.begin(), digits.end()), scale,
                    Eigen::MatrixXcd(freqs.size(), digits.size())};
  const double norm = 1.0 / std::sqrt(static_cast<double>(digits.size()));

  // Phases <scale b, l> = <num_b, l> / D with a common denominator D.
  Integer denom = 1;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), scale(i, j).get_den_mpz_t());
  std::vector<std::vector<Integer>> nums;
  nums.reserve(digits.size());
  bool small = denom.fits_slong_p() && denom < (Integer(1) << 62);
  for (const auto& b : digits) {
    const RatVec x = scale * b;
    std::vector<Integer> num(d);
    for (std::size_t i = 0; i < d; ++i) {
      num[i] = Rational(x[i] * denom).get_num();
      small = small && num[i].fits_slong_p();
    }
    nums.push_back(std::move(num));
  }

  for (std::size_t c = 0; c < digits.size(); ++c) {
    for (std::size_t r = 0; r < freqs.size(); ++r) {
      double f;
      if (small) {
        const auto den = static_cast<__int128>(denom.get_si());
        __int128 acc = 0;
        for (std::size_t i = 0; i < d; ++i) {
          acc += static_cast<__int128>(nums[c][i].get_si()) * freqs[r][i];
          acc %= den;
        }
        if (acc < 0) acc += den;
        f = static_cast<double>(static_cast<std::int64_t>(acc)) / static_cast<double>(denom.get_si());
      } else {
        Integer acc = 0;
        for (std::size_t i = 0; i < d; ++i) acc += nums[c][i] * static_cast<long>(freqs[r][i]);
        Integer rem;
        mpz_fdiv_r(rem.get_mpz_t(), acc.get_mpz_t(), denom.get_mpz_t());
        f = Rational(rem, denom).get_d();
      }
      out.entries(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          norm * phase_from_fraction(f);
    }
  }
  return out;
}

FrameBounds frame_bounds(const Eigen::MatrixXcd& f) {
  const Eigen::MatrixXcd gram = f.adjoint() * f;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
  const Eigen::VectorXd& values = eig.eigenvalues();
  const Eigen::Index last = values.size() - 1;
  const auto residual = [&](Eigen::Index k) {
    const Eigen::VectorXcd v = eig.eigenvectors().col(k);
    return (gram * v - values(k) * v).norm() / v.norm();
  };
  FrameBounds out;
  if (eig.info() == Eigen::Success && residual(0) <= 1e-10 && residual(last) <= 1e-10) {
    out = {values(0), values(last)};
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(f);
    const auto& s = svd.singularValues();
    const double smin = f.rows() < f.cols() ? 0.0 : s(s.size() - 1);
    out = {smin * smin, s(0) * s(0)};
  }
  out.lower = std::max(0.0, out.lower);
  out.upper = std::max(out.lower, out.upper);
  return out;
}

double unitarity_defect(const Eigen::MatrixXcd& f) {
  require(f.rows() == f.cols(), ErrorKind::DimensionMismatch, "unitarity defect needs a square matrix");
  const Eigen::MatrixXcd gram = f.adjoint() * f;
  const Eigen::MatrixXcd diff = gram - Eigen::MatrixXcd::Identity(f.rows(), f.cols());
  return diff.cwiseAbs().maxCoeff();
}

double operator_norm(const Eigen::MatrixXcd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues()(0);
}

}  // namespace fspec
