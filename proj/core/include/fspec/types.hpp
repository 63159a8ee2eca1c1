#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace fspec {

using Integer = mpz_class;
using Rational = mpq_class;
using Complex = std::complex<double>;

// Digit and frequency vectors. Entries are exact; arithmetic on them goes
// through the checked helpers below and throws ErrorKind::Overflow.
using IntVec = std::vector<std::int64_t>;
using RatVec = std::vector<Rational>;
using RealVec = std::vector<double>;

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t to_int64(const Integer& value);

IntVec add(const IntVec& a, const IntVec& b);
IntVec sub(const IntVec& a, const IntVec& b);
IntVec negate(const IntVec& a);
bool is_zero(const IntVec& v);
std::int64_t dot(const IntVec& a, const IntVec& b);

RatVec to_rational(const IntVec& v);
RealVec to_real(const IntVec& v);
RealVec to_real(const RatVec& v);
RatVec add(const RatVec& a, const RatVec& b);
RatVec sub(const RatVec& a, const RatVec& b);
Rational dot(const RatVec& a, const IntVec& b);
Rational dot(const RatVec& a, const RatVec& b);
bool is_integral(const RatVec& v);
double euclidean_norm(std::span<const double> v);

/// Integer matrix, row-major. Products and powers are overflow-checked.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  IntMatrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> row_major);

  static IntMatrix identity(std::size_t dim);
  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);
  static IntMatrix scalar(std::int64_t value) { return IntMatrix(1, 1, {value}); }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  /// Dimension of a square matrix; throws for rectangular ones.
  std::size_t dim() const;

  std::int64_t operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  std::int64_t& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }

  IntMatrix transpose() const;
  IntMatrix operator*(const IntMatrix& rhs) const;
  IntVec operator*(const IntVec& v) const;
  IntMatrix pow(unsigned exponent) const;
  IntMatrix block(std::size_t r0, std::size_t c0, std::size_t nrows, std::size_t ncols) const;
  std::vector<std::vector<std::int64_t>> to_rows() const;

  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> a_;
};

/// Dense rational matrix used for inverses, dual bases and exact transition maps.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  explicit RatMatrix(const IntMatrix& m);

  static RatMatrix identity(std::size_t dim);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  const Rational& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  Rational& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }

  RatMatrix transpose() const;
  RatMatrix operator*(const RatMatrix& rhs) const;
  RatVec operator*(const RatVec& v) const;
  RatVec operator*(const IntVec& v) const;
  RatMatrix pow(unsigned exponent) const;
  RatVec column(std::size_t c) const;
  bool is_integral() const;
  /// Throws Precondition when some entry is not an integer.
  IntMatrix to_integer() const;
  std::vector<double> to_real_row_major() const;

  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> a_;
};

/// Finite set of pairwise distinct integer vectors of a common dimension that
/// contains the zero vector (the B and L of an affine pair or triple).
class DigitSet {
 public:
  DigitSet() = default;
  DigitSet(std::size_t dim, std::vector<IntVec> vectors);
  DigitSet(std::initializer_list<std::int64_t> scalars);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return v_.size(); }
  const IntVec& operator[](std::size_t i) const { return v_[i]; }
  const std::vector<IntVec>& vectors() const noexcept { return v_; }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }
  std::int64_t max_abs_entry() const;
  double max_norm() const;

  friend bool operator==(const DigitSet&, const DigitSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<IntVec> v_;
};

std::string format_vector(const IntVec& v);
std::string format_vector(const RatVec& v);

}  // namespace fspec
