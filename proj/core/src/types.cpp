#include "fspec/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fspec/error.hpp"

namespace fspec {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::CapExceeded: return "cap-exceeded";
    case ErrorKind::ToleranceUnreachable: return "tolerance-unreachable";
    case ErrorKind::ConstructionFailed: return "construction-failed";
    case ErrorKind::Overflow: return "overflow";
  }
  return "unknown";
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) fail(ErrorKind::Overflow, "integer addition overflow");
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) fail(ErrorKind::Overflow, "integer multiplication overflow");
  return out;
}

std::int64_t to_int64(const Integer& value) {
  if (!value.fits_slong_p()) fail(ErrorKind::Overflow, "integer does not fit in 64 bits");
  return value.get_si();
}

namespace {

void check_same(std::size_t a, std::size_t b) {
  require(a == b, ErrorKind::DimensionMismatch,
          "vector dimensions differ (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
}

}  // namespace

IntVec add(const IntVec& a, const IntVec& b) {
  check_same(a.size(), b.size());
  IntVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = checked_add(a[i], b[i]);
  return out;
}

IntVec sub(const IntVec& a, const IntVec& b) { return add(a, negate(b)); }

IntVec negate(const IntVec& a) {
  IntVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = checked_mul(a[i], -1);
  return out;
}

bool is_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

std::int64_t dot(const IntVec& a, const IntVec& b) {
  check_same(a.size(), b.size());
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = checked_add(s, checked_mul(a[i], b[i]));
  return s;
}

RatVec to_rational(const IntVec& v) {
  RatVec out;
  out.reserve(v.size());
  for (auto x : v) out.emplace_back(static_cast<long>(x));
  return out;
}

RealVec to_real(const IntVec& v) { return RealVec(v.begin(), v.end()); }

RealVec to_real(const RatVec& v) {
  RealVec out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.get_d());
  return out;
}

RatVec add(const RatVec& a, const RatVec& b) {
  check_same(a.size(), b.size());
  RatVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

RatVec sub(const RatVec& a, const RatVec& b) {
  check_same(a.size(), b.size());
  RatVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Rational dot(const RatVec& a, const IntVec& b) {
  check_same(a.size(), b.size());
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * static_cast<long>(b[i]);
  return s;
}

Rational dot(const RatVec& a, const RatVec& b) {
  check_same(a.size(), b.size());
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool is_integral(const RatVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x.get_den() == 1; });
}

double euclidean_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// ---------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), a_(rows * cols, 0) {}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> row_major)
    : rows_(rows), cols_(cols), a_(std::move(row_major)) {
  require(a_.size() == rows * cols, ErrorKind::DimensionMismatch,
          "matrix data size does not match its shape");
}

IntMatrix IntMatrix::identity(std::size_t dim) {
  IntMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  require(!rows.empty(), ErrorKind::InvalidArgument, "matrix has no rows");
  const std::size_t cols = rows.front().size();
  std::vector<std::int64_t> data;
  data.reserve(rows.size() * cols);
  for (const auto& row : rows) {
    require(row.size() == cols, ErrorKind::DimensionMismatch, "ragged matrix rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return IntMatrix(rows.size(), cols, std::move(data));
}

std::size_t IntMatrix::dim() const {
  require(square(), ErrorKind::DimensionMismatch, "matrix is not square");
  return rows_;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  require(cols_ == rhs.rows_, ErrorKind::DimensionMismatch, "matrix product shape mismatch");
  IntMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < rhs.cols_; ++c) {
      std::int64_t s = 0;
      for (std::size_t k = 0; k < cols_; ++k)
        s = checked_add(s, checked_mul((*this)(r, k), rhs(k, c)));
      out(r, c) = s;
    }
  return out;
}

IntVec IntMatrix::operator*(const IntVec& v) const {
  check_same(cols_, v.size());
  IntVec out(rows_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::int64_t s = 0;
    for (std::size_t k = 0; k < cols_; ++k) s = checked_add(s, checked_mul((*this)(r, k), v[k]));
    out[r] = s;
  }
  return out;
}

IntMatrix IntMatrix::pow(unsigned exponent) const {
  IntMatrix result = identity(dim());
  IntMatrix base = *this;
  while (exponent > 0) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1u;
    if (exponent > 0) base = base * base;
  }
  return result;
}

IntMatrix IntMatrix::block(std::size_t r0, std::size_t c0, std::size_t nrows,
                           std::size_t ncols) const {
  require(r0 + nrows <= rows_ && c0 + ncols <= cols_, ErrorKind::DimensionMismatch,
          "block outside matrix");
  IntMatrix out(nrows, ncols);
  for (std::size_t r = 0; r < nrows; ++r)
    for (std::size_t c = 0; c < ncols; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
  return out;
}

std::vector<std::vector<std::int64_t>> IntMatrix::to_rows() const {
  std::vector<std::vector<std::int64_t>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    out[r].assign(a_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  a_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
  return out;
}

// ---------------------------------------------------------------- RatMatrix

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), a_(rows * cols) {}

RatMatrix::RatMatrix(const IntMatrix& m) : RatMatrix(m.rows(), m.cols()) {
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = static_cast<long>(m(r, c));
}

RatMatrix RatMatrix::identity(std::size_t dim) {
  RatMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RatMatrix RatMatrix::operator*(const RatMatrix& rhs) const {
  require(cols_ == rhs.rows_, ErrorKind::DimensionMismatch, "matrix product shape mismatch");
  RatMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < rhs.cols_; ++c) {
      Rational s = 0;
      for (std::size_t k = 0; k < cols_; ++k) s += (*this)(r, k) * rhs(k, c);
      out(r, c) = s;
    }
  return out;
}

RatVec RatMatrix::operator*(const RatVec& v) const {
  check_same(cols_, v.size());
  RatVec out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Rational s = 0;
    for (std::size_t k = 0; k < cols_; ++k) s += (*this)(r, k) * v[k];
    out[r] = s;
  }
  return out;
}

RatVec RatMatrix::operator*(const IntVec& v) const { return (*this) * to_rational(v); }

RatMatrix RatMatrix::pow(unsigned exponent) const {
  require(rows_ == cols_, ErrorKind::DimensionMismatch, "matrix is not square");
  RatMatrix result = identity(rows_);
  RatMatrix base = *this;
  while (exponent > 0) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1u;
    if (exponent > 0) base = base * base;
  }
  return result;
}

RatVec RatMatrix::column(std::size_t c) const {
  RatVec out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

bool RatMatrix::is_integral() const {
  return std::all_of(a_.begin(), a_.end(), [](const Rational& x) { return x.get_den() == 1; });
}

IntMatrix RatMatrix::to_integer() const {
  require(is_integral(), ErrorKind::Precondition, "matrix has non-integer entries");
  IntMatrix out(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = to_int64((*this)(r, c).get_num());
  return out;
}

std::vector<double> RatMatrix::to_real_row_major() const {
  std::vector<double> out;
  out.reserve(a_.size());
  for (const auto& x : a_) out.push_back(x.get_d());
  return out;
}

// ---------------------------------------------------------------- DigitSet

DigitSet::DigitSet(std::size_t dim, std::vector<IntVec> vectors) : dim_(dim), v_(std::move(vectors)) {
  require(dim_ > 0, ErrorKind::InvalidArgument, "digit set dimension must be positive");
  require(!v_.empty(), ErrorKind::InvalidArgument, "digit set is empty");
  std::set<IntVec> seen;
  bool has_zero = false;
  for (const auto& v : v_) {
    require(v.size() == dim_, ErrorKind::DimensionMismatch,
            "digit " + format_vector(v) + " has wrong dimension");
    require(seen.insert(v).second, ErrorKind::InvalidArgument,
            "digit " + format_vector(v) + " is repeated");
    has_zero = has_zero || is_zero(v);
  }
  require(has_zero, ErrorKind::InvalidArgument, "digit set must contain the zero vector");
}

DigitSet::DigitSet(std::initializer_list<std::int64_t> scalars)
    : DigitSet(1, [&] {
        std::vector<IntVec> v;
        for (auto s : scalars) v.push_back({s});
        return v;
      }()) {}

std::int64_t DigitSet::max_abs_entry() const {
  std::int64_t m = 0;
  for (const auto& v : v_)
    for (auto x : v) m = std::max(m, x < 0 ? -x : x);
  return m;
}

double DigitSet::max_norm() const {
  double m = 0.0;
  for (const auto& v : v_) {
    const auto real = to_real(v);
    m = std::max(m, euclidean_norm(real));
  }
  return m;
}

std::string format_vector(const IntVec& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

std::string format_vector(const RatVec& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
  os << ')';
  return os.str();
}

}  // namespace fspec
