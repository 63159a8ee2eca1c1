#include "fspec/latmath.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>

#include "fspec/error.hpp"

namespace fspec {

const char* to_string(Expansivity e) noexcept {
  switch (e) {
    case Expansivity::Expansive: return "expansive";
    case Expansivity::NotExpansive: return "not-expansive";
    case Expansivity::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

std::vector<Integer> characteristic_polynomial(const IntMatrix& m) {
  const std::size_t n = m.dim();
  // Faddeev-LeVerrier; every division below is exact over the integers.
  const RatMatrix a(m);
  std::vector<Integer> c(n + 1);
  c[n] = 1;
  RatMatrix mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    RatMatrix next = a * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += Rational(c[n - k + 1]);
    mk = std::move(next);
    const RatMatrix amk = a * mk;
    Rational trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += amk(i, i);
    const Rational coeff = -trace / static_cast<long>(k);
    c[n - k] = coeff.get_num();
  }
  return c;
}

namespace {

// All roots of sum a_i z^i strictly inside the open unit disk (Schur-Cohn).
bool schur_stable(std::vector<Integer> a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  if (a.empty()) return false;
  while (a.size() > 1) {
    const std::size_t n = a.size() - 1;
    if (abs(a[n]) <= abs(a[0])) return false;
    std::vector<Integer> next(n);
    for (std::size_t i = 0; i < n; ++i) next[i] = a[n] * a[i + 1] - a[0] * a[n - i - 1];
    a = std::move(next);
  }
  return true;
}

}  // namespace

Expansivity expansivity(const IntMatrix& m) {
  const auto c = characteristic_polynomial(m);
  // Eigenvalues of M are reciprocals of the roots of the reversed polynomial.
  if (c.front() == 0) return Expansivity::NotExpansive;
  std::vector<Integer> reversed(c.rbegin(), c.rend());
  return schur_stable(std::move(reversed)) ? Expansivity::Expansive : Expansivity::NotExpansive;
}

Expansivity numeric_expansivity(const IntMatrix& m, double margin) {
  const std::size_t n = m.dim();
  Eigen::MatrixXd a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = static_cast<double>(m(i, j));
  const Eigen::VectorXcd ev = a.eigenvalues();
  bool expansive = true;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double mod = std::abs(ev(i));
    if (std::abs(mod - 1.0) <= margin) return Expansivity::Indeterminate;
    if (mod < 1.0) expansive = false;
  }
  return expansive ? Expansivity::Expansive : Expansivity::NotExpansive;
}

bool is_expansive(const IntMatrix& m) { return expansivity(m) == Expansivity::Expansive; }

Integer determinant(const IntMatrix& m) {
  const std::size_t n = m.dim();
  // Bareiss fraction-free elimination.
  std::vector<Integer> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = static_cast<long>(m(i, j));
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap * n + k] == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[swap * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        a[i * n + j] = t;
      }
    prev = a[k * n + k];
  }
  return sign * a[(n - 1) * n + (n - 1)];
}

RatMatrix inverse(const RatMatrix& m) {
  const std::size_t n = m.rows();
  require(n == m.cols(), ErrorKind::DimensionMismatch, "inverse of a non-square matrix");
  RatMatrix a = m;
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a(piv, col) == 0) ++piv;
    require(piv < n, ErrorKind::Precondition, "matrix is singular");
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    const Rational p = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a(i, col) == 0) continue;
      const Rational f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

RatMatrix inverse(const IntMatrix& m) { return inverse(RatMatrix(m)); }

namespace {

Integer floor_of(const Rational& q) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

class ResidueReducer {
 public:
  explicit ResidueReducer(const IntMatrix& r) : r_(r), inv_(inverse(r)) {}

  IntVec operator()(const IntVec& v) const {
    const RatVec t = inv_ * v;
    IntVec shift(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) shift[i] = to_int64(floor_of(t[i]));
    return sub(v, r_ * shift);
  }

 private:
  IntMatrix r_;
  RatMatrix inv_;
};

}  // namespace

IntVec reduce_mod(const IntMatrix& r, const IntVec& v) { return ResidueReducer(r)(v); }

bool congruent(const IntMatrix& r, const IntVec& a, const IntVec& b) {
  return is_integral(inverse(r) * sub(a, b));
}

bool residues_distinct(const IntMatrix& r, std::span<const IntVec> digits) {
  const std::size_t d = r.dim();
  for (const auto& v : digits)
    require(v.size() == d, ErrorKind::DimensionMismatch, "digit dimension does not match matrix");
  const ResidueReducer reduce(r);
  std::set<IntVec> seen;
  for (const auto& v : digits)
    if (!seen.insert(reduce(v)).second) return false;
  return true;
}

bool residues_distinct(const IntMatrix& r, const DigitSet& digits) {
  return residues_distinct(r, std::span<const IntVec>(digits.vectors()));
}

// ---------------------------------------------------------------- Lattice

namespace {

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

void axpy(std::vector<Integer>& y, const Integer& f, const std::vector<Integer>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= f * x[i];
}

}  // namespace

Lattice Lattice::from_generators(std::size_t dim, std::span<const RatVec> generators) {
  Integer denom = 1;
  for (const auto& g : generators) {
    require(g.size() == dim, ErrorKind::DimensionMismatch, "generator has wrong dimension");
    for (const auto& x : g) mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), x.get_den_mpz_t());
  }
  std::vector<std::vector<Integer>> cols;
  for (const auto& g : generators) {
    std::vector<Integer> col(dim);
    bool nonzero = false;
    for (std::size_t i = 0; i < dim; ++i) {
      const Rational scaled = g[i] * Rational(denom);
      col[i] = scaled.get_num();
      nonzero = nonzero || col[i] != 0;
    }
    if (nonzero) cols.push_back(std::move(col));
  }

  std::vector<std::size_t> pivots;
  std::size_t c = 0;
  for (std::size_t row = 0; row < dim && c < cols.size(); ++row) {
    // Euclid on row `row` across columns c.. until one nonzero entry remains.
    for (;;) {
      std::size_t best = cols.size();
      for (std::size_t j = c; j < cols.size(); ++j)
        if (cols[j][row] != 0 && (best == cols.size() || abs(cols[j][row]) < abs(cols[best][row])))
          best = j;
      if (best == cols.size()) break;
      std::swap(cols[c], cols[best]);
      bool done = true;
      for (std::size_t j = c + 1; j < cols.size(); ++j) {
        if (cols[j][row] == 0) continue;
        axpy(cols[j], floor_div(cols[j][row], cols[c][row]), cols[c]);
        if (cols[j][row] != 0) done = false;
      }
      if (done) break;
    }
    if (cols[c][row] == 0) continue;
    if (cols[c][row] < 0)
      for (auto& x : cols[c]) x = -x;
    for (std::size_t j = 0; j < c; ++j) axpy(cols[j], floor_div(cols[j][row], cols[c][row]), cols[c]);
    pivots.push_back(row);
    ++c;
  }

  Lattice out;
  out.dim_ = dim;
  out.pivots_ = std::move(pivots);
  out.basis_ = RatMatrix(dim, out.pivots_.size());
  for (std::size_t j = 0; j < out.pivots_.size(); ++j)
    for (std::size_t i = 0; i < dim; ++i) out.basis_(i, j) = Rational(cols[j][i], denom);
  for (std::size_t j = 0; j < out.pivots_.size(); ++j)
    for (std::size_t i = 0; i < dim; ++i) out.basis_(i, j).canonicalize();
  return out;
}

Lattice Lattice::from_generators(std::size_t dim, std::span<const IntVec> generators) {
  std::vector<RatVec> gens;
  gens.reserve(generators.size());
  for (const auto& g : generators) gens.push_back(to_rational(g));
  return from_generators(dim, std::span<const RatVec>(gens));
}

Lattice Lattice::integer_lattice(std::size_t dim) {
  std::vector<IntVec> gens;
  for (std::size_t i = 0; i < dim; ++i) {
    IntVec e(dim, 0);
    e[i] = 1;
    gens.push_back(e);
  }
  return from_generators(dim, std::span<const IntVec>(gens));
}

bool Lattice::contains(const RatVec& v) const {
  require(v.size() == dim_, ErrorKind::DimensionMismatch, "vector has wrong dimension");
  RatVec rest = v;
  std::size_t k = 0;
  for (std::size_t row = 0; row < dim_; ++row) {
    if (k < pivots_.size() && pivots_[k] == row) {
      const Rational coeff = rest[row] / basis_(row, k);
      if (coeff.get_den() != 1) return false;
      for (std::size_t i = row; i < dim_; ++i) rest[i] -= coeff * basis_(i, k);
      ++k;
    } else if (rest[row] != 0) {
      return false;
    }
  }
  return true;
}

Rational Lattice::covolume() const {
  require(full_rank(), ErrorKind::Precondition, "covolume of a lattice without full rank");
  Rational v = 1;
  for (std::size_t i = 0; i < dim_; ++i) v *= basis_(i, i);
  return v;
}

bool Lattice::is_invariant_under(const IntMatrix& r) const {
  const RatMatrix rr(r);
  for (std::size_t j = 0; j < rank(); ++j)
    if (!contains(rr * basis_.column(j))) return false;
  return true;
}

bool Lattice::is_integer_lattice() const { return basis_.is_integral(); }

Lattice smallest_invariant_lattice(const IntMatrix& r, std::span<const IntVec> generators) {
  const std::size_t d = r.dim();
  std::vector<IntVec> gens(generators.begin(), generators.end());
  std::vector<IntVec> layer = gens;
  for (std::size_t k = 1; k < d; ++k) {
    for (auto& v : layer) v = r * v;
    gens.insert(gens.end(), layer.begin(), layer.end());
  }
  Lattice out = Lattice::from_generators(d, std::span<const IntVec>(gens));
  require(out.is_invariant_under(r), ErrorKind::ConstructionFailed,
          "internal: generated lattice is not R-invariant");
  return out;
}

Lattice smallest_invariant_lattice(const IntMatrix& r, const DigitSet& digits) {
  return smallest_invariant_lattice(r, std::span<const IntVec>(digits.vectors()));
}

Lattice dual_lattice(const Lattice& lattice) {
  require(lattice.full_rank(), ErrorKind::Precondition, "dual of a lattice without full rank");
  const RatMatrix dual = inverse(lattice.basis()).transpose();
  std::vector<RatVec> gens;
  for (std::size_t j = 0; j < dual.cols(); ++j) gens.push_back(dual.column(j));
  return Lattice::from_generators(lattice.dim(), std::span<const RatVec>(gens));
}

std::vector<IntVec> complete_residues(const IntMatrix& r) {
  const std::size_t d = r.dim();
  require(determinant(r) != 0, ErrorKind::Precondition, "residues modulo a singular matrix");
  std::vector<IntVec> cols;
  for (std::size_t j = 0; j < d; ++j) {
    IntVec col(d);
    for (std::size_t i = 0; i < d; ++i) col[i] = r(i, j);
    cols.push_back(std::move(col));
  }
  const Lattice image = Lattice::from_generators(d, std::span<const IntVec>(cols));
  // The HNF is lower triangular with diagonal h_ii; the box 0 <= x_i < h_ii
  // holds exactly one representative per coset.
  std::vector<std::int64_t> extent(d);
  for (std::size_t i = 0; i < d; ++i) extent[i] = to_int64(image.basis()(i, i).get_num());

  const ResidueReducer reduce(r);
  std::vector<IntVec> out;
  IntVec x(d, 0);
  for (;;) {
    out.push_back(reduce(x));
    std::size_t i = 0;
    while (i < d && ++x[i] == extent[i]) x[i++] = 0;
    if (i == d) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fspec
