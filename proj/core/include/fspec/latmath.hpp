#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fspec/types.hpp"

namespace fspec {

enum class Expansivity { Expansive, NotExpansive, Indeterminate };

const char* to_string(Expansivity e) noexcept;

/// Coefficients c_0..c_d of det(zI - M), lowest degree first; c_d = 1.
std::vector<Integer> characteristic_polynomial(const IntMatrix& m);

/// Exact verdict: the characteristic polynomial is tested with a Schur-Cohn
/// recursion on its reversal, which has all roots strictly inside the unit
/// disk exactly when every eigenvalue of M has modulus > 1.
Expansivity expansivity(const IntMatrix& m);

/// Floating-point verdict from the eigenvalues. Indeterminate when some
/// modulus lies within `margin` of 1.
Expansivity numeric_expansivity(const IntMatrix& m, double margin = 1e-9);

bool is_expansive(const IntMatrix& m);

Integer determinant(const IntMatrix& m);
RatMatrix inverse(const RatMatrix& m);
RatMatrix inverse(const IntMatrix& m);

/// Canonical residue of v modulo R Z^d: the unique representative of v + R Z^d
/// of the form R t with t in [0,1)^d.
IntVec reduce_mod(const IntMatrix& r, const IntVec& v);
bool congruent(const IntMatrix& r, const IntVec& a, const IntVec& b);

/// True iff distinct vectors are pairwise incongruent modulo R Z^d.
bool residues_distinct(const IntMatrix& r, std::span<const IntVec> digits);
bool residues_distinct(const IntMatrix& r, const DigitSet& digits);

/// Column Hermite normal form of the lattice spanned by `generators`
/// (columns). The basis is lower echelon: column k has its pivot in row
/// pivot_rows[k], the pivot is positive, and entries of earlier columns in a
/// pivot row are reduced into [0, pivot).
class Lattice {
 public:
  Lattice() = default;
  static Lattice from_generators(std::size_t dim, std::span<const RatVec> generators);
  static Lattice from_generators(std::size_t dim, std::span<const IntVec> generators);
  static Lattice integer_lattice(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return basis_.cols(); }
  bool full_rank() const noexcept { return rank() == dim_; }
  const RatMatrix& basis() const noexcept { return basis_; }
  const std::vector<std::size_t>& pivot_rows() const noexcept { return pivots_; }

  /// Exact membership test.
  bool contains(const RatVec& v) const;
  bool contains(const IntVec& v) const { return contains(to_rational(v)); }
  /// |det| of the basis; only for full-rank lattices.
  Rational covolume() const;
  bool is_invariant_under(const IntMatrix& r) const;
  bool is_integer_lattice() const;

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.dim_ == b.dim_ && a.basis_ == b.basis_;
  }

 private:
  std::size_t dim_ = 0;
  RatMatrix basis_;
  std::vector<std::size_t> pivots_;
};

/// Z-span of B, RB, ..., R^{d-1}B in Hermite normal form.
Lattice smallest_invariant_lattice(const IntMatrix& r, const DigitSet& digits);
Lattice smallest_invariant_lattice(const IntMatrix& r, std::span<const IntVec> generators);

/// {x : <x, v> in Z for all v in L}; requires a full-rank lattice.
Lattice dual_lattice(const Lattice& lattice);

/// |det R| pairwise incongruent representatives modulo R Z^d, each reduced to
/// the fundamental parallelepiped R [0,1)^d, sorted lexicographically.
std::vector<IntVec> complete_residues(const IntMatrix& r);

}  // namespace fspec
