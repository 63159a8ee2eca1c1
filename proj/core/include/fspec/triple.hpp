#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fspec/fourier.hpp"
#include "fspec/latmath.hpp"
#include "fspec/types.hpp"

namespace fspec {

/// Expansive R with a simple digit set B; generates mu(R, B).
class AffinePair {
 public:
  /// Validates expansivity and that B is a simple digit set for R.
  AffinePair(IntMatrix r, DigitSet b);

  const IntMatrix& r() const noexcept { return r_; }
  const DigitSet& b() const noexcept { return b_; }
  std::size_t dim() const noexcept { return r_.rows(); }

 private:
  IntMatrix r_;
  DigitSet b_;
};

struct TripleReport {
  bool hadamard = false;
  bool sizes_match = false;
  bool b_simple = false;
  bool l_simple = false;
  double unitarity_defect = 0.0;
  /// Every off-diagonal Gram entry was shown to vanish exactly.
  bool exact_orthogonality = false;
  std::vector<std::string> defects;
};

inline constexpr double kTripleTolerance = 1e-10;

/// Checks #B = #L, both simple-digit conditions (exactly), and unitarity of
/// H = (1/sqrt N)[e^{2 pi i <R^{-1} b, l>}]. Gram entries depend only on
/// b - b', so they are evaluated once per distinct difference class.
TripleReport verify_triple(const IntMatrix& r, const DigitSet& b, const DigitSet& l,
                           double tol = kTripleTolerance);

class HadamardTriple {
 public:
  /// Throws Precondition listing the defects when verification fails.
  HadamardTriple(IntMatrix r, DigitSet b, DigitSet l, double tol = kTripleTolerance);

  const AffinePair& pair() const noexcept { return pair_; }
  const IntMatrix& r() const noexcept { return pair_.r(); }
  const DigitSet& b() const noexcept { return pair_.b(); }
  const DigitSet& l() const noexcept { return l_; }
  std::size_t n() const noexcept { return l_.size(); }
  std::size_t dim() const noexcept { return pair_.dim(); }
  const TripleReport& report() const noexcept { return report_; }

  /// Hadamard matrix H with rows L and columns B.
  FourierMatrix matrix() const;

 private:
  friend HadamardTriple product_triple(const HadamardTriple&, int, std::size_t);
  struct Trusted {};
  HadamardTriple(Trusted, AffinePair pair, DigitSet l, TripleReport report);

  AffinePair pair_;
  DigitSet l_;
  TripleReport report_;
};

/// Digit expansion D + M D + ... + M^{n-1} D, ordered lexicographically in
/// the digit word (d_0, ..., d_{n-1}) with d_0 varying slowest.
std::vector<IntVec> expand_digits(const IntMatrix& m, const std::vector<IntVec>& digits, int n,
                                  std::size_t cap);

inline constexpr std::size_t kDefaultProductCap = std::size_t{1} << 22;

/// (R^n, B_n, Lambda_n). Unitarity of H_n is checked through the factorization
/// sum_{l in Lambda_n} e^{2 pi i <x,l>} = prod_k sum_{l in L} e^{2 pi i <R^k x, l>}.
HadamardTriple product_triple(const HadamardTriple& t, int n, std::size_t cap = kDefaultProductCap);

/// (M R M^{-1}, M B, (M^T)^{-1} L) for unimodular M.
HadamardTriple conjugate_triple(const HadamardTriple& t, const IntMatrix& m);

struct QuasiProductWitness {
  IntMatrix m;                                  ///< unimodular conjugator
  std::size_t split = 0;                        ///< r
  IntMatrix r1, r2, c;                          ///< blocks of M R M^{-1}
  IntMatrix q;                                  ///< (d-r) x (d-r), |det Q| >= 2
  std::vector<IntVec> u;                        ///< N1 vectors in Z^r
  std::vector<IntVec> v;                        ///< N1 vectors in Z^{d-r}
  std::vector<std::vector<IntVec>> c_digits;    ///< c_{i,j}, N1 x |det R2|
};

struct QuasiProductReport {
  bool ok = false;
  std::vector<std::string> failures;
};

QuasiProductReport verify_quasi_product(const HadamardTriple& t, const QuasiProductWitness& w);

struct QuasiProductSearch {
  std::optional<QuasiProductWitness> witness;
  std::size_t candidates_examined = 0;
  bool cap_reached = false;
};

/// Scans unimodular M with entries in [-entry_bound, entry_bound] (identity
/// first) and every split r; Q is taken as the smallest R2-invariant lattice
/// containing the in-fiber digit differences.
QuasiProductSearch search_quasi_product(const HadamardTriple& t, int entry_bound = 2,
                                        std::size_t candidate_cap = 1'000'000);

}  // namespace fspec
