#include "fspec/triple.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "fspec/error.hpp"

namespace fspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct IntVecHash {
  std::size_t operator()(const IntVec& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
    return h;
  }
};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : "; ") + s;
  return out;
}

// D * R^{-j} as an integer matrix with D = det(R)^j, when it fits in 64 bits.
struct IntegerInverse {
  IntMatrix scaled;
  std::int64_t denom = 1;
};

std::optional<IntegerInverse> integer_inverse(const RatMatrix& inv) {
  Integer denom = 1;
  for (std::size_t i = 0; i < inv.rows(); ++i)
    for (std::size_t j = 0; j < inv.cols(); ++j)
      mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), inv(i, j).get_den_mpz_t());
  if (!denom.fits_slong_p() || denom > (Integer(1) << 40)) return std::nullopt;
  IntMatrix scaled(inv.rows(), inv.cols());
  for (std::size_t i = 0; i < inv.rows(); ++i)
    for (std::size_t j = 0; j < inv.cols(); ++j) {
      const Integer v = Rational(inv(i, j) * denom).get_num();
      if (!v.fits_slong_p() || abs(v) > (Integer(1) << 40)) return std::nullopt;
      scaled(i, j) = v.get_si();
    }
  return IntegerInverse{std::move(scaled), denom.get_si()};
}

// (1/#L) sum_l e^{2 pi i <x, l>} with x = scaled * delta / denom.
Complex mask_at_scaled(const IntegerInverse& inv, const IntVec& delta, const DigitSet& l) {
  const std::size_t d = delta.size();
  std::vector<__int128> x(d, 0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      x[i] += static_cast<__int128>(inv.scaled(i, k)) * delta[k];
  for (auto& xi : x) {
    xi %= inv.denom;
  }
  Complex sum = 0.0;
  for (const auto& ell : l) {
    __int128 phase = 0;
    for (std::size_t i = 0; i < d; ++i) phase += x[i] * ell[i];
    phase %= inv.denom;
    if (phase < 0) phase += inv.denom;
    const double f = static_cast<double>(static_cast<std::int64_t>(phase)) / static_cast<double>(inv.denom);
    sum += std::polar(1.0, kTwoPi * f);
  }
  return sum / static_cast<double>(l.size());
}

Complex mask_at_rational(const RatVec& x, const DigitSet& l) {
  Complex sum = 0.0;
  for (const auto& ell : l) sum += unit_phase(dot(x, ell));
  return sum / static_cast<double>(l.size());
}

bool exactly_vanishing(const RatVec& x, const DigitSet& l) {
  std::vector<Rational> phases;
  for (const auto& ell : l) phases.push_back(dot(x, ell));
  return root_of_unity_sum_vanishes(phases) == Vanishing::Zero;
}

void check_dims(const IntMatrix& r, const DigitSet& b, const DigitSet& l) {
  require(r.square(), ErrorKind::DimensionMismatch, "R must be square");
  require(b.dim() == r.rows() && l.dim() == r.rows(), ErrorKind::DimensionMismatch,
          "R, B and L dimensions disagree");
}

}  // namespace

AffinePair::AffinePair(IntMatrix r, DigitSet b) : r_(std::move(r)), b_(std::move(b)) {
  require(r_.square(), ErrorKind::DimensionMismatch, "R must be square");
  require(b_.dim() == r_.rows(), ErrorKind::DimensionMismatch, "R and B dimensions disagree");
  require(is_expansive(r_), ErrorKind::Precondition, "R is not expansive");
  require(residues_distinct(r_, b_), ErrorKind::Precondition,
          "B is not a simple digit set (two digits are congruent mod R Z^d)");
}

TripleReport verify_triple(const IntMatrix& r, const DigitSet& b, const DigitSet& l, double tol) {
  check_dims(r, b, l);
  TripleReport rep;
  rep.sizes_match = b.size() == l.size();
  if (!rep.sizes_match)
    rep.defects.push_back("#B = " + std::to_string(b.size()) + " differs from #L = " +
                          std::to_string(l.size()));
  if (!is_expansive(r)) rep.defects.push_back("R is not expansive");
  rep.b_simple = residues_distinct(r, b);
  if (!rep.b_simple) rep.defects.push_back("B has digits congruent mod R Z^d");
  rep.l_simple = residues_distinct(r.transpose(), l);
  if (!rep.l_simple) rep.defects.push_back("L has digits congruent mod R^T Z^d");

  if (rep.sizes_match && determinant(r) != 0) {
    const RatMatrix inv = inverse(r);
    // Gram entries depend on R^{-1}(b - b') mod Z^d only.
    std::set<RatVec> classes;
    for (const auto& bi : b)
      for (const auto& bj : b) {
        if (bi == bj) continue;
        RatVec x = inv * sub(bi, bj);
        for (auto& xi : x) xi = frac(xi);
        classes.insert(std::move(x));
      }
    double defect = 0.0;
    bool exact = true;
    const bool try_exact = classes.size() * l.size() <= 2'000'000;
    for (const auto& x : classes) {
      const double g = std::abs(mask_at_rational(x, l));
      defect = std::max(defect, g);
      if (exact && try_exact) exact = exactly_vanishing(x, l);
    }
    rep.unitarity_defect = defect;
    rep.exact_orthogonality = try_exact && exact;
    if (!(defect < tol))
      rep.defects.push_back("H is not unitary (defect " + std::to_string(defect) + ")");
  } else if (rep.sizes_match) {
    rep.defects.push_back("R is singular");
  }
  rep.hadamard = rep.defects.empty();
  return rep;
}

HadamardTriple::HadamardTriple(IntMatrix r, DigitSet b, DigitSet l, double tol)
    : pair_([&] {
        check_dims(r, b, l);
        const TripleReport rep = verify_triple(r, b, l, tol);
        require(rep.hadamard, ErrorKind::Precondition, "not a Hadamard triple: " + join(rep.defects));
        return AffinePair(r, b);
      }()),
      l_(std::move(l)),
      report_(verify_triple(pair_.r(), pair_.b(), l_, tol)) {}

HadamardTriple::HadamardTriple(Trusted, AffinePair pair, DigitSet l, TripleReport report)
    : pair_(std::move(pair)), l_(std::move(l)), report_(std::move(report)) {}

FourierMatrix HadamardTriple::matrix() const {
  return build_fourier_matrix(inverse(r()), std::span<const IntVec>(b().vectors()),
                              std::span<const IntVec>(l().vectors()));
}

std::vector<IntVec> expand_digits(const IntMatrix& m, const std::vector<IntVec>& digits, int n,
                                  std::size_t cap) {
  require(n >= 1, ErrorKind::InvalidArgument, "expansion level must be >= 1");
  double count = 1.0;
  for (int k = 0; k < n; ++k) count *= static_cast<double>(digits.size());
  require(count <= static_cast<double>(cap), ErrorKind::CapExceeded,
          "digit expansion would have " + std::to_string(static_cast<long double>(count)) +
              " elements (cap " + std::to_string(cap) + ")");
  std::vector<IntVec> level = digits;
  for (int k = 1; k < n; ++k) {
    std::vector<IntVec> next;
    next.reserve(level.size() * digits.size());
    std::vector<IntVec> shifted;
    shifted.reserve(level.size());
    for (const auto& w : level) shifted.push_back(m * w);
    for (const auto& d0 : digits)
      for (const auto& w : shifted) next.push_back(add(d0, w));
    level = std::move(next);
  }
  return level;
}

HadamardTriple product_triple(const HadamardTriple& t, int n, std::size_t cap) {
  require(n >= 1, ErrorKind::InvalidArgument, "product level must be >= 1");
  if (n == 1) return t;
  const std::size_t d = t.dim();
  const IntMatrix rn = t.r().pow(static_cast<unsigned>(n));
  auto bn = expand_digits(t.r(), t.b().vectors(), n, cap);
  auto ln = expand_digits(t.r().transpose(), t.l().vectors(), n, cap);

  TripleReport rep;
  rep.sizes_match = true;
  const auto distinct = [](const std::vector<IntVec>& v) {
    return std::unordered_set<IntVec, IntVecHash>(v.begin(), v.end()).size() == v.size();
  };
  if (!distinct(bn)) rep.defects.push_back("B_n has repeated digits");
  if (!distinct(ln)) rep.defects.push_back("Lambda_n has repeated frequencies");
  require(rep.defects.empty(), ErrorKind::Precondition, join(rep.defects));

  rep.b_simple = residues_distinct(rn, std::span<const IntVec>(bn));
  if (!rep.b_simple) rep.defects.push_back("B_n has digits congruent mod R^n Z^d");
  rep.l_simple = residues_distinct(rn.transpose(), std::span<const IntVec>(ln));
  if (!rep.l_simple) rep.defects.push_back("Lambda_n has frequencies congruent mod (R^T)^n Z^d");

  // Distinct differences of B_n are the level-n expansions of B - B.
  std::vector<IntVec> base_diffs;
  {
    std::set<IntVec> seen;
    for (const auto& x : t.b())
      for (const auto& y : t.b()) seen.insert(sub(x, y));
    base_diffs.assign(seen.begin(), seen.end());
  }
  std::vector<IntVec> diffs;
  {
    const auto all = expand_digits(t.r(), base_diffs, n, std::max<std::size_t>(cap, 1) * 64);
    std::unordered_set<IntVec, IntVecHash> seen(all.begin(), all.end());
    diffs.assign(seen.begin(), seen.end());
    std::sort(diffs.begin(), diffs.end());
  }

  const RatMatrix inv = inverse(t.r());
  std::vector<RatMatrix> inv_powers;
  std::vector<std::optional<IntegerInverse>> int_powers;
  {
    RatMatrix p = RatMatrix::identity(d);
    for (int j = 1; j <= n; ++j) {
      p = p * inv;
      inv_powers.push_back(p);
      int_powers.push_back(integer_inverse(p));
    }
  }
  const bool try_exact = diffs.size() <= 20000;
  bool exact = try_exact;
  double defect = 0.0;
  for (const auto& delta : diffs) {
    if (is_zero(delta)) continue;
    Complex gram = 1.0;
    bool certified_zero = false;
    for (int j = 1; j <= n; ++j) {
      const auto& ip = int_powers[static_cast<std::size_t>(j - 1)];
      const Complex factor = ip ? mask_at_scaled(*ip, delta, t.l())
                                : mask_at_rational(inv_powers[static_cast<std::size_t>(j - 1)] * delta, t.l());
      gram *= factor;
      if (try_exact && !certified_zero && std::abs(factor) < 1e-8)
        certified_zero = exactly_vanishing(inv_powers[static_cast<std::size_t>(j - 1)] * delta, t.l());
    }
    defect = std::max(defect, std::abs(gram));
    exact = exact && certified_zero;
  }
  rep.unitarity_defect = defect;
  rep.exact_orthogonality = exact;
  if (!(defect < kTripleTolerance))
    rep.defects.push_back("H_n is not unitary (defect " + std::to_string(defect) + ")");
  rep.hadamard = rep.defects.empty();
  require(rep.hadamard, ErrorKind::Precondition, "level-n triple failed verification: " + join(rep.defects));

  return HadamardTriple(HadamardTriple::Trusted{}, AffinePair(rn, DigitSet(d, std::move(bn))),
                        DigitSet(d, std::move(ln)), std::move(rep));
}

HadamardTriple conjugate_triple(const HadamardTriple& t, const IntMatrix& m) {
  require(m.square() && m.rows() == t.dim(), ErrorKind::DimensionMismatch,
          "conjugating matrix has wrong shape");
  const Integer det = determinant(m);
  require(abs(det) == 1, ErrorKind::Precondition, "conjugating matrix is not unimodular");
  const IntMatrix m_inv = inverse(m).to_integer();
  const IntMatrix r = m * t.r() * m_inv;
  const IntMatrix mt_inv = m_inv.transpose();
  std::vector<IntVec> b, l;
  for (const auto& x : t.b()) b.push_back(m * x);
  for (const auto& x : t.l()) l.push_back(mt_inv * x);
  return HadamardTriple(r, DigitSet(t.dim(), std::move(b)), DigitSet(t.dim(), std::move(l)));
}

// ---------------------------------------------------------------- quasi-product

QuasiProductReport verify_quasi_product(const HadamardTriple& t, const QuasiProductWitness& w) {
  const std::size_t d = t.dim();
  require(d >= 2, ErrorKind::Precondition, "a quasi-product witness requires dimension d >= 2");
  QuasiProductReport rep;
  auto failure = [&](const std::string& s) { rep.failures.push_back(s); };
  const std::size_t r = w.split;
  if (r < 1 || r >= d) {
    failure("split r must satisfy 1 <= r < d");
    return rep;
  }
  const std::size_t s = d - r;
  if (!(w.m.rows() == d && w.m.cols() == d)) failure("M must be d x d");
  if (!(w.r1.rows() == r && w.r1.cols() == r)) failure("R1 must be r x r");
  if (!(w.r2.rows() == s && w.r2.cols() == s)) failure("R2 must be (d-r) x (d-r)");
  if (!(w.c.rows() == s && w.c.cols() == r)) failure("C must be (d-r) x r");
  if (!(w.q.rows() == s && w.q.cols() == s)) failure("Q must be (d-r) x (d-r)");
  if (!rep.failures.empty()) return rep;

  if (abs(determinant(w.m)) != 1) {
    failure("M is not unimodular");
    return rep;
  }
  const IntMatrix conj = w.m * t.r() * inverse(w.m).to_integer();
  // (a) block lower-triangular form.
  if (!(conj.block(0, r, r, s) == IntMatrix(r, s))) failure("M R M^{-1} has a nonzero upper-right block");
  if (!(conj.block(0, 0, r, r) == w.r1)) failure("R1 does not match M R M^{-1}");
  if (!(conj.block(r, r, s, s) == w.r2)) failure("R2 does not match M R M^{-1}");
  if (!(conj.block(r, 0, s, r) == w.c)) failure("C does not match M R M^{-1}");
  if (!is_expansive(w.r1)) failure("R1 is not expansive");
  if (!is_expansive(w.r2)) failure("R2 is not expansive");

  // (d) Q conditions.
  const Integer det_q = determinant(w.q);
  if (abs(det_q) < 2) failure("|det Q| < 2");
  if (det_q != 0) {
    const RatMatrix r2_tilde = inverse(w.q) * RatMatrix(w.r2) * RatMatrix(w.q);
    if (!r2_tilde.is_integral()) failure("R2 Q = Q R2~ has no integer solution R2~");
  }

  const Integer det_r2 = abs(determinant(w.r2));
  const std::size_t n2 = static_cast<std::size_t>(det_r2.get_ui());
  const std::size_t n = t.n();
  if (n % n2 != 0) failure("N is not divisible by |det R2|");
  const std::size_t n1 = n / n2;
  if (w.u.size() != n1) failure("expected N1 = " + std::to_string(n1) + " vectors u_i");
  if (w.v.size() != w.u.size()) failure("u and v counts differ");
  if (w.c_digits.size() != w.u.size()) failure("c_{i,j} rows do not match u");
  if (!rep.failures.empty()) return rep;

  // (b) M B decomposes as {(u_i, v_i + Q c_{i,j})}.
  std::set<IntVec> built;
  for (std::size_t i = 0; i < w.u.size(); ++i) {
    if (w.u[i].size() != r || w.v[i].size() != s) {
      failure("u_" + std::to_string(i) + " or v_" + std::to_string(i) + " has wrong length");
      continue;
    }
    if (w.c_digits[i].size() != n2)
      failure("row " + std::to_string(i) + " has " + std::to_string(w.c_digits[i].size()) +
              " digits c_{i,j}, expected |det R2| = " + std::to_string(n2));
    std::vector<IntVec> qc;
    for (const auto& cij : w.c_digits[i]) {
      if (cij.size() != s) {
        failure("c_{i,j} has wrong length");
        continue;
      }
      qc.push_back(w.q * cij);
      IntVec full = w.u[i];
      const IntVec tail = add(w.v[i], qc.back());
      full.insert(full.end(), tail.begin(), tail.end());
      if (!built.insert(full).second) failure("digit " + format_vector(full) + " produced twice");
    }
    // (c) complete residues modulo R2 Z^{d-r}.
    if (qc.size() != n2 || !residues_distinct(w.r2, std::span<const IntVec>(qc)))
      failure("{Q c_{" + std::to_string(i) + ",j}} is not a complete residue system mod R2");
  }
  std::set<IntVec> mb;
  for (const auto& b : t.b()) mb.insert(w.m * b);
  if (built != mb) failure("M B does not equal {(u_i, v_i + Q c_{i,j})}");

  rep.ok = rep.failures.empty();
  return rep;
}

namespace {

// Calls visit(M) for unimodular M with entries in [-bound, bound], identity
// first. Returns false if visit asked to stop.
template <typename Visit>
bool for_each_unimodular(std::size_t d, int bound, Visit&& visit) {
  if (!visit(IntMatrix::identity(d))) return false;
  const std::size_t cells = d * d;
  std::vector<std::int64_t> entries(cells, -bound);
  for (;;) {
    IntMatrix m(d, d, entries);
    if (!(m == IntMatrix::identity(d)) && abs(determinant(m)) == 1)
      if (!visit(m)) return false;
    std::size_t i = cells;
    while (i > 0) {
      --i;
      if (entries[i] < bound) {
        ++entries[i];
        break;
      }
      entries[i] = -bound;
      if (i == 0) return true;
    }
  }
}

std::optional<QuasiProductWitness> witness_for(const HadamardTriple& t, const IntMatrix& m,
                                               std::size_t r) {
  const std::size_t d = t.dim();
  const std::size_t s = d - r;
  const IntMatrix conj = m * t.r() * inverse(m).to_integer();
  if (!(conj.block(0, r, r, s) == IntMatrix(r, s))) return std::nullopt;
  QuasiProductWitness w;
  w.m = m;
  w.split = r;
  w.r1 = conj.block(0, 0, r, r);
  w.r2 = conj.block(r, r, s, s);
  w.c = conj.block(r, 0, s, r);
  const std::size_t n2 = Integer(abs(determinant(w.r2))).get_ui();
  if (n2 == 0 || t.n() % n2 != 0) return std::nullopt;

  std::map<IntVec, std::vector<IntVec>> fibers;
  for (const auto& b : t.b()) {
    const IntVec mb = m * b;
    fibers[IntVec(mb.begin(), mb.begin() + static_cast<std::ptrdiff_t>(r))].push_back(
        IntVec(mb.begin() + static_cast<std::ptrdiff_t>(r), mb.end()));
  }
  if (fibers.size() != t.n() / n2) return std::nullopt;
  std::vector<IntVec> diffs;
  for (auto& [u, tails] : fibers) {
    if (tails.size() != n2) return std::nullopt;
    std::sort(tails.begin(), tails.end());
    for (const auto& tail : tails) diffs.push_back(sub(tail, tails.front()));
  }
  const Lattice q_lattice = smallest_invariant_lattice(w.r2, std::span<const IntVec>(diffs));
  if (!q_lattice.full_rank()) return std::nullopt;
  w.q = q_lattice.basis().to_integer();
  if (abs(determinant(w.q)) < 2) return std::nullopt;
  const RatMatrix q_inv = inverse(w.q);
  for (const auto& [u, tails] : fibers) {
    w.u.push_back(u);
    w.v.push_back(tails.front());
    std::vector<IntVec> cs;
    for (const auto& tail : tails) {
      const RatVec c = q_inv * sub(tail, tails.front());
      IntVec ci(s);
      for (std::size_t i = 0; i < s; ++i) ci[i] = to_int64(c[i].get_num());
      cs.push_back(std::move(ci));
    }
    w.c_digits.push_back(std::move(cs));
  }
  if (!verify_quasi_product(t, w).ok) return std::nullopt;
  return w;
}

}  // namespace

QuasiProductSearch search_quasi_product(const HadamardTriple& t, int entry_bound,
                                        std::size_t candidate_cap) {
  const std::size_t d = t.dim();
  require(d >= 2, ErrorKind::Precondition, "quasi-product search requires dimension d >= 2");
  require(entry_bound >= 1, ErrorKind::InvalidArgument, "entry bound must be >= 1");
  QuasiProductSearch out;
  for_each_unimodular(d, entry_bound, [&](const IntMatrix& m) {
    if (out.candidates_examined >= candidate_cap) {
      out.cap_reached = true;
      return false;
    }
    ++out.candidates_examined;
    for (std::size_t r = 1; r < d; ++r) {
      if (auto w = witness_for(t, m, r)) {
        out.witness = std::move(w);
        return false;
      }
    }
    return true;
  });
  return out;
}

}  // namespace fspec
