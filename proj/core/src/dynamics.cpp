#include "fspec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "fspec/error.hpp"

namespace fspec {

bool Box::contains(const RatVec& x) const {
  if (x.size() != axes.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < axes[i].lo || x[i] > axes[i].hi) return false;
  return true;
}

bool Box::contains(const Box& other) const {
  if (other.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i)
    if (other.axes[i].lo < axes[i].lo || other.axes[i].hi > axes[i].hi) return false;
  return true;
}

Box Box::image(const RatMatrix& a, const RatVec& shift) const {
  Box out;
  out.axes.resize(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Rational lo = shift[i], hi = shift[i];
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Rational& c = a(i, j);
      if (sgn(c) >= 0) {
        lo += c * axes[j].lo;
        hi += c * axes[j].hi;
      } else {
        lo += c * axes[j].hi;
        hi += c * axes[j].lo;
      }
    }
    out.axes[i] = {lo, hi};
  }
  return out;
}

namespace {

Box hull(const Box& a, const Box& b) {
  Box out = a;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    out.axes[i].lo = std::min(a.axes[i].lo, b.axes[i].lo);
    out.axes[i].hi = std::max(a.axes[i].hi, b.axes[i].hi);
  }
  return out;
}

bool invariant(const Box& box, const RatMatrix& a, const DigitSet& digits) {
  for (const auto& l : digits)
    if (!box.contains(box.image(a, a * l))) return false;
  return true;
}

// Solves (I - [[P, N], [N, P]]) (lo, hi) = (cmin, cmax) exactly, where
// P and N are the positive and negative parts of A.
std::optional<Box> interval_fixed_point(const RatMatrix& a, const RatVec& cmin, const RatVec& cmax) {
  const std::size_t d = a.rows();
  RatMatrix sys(2 * d, 2 * d);
  RatVec rhs(2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const Rational p = sgn(a(i, j)) > 0 ? a(i, j) : Rational(0);
      const Rational n = sgn(a(i, j)) < 0 ? a(i, j) : Rational(0);
      sys(i, j) = (i == j ? Rational(1) : Rational(0)) - p;
      sys(i, d + j) = -n;
      sys(d + i, j) = -n;
      sys(d + i, d + j) = (i == j ? Rational(1) : Rational(0)) - p;
    }
    rhs[i] = cmin[i];
    rhs[d + i] = cmax[i];
  }
  RatMatrix inv;
  try {
    inv = inverse(sys);
  } catch (const Error&) {
    return std::nullopt;
  }
  const RatVec z = inv * rhs;
  Box box;
  for (std::size_t i = 0; i < d; ++i) {
    if (z[i] > z[d + i]) return std::nullopt;
    box.axes.push_back({z[i], z[d + i]});
  }
  return box;
}

Rational round_down(const Rational& x, const Integer& scale) {
  Integer q;
  const Rational y = x * scale;
  mpz_fdiv_q(q.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  return Rational(q, scale);
}

Rational round_up(const Rational& x, const Integer& scale) {
  Integer q;
  const Rational y = x * scale;
  mpz_cdiv_q(q.get_mpz_t(), y.get_num_mpz_t(), y.get_den_mpz_t());
  return Rational(q, scale);
}

double row_sum_norm(const RatMatrix& a) {
  double best = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j).get_d());
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

Box attractor_box(const IntMatrix& m, const DigitSet& digits) {
  require(m.square() && digits.dim() == m.rows(), ErrorKind::DimensionMismatch,
          "matrix and digit dimensions disagree");
  require(is_expansive(m), ErrorKind::Precondition, "matrix is not expansive");
  const std::size_t d = m.rows();
  const RatMatrix a = inverse(m);

  // Smallest power whose absolute row sums contract; the interval hull map
  // of that power is then a contraction with an exact fixed point.
  int p = 1;
  RatMatrix ap = a;
  while (row_sum_norm(ap) >= 1.0) {
    require(p < 64, ErrorKind::Precondition, "no contracting power of the inverse matrix found");
    ap = ap * a;
    ++p;
  }
  const auto offsets = expand_digits(m, digits.vectors(), p, std::size_t{1} << 20);
  RatVec cmin(d), cmax(d);
  bool first = true;
  for (const auto& off : offsets) {
    const RatVec v = ap * off;
    for (std::size_t i = 0; i < d; ++i) {
      if (first || v[i] < cmin[i]) cmin[i] = v[i];
      if (first || v[i] > cmax[i]) cmax[i] = v[i];
    }
    first = false;
  }
  auto fixed = interval_fixed_point(ap, cmin, cmax);
  require(fixed.has_value(), ErrorKind::Precondition, "interval hull iteration has no fixed point");
  Box box = *fixed;
  if (invariant(box, a, digits)) return box;

  // Grow by one-step images until invariant, rounding outward to a dyadic grid.
  const Integer scale = Integer(1) << 40;
  for (auto& ax : box.axes) {
    ax.lo = round_down(ax.lo, scale);
    ax.hi = round_up(ax.hi, scale);
  }
  for (int iter = 0; iter < 100000; ++iter) {
    Box next = box;
    for (const auto& l : digits) next = hull(next, box.image(a, a * l));
    for (auto& ax : next.axes) {
      ax.lo = round_down(ax.lo, scale);
      ax.hi = round_up(ax.hi, scale);
    }
    if (next.contains(box) && box.contains(next)) break;
    box = std::move(next);
  }
  require(invariant(box, a, digits), ErrorKind::Precondition, "attractor box failed to stabilize");
  return box;
}

std::vector<RealVec> attractor_points(const AffinePair& pair, int depth, std::size_t cap) {
  require(depth >= 1, ErrorKind::InvalidArgument, "depth must be >= 1");
  const auto words = expand_digits(pair.r(), pair.b().vectors(), depth, cap);
  const RatMatrix scale = inverse(pair.r()).pow(static_cast<unsigned>(depth));
  const std::vector<double> s = scale.to_real_row_major();
  const std::size_t d = pair.dim();
  std::vector<RealVec> out;
  out.reserve(words.size());
  for (const auto& w : words) {
    // scale = adj / det^depth would be exact; doubles suffice for plotting.
    RealVec x(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) x[i] += s[i * d + j] * static_cast<double>(w[j]);
    out.push_back(std::move(x));
  }
  return out;
}

TransitionSystem::TransitionSystem(HadamardTriple t)
    : t_(std::move(t)), mask_(t_.b()), rt_inv_(inverse(t_.r().transpose())) {}

RatVec TransitionSystem::tau(const IntVec& l, const RatVec& x) const {
  return rt_inv_ * add(x, to_rational(l));
}

namespace {

void enumerate_lattice_box(const RatMatrix& basis, const Box& box, std::size_t row, RatVec& partial,
                           std::vector<RatVec>& out, std::size_t cap, bool& capped) {
  const std::size_t d = basis.rows();
  if (capped) return;
  if (row == d) {
    if (out.size() >= cap) {
      capped = true;
      return;
    }
    out.push_back(partial);
    return;
  }
  // Lower triangular: coordinate `row` is partial[row] + c * pivot.
  const Rational pivot = basis(row, row);
  const Rational base = partial[row];
  Integer lo, hi;
  const Rational a = (box.axes[row].lo - base) / pivot;
  const Rational b = (box.axes[row].hi - base) / pivot;
  mpz_cdiv_q(lo.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
  mpz_fdiv_q(hi.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
  for (Integer c = lo; c <= hi; ++c) {
    RatVec next = partial;
    for (std::size_t i = row; i < d; ++i) next[i] += Rational(c) * basis(i, row);
    enumerate_lattice_box(basis, box, row + 1, next, out, cap, capped);
    if (capped) return;
  }
}

}  // namespace

CycleEnumeration enumerate_extreme_cycles(const TransitionSystem& ts, std::size_t cap) {
  const auto& t = ts.triple();
  const std::size_t d = ts.dim();
  CycleEnumeration out;
  out.box = attractor_box(t.r().transpose(), t.l());
  const Lattice zrb = smallest_invariant_lattice(t.r(), t.b());
  require(zrb.full_rank(), ErrorKind::Precondition,
          "Z[R,B] is not full rank; candidate points are not discrete");
  out.candidate_lattice = dual_lattice(zrb);
  const RatMatrix& basis = out.candidate_lattice.basis();
  for (std::size_t k = 0; k < d; ++k)
    require(out.candidate_lattice.pivot_rows()[k] == k, ErrorKind::Precondition,
            "dual lattice basis is not triangular");

  std::vector<RatVec> candidates;
  RatVec partial(d, Rational(0));
  bool capped = false;
  enumerate_lattice_box(basis, out.box, 0, partial, candidates, cap, capped);
  out.candidates = candidates.size();
  out.complete = !capped;

  // Functional graph of extreme transitions.
  struct Node {
    RatVec x;
    std::optional<std::size_t> next;
    IntVec via;
  };
  std::vector<Node> nodes;
  std::map<RatVec, std::size_t> index;
  std::deque<std::size_t> pending;
  auto intern = [&](const RatVec& x) {
    auto [it, inserted] = index.emplace(x, nodes.size());
    if (inserted) {
      nodes.push_back({x, std::nullopt, {}});
      pending.push_back(it->second);
    }
    return it->second;
  };
  for (const auto& c : candidates)
    if (ts.extreme(c)) intern(c);
  while (!pending.empty()) {
    const std::size_t i = pending.front();
    pending.pop_front();
    std::optional<std::size_t> succ;
    IntVec via;
    for (const auto& l : t.l()) {
      RatVec y = ts.tau(l, nodes[i].x);
      if (!ts.extreme(y)) continue;
      require(!succ.has_value(), ErrorKind::Precondition,
              "two extreme transitions from " + format_vector(nodes[i].x) +
                  "; the transition identity is violated");
      succ = intern(y);
      via = l;
    }
    nodes[i].next = succ;
    nodes[i].via = std::move(via);
  }

  // 0 = unvisited, 1 = on current walk, 2 = done.
  std::vector<int> color(nodes.size(), 0);
  for (std::size_t s = 0; s < nodes.size(); ++s) {
    if (color[s] != 0) continue;
    std::vector<std::size_t> walk;
    std::size_t cur = s;
    while (true) {
      color[cur] = 1;
      walk.push_back(cur);
      if (!nodes[cur].next) break;
      const std::size_t nx = *nodes[cur].next;
      if (color[nx] == 2) break;
      if (color[nx] == 1) {
        const auto start = std::find(walk.begin(), walk.end(), nx);
        std::vector<std::size_t> cyc(start, walk.end());
        const std::size_t m = cyc.size();
        ExtremeCycle best;
        for (std::size_t r = 0; r < m; ++r) {
          ExtremeCycle cand;
          for (std::size_t k = 0; k < m; ++k) cand.points.push_back(nodes[cyc[(r + k) % m]].x);
          for (std::size_t k = m; k-- > 0;) cand.word.push_back(nodes[cyc[(r + k) % m]].via);
          if (best.word.empty() || cand.word < best.word) best = std::move(cand);
        }
        out.cycles.push_back(std::move(best));
        break;
      }
      cur = nx;
    }
    for (auto w : walk) color[w] = 2;
  }
  std::sort(out.cycles.begin(), out.cycles.end(), [](const ExtremeCycle& a, const ExtremeCycle& b) {
    if (a.points.size() != b.points.size()) return a.points.size() < b.points.size();
    return a.points < b.points;
  });
  return out;
}

std::vector<RatVec> dynamically_simple_spectrum(const TransitionSystem& ts,
                                                const std::vector<ExtremeCycle>& cycles, int n,
                                                std::size_t cap) {
  require(n >= 0, ErrorKind::InvalidArgument, "level must be >= 0");
  const auto& t = ts.triple();
  const IntMatrix rt = t.r().transpose();
  std::vector<RatVec> points;
  for (const auto& c : cycles)
    for (const auto& p : c.points) points.push_back(p);
  std::set<RatVec> out;
  RatMatrix power = RatMatrix::identity(ts.dim());
  for (int k = 0; k <= n; ++k) {
    std::vector<IntVec> words = k == 0 ? std::vector<IntVec>{IntVec(ts.dim(), 0)}
                                       : expand_digits(rt, t.l().vectors(), k, cap);
    require(static_cast<double>(words.size()) * static_cast<double>(points.size()) <=
                static_cast<double>(cap),
            ErrorKind::CapExceeded, "cycle-generated set exceeds cap");
    for (const auto& c : points) {
      RatVec shift = power * c;
      for (auto& s : shift) s = -s;
      for (const auto& w : words) out.insert(add(to_rational(w), shift));
    }
    power = RatMatrix(rt) * power;
  }
  return {out.begin(), out.end()};
}

Closure invariant_closure(const TransitionSystem& ts, const std::vector<RatVec>& seeds,
                          std::size_t cap) {
  Closure out;
  std::set<RatVec> seen;
  std::deque<RatVec> queue;
  for (const auto& s : seeds) {
    require(s.size() == ts.dim(), ErrorKind::DimensionMismatch, "seed has wrong dimension");
    if (seen.insert(s).second) queue.push_back(s);
  }
  while (!queue.empty()) {
    const RatVec x = std::move(queue.front());
    queue.pop_front();
    for (const auto& l : ts.triple().l()) {
      RatVec y = ts.tau(l, x);
      if (seen.count(y)) continue;
      bool possible = false;
      switch (ts.mask().vanishes(y)) {
        case Vanishing::Zero: possible = false; break;
        case Vanishing::NonZero: possible = true; break;
        case Vanishing::Inconclusive:
          out.tainted = true;
          possible = std::abs(ts.mask()(y)) > kDefaultTolerance;
          break;
      }
      if (!possible) continue;
      if (seen.size() >= cap) {
        out.cap_reached = true;
        queue.clear();
        break;
      }
      seen.insert(y);
      queue.push_back(std::move(y));
    }
  }
  out.points.assign(seen.begin(), seen.end());
  return out;
}

const char* to_string(Simplicity s) noexcept {
  switch (s) {
    case Simplicity::Simple: return "simple";
    case Simplicity::NotSimple: return "not-simple";
    case Simplicity::Unknown: return "unknown";
  }
  return "unknown";
}

SimplicityVerdict dynamical_simplicity(const TransitionSystem& ts,
                                       const std::vector<ExtremeCycle>& cycles,
                                       const std::vector<RatVec>& seeds, std::size_t cap) {
  SimplicityVerdict v;
  if (ts.dim() == 1) {
    v.verdict = Simplicity::Simple;
    v.reason = "one-dimensional Hadamard triples are dynamically simple";
    return v;
  }
  std::set<RatVec> cycle_points;
  for (const auto& c : cycles) cycle_points.insert(c.points.begin(), c.points.end());
  bool inconclusive = false;
  for (const auto& seed : seeds) {
    const Closure c = invariant_closure(ts, {seed}, cap);
    const bool meets = std::any_of(c.points.begin(), c.points.end(),
                                   [&](const RatVec& p) { return cycle_points.count(p) > 0; });
    if (c.cap_reached || c.tainted) {
      inconclusive = true;
      continue;
    }
    if (!meets) {
      v.verdict = Simplicity::NotSimple;
      v.reason = "finite invariant set of " + std::to_string(c.points.size()) +
                 " points avoids every extreme cycle";
      v.witness_seed = seed;
      return v;
    }
  }
  v.reason = inconclusive ? "closure cap reached or numeric-only transitions"
                          : "no invariant set avoiding the extreme cycles among the seeds";
  return v;
}

std::vector<RatVec> rational_grid(std::size_t dim, std::int64_t denominator) {
  require(denominator >= 1, ErrorKind::InvalidArgument, "denominator must be >= 1");
  std::vector<RatVec> out{RatVec{}};
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<RatVec> next;
    for (const auto& p : out)
      for (std::int64_t j = 0; j < denominator; ++j) {
        RatVec q = p;
        q.emplace_back(j, denominator);
        q.back().canonicalize();
        next.push_back(std::move(q));
      }
    out = std::move(next);
  }
  return out;
}

std::vector<ZeroScanEntry> periodic_zero_scan(const MuHatEvaluator& ev,
                                              const std::vector<RatVec>& grid, int depth,
                                              int kmax) {
  require(kmax >= 0, ErrorKind::InvalidArgument, "kmax must be >= 0");
  const std::size_t d = ev.dim();
  std::vector<ZeroScanEntry> out;
  for (const auto& xi : grid) {
    require(xi.size() == d, ErrorKind::DimensionMismatch, "grid point has wrong dimension");
    ZeroScanEntry e;
    e.xi = xi;
    IntVec k(d, -kmax);
    bool all = true;
    while (true) {
      RatVec shifted = add(xi, to_rational(k));
      if (ev.zero_certificate(shifted, depth)) {
        ++e.shifts_certified;
      } else {
        all = false;
        e.first_uncertified_shift = k;
        break;
      }
      std::size_t i = 0;
      while (i < d && k[i] == kmax) k[i++] = -kmax;
      if (i == d) break;
      ++k[i];
    }
    e.certified = all;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace fspec
