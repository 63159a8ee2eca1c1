#include "fspec/tower.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "fspec/error.hpp"
#include "fspec/latmath.hpp"

namespace fspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Slack for comparing measured quantities against their proven bounds.
constexpr double kSlack = 1e-12;

FourierMatrix level_matrix(std::int64_t denom, const DigitSet& b, const DigitSet& l) {
  RatMatrix scale(1, 1);
  scale(0, 0) = Rational(1, denom);
  scale(0, 0).canonicalize();
  return build_fourier_matrix(scale, std::span<const IntVec>(b.vectors()),
                              std::span<const IntVec>(l.vectors()));
}

}  // namespace

ApfLevelCheck verify_apf_level(std::int64_t n, const DigitSet& b, const DigitSet& l) {
  require(n >= 2, ErrorKind::InvalidArgument, "N must be >= 2");
  require(b.dim() == 1 && l.dim() == 1, ErrorKind::DimensionMismatch, "tower levels are one-dimensional");
  for (const auto& x : b)
    require(x[0] >= 0 && x[0] < n, ErrorKind::Precondition, "B must lie in {0, ..., N-1}");
  ApfLevelCheck out;
  out.bounds = frame_bounds(level_matrix(n, b, l));
  out.sigma_min = std::sqrt(std::max(0.0, out.bounds.lower));
  out.sigma_max = std::sqrt(std::max(0.0, out.bounds.upper));
  out.epsilon_measured = std::max(1.0 - out.sigma_min, out.sigma_max - 1.0);
  return out;
}

double tower_epsilon(const TowerSpec& s) {
  return kTwoPi * static_cast<double>(s.alpha) * std::sqrt(static_cast<double>(s.m)) /
         static_cast<double>(s.k);
}

double Tower::epsilon_sum() const {
  double s = 0.0;
  for (const auto& l : levels) s += l.epsilon;
  return s;
}

Tower build_tower(std::span<const TowerSpec> specs) {
  require(!specs.empty(), ErrorKind::InvalidArgument, "a tower needs at least one level");
  Tower t;
  for (std::size_t j = 0; j < specs.size(); ++j) {
    const TowerSpec& s = specs[j];
    const std::string name = "level " + std::to_string(j + 1);
    require(s.m >= 1 && s.k >= 1, ErrorKind::InvalidArgument, name + ": M and K must be positive");
    require(s.alpha >= 0 && s.alpha < s.m, ErrorKind::InvalidArgument,
            name + ": alpha must satisfy 0 <= alpha < M");
    const double eps = tower_epsilon(s);
    if (eps >= 1.0)
      fail(ErrorKind::Precondition, name + ": epsilon = " + std::to_string(eps) +
                                        " >= 1; increase K (epsilon = 2 pi alpha sqrt(M) / K)");
    TowerLevel level;
    level.n = checked_add(checked_mul(s.m, s.k), s.alpha);
    std::vector<IntVec> b, l;
    for (std::int64_t i = 0; i < s.m; ++i) {
      b.push_back({checked_mul(i, s.k)});
      l.push_back({i});
    }
    level.b = DigitSet(1, std::move(b));
    level.l = DigitSet(1, std::move(l));
    level.epsilon = eps;
    level.spec = s;
    level.check = verify_apf_level(level.n, level.b, level.l);
    const FourierMatrix f = level_matrix(level.n, level.b, level.l);
    const FourierMatrix h = level_matrix(checked_mul(s.m, s.k), level.b, level.l);
    level.distance_to_hadamard = operator_norm(f.entries - h.entries);
    require(level.check.epsilon_measured <= eps + kSlack && *level.distance_to_hadamard <= eps + kSlack,
            ErrorKind::Precondition, name + ": measured frame deviation exceeds epsilon");
    t.levels.push_back(std::move(level));
  }
  return t;
}

Tower self_similar_tower(std::int64_t n, const DigitSet& b, const DigitSet& l, int levels) {
  require(levels >= 1, ErrorKind::InvalidArgument, "a tower needs at least one level");
  Tower t;
  TowerLevel level;
  level.n = n;
  level.b = b;
  level.l = l;
  level.check = verify_apf_level(n, b, l);
  level.epsilon = level.check.epsilon_measured;
  t.levels.assign(static_cast<std::size_t>(levels), level);
  return t;
}

TowerMuHat tower_mu_hat(const Tower& t, double xi) {
  require(!t.levels.empty(), ErrorKind::InvalidArgument, "tower is empty");
  TowerMuHat out;
  out.value = 1.0;
  double scale = 1.0;
  for (const auto& level : t.levels) {
    scale *= static_cast<double>(level.n);
    const double x = xi / scale;
    Complex m = 0.0;
    for (const auto& b : level.b) m += std::polar(1.0, kTwoPi * static_cast<double>(b[0]) * x);
    out.value *= m / static_cast<double>(level.b.size());
    ++out.levels;
  }
  out.note = "product over " + std::to_string(out.levels) +
             " built levels; factors beyond the horizon are taken as 1 (not certified)";
  return out;
}

TowerFrameSpectrum tower_frame_spectrum(const Tower& t, int n) {
  require(n >= 1 && static_cast<std::size_t>(n) <= t.levels.size(), ErrorKind::InvalidArgument,
          "level must be between 1 and the number of built levels");
  TowerFrameSpectrum out;
  out.lambda = {0};
  std::int64_t scale = 1;
  for (int j = 0; j < n; ++j) {
    const auto& level = t.levels[static_cast<std::size_t>(j)];
    std::vector<std::int64_t> next;
    for (auto base : out.lambda)
      for (const auto& l : level.l) next.push_back(checked_add(base, checked_mul(scale, l[0])));
    out.lambda = std::move(next);
    scale = checked_mul(scale, level.n);
    out.lower *= (1.0 - level.epsilon) * (1.0 - level.epsilon);
    out.upper *= (1.0 + level.epsilon) * (1.0 + level.epsilon);
  }
  std::sort(out.lambda.begin(), out.lambda.end());
  return out;
}

// ---------------------------------------------------------------- selection

const char* to_string(SelectionMethod m) noexcept {
  switch (m) {
    case SelectionMethod::Exhaustive: return "exhaustive";
    case SelectionMethod::Greedy: return "greedy";
    case SelectionMethod::RandomSwap: return "random-swap";
  }
  return "unknown";
}

Eigen::MatrixXcd SelectionProblem::rows(std::span<const std::size_t> index) const {
  std::vector<IntVec> freqs;
  for (auto i : index) freqs.push_back(universe.at(i));
  return build_fourier_matrix(scale, std::span<const IntVec>(digits), std::span<const IntVec>(freqs))
      .entries;
}

SelectionProblem make_selection_problem(const AffinePair& pair, int n, std::size_t cap) {
  require(n >= 1, ErrorKind::InvalidArgument, "level must be >= 1");
  SelectionProblem p;
  p.r = pair.r();
  p.n = n;
  const IntMatrix rn = pair.r().pow(static_cast<unsigned>(n));
  const Integer det = abs(determinant(rn));
  require(det <= Integer(static_cast<unsigned long>(cap)), ErrorKind::CapExceeded,
          "universe of size " + det.get_str() + " exceeds cap");
  p.universe = complete_residues(rn.transpose());
  p.digits = expand_digits(pair.r(), pair.b().vectors(), n, cap);
  p.scale = inverse(rn);
  p.target = p.digits.size();
  return p;
}

namespace {

bool better(const FrameBounds& a, const FrameBounds& b) {
  constexpr double eps = 1e-12;
  if (a.lower > b.lower + eps) return true;
  if (a.lower < b.lower - eps) return false;
  const double ra = a.upper > 0 ? a.lower / a.upper : 0.0;
  const double rb = b.upper > 0 ? b.lower / b.upper : 0.0;
  return ra > rb + eps;
}

SelectionResult finish(const SelectionProblem& p, std::vector<std::size_t> index,
                       SelectionMethod method, std::optional<std::uint64_t> seed,
                       std::size_t evaluated) {
  std::sort(index.begin(), index.end());
  SelectionResult out;
  out.bounds = frame_bounds(p.rows(index));
  for (auto i : index) out.j.push_back(p.universe[i]);
  out.index = std::move(index);
  out.method = method;
  out.seed = seed;
  out.evaluated = evaluated;
  return out;
}

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed) {}
  std::size_t below(std::size_t range) {
    state_ = engine_step(state_);
    return static_cast<std::size_t>((state_ >> 33) % range);
  }

 private:
  static std::uint64_t engine_step(std::uint64_t x) {
    return 6364136223846793005ull * x + 1442695040888963407ull;
  }
  std::uint64_t state_;
};

}  // namespace

SelectionResult exhaustive_select(const SelectionProblem& p, std::size_t cap) {
  const std::size_t u = p.universe.size();
  require(p.target <= u, ErrorKind::Precondition, "target exceeds universe");
  require(binomial(u, p.target) <= static_cast<double>(cap), ErrorKind::CapExceeded,
          "too many subsets for exhaustive selection; use greedy or random-swap");
  std::vector<std::size_t> all_index(u);
  std::iota(all_index.begin(), all_index.end(), 0);
  const Eigen::MatrixXcd all = p.rows(all_index);
  std::vector<std::size_t> comb(p.target);
  std::iota(comb.begin(), comb.end(), 0);
  std::vector<std::size_t> best;
  FrameBounds best_bounds;
  std::size_t evaluated = 0;
  Eigen::MatrixXcd sub(static_cast<Eigen::Index>(p.target), all.cols());
  while (true) {
    for (std::size_t i = 0; i < comb.size(); ++i) sub.row(static_cast<Eigen::Index>(i)) = all.row(static_cast<Eigen::Index>(comb[i]));
    const FrameBounds fb = frame_bounds(sub);
    ++evaluated;
    if (best.empty() || better(fb, best_bounds)) {
      best = comb;
      best_bounds = fb;
    }
    // Next combination in lexicographic order.
    std::size_t i = comb.size();
    while (i > 0 && comb[i - 1] == u - comb.size() + i - 1) --i;
    if (i == 0) break;
    ++comb[i - 1];
    for (std::size_t k = i; k < comb.size(); ++k) comb[k] = comb[k - 1] + 1;
  }
  return finish(p, std::move(best), SelectionMethod::Exhaustive, std::nullopt, evaluated);
}

SelectionResult heuristic_select(const SelectionProblem& p, SelectionMethod method,
                                 std::uint64_t seed, int iterations) {
  const std::size_t u = p.universe.size();
  require(p.target <= u, ErrorKind::Precondition, "target exceeds universe");
  std::vector<std::size_t> all_index(u);
  std::iota(all_index.begin(), all_index.end(), 0);
  const Eigen::MatrixXcd all = p.rows(all_index);
  std::size_t evaluated = 0;

  auto rows_of = [&](const std::vector<std::size_t>& idx) {
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(idx.size()), all.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = all.row(static_cast<Eigen::Index>(idx[i]));
    return m;
  };

  if (method == SelectionMethod::Greedy) {
    std::vector<std::size_t> chosen;
    std::vector<bool> used(u, false);
    while (chosen.size() < p.target) {
      double best_value = -1.0;
      std::size_t best_row = u;
      for (std::size_t c = 0; c < u; ++c) {
        if (used[c]) continue;
        auto trial = chosen;
        trial.push_back(c);
        const Eigen::MatrixXcd f = rows_of(trial);
        const Eigen::MatrixXcd g = f * f.adjoint();
        const double least =
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(g, Eigen::EigenvaluesOnly).eigenvalues()(0);
        ++evaluated;
        if (least > best_value + 1e-12) {
          best_value = least;
          best_row = c;
        }
      }
      used[best_row] = true;
      chosen.push_back(best_row);
    }
    return finish(p, std::move(chosen), method, std::nullopt, evaluated);
  }

  require(method == SelectionMethod::RandomSwap, ErrorKind::InvalidArgument,
          "heuristic_select takes greedy or random-swap");
  require(iterations >= 0, ErrorKind::InvalidArgument, "iterations must be >= 0");
  Lcg rng(seed);
  std::vector<std::size_t> perm = all_index;
  for (std::size_t i = 0; i < p.target; ++i) std::swap(perm[i], perm[i + rng.below(u - i)]);
  std::vector<std::size_t> in(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(p.target));
  std::vector<std::size_t> out(perm.begin() + static_cast<std::ptrdiff_t>(p.target), perm.end());
  FrameBounds current = frame_bounds(rows_of(in));
  ++evaluated;
  if (!out.empty()) {
    for (int it = 0; it < iterations; ++it) {
      const std::size_t a = rng.below(in.size());
      const std::size_t b = rng.below(out.size());
      std::swap(in[a], out[b]);
      const FrameBounds fb = frame_bounds(rows_of(in));
      ++evaluated;
      if (fb.lower >= current.lower)
        current = fb;
      else
        std::swap(in[a], out[b]);
    }
  }
  return finish(p, std::move(in), method, seed, evaluated);
}

}  // namespace fspec
