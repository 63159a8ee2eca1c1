#include "fspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "fspec/error.hpp"

namespace fspec {

const char* to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::Canonical: return "canonical";
    case Provenance::CycleGenerated: return "cycle-generated";
    case Provenance::OffsetModified: return "offset-modified";
  }
  return "unknown";
}

SpectrumCandidate canonical_levels(const HadamardTriple& t, int n, std::size_t cap) {
  require(n >= 1, ErrorKind::InvalidArgument, "level must be >= 1");
  SpectrumCandidate out;
  out.provenance = Provenance::Canonical;
  const IntMatrix rt = t.r().transpose();
  for (int k = 1; k <= n; ++k) {
    auto level = expand_digits(rt, t.l().vectors(), k, cap);
    std::sort(level.begin(), level.end());
    level.erase(std::unique(level.begin(), level.end()), level.end());
    out.levels.push_back(std::move(level));
    out.scale_exponents.push_back(k);
  }
  return out;
}

OrthogonalityReport orthogonality_check(const MuHatEvaluator& ev, const std::vector<IntVec>& freqs,
                                        double tol, std::size_t pair_cap) {
  OrthogonalityReport rep;
  const double pairs = 0.5 * static_cast<double>(freqs.size()) * static_cast<double>(freqs.size());
  require(pairs <= static_cast<double>(pair_cap), ErrorKind::CapExceeded,
          "too many frequency pairs for the orthogonality check");
  // |mu_hat(-x)| = |mu_hat(x)| for integer digits, so differences are taken up to sign.
  std::map<IntVec, std::pair<std::size_t, std::size_t>> diffs;
  for (std::size_t i = 0; i < freqs.size(); ++i)
    for (std::size_t j = i + 1; j < freqs.size(); ++j) {
      ++rep.pairs;
      IntVec d = sub(freqs[j], freqs[i]);
      const IntVec neg = negate(d);
      diffs.emplace(std::max(d, neg), std::make_pair(i, j));
    }
  rep.distinct_differences = diffs.size();
  for (const auto& [d, pair] : diffs) {
    const MuHatValue v = ev.at(d, tol);
    if (v.exact_zero_level) {
      ++rep.exact_zeros;
      continue;
    }
    const double mag = std::abs(v.value) + v.error_bound;
    if (!rep.argmax || mag > rep.max_magnitude) {
      rep.max_magnitude = mag;
      rep.argmax = std::make_pair(freqs[pair.first], freqs[pair.second]);
    }
  }
  return rep;
}

DeltaEstimate delta_estimate(const MuHatEvaluator& ev, const SpectrumCandidate& cand, int depth) {
  require(depth >= 1, ErrorKind::InvalidArgument, "depth must be >= 1");
  require(depth <= cand.depth(), ErrorKind::Precondition,
          "candidate has only " + std::to_string(cand.depth()) + " levels");
  DeltaEstimate est;
  est.depth = depth;
  for (int n = 0; n < depth; ++n) {
    const int s = cand.scale_exponents[static_cast<std::size_t>(n)];
    for (const auto& lambda : cand.levels[static_cast<std::size_t>(n)]) {
      const MuHatValue v = ev.at(ev.scaled(to_rational(lambda), s));
      const double value = std::norm(v.value);
      if (est.level == 0 || value < est.value) {
        est.value = value;
        est.level = n + 1;
        est.lambda = lambda;
      }
    }
    est.by_depth.push_back(est.value);
  }
  return est;
}

ParsevalResult parseval_defect(const MuHatEvaluator& ev, const HadamardTriple& t,
                               const StepFunction& f) {
  const int n = f.level;
  require(n >= 1, ErrorKind::InvalidArgument, "step function level must be >= 1");
  require(ev.matrix() == t.r() && ev.mask().digits() == t.b(), ErrorKind::Precondition,
          "evaluator and triple describe different measures");
  constexpr int kRefine = 2;
  const auto bn = expand_digits(t.r(), t.b().vectors(), n, std::size_t{1} << 20);
  require(f.weights.size() == bn.size(), ErrorKind::DimensionMismatch,
          "step function needs one weight per element of B_n");
  const auto lambdas = expand_digits(t.r().transpose(), t.l().vectors(), n, std::size_t{1} << 20);
  const auto fine = expand_digits(t.r(), t.b().vectors(), kRefine, std::size_t{1} << 20);
  const IntMatrix rp = t.r().pow(kRefine);
  const double nn = std::pow(static_cast<double>(t.n()), n);
  const double nm = std::pow(static_cast<double>(t.n()), n + kRefine);

  ParsevalResult res;
  double w2 = 0.0;
  for (const auto& w : f.weights) w2 += std::norm(w);
  res.norm_squared = w2 / nn;

  double lhs = 0.0, rhs = 0.0, delta = 1.0;
  for (const auto& lambda : lambdas) {
    const RatVec lam = to_rational(lambda);
    // Each level-n cell splits into #B^2 cells R^{-(n+2)}(T + e + R^2 b).
    const RatVec xm = ev.scaled(lam, n + kRefine);
    Complex cell_sum = 0.0;
    for (std::size_t i = 0; i < bn.size(); ++i) {
      const IntVec top = rp * bn[i];
      Complex s = 0.0;
      for (const auto& e : fine) s += unit_phase(-dot(xm, add(e, top)));
      cell_sum += f.weights[i] * s;
    }
    RatVec neg = xm;
    for (auto& v : neg) v = -v;
    const Complex integral = cell_sum * ev.at(neg).value / nm;
    lhs += std::norm(integral);

    const RatVec xn = ev.scaled(lam, n);
    Complex hw = 0.0;
    for (std::size_t i = 0; i < bn.size(); ++i) hw += f.weights[i] * unit_phase(-dot(xn, bn[i]));
    hw /= std::sqrt(nn);
    const double mu2 = std::norm(ev.at(xn).value);
    delta = std::min(delta, mu2);
    rhs += mu2 * std::norm(hw) / nn;
  }
  res.lhs = lhs;
  res.rhs = rhs;
  res.identity_defect = std::abs(lhs - rhs);
  res.ratio = res.norm_squared > 0 ? lhs / res.norm_squared : 0.0;
  res.delta_level = delta;
  res.upper_holds = lhs <= res.norm_squared * (1.0 + 1e-9);
  return res;
}

namespace {

std::vector<IntVec> offsets_by_norm(std::size_t d, int kmax) {
  std::vector<IntVec> out;
  IntVec k(d, -kmax);
  while (true) {
    out.push_back(k);
    std::size_t i = 0;
    while (i < d && k[i] == kmax) k[i++] = -kmax;
    if (i == d) break;
    ++k[i];
  }
  std::sort(out.begin(), out.end(), [](const IntVec& a, const IntVec& b) {
    const auto na = dot(a, a), nb = dot(b, b);
    return na != nb ? na < nb : a < b;
  });
  return out;
}

// Centre plus the 2^d corners of the cube inscribed in the eps0-ball.
std::vector<RealVec> net(std::size_t d, double eps0) {
  std::vector<RealVec> out{RealVec(d, 0.0)};
  const double h = eps0 / std::sqrt(static_cast<double>(d));
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    RealVec y(d);
    for (std::size_t i = 0; i < d; ++i) y[i] = (mask >> i & 1) ? h : -h;
    out.push_back(std::move(y));
  }
  return out;
}

double operator_norm_bound(const DecayBound& db, int j) {
  return db.prefix * std::pow(db.contraction, j / db.period);
}

}  // namespace

SpectrumCandidate complete_spectrum(const MuHatEvaluator& ev, const HadamardTriple& t,
                                    const CompletionOptions& opts) {
  require(opts.eps0 > 0 && opts.delta0 > 0 && opts.kmax >= 0 && opts.stages >= 1,
          ErrorKind::InvalidArgument, "completion needs eps0 > 0, delta0 > 0, kmax >= 0, stages >= 1");
  require(ev.matrix() == t.r() && ev.mask().digits() == t.b(), ErrorKind::Precondition,
          "evaluator and triple describe different measures");
  const std::size_t d = t.dim();
  const IntMatrix rt = t.r().transpose();
  const DecayBound& db = ev.decay();
  const auto ks = offsets_by_norm(d, opts.kmax);
  const auto samples = net(d, opts.eps0);

  SpectrumCandidate out;
  out.provenance = Provenance::OffsetModified;
  std::vector<IntVec> lambda{IntVec(d, 0)};
  int m = 0;
  int n_prev = 0;
  for (int stage = 1; stage <= opts.stages; ++stage) {
    double max_norm = 0.0;
    for (const auto& l : lambda) max_norm = std::max(max_norm, euclidean_norm(to_real(l)));
    // ||(R^T)^{-(n+p)} lambda|| < eps0 for every p >= 0.
    int n = n_prev + 1;
    while (operator_norm_bound(db, n) * max_norm >= opts.eps0) {
      ++n;
      require(n < 10000, ErrorKind::ToleranceUnreachable, "no admissible level length");
    }
    const auto js = expand_digits(rt, t.l().vectors(), n, opts.cap);
    const RatMatrix scale = inverse(rt).pow(static_cast<unsigned>(n));
    const IntMatrix rtn = rt.pow(static_cast<unsigned>(n));

    std::vector<IntVec> jhat;
    jhat.reserve(js.size());
    for (const auto& j : js) {
      const RealVec x = to_real(scale * j);
      std::optional<IntVec> chosen;
      if (is_zero(j)) {
        chosen = IntVec(d, 0);
      } else {
        for (const auto& k : ks) {
          bool ok = true;
          for (const auto& y : samples) {
            RealVec p(d);
            for (std::size_t i = 0; i < d; ++i) p[i] = x[i] + y[i] + static_cast<double>(k[i]);
            if (std::norm(ev(std::span<const double>(p)).value) < opts.delta0) {
              ok = false;
              break;
            }
          }
          if (ok) {
            chosen = k;
            break;
          }
        }
      }
      if (!chosen)
        fail(ErrorKind::ConstructionFailed,
             "no offset k with |k|_inf <= " + std::to_string(opts.kmax) + " for j = " +
                 format_vector(j) + " at stage " + std::to_string(stage) + " (n = " +
                 std::to_string(n) + ")");
      if (!is_zero(*chosen)) out.offsets.push_back({stage, j, *chosen});
      jhat.push_back(add(j, rtn * *chosen));
    }

    const IntMatrix shift = rt.pow(static_cast<unsigned>(m));
    std::set<IntVec> next;
    for (const auto& l : lambda)
      for (const auto& j : jhat) next.insert(add(l, shift * j));
    require(next.size() == lambda.size() * jhat.size(), ErrorKind::ConstructionFailed,
            "stage " + std::to_string(stage) + " produced coinciding frequencies");
    lambda.assign(next.begin(), next.end());
    m += n;
    n_prev = n;

    // The net is a finite sample of the eps0-ball; re-check the built level exactly.
    for (const auto& l : lambda) {
      const double v = std::norm(ev.at(ev.scaled(to_rational(l), m)).value);
      if (v < opts.delta0 / 2)
        fail(ErrorKind::ConstructionFailed,
             "frequency " + format_vector(l) + " at stage " + std::to_string(stage) +
                 " has |mu_hat|^2 = " + std::to_string(v) + " below delta0/2");
    }
    out.levels.push_back(lambda);
    out.scale_exponents.push_back(m);
  }
  return out;
}

namespace {

std::vector<Rational> grid_axis(const Rational& lo, const Rational& hi, std::int64_t bound) {
  std::set<Rational> pts;
  for (std::int64_t q = 1; q <= bound; ++q) {
    Integer a, b;
    const Rational l = lo * q, h = hi * q;
    mpz_cdiv_q(a.get_mpz_t(), l.get_num_mpz_t(), l.get_den_mpz_t());
    mpz_fdiv_q(b.get_mpz_t(), h.get_num_mpz_t(), h.get_den_mpz_t());
    for (Integer p = a; p <= b; ++p) {
      Rational x(p, q);
      x.canonicalize();
      pts.insert(x);
    }
  }
  return {pts.begin(), pts.end()};
}

struct CliqueSearch {
  const std::vector<std::vector<bool>>& adj;
  std::size_t max_size;
  std::vector<std::size_t> best;
  bool reached = false;

  void run(std::vector<std::size_t>& r, std::vector<std::size_t> p, std::vector<std::size_t> x) {
    if (reached) return;
    if (p.empty() && x.empty()) {
      if (r.size() > best.size()) best = r;
      if (best.size() >= max_size) reached = true;
      return;
    }
    if (r.size() + p.size() <= best.size()) return;
    // Pivot with the most neighbours in P.
    std::size_t pivot = p.empty() ? x.front() : p.front();
    std::size_t most = 0;
    for (auto u : p) {
      std::size_t c = 0;
      for (auto v : p) c += adj[u][v];
      if (c >= most) {
        most = c;
        pivot = u;
      }
    }
    std::vector<std::size_t> candidates;
    for (auto v : p)
      if (!adj[pivot][v]) candidates.push_back(v);
    for (auto v : candidates) {
      std::vector<std::size_t> np, nx;
      for (auto u : p)
        if (adj[v][u]) np.push_back(u);
      for (auto u : x)
        if (adj[v][u]) nx.push_back(u);
      r.push_back(v);
      run(r, std::move(np), std::move(nx));
      r.pop_back();
      if (reached) return;
      p.erase(std::find(p.begin(), p.end(), v));
      x.push_back(v);
    }
  }
};

}  // namespace

OrthogonalSet orthogonal_set_search(const MuHatEvaluator& ev, const Rational& lo,
                                    const Rational& hi, std::int64_t denominator_bound,
                                    std::size_t max_size, std::size_t grid_cap) {
  require(denominator_bound >= 1, ErrorKind::InvalidArgument, "denominator bound must be >= 1");
  require(max_size >= 1, ErrorKind::InvalidArgument, "max size must be >= 1");
  OrthogonalSet out;
  if (lo > hi) return out;
  const std::size_t d = ev.dim();
  const auto axis = grid_axis(lo, hi, denominator_bound);
  require(std::pow(static_cast<double>(axis.size()), static_cast<double>(d)) <=
              static_cast<double>(grid_cap),
          ErrorKind::CapExceeded, "rational grid exceeds cap");
  std::vector<RatVec> pts{RatVec{}};
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<RatVec> next;
    for (const auto& p : pts)
      for (const auto& a : axis) {
        RatVec q = p;
        q.push_back(a);
        next.push_back(std::move(q));
      }
    pts = std::move(next);
  }
  out.grid_points = pts.size();
  if (pts.empty()) return out;

  std::map<RatVec, bool> cache;
  std::vector<std::vector<bool>> adj(pts.size(), std::vector<bool>(pts.size(), false));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      RatVec diff = sub(pts[j], pts[i]);
      RatVec neg = diff;
      for (auto& v : neg) v = -v;
      RatVec key = std::max(diff, neg);
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, ev.classify(key).status == ZeroStatus::Zero).first;
      if (it->second) {
        adj[i][j] = adj[j][i] = true;
        ++out.edges;
      }
    }

  CliqueSearch search{adj, max_size, {}, false};
  std::vector<std::size_t> r, p(pts.size()), x;
  for (std::size_t i = 0; i < pts.size(); ++i) p[i] = i;
  search.run(r, std::move(p), std::move(x));
  std::sort(search.best.begin(), search.best.end());
  for (auto i : search.best) out.points.push_back(pts[i]);
  out.max_size_reached = search.reached;
  return out;
}

}  // namespace fspec
