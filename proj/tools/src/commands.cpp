#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <random>

#include "fspec/dynamics.hpp"
#include "fspec/error.hpp"
#include "fspec/fourier.hpp"
#include "fspec/latmath.hpp"
#include "fspec/spectrum.hpp"
#include "fspec/tower.hpp"
#include "fspec/triple.hpp"

namespace fscli {

using namespace fspec;

namespace {

constexpr std::size_t kListLimit = 4096;

// Settings resolved from flag > file option > command default.
struct Context {
  const ProblemFile& p;
  const Flags& f;

  double tol(double fallback) const { return f.tol.value_or(p.options.tol.value_or(fallback)); }
  int depth(int fallback) const { return f.depth.value_or(p.options.depth.value_or(fallback)); }
  int kmax(int fallback) const { return f.kmax.value_or(p.options.kmax.value_or(fallback)); }
  double eps0(double fallback) const { return f.eps0.value_or(p.options.eps0.value_or(fallback)); }
  double delta0(double fallback) const {
    return f.delta0.value_or(p.options.delta0.value_or(fallback));
  }
  std::uint64_t seed(std::uint64_t fallback) const {
    return f.seed.value_or(p.options.seed.value_or(fallback));
  }
  std::size_t cap(std::size_t fallback) const { return f.cap.value_or(p.options.cap.value_or(fallback)); }
};

// Missing input in a file that otherwise parsed: reported like a parse error.
[[noreturn]] void missing(const ProblemFile& p, const std::string& what) {
  throw ProblemError(p.path, 1, 1, "", what);
}

AffinePair require_pair(const ProblemFile& p) {
  if (!p.r || !p.b) missing(p, "this command needs \"R\" and \"B\"");
  return AffinePair(*p.r, DigitSet(p.r->rows(), *p.b));
}

HadamardTriple require_triple(const ProblemFile& p, double tol = kTripleTolerance) {
  if (!p.r || !p.b) missing(p, "this command needs \"R\" and \"B\"");
  if (!p.l) missing(p, "this command needs \"L\"");
  std::size_t d = p.r->rows();
  return HadamardTriple(*p.r, DigitSet(d, *p.b), DigitSet(d, *p.l), tol);
}

// Uniform doubles in [0,1) from a fully specified engine and conversion.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : g_(seed) {}
  double operator()() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 g_;
};

json frame_json(const FrameBounds& b) { return json{{"lower", b.lower}, {"upper", b.upper}}; }

// ------------------------------------------------------------------ verify

void cmd_verify(Report& rep, const Context& c) {
  const auto& p = c.p;
  if (!p.r || !p.b) missing(p, "verify needs \"R\" and \"B\"");
  const IntMatrix& r = *p.r;
  const std::size_t d = r.rows();
  DigitSet b(d, *p.b);

  Expansivity ex = expansivity(r);
  rep.exact("determinant", determinant(r).get_str());
  rep.exact("expansivity", to_string(ex));
  rep.numeric("expansivity_eigenvalues", to_string(numeric_expansivity(r)), 1e-9);
  rep.verdict("expansive", ex == Expansivity::Expansive);

  bool b_simple = residues_distinct(r, b);
  rep.exact("b_residues_distinct", b_simple);
  rep.verdict("b_simple", b_simple);

  Lattice zrb = smallest_invariant_lattice(r, b);
  json lat{{"basis", to_json(zrb.basis())}, {"rank", zrb.rank()}};
  bool is_zd = zrb == Lattice::integer_lattice(d);
  if (zrb.full_rank()) lat["index"] = to_text(zrb.covolume());
  lat["equals_Zd"] = is_zd;
  rep.exact("Z[R,B]", lat);
  if (is_zd) rep.note("Z[R,B] = Z^" + std::to_string(d));

  if (!p.l) {
    rep.note("no L given: pair checks only");
    return;
  }
  DigitSet l(d, *p.l);
  double tol = c.tol(kTripleTolerance);
  TripleReport tr = verify_triple(r, b, l, tol);
  rep.verdict("hadamard_triple", tr.hadamard);
  rep.exact("sizes_match", tr.sizes_match);
  rep.exact("l_residues_distinct", tr.l_simple);
  rep.numeric("unitarity_defect", tr.unitarity_defect, tol);
  rep.exact("exact_orthogonality", tr.exact_orthogonality);
  if (!tr.defects.empty()) rep.exact("defects", tr.defects);

  if (ex == Expansivity::Expansive && tr.sizes_match && b.size() == l.size()) {
    Uniform u(c.seed(1));
    double worst = 0.0;
    const int samples = 100;
    for (int s = 0; s < samples; ++s) {
      RealVec x(d);
      for (auto& v : x) v = u();
      worst = std::max(worst, qmf_residual(r, b, l, x));
    }
    rep.numeric("qmf_residual_max", json{{"value", worst}, {"samples", samples}}, 1e-12);
  }
  if (!tr.hadamard) return;

  HadamardTriple t(r, b, l, tol);
  int levels = c.depth(1);
  if (levels >= 2) {
    json prod = json::array();
    for (int n = 2; n <= levels; ++n) {
      HadamardTriple tn = product_triple(t, n, c.cap(kDefaultProductCap));
      prod.push_back(json{{"n", n},
                          {"size", tn.n()},
                          {"hadamard", tn.report().hadamard},
                          {"exact_orthogonality", tn.report().exact_orthogonality},
                          {"unitarity_defect", tn.report().unitarity_defect}});
    }
    rep.numeric("product_triples", prod, tol);
  }
  if (d >= 2) {
    int bound = p.options.entry_bound.value_or(2);
    QuasiProductSearch qs = search_quasi_product(t, bound);
    json q{{"entry_bound", bound}, {"candidates_examined", qs.candidates_examined},
           {"cap_reached", qs.cap_reached}, {"found", qs.witness.has_value()}};
    if (qs.witness) {
      const auto& w = *qs.witness;
      q["M"] = to_json(w.m);
      q["split"] = w.split;
      q["R1"] = to_json(w.r1);
      q["R2"] = to_json(w.r2);
      q["C"] = to_json(w.c);
      q["Q"] = to_json(w.q);
      q["u"] = to_json(w.u);
      q["v"] = to_json(w.v);
    }
    rep.exact("quasi_product", q);
  }
}

// ------------------------------------------------------------------ cycles

void cmd_cycles(Report& rep, const Context& c) {
  HadamardTriple t = require_triple(c.p);
  TransitionSystem ts(t);
  CycleEnumeration e = enumerate_extreme_cycles(ts);
  rep.exact("attractor_box", to_json(e.box));
  rep.exact("candidate_lattice", to_json(e.candidate_lattice.basis()));
  rep.exact("candidates", e.candidates);
  json cycles = json::array();
  for (const auto& cy : e.cycles)
    cycles.push_back(json{{"word", to_json(cy.word)}, {"points", to_json(cy.points)}});
  rep.exact("cycles", cycles);
  rep.verdict("enumeration_complete", e.complete);

  int n = c.depth(3);
  auto spec = dynamically_simple_spectrum(ts, e.cycles, n, c.cap(std::size_t{1} << 22));
  bool integral = std::all_of(spec.begin(), spec.end(), [](const RatVec& v) { return is_integral(v); });
  json s{{"level", n}, {"size", spec.size()}, {"integral", integral}};
  if (spec.size() <= kListLimit) s["points"] = to_json(spec);
  rep.exact("cycle_spectrum", s);

  std::vector<RatVec> seeds = c.p.options.seeds;
  if (seeds.empty()) seeds = rational_grid(ts.dim(), 3);
  std::size_t closure_cap = c.cap(2000);
  SimplicityVerdict v = dynamical_simplicity(ts, e.cycles, seeds, closure_cap);
  json sv{{"verdict", to_string(v.verdict)}, {"reason", v.reason}, {"seeds", seeds.size()},
          {"closure_cap", closure_cap}};
  if (v.witness_seed) sv["witness_seed"] = to_json(*v.witness_seed);
  rep.exact("simplicity", sv);
  rep.verdict("dynamically_simple", to_string(v.verdict));
}

// ---------------------------------------------------------------- spectrum

json offsets_json(const std::vector<Offset>& offs) {
  json a = json::array();
  for (const auto& o : offs) a.push_back(json{{"stage", o.stage}, {"j", to_json(o.j)}, {"k", to_json(o.k)}});
  return a;
}

void cmd_spectrum(Report& rep, const Context& c) {
  HadamardTriple t = require_triple(c.p);
  double tol = c.tol(kDefaultTolerance);
  MuHatEvaluator ev(t.r(), t.b(), tol);

  int n = c.depth(3);
  SpectrumCandidate canon = canonical_levels(t, n, c.cap(std::size_t{1} << 22));
  json sizes = json::array();
  for (const auto& lv : canon.levels) sizes.push_back(lv.size());
  json cj{{"depth", n}, {"sizes", sizes}, {"provenance", to_string(canon.provenance)}};
  if (canon.levels.back().size() <= kListLimit) cj["frequencies"] = to_json(canon.levels.back());
  rep.exact("canonical", cj);

  OrthogonalityReport o = orthogonality_check(ev, canon.levels.back(), tol);
  json oj{{"max_magnitude", o.max_magnitude}, {"pairs", o.pairs},
          {"distinct_differences", o.distinct_differences}, {"exact_zeros", o.exact_zeros}};
  if (o.argmax) oj["argmax"] = json::array({to_json(o.argmax->first), to_json(o.argmax->second)});
  rep.numeric("orthogonality", oj, tol);
  rep.verdict("canonical_orthogonal", o.max_magnitude < 1e-8);

  CompletionOptions opts;
  opts.eps0 = c.eps0(opts.eps0);
  opts.delta0 = c.delta0(opts.delta0);
  opts.kmax = c.kmax(opts.kmax);
  opts.stages = c.p.options.stages.value_or(opts.stages);
  opts.cap = c.cap(opts.cap);
  SpectrumCandidate done = complete_spectrum(ev, t, opts);
  json lv = json::array();
  for (std::size_t i = 0; i < done.levels.size(); ++i)
    lv.push_back(json{{"size", done.levels[i].size()}, {"scale_exponent", done.scale_exponents[i]}});
  DeltaEstimate de = delta_estimate(ev, done, done.depth());
  json comp{{"eps0", opts.eps0},   {"delta0", opts.delta0},
            {"kmax", opts.kmax},   {"stages", opts.stages},
            {"provenance", to_string(done.provenance)},
            {"levels", lv},        {"offsets", offsets_json(done.offsets)},
            {"delta", de.value}};
  if (done.levels.back().size() <= kListLimit) comp["frequencies"] = to_json(done.levels.back());
  rep.numeric("completion", comp, tol);
  rep.verdict("completion_succeeded", true);
}

// ------------------------------------------------------------------- delta

void cmd_delta(Report& rep, const Context& c) {
  HadamardTriple t = require_triple(c.p);
  double tol = c.tol(kDefaultTolerance);
  MuHatEvaluator ev(t.r(), t.b(), tol);
  // default: up to 10 levels, deepest level at most 2^12 frequencies
  int fallback = 1;
  for (std::size_t size = t.n() * t.n(); fallback < 10 && size <= (std::size_t{1} << 12); size *= t.n())
    ++fallback;
  int n = c.depth(fallback);
  SpectrumCandidate cand = canonical_levels(t, n, c.cap(std::size_t{1} << 22));
  DeltaEstimate de = delta_estimate(ev, cand, n);
  json table = json::array();
  bool decreasing = true;
  for (std::size_t i = 0; i < de.by_depth.size(); ++i) {
    table.push_back(json{{"depth", i + 1}, {"delta", de.by_depth[i]}});
    if (i > 0 && !(de.by_depth[i] < de.by_depth[i - 1])) decreasing = false;
  }
  rep.numeric("delta_by_depth", table, tol);
  rep.numeric("delta", json{{"value", de.value}, {"level", de.level}, {"witness", to_json(de.lambda)}}, tol);
  rep.verdict("strictly_decreasing", decreasing);
}

// ---------------------------------------------------------------- parseval

void cmd_parseval(Report& rep, const Context& c) {
  HadamardTriple t = require_triple(c.p);
  double tol = c.tol(1e-12);
  MuHatEvaluator ev(t.r(), t.b(), tol);
  int max_level = c.depth(3);
  int samples = c.p.options.samples.value_or(100);
  std::uint64_t seed = c.seed(1);
  Uniform u(seed);

  double worst_defect = 0.0, min_ratio = INFINITY, max_ratio = 0.0, min_delta = 1.0;
  bool upper = true;
  json by_level = json::array();
  std::map<int, double> level_defect;
  for (int s = 0; s < samples; ++s) {
    int level = 1 + s % max_level;
    std::size_t size = 1;
    for (int i = 0; i < level; ++i) size *= t.n();
    StepFunction f{level, std::vector<Complex>(size)};
    for (auto& w : f.weights) {
      double re = 2 * u() - 1;
      double im = 2 * u() - 1;
      w = Complex(re, im);
    }
    ParsevalResult pr = parseval_defect(ev, t, f);
    worst_defect = std::max(worst_defect, pr.identity_defect);
    level_defect[level] = std::max(level_defect[level], pr.identity_defect);
    min_ratio = std::min(min_ratio, pr.ratio);
    max_ratio = std::max(max_ratio, pr.ratio);
    min_delta = std::min(min_delta, pr.delta_level);
    upper = upper && pr.upper_holds;
  }
  for (const auto& [level, defect] : level_defect)
    by_level.push_back(json{{"level", level}, {"max_identity_defect", defect}});
  rep.numeric("parseval",
              json{{"samples", samples},
                   {"seed", seed},
                   {"max_level", max_level},
                   {"max_identity_defect", worst_defect},
                   {"by_level", by_level},
                   {"ratio_min", min_ratio},
                   {"ratio_max", max_ratio},
                   {"delta_level_min", min_delta}},
              tol);
  rep.verdict("identity_defect_below_1e-10", worst_defect < 1e-10);
  rep.verdict("upper_bound_holds", upper);
}

// ---------------------------------------------------------------- zeroscan

void cmd_zeroscan(Report& rep, const Context& c) {
  AffinePair pair = require_pair(c.p);
  MuHatEvaluator ev(pair.r(), pair.b(), c.tol(kDefaultTolerance));
  std::int64_t q = c.p.options.grid_denominator.value_or(3);
  std::vector<RatVec> grid = c.p.options.xi;
  if (grid.empty()) grid = rational_grid(pair.dim(), q);
  int depth = c.depth(64);
  int kmax = c.kmax(1);
  auto scan = periodic_zero_scan(ev, grid, depth, kmax);
  json entries = json::array();
  std::size_t certified = 0;
  for (const auto& e : scan) {
    json j{{"xi", to_json(e.xi)}, {"certified", e.certified}, {"shifts_certified", e.shifts_certified}};
    if (e.first_uncertified_shift) j["first_uncertified_shift"] = to_json(*e.first_uncertified_shift);
    entries.push_back(std::move(j));
    certified += e.certified ? 1 : 0;
  }
  std::size_t shifts = 1;
  for (std::size_t i = 0; i < pair.dim(); ++i) shifts *= static_cast<std::size_t>(2 * kmax + 1);
  rep.exact("scan", json{{"depth", depth}, {"kmax", kmax}, {"shifts_per_point", shifts},
                         {"points", scan.size()}, {"certified", certified}, {"entries", entries}});
  rep.verdict("periodic_zeros_found", certified > 0);
}

// ------------------------------------------------------------------- tower

void cmd_tower(Report& rep, const Context& c) {
  if (c.p.tower.empty()) missing(c.p, "tower needs a \"tower\" list");
  Tower tw = build_tower(c.p.tower);
  json levels = json::array();
  bool sound = true;
  for (std::size_t i = 0; i < tw.levels.size(); ++i) {
    const auto& l = tw.levels[i];
    json j{{"level", i + 1},
           {"M", l.spec->m},
           {"K", l.spec->k},
           {"alpha", l.spec->alpha},
           {"N", l.n},
           {"epsilon_bound", l.epsilon},
           {"epsilon_measured", l.check.epsilon_measured},
           {"sigma_min", l.check.sigma_min},
           {"sigma_max", l.check.sigma_max}};
    if (l.distance_to_hadamard) {
      j["distance_to_hadamard"] = *l.distance_to_hadamard;
      sound = sound && *l.distance_to_hadamard <= l.epsilon;
    }
    sound = sound && l.check.epsilon_measured <= l.epsilon;
    levels.push_back(std::move(j));
  }
  rep.numeric("levels", levels, 1e-12);
  rep.numeric("epsilon_sum", tw.epsilon_sum(), 1e-12);
  int n = std::min<int>(c.depth(static_cast<int>(tw.levels.size())), static_cast<int>(tw.levels.size()));
  TowerFrameSpectrum fs = tower_frame_spectrum(tw, n);
  rep.numeric("frame_spectrum",
              json{{"levels", n}, {"size", fs.lambda.size()}, {"lower", fs.lower}, {"upper", fs.upper}},
              1e-12);
  if (!c.p.options.xi.empty()) {
    json mu = json::array();
    for (const auto& x : c.p.options.xi) {
      TowerMuHat m = tower_mu_hat(tw, x[0].get_d());
      mu.push_back(json{{"xi", to_text(x[0])}, {"re", m.value.real()}, {"im", m.value.imag()},
                        {"levels", m.levels}, {"note", m.note}});
    }
    rep.numeric("mu_hat", mu, 1e-12);
  }
  rep.verdict("levels_within_bounds", sound);
}

// ------------------------------------------------------------------ select

json selection_json(const SelectionResult& r) {
  json j{{"method", to_string(r.method)}, {"J", to_json(r.j)}, {"bounds", frame_json(r.bounds)},
         {"evaluated", r.evaluated}};
  if (r.seed) j["seed"] = *r.seed;
  return j;
}

void cmd_select(Report& rep, const Context& c) {
  AffinePair pair = require_pair(c.p);
  int n = c.depth(1);
  SelectionProblem sp = make_selection_problem(pair, n);
  rep.exact("problem", json{{"n", n}, {"universe", sp.universe.size()}, {"target", sp.target}});
  std::optional<SelectionResult> oracle;
  try {
    oracle = exhaustive_select(sp, c.cap(2'000'000));
    rep.numeric("exhaustive", selection_json(*oracle), 1e-12);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::CapExceeded) throw;
    rep.note(std::string("exhaustive search skipped: ") + e.what());
  }
  std::uint64_t seed = c.seed(1);
  int iterations = c.p.options.iterations.value_or(2000);
  SelectionResult g = heuristic_select(sp, SelectionMethod::Greedy);
  SelectionResult rs = heuristic_select(sp, SelectionMethod::RandomSwap, seed, iterations);
  rep.numeric("greedy", selection_json(g), 1e-12);
  json rsj = selection_json(rs);
  rsj["iterations"] = iterations;
  rep.numeric("random_swap", rsj, 1e-12);
  if (oracle && oracle->bounds.lower > 0) {
    double best = oracle->bounds.lower;
    rep.numeric("ratio_to_oracle",
                json{{"greedy", g.bounds.lower / best}, {"random_swap", rs.bounds.lower / best}}, 1e-12);
    rep.verdict("heuristics_within_5_percent",
                g.bounds.lower >= 0.95 * best && rs.bounds.lower >= 0.95 * best);
  }
}

// ---------------------------------------------------------------- attractor

std::string csv_path(const Flags& f) {
  if (f.csv) return *f.csv;
  if (f.out) {
    std::string s = *f.out;
    auto dot = s.rfind('.');
    auto slash = s.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) s.erase(dot);
    return s + ".csv";
  }
  return "attractor.csv";
}

void cmd_attractor(Report& rep, const Context& c) {
  AffinePair pair = require_pair(c.p);
  int depth = c.depth(6);
  auto pts = attractor_points(pair, depth, c.cap(std::size_t{1} << 22));
  std::string path = csv_path(c.f);
  std::ofstream csv(path, std::ios::binary);
  if (!csv) fail(ErrorKind::InvalidArgument, "cannot write " + path);
  const std::size_t d = pair.dim();
  for (std::size_t i = 0; i < d; ++i) csv << (i ? "," : "") << "x" << i + 1;
  csv << "\n";
  char buf[32];
  for (const auto& p : pts) {
    for (std::size_t i = 0; i < d; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", p[i]);
      csv << (i ? "," : "") << buf;
    }
    csv << "\n";
  }
  if (!csv) fail(ErrorKind::InvalidArgument, "write failed for " + path);
  rep.numeric("point_cloud", json{{"file", path}, {"depth", depth}, {"points", pts.size()}, {"dimension", d}},
              0.0);
  rep.exact("attractor_box", to_json(attractor_box(pair.r(), pair.b())));
  if (c.p.l) rep.exact("transition_box", to_json(attractor_box(pair.r().transpose(), DigitSet(d, *c.p.l))));
}

// -------------------------------------------------------------- orthosearch

void cmd_orthosearch(Report& rep, const Context& c) {
  AffinePair pair = require_pair(c.p);
  MuHatEvaluator ev(pair.r(), pair.b(), c.tol(kDefaultTolerance));
  auto box = c.p.options.box.value_or(std::pair<Rational, Rational>{Rational(-10), Rational(10)});
  std::int64_t den = c.p.options.denominator.value_or(12);
  std::size_t max_size = c.p.options.max_size.value_or(3);
  OrthogonalSet os = orthogonal_set_search(ev, box.first, box.second, den, max_size, c.cap(200'000));
  rep.exact("search", json{{"box", json::array({to_text(box.first), to_text(box.second)})},
                           {"denominator_bound", den},
                           {"max_size", max_size},
                           {"grid_points", os.grid_points},
                           {"edges", os.edges},
                           {"largest_set", to_json(os.points)},
                           {"size", os.points.size()}});
  rep.verdict("max_size_reached", os.max_size_reached);
}

using Handler = std::function<void(Report&, const Context&)>;

const std::vector<std::pair<std::string, Handler>>& handlers() {
  static const std::vector<std::pair<std::string, Handler>> h{
      {"verify", cmd_verify},     {"cycles", cmd_cycles},       {"spectrum", cmd_spectrum},
      {"delta", cmd_delta},       {"parseval", cmd_parseval},   {"zeroscan", cmd_zeroscan},
      {"tower", cmd_tower},       {"select", cmd_select},       {"attractor", cmd_attractor},
      {"orthosearch", cmd_orthosearch},
  };
  return h;
}

json echo_inputs(const ProblemFile& p, const Flags& f) {
  json in{{"problem", p.path}};
  if (p.r) in["R"] = to_json(*p.r);
  if (p.b) in["B"] = to_json(*p.b);
  if (p.l) in["L"] = to_json(*p.l);
  if (!p.tower.empty()) {
    json t = json::array();
    for (const auto& s : p.tower) t.push_back(json{{"M", s.m}, {"K", s.k}, {"alpha", s.alpha}});
    in["tower"] = t;
  }
  if (p.raw.contains("options")) in["options"] = p.raw["options"];
  json flags = json::object();
  if (f.tol) flags["tol"] = *f.tol;
  if (f.depth) flags["depth"] = *f.depth;
  if (f.kmax) flags["kmax"] = *f.kmax;
  if (f.eps0) flags["eps0"] = *f.eps0;
  if (f.delta0) flags["delta0"] = *f.delta0;
  if (f.seed) flags["seed"] = *f.seed;
  if (f.cap) flags["cap"] = *f.cap;
  if (f.csv) flags["csv"] = *f.csv;
  in["flags"] = flags;
  return in;
}

void parse_error(Report& rep, const ProblemError& e) {
  json detail{{"line", e.line()}, {"column", e.column()}};
  if (!e.pointer().empty()) detail["pointer"] = e.pointer();
  rep.error("parse", e.what(), kExitValidation, detail);
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, h] : handlers()) n.push_back(name);
    return n;
  }();
  return names;
}

Report run_command(const std::string& command, const ProblemFile& problem, const Flags& flags) {
  Report rep(command);
  rep.inputs() = echo_inputs(problem, flags);
  auto it = std::find_if(handlers().begin(), handlers().end(),
                         [&](const auto& h) { return h.first == command; });
  if (it == handlers().end()) {
    rep.error("usage", "unknown command \"" + command + "\"", kExitUsage);
    return rep;
  }
  auto start = std::chrono::steady_clock::now();
  try {
    it->second(rep, Context{problem, flags});
  } catch (const ProblemError& e) {
    parse_error(rep, e);
  } catch (const Error& e) {
    rep.error(to_string(e.kind()), e.what(), exit_code_for(e.kind()));
  } catch (const std::bad_alloc&) {
    rep.error("out-of-memory", "allocation failed; lower --depth or --cap", kExitComputation);
  }
  if (flags.timing)
    rep.timing("total_seconds",
               std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  return rep;
}

int execute(const std::string& command, const std::string& path, const Flags& flags,
            std::ostream& out, std::ostream& err) {
  Report rep = [&] {
    try {
      ProblemFile p = load_problem(path);
      return run_command(command, p, flags);
    } catch (const ProblemError& e) {
      Report r(command);
      r.inputs() = json{{"problem", path}};
      parse_error(r, e);
      return r;
    }
  }();
  for (const auto& e : rep.document()["errors"]) err << "error: " << e["message"].get<std::string>() << "\n";
  std::string text = rep.dump();
  if (flags.out) {
    std::ofstream f(*flags.out, std::ios::binary);
    if (!f || !(f << text)) {
      err << "error: cannot write " << *flags.out << "\n";
      return kExitValidation;
    }
  } else {
    out << text;
  }
  return rep.exit_code();
}

}  // namespace fscli
