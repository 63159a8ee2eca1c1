#include "problem.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "fspec/error.hpp"

namespace fscli {

using nlohmann::ordered_json;

ProblemError::ProblemError(const std::string& file, std::size_t line, std::size_t column,
                           const std::string& pointer, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                         (pointer.empty() ? "" : pointer + ": ") + message),
      line_(line),
      column_(column),
      pointer_(pointer),
      message_(message) {}

namespace {

// Records the start of every value by JSON pointer. Only run on text that
// nlohmann already accepted, so the scanner can be lax.
class PositionIndex {
 public:
  explicit PositionIndex(std::string_view text) : s_(text) {}

  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> run() {
    skip_ws();
    value("");
    return std::move(out_);
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0, line_ = 1, col_ = 1;
  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> out_;

  void advance() {
    if (i_ >= s_.size()) return;
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(s_[i_]) & 0xC0) != 0x80) {
      ++col_;
    }
    ++i_;
  }
  void skip_ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\n' || s_[i_] == '\r'))
      advance();
  }
  std::string string_token() {
    std::string r;
    advance();  // opening quote
    while (i_ < s_.size() && s_[i_] != '"') {
      if (s_[i_] == '\\') {
        advance();
        r += s_[i_] == 'u' ? '?' : s_[i_];
      } else {
        r += s_[i_];
      }
      advance();
    }
    advance();
    return r;
  }
  static std::string escape(const std::string& key) {
    std::string r;
    for (char c : key) {
      if (c == '~') r += "~0";
      else if (c == '/') r += "~1";
      else r += c;
    }
    return r;
  }
  void value(const std::string& ptr) {
    out_.push_back({ptr, {line_, col_}});
    if (i_ >= s_.size()) return;
    char c = s_[i_];
    if (c == '{') {
      advance();
      skip_ws();
      while (i_ < s_.size() && s_[i_] != '}') {
        std::string key = string_token();
        skip_ws();
        advance();  // ':'
        skip_ws();
        value(ptr + "/" + escape(key));
        skip_ws();
        if (i_ < s_.size() && s_[i_] == ',') advance();
        skip_ws();
      }
      advance();
    } else if (c == '[') {
      advance();
      skip_ws();
      std::size_t k = 0;
      while (i_ < s_.size() && s_[i_] != ']') {
        value(ptr + "/" + std::to_string(k++));
        skip_ws();
        if (i_ < s_.size() && s_[i_] == ',') advance();
        skip_ws();
      }
      advance();
    } else if (c == '"') {
      string_token();
    } else {
      while (i_ < s_.size() && s_[i_] != ',' && s_[i_] != ']' && s_[i_] != '}' && s_[i_] != ' ' &&
             s_[i_] != '\n' && s_[i_] != '\r' && s_[i_] != '\t')
        advance();
    }
  }
};

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
      ++col;
    }
  }
  return {line, col};
}

class Reader {
 public:
  explicit Reader(ProblemFile& p) : p_(p) {}

  [[noreturn]] void error(const std::string& ptr, const std::string& msg) const {
    auto [line, col] = p_.position(ptr);
    throw ProblemError(p_.path, line, col, ptr, msg);
  }

  std::int64_t integer(const ordered_json& j, const std::string& ptr) const {
    if (j.is_number_integer()) {
      if (j.is_number_unsigned() &&
          j.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
        error(ptr, "integer out of range");
      return j.get<std::int64_t>();
    }
    error(ptr, "expected an integer");
  }

  std::int64_t positive(const ordered_json& j, const std::string& ptr) const {
    std::int64_t v = integer(j, ptr);
    if (v <= 0) error(ptr, "expected a positive integer");
    return v;
  }

  double real(const ordered_json& j, const std::string& ptr) const {
    if (!j.is_number()) error(ptr, "expected a number");
    return j.get<double>();
  }

  fspec::Rational rational(const ordered_json& j, const std::string& ptr) const {
    if (j.is_number_integer()) return fspec::Rational(fspec::Integer(std::to_string(integer(j, ptr))));
    if (j.is_string()) {
      try {
        return parse_rational(j.get<std::string>());
      } catch (const std::invalid_argument&) {
        error(ptr, "expected a rational \"p/q\"");
      }
    }
    error(ptr, "expected an integer or a rational string \"p/q\"");
  }

  fspec::IntVec int_vector(const ordered_json& j, const std::string& ptr,
                           std::optional<std::size_t> dim) const {
    fspec::IntVec v;
    if (j.is_number_integer() && dim == 1) {
      v.push_back(integer(j, ptr));
      return v;
    }
    if (!j.is_array()) error(ptr, "expected a list of integers");
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(integer(j[i], ptr + "/" + std::to_string(i)));
    if (dim && v.size() != *dim)
      error(ptr, "expected " + std::to_string(*dim) + " entries, got " + std::to_string(v.size()));
    if (v.empty()) error(ptr, "empty vector");
    return v;
  }

  fspec::RatVec rat_vector(const ordered_json& j, const std::string& ptr, std::size_t dim) const {
    fspec::RatVec v;
    if (!j.is_array()) {
      if (dim == 1) return {rational(j, ptr)};
      error(ptr, "expected a list of " + std::to_string(dim) + " rationals");
    }
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(rational(j[i], ptr + "/" + std::to_string(i)));
    if (v.size() != dim)
      error(ptr, "expected " + std::to_string(dim) + " entries, got " + std::to_string(v.size()));
    return v;
  }

  std::vector<fspec::IntVec> digit_list(const ordered_json& j, const std::string& ptr,
                                        std::size_t dim) const {
    if (!j.is_array() || j.empty()) error(ptr, "expected a non-empty list of integer vectors");
    std::vector<fspec::IntVec> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(int_vector(j[i], ptr + "/" + std::to_string(i), dim));
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t k = 0; k < i; ++k)
        if (out[i] == out[k])
          error(ptr + "/" + std::to_string(i), "duplicate of entry " + std::to_string(k));
    bool zero = false;
    for (const auto& v : out) zero = zero || fspec::is_zero(v);
    if (!zero) error(ptr, "digit set must contain the zero vector");
    return out;
  }

 private:
  ProblemFile& p_;
};

}  // namespace

fspec::Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty");
  std::size_t slash = s.find('/');
  auto digits_ok = [](const std::string& t, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false)) throw std::invalid_argument(s);
  if (num[0] == '+') num.erase(0, 1);
  fspec::Integer d(den);
  if (d == 0) throw std::invalid_argument(s);
  fspec::Rational q(fspec::Integer(num), d);
  q.canonicalize();
  return q;
}

std::pair<std::size_t, std::size_t> ProblemFile::position(const std::string& pointer) const {
  std::string p = pointer;
  for (;;) {
    for (const auto& [ptr, pos] : positions)
      if (ptr == p) return pos;
    if (p.empty()) return {1, 1};
    p = p.substr(0, p.rfind('/'));
  }
}

ProblemFile parse_problem(std::string_view text, const std::string& path) {
  ProblemFile p;
  p.path = path;
  try {
    p.raw = ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    // drop nlohmann's "[json.exception.parse_error.101] parse error at line x, column y: "
    if (auto k = msg.find(": "); k != std::string::npos && msg.find("parse error") != std::string::npos) {
      auto k2 = msg.find(": ", k + 2);
      msg = msg.substr((k2 != std::string::npos ? k2 : k) + 2);
    }
    throw ProblemError(path, line, col, "", "invalid JSON: " + msg);
  }
  p.positions = PositionIndex(text).run();

  Reader rd(p);
  const auto& root = p.raw;
  if (!root.is_object()) rd.error("", "top level must be an object");
  for (const auto& [key, value] : root.items()) {
    (void)value;
    if (key != "R" && key != "B" && key != "L" && key != "tower" && key != "options")
      rd.error("/" + key, "unknown key \"" + key + "\"");
  }

  if (root.contains("R")) {
    const auto& jr = root["R"];
    if (!jr.is_array() || jr.empty()) rd.error("/R", "expected a non-empty square matrix (list of rows)");
    std::vector<std::vector<std::int64_t>> rows;
    for (std::size_t i = 0; i < jr.size(); ++i)
      rows.push_back(rd.int_vector(jr[i], "/R/" + std::to_string(i), jr.size()));
    p.r = fspec::IntMatrix::from_rows(rows);
  }
  if (root.contains("B")) {
    if (!p.r) rd.error("/B", "B given without R");
    p.b = rd.digit_list(root["B"], "/B", p.r->rows());
  }
  if (root.contains("L")) {
    if (!p.r || !p.b) rd.error("/L", "L given without R and B");
    p.l = rd.digit_list(root["L"], "/L", p.r->rows());
  }
  if (p.r && !p.b) rd.error("", "R given without B");

  if (root.contains("tower")) {
    const auto& jt = root["tower"];
    if (!jt.is_array() || jt.empty()) rd.error("/tower", "expected a non-empty list of {M, K, alpha}");
    for (std::size_t i = 0; i < jt.size(); ++i) {
      std::string ptr = "/tower/" + std::to_string(i);
      const auto& e = jt[i];
      if (!e.is_object()) rd.error(ptr, "expected an object {M, K, alpha}");
      for (const auto& [key, value] : e.items()) {
        (void)value;
        if (key != "M" && key != "K" && key != "alpha") rd.error(ptr + "/" + key, "unknown key \"" + key + "\"");
      }
      for (const char* key : {"M", "K", "alpha"})
        if (!e.contains(key)) rd.error(ptr, std::string("missing key \"") + key + "\"");
      fspec::TowerSpec s;
      s.m = rd.positive(e["M"], ptr + "/M");
      s.k = rd.positive(e["K"], ptr + "/K");
      s.alpha = rd.integer(e["alpha"], ptr + "/alpha");
      p.tower.push_back(s);
    }
  }

  if (root.contains("options")) {
    const auto& jo = root["options"];
    if (!jo.is_object()) rd.error("/options", "expected an object");
    auto& o = p.options;
    std::size_t dim = p.r ? p.r->rows() : 1;
    for (const auto& [key, v] : jo.items()) {
      std::string ptr = "/options/" + key;
      if (key == "tol") {
        o.tol = rd.real(v, ptr);
        if (!(*o.tol > 0)) rd.error(ptr, "tolerance must be positive");
      } else if (key == "depth") {
        o.depth = static_cast<int>(rd.positive(v, ptr));
      } else if (key == "kmax") {
        o.kmax = static_cast<int>(rd.integer(v, ptr));
        if (*o.kmax < 0) rd.error(ptr, "kmax must be >= 0");
      } else if (key == "eps0") {
        o.eps0 = rd.real(v, ptr);
        if (!(*o.eps0 > 0)) rd.error(ptr, "eps0 must be positive");
      } else if (key == "delta0") {
        o.delta0 = rd.real(v, ptr);
        if (!(*o.delta0 > 0)) rd.error(ptr, "delta0 must be positive");
      } else if (key == "seed") {
        o.seed = static_cast<std::uint64_t>(rd.integer(v, ptr));
      } else if (key == "cap") {
        o.cap = static_cast<std::size_t>(rd.positive(v, ptr));
      } else if (key == "stages") {
        o.stages = static_cast<int>(rd.positive(v, ptr));
      } else if (key == "samples") {
        o.samples = static_cast<int>(rd.positive(v, ptr));
      } else if (key == "iterations") {
        o.iterations = static_cast<int>(rd.positive(v, ptr));
      } else if (key == "entry_bound") {
        o.entry_bound = static_cast<int>(rd.positive(v, ptr));
      } else if (key == "grid_denominator") {
        o.grid_denominator = rd.positive(v, ptr);
      } else if (key == "denominator") {
        o.denominator = rd.positive(v, ptr);
      } else if (key == "max_size") {
        o.max_size = static_cast<std::size_t>(rd.positive(v, ptr));
      } else if (key == "box") {
        if (!v.is_array() || v.size() != 2) rd.error(ptr, "expected [lo, hi]");
        auto lo = rd.rational(v[0], ptr + "/0");
        auto hi = rd.rational(v[1], ptr + "/1");
        if (lo > hi) rd.error(ptr, "lo > hi");
        o.box = {lo, hi};
      } else if (key == "seeds" || key == "xi") {
        if (!v.is_array()) rd.error(ptr, "expected a list of points");
        auto& dst = key == "seeds" ? o.seeds : o.xi;
        for (std::size_t i = 0; i < v.size(); ++i)
          dst.push_back(rd.rat_vector(v[i], ptr + "/" + std::to_string(i), dim));
      } else {
        rd.error(ptr, "unknown option \"" + key + "\"");
      }
    }
  }
  return p;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProblemError(path, 0, 0, "", "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str(), path);
}

}  // namespace fscli
