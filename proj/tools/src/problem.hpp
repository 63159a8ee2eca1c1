#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fspec/tower.hpp"
#include "fspec/types.hpp"

namespace fscli {

/// Problem-file diagnostic with a 1-based source position.
class ProblemError : public std::runtime_error {
 public:
  ProblemError(const std::string& file, std::size_t line, std::size_t column,
               const std::string& pointer, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& pointer() const noexcept { return pointer_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string pointer_;
  std::string message_;
};

struct ProblemOptions {
  std::optional<double> tol;
  std::optional<int> depth;
  std::optional<int> kmax;
  std::optional<double> eps0;
  std::optional<double> delta0;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cap;
  std::optional<int> stages;
  std::optional<int> samples;
  std::optional<int> iterations;
  std::optional<int> entry_bound;
  std::optional<std::int64_t> grid_denominator;
  std::optional<std::int64_t> denominator;
  std::optional<std::size_t> max_size;
  std::optional<std::pair<fspec::Rational, fspec::Rational>> box;
  std::vector<fspec::RatVec> seeds;
  std::vector<fspec::RatVec> xi;
};

struct ProblemFile {
  std::string path;
  std::optional<fspec::IntMatrix> r;
  std::optional<std::vector<fspec::IntVec>> b;
  std::optional<std::vector<fspec::IntVec>> l;
  std::vector<fspec::TowerSpec> tower;
  ProblemOptions options;
  nlohmann::ordered_json raw;

  /// 1-based position of the value at a JSON pointer (or of its closest parent).
  std::pair<std::size_t, std::size_t> position(const std::string& pointer) const;

  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> positions;
};

ProblemFile parse_problem(std::string_view text, const std::string& path);
ProblemFile load_problem(const std::string& path);

/// "p/q" or an integer; throws std::invalid_argument.
fspec::Rational parse_rational(const std::string& s);

}  // namespace fscli
