#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fspec/dynamics.hpp"
#include "fspec/error.hpp"
#include "fspec/types.hpp"

namespace fscli {

using json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "fractal-spectra/report/v1";

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitValidation = 2,
  kExitPrecondition = 3,
  kExitComputation = 4,
};

int exit_code_for(fspec::ErrorKind kind) noexcept;

class Report {
 public:
  explicit Report(const std::string& command);

  json& inputs() { return doc_["inputs"]; }
  void verdict(const std::string& name, json value);
  void exact(const std::string& name, json value);
  void numeric(const std::string& name, json value, double tolerance);
  void note(const std::string& text);
  void error(const std::string& kind, const std::string& message, int code, json detail = nullptr);
  void timing(const std::string& phase, double seconds);

  int exit_code() const noexcept { return code_; }
  bool has_errors() const { return !doc_["errors"].empty(); }
  const json& document() const noexcept { return doc_; }
  std::string dump() const;

 private:
  json doc_;
  int code_ = kExitOk;
};

std::string to_text(const fspec::Rational& q);
json to_json(const fspec::IntVec& v);
json to_json(const fspec::RatVec& v);
json to_json(const fspec::IntMatrix& m);
json to_json(const fspec::RatMatrix& m);
json to_json(const fspec::Box& b);
json to_json(const std::vector<fspec::IntVec>& vs);
json to_json(const std::vector<fspec::RatVec>& vs);

}  // namespace fscli
