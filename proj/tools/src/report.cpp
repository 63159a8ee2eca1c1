#include "report.hpp"

namespace fscli {

int exit_code_for(fspec::ErrorKind kind) noexcept {
  switch (kind) {
    case fspec::ErrorKind::InvalidArgument:
    case fspec::ErrorKind::DimensionMismatch:
      return kExitValidation;
    case fspec::ErrorKind::Precondition:
      return kExitPrecondition;
    case fspec::ErrorKind::CapExceeded:
    case fspec::ErrorKind::ToleranceUnreachable:
    case fspec::ErrorKind::ConstructionFailed:
    case fspec::ErrorKind::Overflow:
      return kExitComputation;
  }
  return kExitComputation;
}

Report::Report(const std::string& command) {
  doc_["schema"] = kReportSchema;
  doc_["command"] = command;
  doc_["inputs"] = json::object();
  doc_["verdicts"] = json::object();
  doc_["results"] = json::object();
  doc_["notes"] = json::array();
  doc_["errors"] = json::array();
}

void Report::verdict(const std::string& name, json value) { doc_["verdicts"][name] = std::move(value); }

void Report::exact(const std::string& name, json value) {
  doc_["results"][name] = json{{"value", std::move(value)}, {"provenance", "exact"}};
}

void Report::numeric(const std::string& name, json value, double tolerance) {
  doc_["results"][name] =
      json{{"value", std::move(value)}, {"provenance", "numeric"}, {"tolerance", tolerance}};
}

void Report::note(const std::string& text) { doc_["notes"].push_back(text); }

void Report::error(const std::string& kind, const std::string& message, int code, json detail) {
  json e{{"kind", kind}, {"message", message}, {"exit_code", code}};
  if (!detail.is_null()) e["detail"] = std::move(detail);
  doc_["errors"].push_back(std::move(e));
  if (code_ == kExitOk) code_ = code;
}

void Report::timing(const std::string& phase, double seconds) { doc_["timing"][phase] = seconds; }

std::string Report::dump() const { return doc_.dump(2) + "\n"; }

std::string to_text(const fspec::Rational& q) { return q.get_str(); }

json to_json(const fspec::IntVec& v) {
  json a = json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

json to_json(const fspec::RatVec& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_text(x));
  return a;
}

json to_json(const fspec::IntMatrix& m) {
  json a = json::array();
  for (const auto& row : m.to_rows()) a.push_back(to_json(fspec::IntVec(row)));
  return a;
}

json to_json(const fspec::RatMatrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_text(m(i, j)));
    a.push_back(std::move(row));
  }
  return a;
}

json to_json(const fspec::Box& b) {
  json a = json::array();
  for (const auto& iv : b.axes) a.push_back(json::array({to_text(iv.lo), to_text(iv.hi)}));
  return a;
}

json to_json(const std::vector<fspec::IntVec>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

json to_json(const std::vector<fspec::RatVec>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

}  // namespace fscli
