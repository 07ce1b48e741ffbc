#include "sgcca/errors.hpp"
#include "sgcca/types.hpp"

namespace sgcca {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InfeasibleBudget: return "infeasible-budget";
    case ErrorCode::DegenerateInput: return "degenerate-input";
    case ErrorCode::BranchConditionViolated: return "branch-condition-violated";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::DegenerateColumn: return "degenerate-column";
    case ErrorCode::UnsupportedScheme: return "unsupported-scheme";
    case ErrorCode::UnknownDesign: return "unknown-design";
    case ErrorCode::EmptyGrid: return "empty-grid";
    case ErrorCode::ParseError: return "parse-error";
    case ErrorCode::IoError: return "io-error";
    case ErrorCode::ConfigError: return "config-error";
  }
  return "unknown-error";
}

std::string_view variant_name(Variant variant) {
  switch (variant) {
    case Variant::P1: return "p1";
    case Variant::P2: return "p2";
    case Variant::P3: return "p3";
  }
  return "p?";
}

Variant variant_from_name(std::string_view name) {
  if (name == "p1" || name == "P1") return Variant::P1;
  if (name == "p2" || name == "P2") return Variant::P2;
  if (name == "p3" || name == "P3") return Variant::P3;
  raise(ErrorCode::InvalidArgument,
        "unknown constraint variant '" + std::string(name) + "' (expected p1, p2 or p3)");
}

}  // namespace sgcca
