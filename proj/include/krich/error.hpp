#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace krich {

enum class ErrorCode {
    parse,
    invalid_argument,
    invalid_field,
    field_mismatch,
    division_by_zero,
    dimension_mismatch,
    composition_nonzero,
    non_unit,
    newton_degenerate,
    ansatz_inconsistent,
    precision_exhausted,
    not_stabilized,
    window_too_small,
    infinite_cohomology,
    infinite_index,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::parse: return "parse";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::invalid_field: return "invalid_field";
    case ErrorCode::field_mismatch: return "field_mismatch";
    case ErrorCode::division_by_zero: return "division_by_zero";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::composition_nonzero: return "composition_nonzero";
    case ErrorCode::non_unit: return "non_unit";
    case ErrorCode::newton_degenerate: return "newton_degenerate";
    case ErrorCode::ansatz_inconsistent: return "ansatz_inconsistent";
    case ErrorCode::precision_exhausted: return "precision_exhausted";
    case ErrorCode::not_stabilized: return "not_stabilized";
    case ErrorCode::window_too_small: return "window_too_small";
    case ErrorCode::infinite_cohomology: return "infinite_cohomology";
    case ErrorCode::infinite_index: return "infinite_index";
    }
    return "unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto a stable exit status and a machine-readable object.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

} // namespace krich
