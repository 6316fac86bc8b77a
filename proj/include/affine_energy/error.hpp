#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace affine_energy {

enum class ErrorCode {
  zero_inverse,
  parse_error,
  zero_denominator,
  not_in_field,
  invalid_field,
  zero_slope,
  field_mismatch,
  oracle_cap_exceeded,
  zero_c,
  too_few_points,
  line_meets_points,
  equal_lines,
  point_on_y_axis,
  too_few_lines,
  invalid_spec,
  cannot_fill,
  singular_map,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::zero_inverse: return "ZeroInverse";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::zero_denominator: return "ZeroDenominator";
    case ErrorCode::not_in_field: return "NotInField";
    case ErrorCode::invalid_field: return "InvalidField";
    case ErrorCode::zero_slope: return "SlopeZero";
    case ErrorCode::field_mismatch: return "FieldMismatch";
    case ErrorCode::oracle_cap_exceeded: return "OracleCapExceeded";
    case ErrorCode::zero_c: return "ZeroC";
    case ErrorCode::too_few_points: return "TooFewPoints";
    case ErrorCode::line_meets_points: return "LineMeetsP";
    case ErrorCode::equal_lines: return "EqualLines";
    case ErrorCode::point_on_y_axis: return "PointOnYAxis";
    case ErrorCode::too_few_lines: return "TooFewLines";
    case ErrorCode::invalid_spec: return "InvalidSpec";
    case ErrorCode::cannot_fill: return "CannotFill";
    case ErrorCode::singular_map: return "SingularMap";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace affine_energy
