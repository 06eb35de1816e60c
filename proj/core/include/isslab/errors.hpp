#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace isslab {

enum class ErrorCode {
  invalid_argument,
  nonpositive_diffusion,
  nonfinite_coefficient,
  invalid_robin_parameter,
  negative_boundary_functional,
  invalid_weight,
  infeasible_certificate,
  nonmonotone_time,
  degenerate_denominator,
  invalid_zeta,
  singular_boundary_solve,
  blow_up,
  step_budget_exceeded,
  table_domain_exceeded,
  scenario_error,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace isslab
