#include "isslab/errors.hpp"

namespace isslab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::nonpositive_diffusion: return "NonpositiveDiffusion";
    case ErrorCode::nonfinite_coefficient: return "NonfiniteCoefficient";
    case ErrorCode::invalid_robin_parameter: return "InvalidRobinParameter";
    case ErrorCode::negative_boundary_functional: return "NegativeBoundaryFunctional";
    case ErrorCode::invalid_weight: return "InvalidWeight";
    case ErrorCode::infeasible_certificate: return "InfeasibleCertificate";
    case ErrorCode::nonmonotone_time: return "NonmonotoneTime";
    case ErrorCode::degenerate_denominator: return "DegenerateDenominator";
    case ErrorCode::invalid_zeta: return "InvalidZeta";
    case ErrorCode::singular_boundary_solve: return "SingularBoundarySolve";
    case ErrorCode::blow_up: return "BlowUp";
    case ErrorCode::step_budget_exceeded: return "StepBudgetExceeded";
    case ErrorCode::table_domain_exceeded: return "TableDomainExceeded";
    case ErrorCode::scenario_error: return "ScenarioError";
  }
  return "Unknown";
}

}  // namespace isslab
