#include "mpineq/error.hpp"

namespace mpineq {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::dimension_mismatch: return "dimension mismatch";
    case ErrorKind::non_finite: return "non-finite entry";
    case ErrorKind::non_positive_mass: return "non-positive mass";
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::zero_weight_mass: return "zero weight mass";
    case ErrorKind::non_constant_columns: return "non-constant column integrals";
    case ErrorKind::domain: return "outside domain";
    case ErrorKind::boundary_mean: return "mean on domain boundary";
    case ErrorKind::shape: return "shape";
    case ErrorKind::non_uniform: return "non-uniform";
    case ErrorKind::isolated_vertex: return "isolated vertex";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

}  // namespace mpineq
