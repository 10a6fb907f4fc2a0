#include "thermogeo/error.hpp"

namespace thermogeo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::StencilOutOfBounds: return "StencilOutOfBounds";
    case ErrorKind::ChartMismatch: return "ChartMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DegenerateFrame: return "DegenerateFrame";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::OriginInDomain: return "OriginInDomain";
    case ErrorKind::NonMonotoneTemperature: return "NonMonotoneTemperature";
    case ErrorKind::DegenerateCone: return "DegenerateCone";
    case ErrorKind::NotEmbeddable: return "NotEmbeddable";
    case ErrorKind::ShootingDivergence: return "ShootingDivergence";
    case ErrorKind::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorKind::SingularF: return "SingularF";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::NonDifferentiable: return "NonDifferentiable";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Error";
}

}  // namespace thermogeo
