#include "mvt/error.hpp"

namespace mvt {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonPositiveSupport: return "NonPositiveSupport";
    case Errc::InvalidPartition: return "InvalidPartition";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::InvalidDof: return "InvalidDof";
    case Errc::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case Errc::EmptySample: return "EmptySample";
    case Errc::DofTooSmall: return "DofTooSmall";
  }
  return "Unknown";
}

}  // namespace mvt
