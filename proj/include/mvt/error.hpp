#ifndef MVT_ERROR_HPP
#define MVT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace mvt {

enum class Errc {
  NotPositiveDefinite,
  NotSymmetric,
  DimensionMismatch,
  NonPositiveSupport,
  InvalidPartition,
  InvalidParams,
  InvalidDof,
  QuadratureNonConvergence,
  EmptySample,
  DofTooSmall,
};

std::string_view to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above; the
// message adds the offending detail.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mvt

#endif  // MVT_ERROR_HPP
