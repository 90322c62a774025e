#ifndef MVT_TOOLS_CLI_HPP
#define MVT_TOOLS_CLI_HPP

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mvt::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
};

/// "1.5,-2,3e-1" -> {1.5, -2, 0.3}. Throws Error{InvalidParams}.
std::vector<double> parse_reals(std::string_view text);
/// "2,0,1" -> {2, 0, 1}. Throws Error{InvalidParams}.
std::vector<std::size_t> parse_indices(std::string_view text);

struct Given {
  std::vector<std::size_t> indices;
  std::vector<double> values;
};

/// "0:2.0,3:-1.5". Indices must be distinct and below dim, values finite.
Given parse_given(std::string_view text, std::size_t dim);

/// printf("%.17g").
std::string format_real(double v);

/// Entry point shared by the executable and the tests. argv[0] is the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color = false);

}  // namespace mvt::cli

#endif  // MVT_TOOLS_CLI_HPP
