#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>

#include "mvt/conditioning.hpp"
#include "mvt/error.hpp"
#include "mvt/io.hpp"
#include "mvt/suites.hpp"

namespace mvt::cli {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view token) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw Error(Errc::InvalidParams, "'" + std::string(token) + "' is not a number");
  }
  if (!std::isfinite(v)) throw Error(Errc::InvalidParams, "'" + std::string(token) + "' is not finite");
  return v;
}

std::size_t parse_index(std::string_view token) {
  token = trim(token);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw Error(Errc::InvalidParams, "'" + std::string(token) + "' is not an index");
  }
  return v;
}

void print_vector(std::ostream& out, const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << format_real(v[i]);
  out << '\n';
}

struct Args {
  std::string params;
  std::string point;
  std::string given;
  std::string keep;
  std::size_t n = 0;
  std::uint64_t seed = 42;
  std::string out;
  bool log = false;
  std::string suite;
  std::size_t instances = 200;
};

int cmd_pdf(const Args& a, std::ostream& out) {
  const MVTParams p = io::load_params(a.params);
  const std::vector<double> x = parse_reals(a.point);
  const double v = a.log ? log_pdf(p, x) : pdf(p, x);
  out << format_real(v) << '\n';
  return kOk;
}

int cmd_sample(const Args& a, std::ostream& err) {
  const MVTParams p = io::load_params(a.params);
  if (a.n < 1) throw Error(Errc::InvalidParams, "--n must be at least 1");
  std::ofstream file(a.out, std::ios::binary);
  if (!file) {
    err << "cannot open '" << a.out << "' for writing\n";
    return kUsage;
  }
  for (std::size_t i = 0; i < p.dim(); ++i) file << (i ? "," : "") << 'x' << i;
  file << '\n';
  RngStream rng(a.seed);
  for (std::size_t r = 0; r < a.n; ++r) print_vector(file, sample_one(p, rng));
  file.flush();
  if (!file) {
    err << "write to '" << a.out << "' failed\n";
    return kUsage;
  }
  return kOk;
}

Partition given_partition(const MVTParams& p, const Given& g) {
  if (g.indices.empty()) throw Error(Errc::InvalidPartition, "--given is empty");
  if (g.indices.size() >= p.dim()) throw Error(Errc::InvalidPartition, "--given names every coordinate");
  return Partition::observe(g.indices, p.dim());
}

int cmd_condition(const Args& a, std::ostream& out) {
  const MVTParams p = io::load_params(a.params);
  const Given g = parse_given(a.given, p.dim());
  const Partition part = given_partition(p, g);
  const Conditional c = condition(p, part, g.values);
  nlohmann::json doc{{"free", part.block2()}, {"conditional", io::to_json(c.spec)}, {"params", io::to_json(c.law)}};
  out << doc.dump(2) << '\n';
  return kOk;
}

int cmd_marginal(const Args& a, std::ostream& out) {
  const MVTParams p = io::load_params(a.params);
  const std::vector<std::size_t> keep = parse_indices(a.keep);
  if (keep.empty()) throw Error(Errc::InvalidPartition, "--keep is empty");
  out << io::to_json(marginal(p, Partition::observe(keep, p.dim()))).dump(2) << '\n';
  return kOk;
}

int cmd_residual(const Args& a, std::ostream& out) {
  const MVTParams p = io::load_params(a.params);
  const Given g = parse_given(a.given, p.dim());
  const Partition part = given_partition(p, g);
  print_vector(out, independence_residual(p, part, g.values, parse_reals(a.point)));
  return kOk;
}

int cmd_verify(const Args& a, std::ostream& out) {
  if (!verify::is_suite_name(a.suite)) throw Error(Errc::InvalidParams, "unknown suite '" + a.suite + "'");
  std::vector<MVTParams> laws;
  if (a.params.empty()) {
    laws = verify::builtin_battery();
  } else {
    laws.push_back(io::load_params(a.params));
  }
  verify::SuiteOptions opts;
  opts.seed = a.seed;
  if (a.n > 0) opts.mc_samples = a.n;
  opts.instances = a.instances;
  const nlohmann::json report = verify::run_suite(a.suite, laws, opts);
  out << report.dump(2) << '\n';
  return report.at("pass").get<bool>() ? kOk : kVerificationFailed;
}

}  // namespace

std::vector<double> parse_reals(std::string_view text) {
  if (trim(text).empty()) throw Error(Errc::InvalidParams, "empty list of numbers");
  std::vector<double> out;
  for (std::string_view tok : split(text, ',')) out.push_back(parse_real(tok));
  return out;
}

std::vector<std::size_t> parse_indices(std::string_view text) {
  if (trim(text).empty()) return {};
  std::vector<std::size_t> out;
  for (std::string_view tok : split(text, ',')) out.push_back(parse_index(tok));
  return out;
}

Given parse_given(std::string_view text, std::size_t dim) {
  Given g;
  if (trim(text).empty()) return g;
  std::vector<bool> seen(dim, false);
  for (std::string_view tok : split(text, ',')) {
    const auto colon = tok.find(':');
    if (colon == std::string_view::npos) {
      throw Error(Errc::InvalidParams, "'" + std::string(tok) + "' is not index:value");
    }
    const std::size_t idx = parse_index(tok.substr(0, colon));
    if (idx >= dim) {
      throw Error(Errc::InvalidPartition, "index " + std::to_string(idx) + " out of range for dimension " +
                                              std::to_string(dim));
    }
    if (seen[idx]) throw Error(Errc::InvalidPartition, "index " + std::to_string(idx) + " given twice");
    seen[idx] = true;
    g.indices.push_back(idx);
    g.values.push_back(parse_real(tok.substr(colon + 1)));
  }
  return g;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color) {
  CLI::App app{"Multivariate t toolkit: densities, sampling, marginals, conditionals and self-verification", "mvt"};
  app.require_subcommand(1);
  Args a;

  auto* pdf_cmd = app.add_subcommand("pdf", "Evaluate the density at a point");
  pdf_cmd->add_option("--params", a.params, "Parameter JSON file")->required();
  pdf_cmd->add_option("--point", a.point, "Comma-separated coordinates")->required();
  pdf_cmd->add_flag("--log", a.log, "Print the log-density");

  auto* sample_cmd = app.add_subcommand("sample", "Write draws to a CSV file");
  sample_cmd->add_option("--params", a.params, "Parameter JSON file")->required();
  sample_cmd->add_option("--n", a.n, "Number of draws")->required();
  sample_cmd->add_option("--seed", a.seed, "Random seed");
  sample_cmd->add_option("--out", a.out, "Output CSV path")->required();

  auto* marginal_cmd = app.add_subcommand("marginal", "Print the marginal law of some coordinates");
  marginal_cmd->add_option("--params", a.params, "Parameter JSON file")->required();
  marginal_cmd->add_option("--keep", a.keep, "Comma-separated indices to keep, in output order")->required();

  auto* condition_cmd = app.add_subcommand("condition", "Print the conditional law given observed coordinates");
  condition_cmd->add_option("--params", a.params, "Parameter JSON file")->required();
  condition_cmd->add_option("--given", a.given, "Observed coordinates as idx:value,...")->required();

  auto* residual_cmd = app.add_subcommand("residual", "Print the scaled residual of the free coordinates");
  residual_cmd->add_option("--params", a.params, "Parameter JSON file")->required();
  residual_cmd->add_option("--given", a.given, "Observed coordinates as idx:value,...")->required();
  residual_cmd->add_option("--point", a.point, "Values of the free coordinates, increasing index order")
      ->required();

  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite and print a JSON report");
  verify_cmd->add_option("--suite", a.suite, "chain-rule, eq4-proportionality, quadrature, sampling-gof, "
                                             "independence, moments or all")
      ->required();
  verify_cmd->add_option("--params", a.params, "Parameter JSON file (default: built-in battery)");
  verify_cmd->add_option("--seed", a.seed, "Random seed");
  verify_cmd->add_option("--n", a.n, "Draws per Monte Carlo check");
  verify_cmd->add_option("--instances", a.instances, "Randomized instances per deterministic suite");

  const std::string prefix = color ? "\033[31merror:\033[0m " : "error: ";
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << prefix << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*pdf_cmd) return cmd_pdf(a, out);
    if (*sample_cmd) return cmd_sample(a, err);
    if (*marginal_cmd) return cmd_marginal(a, out);
    if (*condition_cmd) return cmd_condition(a, out);
    if (*residual_cmd) return cmd_residual(a, out);
    if (*verify_cmd) return cmd_verify(a, out);
  } catch (const Error& e) {
    err << prefix << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << prefix << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace mvt::cli
