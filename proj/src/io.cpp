#include "mvt/io.hpp"

#include <fstream>
#include <string>

#include "mvt/error.hpp"

namespace mvt::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw Error(Errc::InvalidParams, key + ": " + what);
}

double finite_number(const json& v, const std::string& key) {
  if (!v.is_number()) fail(key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(key, "not finite");
  return d;
}

Vector number_array(const json& v, const std::string& key) {
  if (!v.is_array()) fail(key, "expected an array of numbers");
  Vector out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(finite_number(v[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

json matrix_json(const Matrix& m) { return json(m.to_rows()); }

}  // namespace

MVTParams params_from_json(const json& doc) {
  if (!doc.is_object()) fail("document", "expected a JSON object");
  for (const char* key : {"mu", "sigma", "nu"}) {
    if (!doc.contains(key)) fail(key, "missing");
  }
  Vector mu = number_array(doc["mu"], "mu");
  if (mu.empty()) fail("mu", "must have at least one entry");

  const json& s = doc["sigma"];
  if (!s.is_array()) fail("sigma", "expected an array of rows");
  if (s.size() != mu.size()) {
    fail("sigma", "has " + std::to_string(s.size()) + " rows, mu has length " + std::to_string(mu.size()));
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::string key = "sigma[" + std::to_string(i) + "]";
    rows.push_back(number_array(s[i], key));
    if (rows.back().size() != mu.size()) {
      fail(key, "has length " + std::to_string(rows.back().size()) + ", expected " + std::to_string(mu.size()));
    }
  }

  const double nu = finite_number(doc["nu"], "nu");
  if (!(nu > 0.0)) fail("nu", "must be positive");

  try {
    return MVTParams(std::move(mu), Matrix::from_rows(rows), nu);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("sigma: ") + e.what());
  }
}

MVTParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(path.string(), "cannot open");
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) fail(path.string(), "not valid JSON");
  return params_from_json(doc);
}

json to_json(const MVTParams& p) {
  return json{{"mu", p.mu()}, {"sigma", matrix_json(p.sigma())}, {"nu", p.nu()}};
}

json to_json(const ConditionalSpec& s) {
  return json{{"location", s.location},
              {"base_scale", matrix_json(s.base_scale)},
              {"inflation", s.inflation},
              {"dof", s.dof},
              {"d1", s.d1}};
}

json to_json(const verify::GofReport& r) {
  return json{{"statistic", r.statistic}, {"threshold", r.threshold}, {"n", r.n}, {"pass", r.pass}, {"seed", r.seed}};
}

}  // namespace mvt::io
