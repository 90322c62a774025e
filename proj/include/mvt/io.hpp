#ifndef MVT_IO_HPP
#define MVT_IO_HPP

#include <filesystem>
#include <json.hpp>

#include "mvt/conditioning.hpp"
#include "mvt/distribution.hpp"
#include "mvt/verification.hpp"

namespace mvt::io {

/// Parses {"mu": [...], "sigma": [[...], ...], "nu": 5.0}. Failures throw
/// Error whose message starts with the offending key.
MVTParams params_from_json(const nlohmann::json& doc);
/// Reads and parses a parameter file; unreadable or malformed JSON throws
/// Error{InvalidParams}.
MVTParams load_params(const std::filesystem::path& path);

nlohmann::json to_json(const MVTParams& p);
nlohmann::json to_json(const ConditionalSpec& s);
nlohmann::json to_json(const verify::GofReport& r);

}  // namespace mvt::io

#endif  // MVT_IO_HPP
