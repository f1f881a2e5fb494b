#pragma once

#include <string>

#include <json.hpp>

#include "cfdim/spectral.hpp"
#include "cfdim/spectrum.hpp"

namespace cfdim::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "cfdim.run/1";
inline constexpr const char* kToolVersion = "0.1.0";

// {"hex": "%a", "dec": "%.17g"}; reading prefers the hex form.
json encode(double x);
double decode(const json& j);
json encode(const RInterval& x);
RInterval decode_interval(const json& j);

json to_json(const DimensionCertificate& c);
DimensionCertificate certificate_from_json(const json& j);
json to_json(const SpectrumReport& r);

// Envelope around a deterministic payload. Only wall_seconds, timing and
// timestamp vary between identical runs.
struct RunRecord {
  std::string command;
  std::string alphabet;
  json parameters = json::object();
  json payload = json::object();
  double wall_seconds = 0.0;
  json timing = json::object();  // per-row seconds etc, kept out of the payload
  std::string timestamp;

  json to_json() const;
};

std::string utc_timestamp();

}  // namespace cfdim::cli
