#include "record.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>

#include "cfdim/error.hpp"

namespace cfdim::cli {

json encode(double x) {
  char hex[64], dec[64];
  std::snprintf(hex, sizeof hex, "%a", x);
  std::snprintf(dec, sizeof dec, "%.17g", x);
  return json{{"hex", hex}, {"dec", dec}};
}

double decode(const json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.contains("hex") ? j.at("hex").get<std::string>() : j.at("dec").get<std::string>();
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw ConfigError("bad number '" + s + "' in record");
  return v;
}

json encode(const RInterval& x) { return json{{"lo", encode(x.lo())}, {"hi", encode(x.hi())}}; }

RInterval decode_interval(const json& j) { return RInterval(decode(j.at("lo")), decode(j.at("hi"))); }

json to_json(const DimensionCertificate& c) {
  json steps = json::array();
  for (const auto& s : c.log) {
    steps.push_back({{"t", encode(s.t)},
                     {"matrix", std::string(1, s.matrix)},
                     {"certified", s.certified},
                     {"radius", encode(s.radius)},
                     {"iterations", s.iterations}});
  }
  return json{{"alphabet", c.alphabet},
              {"h_lo", encode(c.h_lo)},
              {"h_hi", encode(c.h_hi)},
              {"width", encode(c.width())},
              {"strategy", strategy_name(c.strategy)},
              {"M", c.M},
              {"N", c.N},
              {"tol", encode(c.tol)},
              {"gap", encode(c.gap)},
              {"corr", encode(c.corr)},
              {"max_err", encode(c.max_err)},
              {"converged", c.converged},
              {"log", steps}};
}

DimensionCertificate certificate_from_json(const json& j) {
  DimensionCertificate c;
  c.alphabet = j.at("alphabet").get<std::string>();
  c.h_lo = decode(j.at("h_lo"));
  c.h_hi = decode(j.at("h_hi"));
  c.strategy = parse_strategy(j.at("strategy").get<std::string>());
  c.M = j.at("M").get<std::size_t>();
  c.N = j.at("N").get<std::size_t>();
  c.tol = decode(j.at("tol"));
  c.gap = decode_interval(j.at("gap"));
  c.corr = decode_interval(j.at("corr"));
  c.max_err = decode(j.at("max_err"));
  c.converged = j.at("converged").get<bool>();
  for (const auto& s : j.at("log")) {
    BisectionStep st;
    st.t = decode(s.at("t"));
    st.matrix = s.at("matrix").get<std::string>().at(0);
    st.certified = s.at("certified").get<bool>();
    st.radius = decode(s.at("radius"));
    st.iterations = s.at("iterations").get<std::size_t>();
    c.log.push_back(st);
  }
  if (!(c.h_lo <= c.h_hi)) throw ConfigError("certificate has h_lo > h_hi");
  return c;
}

json to_json(const SpectrumReport& r) {
  json intervals = json::array();
  for (const auto& iv : r.full_intervals) {
    json o{{"lo", encode(iv.lo)},
           {"hi", encode(iv.hi)},
           {"hi_open", iv.hi_open},
           {"extends_to_dim", iv.extends_to_dim},
           {"criterion", iv.criterion},
           {"assumptions", iv.assumptions}};
    if (iv.condition) {
      const auto& c = *iv.condition;
      o["condition"] = {{"criterion", criterion_name(c.criterion)},
                        {"s", encode(c.s)},
                        {"k0", c.k0},
                        {"k_analytic", c.k_analytic},
                        {"g_analytic", encode(c.g_analytic)},
                        {"threshold", encode(c.threshold)}};
    }
    if (iv.segment) o["segment"] = to_json(*iv.segment);
    if (iv.root) o["root"] = encode(*iv.root);
    intervals.push_back(o);
  }
  json windows = json::array();
  for (const auto& w : r.nowhere_dense_windows) {
    json o{{"lo", encode(w.lo)}, {"hi", encode(w.hi)}, {"criterion", w.criterion}, {"pieces", w.pieces}};
    if (w.derivative_bound) o["derivative_bound"] = encode(*w.derivative_bound);
    windows.push_back(o);
  }
  json merged = json::array();
  for (const auto& [lo, hi] : r.merged) merged.push_back({encode(lo), encode(hi)});
  return json{{"alphabet", r.alphabet},
              {"dim", to_json(r.dim)},
              {"full_spectrum", r.full_spectrum},
              {"merged", merged},
              {"full_intervals", intervals},
              {"nowhere_dense_windows", windows},
              {"external_facts_used", r.external_facts_used},
              {"log", r.log}};
}

json RunRecord::to_json() const {
  return json{{"schema", kSchema},
              {"tool_version", kToolVersion},
              {"command", command},
              {"alphabet", alphabet},
              {"parameters", parameters},
              {"payload", payload},
              {"wall_seconds", wall_seconds},
              {"timing", timing},
              {"timestamp", timestamp}};
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace cfdim::cli
