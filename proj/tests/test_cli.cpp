#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "cfdim/spectral.hpp"
#include "record.hpp"
#include "tables.hpp"

using namespace cfdim;
using namespace cfdim::cli;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("doubles round-trip through the record encoding") {
  std::mt19937_64 rng(1);
  std::vector<double> xs = {0.0, -0.0, 1.0, 1.0 / 3, 0.472071525, std::numeric_limits<double>::denorm_min(),
                            std::numeric_limits<double>::max(), -std::numeric_limits<double>::min()};
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t bits = rng();
    double x;
    std::memcpy(&x, &bits, sizeof x);
    if (std::isfinite(x)) xs.push_back(x);
  }
  for (double x : xs) {
    json j = encode(x);
    CHECK(same_bits(decode(j), x));
    CHECK(same_bits(decode(json::parse(j.dump())), x));
    CHECK(same_bits(std::strtod(j.at("dec").get<std::string>().c_str(), nullptr), x));
  }
}

TEST_CASE("certificates round-trip and serialize deterministically") {
  BisectionOptions bo;
  bo.tol = 1e-6;
  DimensionCertificate c = certify_dimension(Alphabet::parse("explicit:2,3,4"), 0, 300, Strategy::Finite, bo);
  json j = to_json(c);
  DimensionCertificate back = certificate_from_json(json::parse(j.dump()));
  CHECK(back.alphabet == c.alphabet);
  CHECK(same_bits(back.h_lo, c.h_lo));
  CHECK(same_bits(back.h_hi, c.h_hi));
  CHECK(back.log.size() == c.log.size());
  CHECK(to_json(back).dump() == j.dump());

  DimensionCertificate again = certify_dimension(Alphabet::parse("explicit:2,3,4"), 0, 300, Strategy::Finite, bo);
  CHECK(to_json(again).dump() == j.dump());
}

TEST_CASE("run record envelope") {
  RunRecord r;
  r.command = "dim";
  r.alphabet = "explicit:1,4";
  r.timestamp = utc_timestamp();
  json j = r.to_json();
  CHECK(j.at("schema") == "cfdim.run/1");
  CHECK(j.at("tool_version") == kToolVersion);
  CHECK(j.at("timestamp").get<std::string>().size() == 20);
}

TEST_CASE("table rows and letter counts") {
  CHECK(table_rows(1).size() == 10);
  CHECK(table_rows(2).size() == 12);
  CHECK(table_rows(3).size() == 12);
  CHECK_THROWS(table_rows(4));
  for (const auto& row : table_rows(2)) {
    if (row.name == "odd") CHECK(letters_for(row) == 10000001);
    if (row.name == "prime") CHECK(letters_for(row) == 25999999);
    if (row.name == "power2+") CHECK(letters_for(row) == 61);
    if (row.name == "power2") CHECK(letters_for(row) == 60);
    if (row.name == "even") CHECK(letters_for(row) == 10000000);
    CHECK(row.lo < row.hi);
  }
}

TEST_CASE("table 3 lacunary row reproduces") {
  for (const auto& row : table_rows(3)) {
    if (row.name != "lac") continue;
    RowResult r = run_row(row, ScaleCaps{}, 0);
    CHECK(r.status == "PASS");
    REQUIRE(r.cert);
    CHECK(r.cert->h_lo <= 0.236268937);
    CHECK(r.cert->h_hi >= 0.236268909);
  }
}

TEST_CASE("desk caps") {
  for (const auto& row : table_rows(2)) {
    if (row.name != "square") continue;
    ScaleCaps caps;
    caps.max_letters = 10000;
    caps.max_N = 300;
    RowResult r = run_row(row, caps, 0);
    CHECK(r.M == 10000);
    CHECK(r.N == 300);
    CHECK(r.status == "PASS");
  }
}
