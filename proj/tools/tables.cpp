#include "tables.hpp"

#include <algorithm>
#include <chrono>

#include "cfdim/error.hpp"

namespace cfdim::cli {
namespace {

using S = Strategy;

const std::vector<TableRow> kTable1 = {
    {1, "odd", "ap:1,2", S::Strategy2, 1000000, 200, 0.821160, 0.821177},
    {1, "even", "ap:2,2", S::Strategy2, 1000000, 200, 0.71936, 0.71950},
    {1, "1mod3", "ap:1,3", S::Strategy2, 1000000, 200, 0.743520, 0.743586},
    {1, "2mod3", "ap:2,3", S::Strategy2, 2000000, 200, 0.66490, 0.66546},
    {1, "0mod3", "ap:3,3", S::Strategy2, 2000000, 200, 0.63956, 0.64073},
    {1, "prime", "primes", S::Strategy1, 26000000, 100, 0.67507, 0.67519},
    {1, "square", "squares", S::Strategy2, 100000, 5000, 0.59825575, 0.59825579},
    {1, "power2", "powers:2", S::Strategy1, 60, 6000, 0.4720715327, 0.4720715331},
    {1, "power3", "powers:3", S::Strategy1, 50, 6000, 0.3105296859, 0.3105296860},
    {1, "lac", "lacunary:2", S::Strategy1, 12, 5000, 0.2362689121, 0.2362689123},
};

const std::vector<TableRow> kTable2 = {
    {2, "odd", "ap:1,2", S::Strategy1, 10000000, 100, 0.821160, 0.821223},
    {2, "even", "ap:2,2", S::Strategy1, 10000000, 100, 0.71936, 0.72001},
    {2, "1mod3", "ap:1,3", S::Strategy1, 10000000, 100, 0.74352, 0.74398},
    {2, "2mod3", "ap:2,3", S::Strategy1, 10000000, 100, 0.66490, 0.66795},
    {2, "0mod3", "ap:3,3", S::Strategy1, 10000000, 100, 0.63956, 0.64916},
    {2, "prime", "primes", S::Strategy1, 26000000, 100, 0.67507, 0.67519},
    {2, "square", "squares", S::Strategy1, 100000, 1000, 0.59825568, 0.59825603},
    {2, "power2+", "powers+:2", S::Strategy1, 60, 6000, 0.7339041186, 0.7339041234},
    {2, "power2", "powers:2", S::Strategy1, 60, 6000, 0.4720715327, 0.4720715331},
    {2, "power3+", "powers+:3", S::Strategy1, 50, 6000, 0.5627284510, 0.5627284539},
    {2, "power3", "powers:3", S::Strategy1, 50, 6000, 0.3105296859, 0.3105296860},
    {2, "lac", "lacunary:2", S::Strategy1, 12, 5000, 0.2362689121, 0.2362689123},
};

const std::vector<TableRow> kTable3 = {
    {3, "odd", "ap:1,2", S::Strategy2, 1000000, 200, 0.821143, 0.821177},
    {3, "even", "ap:2,2", S::Strategy2, 1000000, 200, 0.719109, 0.719498},
    {3, "1mod3", "ap:1,3", S::Strategy2, 1000000, 200, 0.743404, 0.743586},
    {3, "2mod3", "ap:2,3", S::Strategy2, 2000000, 200, 0.664488, 0.665462},
    {3, "0mod3", "ap:3,3", S::Strategy2, 2000000, 200, 0.638856, 0.640725},
    {3, "prime", "primes", S::Strategy2, 5700000, 200, 0.675044, 0.675228},
    {3, "square", "squares", S::Strategy2, 100000, 5000, 0.59825575, 0.59825579},
    {3, "power2+", "powers+:2", S::Strategy2, 50, 1000, 0.73390397, 0.73390415},
    {3, "power2", "powers:2", S::Strategy2, 50, 1000, 0.472071525, 0.472071536},
    {3, "power3+", "powers+:3", S::Strategy2, 40, 1000, 0.56272836, 0.56272847},
    {3, "power3", "powers:3", S::Strategy2, 40, 1000, 0.310529684, 0.310529686},
    {3, "lac", "lacunary:2", S::Strategy2, 10, 1000, 0.236268909, 0.236268937},
};

}  // namespace

const std::vector<TableRow>& table_rows(int table) {
  switch (table) {
    case 1: return kTable1;
    case 2: return kTable2;
    case 3: return kTable3;
    default: throw ParameterError("table must be 1, 2 or 3");
  }
}

std::size_t letters_for(const TableRow& row) {
  const std::string& n = row.name;
  if (n == "odd" || n == "1mod3" || n == "2mod3" || n == "0mod3" || n.back() == '+') return row.paper_M + 1;
  if (n == "prime") return row.paper_M - 1;
  return row.paper_M;
}

RowResult run_row(const TableRow& row, const ScaleCaps& caps, unsigned workers) {
  RowResult r;
  r.row = row;
  r.M = letters_for(row);
  r.N = row.N;
  if (!caps.full) {
    r.M = std::min(r.M, caps.max_letters);
    r.N = std::min(r.N, caps.max_N);
  }
  r.tol = std::max(row.width() / 4, 1e-11);
  auto start = std::chrono::steady_clock::now();
  try {
    Alphabet a = Alphabet::parse(row.alphabet);
    BisectionOptions bo;
    bo.tol = r.tol;
    bo.workers = workers;
    r.cert = certify_dimension(a, r.M, r.N, row.strategy, bo);
    const bool meets = r.cert->h_lo <= row.hi && row.lo <= r.cert->h_hi;
    const bool narrow = !caps.full || r.cert->width() <= 3 * row.width();
    r.status = meets && narrow ? "PASS" : "FAIL";
    if (!meets) r.detail = "enclosure misses the printed interval";
    else if (!narrow) r.detail = "enclosure wider than 3x the printed width";
  } catch (const Error& e) {
    r.status = "ERROR";
    r.detail = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace cfdim::cli
