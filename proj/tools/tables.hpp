#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cfdim/spectral.hpp"

namespace cfdim::cli {

// One printed row of a published dimension table. paper_M is the table's M
// column; the number of letters it stands for depends on the family, see
// letters_for().
struct TableRow {
  int table = 0;
  std::string name;
  std::string alphabet;
  Strategy strategy = Strategy::Strategy1;
  std::size_t paper_M = 0;
  std::size_t N = 0;
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
};

const std::vector<TableRow>& table_rows(int table);

// The tables count odd/mod-3/power+ subsystems by their largest index from
// zero and primes from e_2 = 3, so the letter count is M+1, M-1 or M.
std::size_t letters_for(const TableRow& row);

struct ScaleCaps {
  bool full = false;
  std::size_t max_letters = 100000;
  std::size_t max_N = 2000;
};

struct RowResult {
  TableRow row;
  std::size_t M = 0;  // letters used
  std::size_t N = 0;
  double tol = 0.0;
  std::optional<DimensionCertificate> cert;
  std::string status;  // PASS, FAIL or ERROR
  std::string detail;
  double seconds = 0.0;
};

// PASS iff the enclosure meets the printed interval and, at full scale, is at
// most three printed widths wide.
RowResult run_row(const TableRow& row, const ScaleCaps& caps, unsigned workers);

}  // namespace cfdim::cli
