#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cfdim/alphabet.hpp"
#include "cfdim/rinterval.hpp"

namespace cfdim {

// Uniform partition of [0,1] into N cells. Nodes are 0-based here:
// x_i = i/N for i = 0..N, so x_0 = 0 and x_N = 1.
struct Mesh {
  std::size_t N = 1;
  double l = 1.0;              // nearest double to 1/N
  std::vector<double> nodes;   // nearest doubles to i/N

  RInterval node(std::size_t i) const { return RInterval::ratio(static_cast<std::int64_t>(i), static_cast<std::int64_t>(N)); }
  RInterval spacing() const { return RInterval::ratio(1, static_cast<std::int64_t>(N)); }
};

Mesh build_mesh(std::size_t N);

// err = 1/2 (x_{m+1} - y)(y - x_m)(2t)(2t+1) e^{2tl/k} k^{-2} for y in the
// cell [x_m, x_{m+1}] (m 0-based). Throws MeshTooCoarse when err.hi >= 1.
RInterval interp_error_factor(const Mesh& mesh, const RInterval& t, std::uint64_t k, const RInterval& y, std::size_t m);

// Square sparse matrix with interval entries, compressed sparse rows.
struct IMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr;  // size n+1
  std::vector<std::uint32_t> col;
  std::vector<RInterval> val;

  std::size_t nnz() const { return val.size(); }
  std::size_t row_nnz(std::size_t i) const { return row_ptr[i + 1] - row_ptr[i]; }
  // Entry (i,j), zero when not stored.
  RInterval at(std::size_t i, std::size_t j) const;
  bool empty() const { return n == 0; }

  static IMatrix from_dense(const std::vector<std::vector<RInterval>>& rows);
};

enum class Side { Both, Lower, Upper };

struct TransferPair {
  IMatrix A;  // lower matrix: entries scaled by (1 - err), rounded down
  IMatrix B;  // upper matrix: entries rounded up, plus corr in column 0
  RInterval t;
  std::size_t M = 0;
  Alphabet alphabet;
  Mesh mesh;
  RInterval corr;
  bool with_tail = false;
  std::optional<std::size_t> P_cap;
  double max_err = 0.0;  // largest err.hi seen during assembly
};

struct AssembleOptions {
  std::optional<std::size_t> P_cap;  // finite universe e_{M+1..P} instead of the analytic tail
  Side side = Side::Both;
  unsigned workers = 0;              // 0: CFDIM_WORKERS or hardware concurrency
};

// Builds (A_{M,t}, B_{M,t}) for the first M letters on an (N+1)-node mesh.
// With with_tail, B also carries corr = e^{2/(k e_{M+1})} * tail in column 0.
TransferPair assemble(const Alphabet& a, std::size_t M, std::size_t N, const RInterval& t, bool with_tail,
                      const AssembleOptions& opts = {});

// Debug dump, one `row col lo hi` line per stored entry (hex floats).
void dump_triplets(std::ostream& os, const IMatrix& m);

}  // namespace cfdim
