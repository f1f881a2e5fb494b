#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cfdim/alphabet.hpp"
#include "cfdim/rinterval.hpp"
#include "cfdim/transfer.hpp"

namespace cfdim {

struct PerronEstimate {
  double radius = 0.0;
  std::vector<double> w;  // strictly positive, max-norm 1
  std::size_t iterations = 0;
  double residual = 0.0;  // max_j |(Mw)_j - radius w_j| / radius
};

// Power iteration on the entry midpoints, started from the all-ones vector.
// Stops at residual < tol, after max_iter steps, or when the residual has
// not improved for 50 consecutive steps (rounding floor reached).
PerronEstimate estimate_perron(const IMatrix& m, double tol = 1e-14, std::size_t max_iter = 10000);

// (Mw)_j >= lam w_j for every j, with the left side rounded down and the
// right side rounded up. True implies r(M) >= lam.
bool certify_radius_lower(const IMatrix& m, const std::vector<double>& w, double lam);
// (Mw)_j <= lam w_j for every j, rounded the other way. True implies r(M) <= lam.
bool certify_radius_upper(const IMatrix& m, const std::vector<double>& w, double lam);
// Strict variants: true implies r(M) > lam, resp. r(M) < lam.
bool certify_radius_above(const IMatrix& m, const std::vector<double>& w, double lam);
bool certify_radius_below(const IMatrix& m, const std::vector<double>& w, double lam);

enum class Strategy { Finite, Strategy1, Strategy2 };

const char* strategy_name(Strategy s);
Strategy parse_strategy(const std::string& s);

struct BisectionStep {
  double t = 0.0;
  char matrix = 'A';  // 'A' lower matrix, 'B' upper matrix
  bool certified = false;
  double radius = 0.0;  // float estimate, diagnostic only
  std::size_t iterations = 0;
};

struct DimensionCertificate {
  std::string alphabet;  // canonical descriptor
  double h_lo = 0.0;
  double h_hi = 1.0;
  Strategy strategy = Strategy::Finite;
  std::size_t M = 0;
  std::size_t N = 0;
  double tol = 0.0;
  RInterval gap{0.0};  // subsystem gap added to h_hi (strategy 1)
  RInterval corr{0.0};  // tail correction of the accepted upper matrix (strategy 2)
  double max_err = 0.0;  // worst interpolation error factor seen
  bool converged = true;  // false when max_iter stopped the bisection
  std::vector<BisectionStep> log;

  double width() const { return h_hi - h_lo; }
};

struct BisectionOptions {
  double tol = 1e-6;
  std::size_t max_iter = 200;
  std::optional<double> t_lo;  // default: theta + 1e-3 or 1e-3, see default_t_lo
  double t_hi = 1.0;
  std::optional<std::size_t> P_cap;
  unsigned workers = 0;
};

double default_t_lo(const Alphabet& a);

// Certified enclosure of the dimension of the first M letters (Finite) or of
// the whole alphabet with the tail folded into B (Strategy2).
DimensionCertificate dimension_bisection(const Alphabet& a, std::size_t M, std::size_t N, Strategy strategy,
                                         const BisectionOptions& opts = {});

// Upper bound on dim J_E - dim J_{F_M}: K^{h_hi} / chi * sum_{n>M} e_n^{-2 h_lo}.
RInterval hein_gap(const Alphabet& a, std::size_t M, double h_lo, double h_hi);

// Finite bisection on F_M, then h_hi += hein_gap.
DimensionCertificate strategy1_bound(const Alphabet& a, std::size_t M, std::size_t N, const BisectionOptions& opts = {});

// Dispatch on strategy. For Finite on an Explicit alphabet, M may be 0 (all letters).
DimensionCertificate certify_dimension(const Alphabet& a, std::size_t M, std::size_t N, Strategy strategy,
                                       const BisectionOptions& opts = {});

}  // namespace cfdim
