#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfdim/alphabet.hpp"
#include "cfdim/rinterval.hpp"
#include "cfdim/spectral.hpp"

namespace cfdim {

// alpha_n(r) = (1/(n+1))^{2r}, beta_n(r) = (2/(n+2))^{2r}.
struct AlphaBeta {
  static RInterval alpha(std::uint64_t n, const RInterval& r);
  static RInterval beta(std::uint64_t n, const RInterval& r);
};

// sum_{n>k} alpha_{e_n}(s) >= beta_{e_k}(s), certified. k is 1-based.
bool check_sum_condition_ab(const Alphabet& a, const RInterval& s, std::size_t k);
// sum_{n>k} e_n^{-2s} >= K^{2s} e_k^{-2s} with K = distortion_bound(a).
bool check_sum_condition_deriv(const Alphabet& a, const RInterval& s, std::size_t k);
// The ab condition checked at t; a true result also holds at every s <= t.
bool monotone_transfer_check(const Alphabet& a, double t, double s, std::size_t k);

enum class SumCriterion { AB, Deriv };
const char* criterion_name(SumCriterion c);

// Certificate that a sum condition holds for every k >= k0 at exponent s:
// explicit checks for k0 <= k < k_analytic, and a closed-form lower bound
// g_analytic >= threshold at k_analytic that is nondecreasing in k.
struct AllKCertificate {
  SumCriterion criterion = SumCriterion::Deriv;
  double s = 0.0;
  std::size_t k0 = 1;
  std::size_t k_analytic = 1;
  RInterval g_analytic{0.0};
  RInterval threshold{0.0};
};

// Smallest k0 for which the condition is certified for all k >= k0, or
// nullopt when the family has no monotone closed form, the closed form never
// reaches the threshold, or more than explicit_cap explicit checks would be needed.
std::optional<AllKCertificate> find_all_k(const Alphabet& a, SumCriterion c, double s, std::size_t explicit_cap = 20000);
// Re-runs every check recorded in the certificate.
bool verify_all_k(const Alphabet& a, const AllKCertificate& cert);

// Certified enclosure of the root of 1/(2s ln lambda) - (lambda K)^{2s} for
// the scaled powers {lambda^n / r}; f is certified positive at lo and negative at hi.
RInterval power_threshold(std::uint64_t lambda, std::uint64_t r);

// Number of pieces the last nowhere-dense check needed, for diagnostics.
struct WindowCheck {
  bool certified = false;
  std::size_t pieces = 0;
};

// Certifies sum_{n>k} e_n^{-2t} < K^{-2t} e_k^{-2t} for all k >= 1 and all
// t in [s, r] (Powers, ScaledPowers, Lacunary). true implies DS meets [s, r]
// in a nowhere dense set.
bool nowhere_dense_window(const Alphabet& a, double s, double r);
WindowCheck nowhere_dense_check(const Alphabet& a, double s, double r, std::size_t max_pieces = 1u << 16);
// Smallest s (to within tol) for which [s, r] certifies, or nullopt.
std::optional<double> nowhere_dense_start(const Alphabet& a, double r, double tol = 1e-7);

// Enclosure of int_1^inf exp(-alpha x^2) dx for alpha > 0.
RInterval gaussian_tail(const RInterval& alpha);

// Upper bound on I'(t) over the lacunary window [t0, h]:
// 2 (ln(bK) (bK)^{-2 t0} - ln b int_1^inf x^2 b^{-2 h x^2} dx).
RInterval lacunary_derivative_bound(std::uint64_t b, double t0, double h);

struct SpectrumInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool hi_open = false;
  bool extends_to_dim = false;  // the condition was certified at dim.h_hi, so [lo, dim] is covered
  std::string criterion;
  std::vector<std::string> assumptions;
  std::optional<AllKCertificate> condition;
  std::optional<DimensionCertificate> segment;  // bound on dim of the initial segment I(k0 - 1)
  std::optional<RInterval> root;                // power threshold enclosure
};

struct NowhereDenseWindow {
  double lo = 0.0;
  double hi = 0.0;
  std::string criterion;
  std::size_t pieces = 0;
  std::optional<RInterval> derivative_bound;  // lacunary only, diagnostic
};

struct SpectrumReport {
  std::string alphabet;
  DimensionCertificate dim;
  std::vector<SpectrumInterval> full_intervals;
  std::vector<NowhereDenseWindow> nowhere_dense_windows;
  std::vector<std::string> external_facts_used;
  std::vector<std::pair<double, double>> merged;  // union of full_intervals
  bool full_spectrum = false;
  std::vector<std::string> log;
};

struct DimensionPlan {
  std::size_t M = 0;
  std::size_t N = 100;
  Strategy strategy = Strategy::Finite;
  double tol = 1e-6;
};

// The default dimension run used by spectrum reports for each family.
DimensionPlan default_dimension_plan(const Alphabet& a);

struct SpectrumConfig {
  std::optional<DimensionPlan> plan;
  std::optional<DimensionCertificate> dim;  // skip the dimension run
  bool use_external_facts = true;
  std::size_t segment_N = 1000;
  double segment_tol = 1e-6;
  std::size_t max_bootstrap = 12;
  std::size_t explicit_cap = 20000;
  unsigned workers = 0;
};

SpectrumReport full_spectrum_certify(const Alphabet& a, const SpectrumConfig& config = {});

// Re-checks every stored condition of a report.
bool verify_report(const Alphabet& a, const SpectrumReport& report);

}  // namespace cfdim
