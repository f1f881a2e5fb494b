#include "cfdim/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <variant>

#include "cfdim/error.hpp"

namespace cfdim {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const RInterval kOne(1.0), kTwo(2.0);
const RInterval kPi(0x1.921fb54442d18p+1, 0x1.921fb54442d19p+1);

RInterval u64(std::uint64_t v) { return RInterval::from_u64(v); }

// x^{-2s} style powers: exp(p * log x), with integer exponents done exactly.
RInterval power(const RInterval& x, const RInterval& p) {
  if (p.is_point() && p.lo() == std::floor(p.lo()) && std::fabs(p.lo()) < 64) {
    auto e = static_cast<std::int64_t>(p.lo());
    return e >= 0 ? pow(x, e) : kOne / pow(x, -e);
  }
  return exp(p * log(x));
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

// lambda and r of a power-type family (elements lambda^n / r).
std::optional<std::pair<std::uint64_t, std::uint64_t>> power_params(const Alphabet& a) {
  return std::visit(Overloaded{
                        [](const Powers& p) -> std::optional<std::pair<std::uint64_t, std::uint64_t>> {
                          return std::pair{p.lambda, p.include_one ? p.lambda : std::uint64_t{1}};
                        },
                        [](const ScaledPowers& p) -> std::optional<std::pair<std::uint64_t, std::uint64_t>> {
                          return std::pair{p.lambda, p.r};
                        },
                        [](const auto&) -> std::optional<std::pair<std::uint64_t, std::uint64_t>> { return std::nullopt; },
                    },
                    a.family());
}

RInterval threshold_of(const Alphabet& a, SumCriterion c, const RInterval& s) {
  if (c == SumCriterion::AB) return power(kTwo, kTwo * s);
  return exp(kTwo * s * log(distortion_bound(a)));
}

// Closed-form lower bound, nondecreasing in k from k itself onwards, on
//   Deriv: e_k^{2s} sum_{n>k} e_n^{-2s}
//   AB:    (e_k + 2)^{2s} sum_{n>k} (e_n + 1)^{-2s}
// or nullopt when the family has none at this k.
std::optional<RInterval> analytic_ratio(const Alphabet& a, SumCriterion c, const RInterval& s, std::size_t k) {
  const RInterval two_s = kTwo * s;
  const bool ab = c == SumCriterion::AB;
  return std::visit(
      Overloaded{
          [&](const ArithmeticProgression& p) -> std::optional<RInterval> {
            // x^{2s} (x + q)^{1-2s} and (x+2)^{2s} (x+1+q)^{1-2s} both increase in x.
            if (!(s.lo() > 0.5)) return std::nullopt;
            RInterval ek = a.letter(k).iv, ek1 = a.letter(k + 1).iv;
            RInterval num = ab ? exp(two_s * log(ek + kTwo) + (kOne - two_s) * log(ek1 + kOne))
                               : exp(two_s * log(ek) + (kOne - two_s) * log(ek1));
            return num / (u64(p.q) * (two_s - kOne));
          },
          [&](const Squares&) -> std::optional<RInterval> {
            if (!(s.lo() > 0.25)) return std::nullopt;
            RInterval kk = u64(k), k1 = u64(k + 1), four_s = RInterval(4.0) * s;
            if (!ab) return exp(four_s * log(kk) + (kOne - four_s) * log(k1)) / (four_s - kOne);
            // (k^2+2)^{2s} (k+1)^{1-4s} increases while k^2 + 4sk + 2 - 8s > 0.
            RInterval mono = sqr(kk) + four_s * kk + kTwo - RInterval(8.0) * s;
            if (!certainly_positive(mono)) return std::nullopt;
            RInterval shift = kOne + kOne / sqr(k1);
            return exp(two_s * log(sqr(kk) + kTwo) - two_s * log(shift) + (kOne - four_s) * log(k1)) /
                   (four_s - kOne);
          },
          [&](const Primes&) -> std::optional<RInterval> {
            // p(k) >= k ln k, and the Dusart-based tail for X = k+1 >= 16;
            // every factor is nondecreasing for X >= 16.
            if (ab || k < 15 || !(s.lo() > 0.5)) return std::nullopt;
            RInterval kk = u64(k), X = u64(k + 1);
            RInterval lnX = log(X), g = log(lnX) / lnX, d = kOne / lnX;
            RInterval denom = two_s * (kOne + d) - kOne;
            if (!certainly_positive(denom)) return std::nullopt;
            RInterval head = exp(two_s * log(kk * log(kk)));
            RInterval tail = exp(-two_s * (log(kOne + g) + log(lnX)) + (kOne - two_s) * log(X)) / denom;
            return head * tail;
          },
          [&](const Powers& p) -> std::optional<RInterval> {
            RInterval ratio = exp(-two_s * log(u64(p.lambda)));
            RInterval g = ratio / (kOne - ratio);  // exact for Deriv
            if (ab) g *= exp(-two_s * log(kOne + kOne / a.letter(k + 1).iv));
            return g;
          },
          [&](const ScaledPowers& p) -> std::optional<RInterval> {
            RInterval ratio = exp(-two_s * log(u64(p.lambda)));
            RInterval g = ratio / (kOne - ratio);
            if (ab) g *= exp(-two_s * log(kOne + kOne / a.letter(k + 1).iv));
            return g;
          },
          [&](const auto&) -> std::optional<RInterval> { return std::nullopt; },
      },
      a.family());
}

std::size_t analytic_start(const Alphabet& a) { return std::holds_alternative<Primes>(a.family()) ? 15 : 1; }

bool explicit_check(const Alphabet& a, SumCriterion c, const RInterval& s, std::size_t k) {
  return c == SumCriterion::AB ? check_sum_condition_ab(a, s, k) : check_sum_condition_deriv(a, s, k);
}

bool analytic_ok(const Alphabet& a, SumCriterion c, const RInterval& s, std::size_t k, RInterval* g_out = nullptr) {
  auto g = analytic_ratio(a, c, s, k);
  if (!g) return false;
  if (g_out) *g_out = *g;
  return certainly_le(threshold_of(a, c, s), *g);
}

// Upper bound of int_a^inf e^{-u^2} du and lower bound, for a > 0.
RInterval erfc_integral(const RInterval& a) {
  if (a.hi() <= 2.0) {
    // int_0^a e^{-u^2} = sum (-1)^n a^{2n+1} / (n! (2n+1)); terms decrease
    // from n >= a^2 on, so the value lies between consecutive partial sums.
    RInterval term = a, sum = a, prev = a;
    const RInterval a2 = sqr(a);
    const int n_max = 60;
    for (int n = 1; n <= n_max; ++n) {
      term = term * a2 / RInterval(static_cast<double>(n));  // a^{2n+1}/n!
      prev = sum;
      RInterval t = term / RInterval(static_cast<double>(2 * n + 1));
      sum = (n % 2) ? sum - t : sum + t;
    }
    RInterval head = RInterval::hull(prev, sum);
    return sqrt(kPi) / kTwo - head;
  }
  // 2 e^{a^2} int_a^inf e^{-u^2} = 1/(a + (1/2)/(a + (2/2)/(a + (3/2)/(a + ...)))).
  // Every tail of the fraction lies in [0, c_k / a], which closes the recursion.
  const int depth = 200;
  RInterval t(0.0, (RInterval(depth / 2.0) / a).hi());
  for (int k = depth - 1; k >= 1; --k) t = RInterval(k / 2.0) / (a + t);
  RInterval v = exp(-sqr(a)) / (kTwo * (a + t));
  return RInterval(std::max(0.0, v.lo()), v.hi());
}

WindowCheck adaptive(double s, double r, std::size_t max_pieces, const std::function<bool(double, double)>& ok) {
  WindowCheck out;
  const double min_width = (r - s) * 0x1p-24;
  std::vector<std::pair<double, double>> stack{{s, r}};
  while (!stack.empty()) {
    auto [u, v] = stack.back();
    stack.pop_back();
    if (ok(u, v)) {
      ++out.pieces;
      continue;
    }
    double mid = 0.5 * (u + v);
    if (v - u < min_width || out.pieces + stack.size() > max_pieces || !(mid > u && mid < v)) {
      out.certified = false;
      return out;
    }
    stack.emplace_back(mid, v);
    stack.emplace_back(u, mid);
  }
  out.certified = true;
  return out;
}

}  // namespace

RInterval AlphaBeta::alpha(std::uint64_t n, const RInterval& r) {
  return power(kOne / u64(n + 1), kTwo * r);
}

RInterval AlphaBeta::beta(std::uint64_t n, const RInterval& r) {
  return power(RInterval::ratio(2, static_cast<std::int64_t>(n + 2)), kTwo * r);
}

bool check_sum_condition_ab(const Alphabet& a, const RInterval& s, std::size_t k) {
  if (k == 0) throw ParameterError("k is 1-based");
  RInterval lhs = tail_sum_lower(a, k, s, 1);
  Letter ek = a.letter(k);
  // beta_{e_k}(s) = (2/(e_k+2))^{2s}; for huge e_k use ln(e_k + 2) >= ln e_k.
  RInterval rhs = ek.fits ? AlphaBeta::beta(ek.value, s) : exp(kTwo * s * (log(kTwo) - ek.log));
  return certainly_le(rhs, lhs);
}

bool check_sum_condition_deriv(const Alphabet& a, const RInterval& s, std::size_t k) {
  if (k == 0) throw ParameterError("k is 1-based");
  RInterval lhs = tail_sum_lower(a, k, s, 0);
  RInterval rhs = exp(kTwo * s * (log(distortion_bound(a)) - a.letter(k).log));
  return certainly_le(rhs, lhs);
}

bool monotone_transfer_check(const Alphabet& a, double t, double s, std::size_t k) {
  if (t < s) throw ParameterError("monotone transfer needs t >= s");
  if (!(s > 0)) throw ParameterError("monotone transfer needs s > 0");
  return check_sum_condition_ab(a, RInterval(t), k);
}

const char* criterion_name(SumCriterion c) { return c == SumCriterion::AB ? "ab" : "deriv"; }

std::optional<AllKCertificate> find_all_k(const Alphabet& a, SumCriterion c, double s, std::size_t explicit_cap) {
  if (a.is_finite()) return std::nullopt;
  const RInterval si(s);
  const std::size_t start = analytic_start(a);
  if (!analytic_ratio(a, c, si, start) && !analytic_ratio(a, c, si, 2 * start)) return std::nullopt;

  // Gallop to a k where the closed form clears the threshold, then bisect.
  std::size_t fail = start - 1, hit = start;
  const std::size_t limit = explicit_cap + start;
  while (!analytic_ok(a, c, si, hit)) {
    fail = hit;
    if (hit >= limit) return std::nullopt;
    hit = std::min(limit, 2 * hit);
  }
  while (hit - fail > 1) {
    std::size_t mid = fail + (hit - fail) / 2;
    if (analytic_ok(a, c, si, mid)) {
      hit = mid;
    } else {
      fail = mid;
    }
  }

  AllKCertificate cert;
  cert.criterion = c;
  cert.s = s;
  cert.k_analytic = hit;
  analytic_ok(a, c, si, hit, &cert.g_analytic);
  cert.threshold = threshold_of(a, c, si);
  cert.k0 = hit;
  for (std::size_t k = hit - 1; k >= 1; --k) {
    if (!explicit_check(a, c, si, k)) break;
    cert.k0 = k;
  }
  return cert;
}

bool verify_all_k(const Alphabet& a, const AllKCertificate& cert) {
  const RInterval si(cert.s);
  if (cert.k0 == 0 || cert.k0 > cert.k_analytic || cert.k_analytic < analytic_start(a)) return false;
  if (!analytic_ok(a, cert.criterion, si, cert.k_analytic)) return false;
  for (std::size_t k = cert.k0; k < cert.k_analytic; ++k) {
    if (!explicit_check(a, cert.criterion, si, k)) return false;
  }
  return true;
}

RInterval power_threshold(std::uint64_t lambda, std::uint64_t r) {
  if (lambda < 2) throw ParameterError("power_threshold needs lambda >= 2");
  if (r == 0 || lambda % r != 0) throw ParameterError("power_threshold needs r | lambda");
  const Alphabet a(ScaledPowers{r, lambda});
  const RInterval lnl = log(u64(lambda));
  const RInterval lnlK = lnl + log(distortion_bound(a));
  auto f = [&](double s) {
    RInterval si(s);
    return kOne / (kTwo * si * lnl) - exp(kTwo * si * lnlK);
  };
  double lo = 1e-6, hi = 1.0;
  if (!certainly_positive(f(lo)) || !certainly_negative(f(hi))) throw Error("power_threshold bracket failed");
  for (int i = 0; i < 200 && hi - lo > 0; ++i) {
    double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    RInterval fm = f(mid);
    if (certainly_positive(fm)) {
      lo = mid;
    } else if (certainly_negative(fm)) {
      hi = mid;
    } else {
      break;
    }
  }
  return RInterval(lo, hi);
}

RInterval gaussian_tail(const RInterval& alpha) {
  if (!(alpha.lo() > 0)) throw DomainError("gaussian_tail needs alpha > 0");
  RInterval a = sqrt(alpha);
  RInterval v = erfc_integral(a) / a;
  return RInterval(std::max(0.0, v.lo()), v.hi());
}

RInterval lacunary_derivative_bound(std::uint64_t b, double t0, double h) {
  const Alphabet a(Lacunary{b});
  const RInterval lnb = log(u64(b));
  const RInterval lnbK = lnb + log(distortion_bound(a));
  const RInterval alpha = kTwo * RInterval(h) * lnb;
  // int_1^inf x^2 e^{-alpha x^2} dx = e^{-alpha}/(2 alpha) + G(alpha)/(2 alpha)
  const RInterval moment = (exp(-alpha) + gaussian_tail(alpha)) / (kTwo * alpha);
  return kTwo * (lnbK * exp(RInterval(-2.0) * RInterval(t0) * lnbK) - lnb * moment);
}

WindowCheck nowhere_dense_check(const Alphabet& a, double s, double r, std::size_t max_pieces) {
  if (!(s > 0) || !(s < r)) throw ParameterError("nowhere_dense_window needs 0 < s < r");
  const RInterval logK = log(distortion_bound(a));
  if (auto pp = power_params(a)) {
    const RInterval lnl = log(u64(pp->first));
    // sum_{n>k} e_n^{-2t} <= e_k^{-2t} / (2t ln lambda) for every k.
    return adaptive(s, r, max_pieces, [&](double u, double v) {
      RInterval lhs = kOne / (kTwo * RInterval(u) * lnl);
      RInterval rhs = exp(RInterval(-2.0) * RInterval(v) * logK);
      return certainly_lt(lhs, rhs);
    });
  }
  if (auto* lac = std::get_if<Lacunary>(&a.family())) {
    const RInterval lnb = log(u64(lac->b));
    const RInterval lnbK = lnb + logK;
    return adaptive(s, r, max_pieces, [&](double u, double v) {
      // k >= 2: K^{2t} / (4t ln b) < 2.
      RInterval f = exp(kTwo * RInterval(v) * logK) / (RInterval(4.0) * RInterval(u) * lnb);
      if (!certainly_lt(f, kTwo)) return false;
      // k = 1: int_1^inf b^{-2t x^2} dx < (bK)^{-2t}.
      RInterval g = gaussian_tail(kTwo * RInterval(u) * lnb);
      RInterval rhs = exp(RInterval(-2.0) * RInterval(v) * lnbK);
      return certainly_lt(g, rhs);
    });
  }
  return WindowCheck{};
}

bool nowhere_dense_window(const Alphabet& a, double s, double r) { return nowhere_dense_check(a, s, r).certified; }

std::optional<double> nowhere_dense_start(const Alphabet& a, double r, double tol) {
  if (!(r > 0)) throw ParameterError("nowhere_dense_start needs r > 0");
  double hi = r * (1 - 1e-6);
  if (!nowhere_dense_window(a, hi, r)) return std::nullopt;
  double lo = 0.0;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid > 0 && nowhere_dense_window(a, mid, r)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

DimensionPlan default_dimension_plan(const Alphabet& a) {
  return std::visit(Overloaded{
                        [](const Explicit&) { return DimensionPlan{0, 1000, Strategy::Finite, 1e-6}; },
                        [](const ArithmeticProgression&) { return DimensionPlan{50000, 100, Strategy::Strategy1, 1e-4}; },
                        [](const Primes&) { return DimensionPlan{50000, 100, Strategy::Strategy1, 1e-4}; },
                        [](const Squares&) { return DimensionPlan{2000, 500, Strategy::Strategy2, 1e-6}; },
                        [](const Powers&) { return DimensionPlan{40, 500, Strategy::Strategy2, 1e-7}; },
                        [](const ScaledPowers&) { return DimensionPlan{40, 500, Strategy::Strategy2, 1e-7}; },
                        [](const Lacunary&) { return DimensionPlan{8, 500, Strategy::Strategy2, 1e-7}; },
                    },
                    a.family());
}

namespace {

void merge_intervals(SpectrumReport& rep) {
  std::vector<std::pair<double, double>> v;
  for (const auto& iv : rep.full_intervals) v.emplace_back(iv.lo, iv.hi);
  std::sort(v.begin(), v.end());
  for (const auto& p : v) {
    if (!rep.merged.empty() && p.first <= rep.merged.back().second) {
      rep.merged.back().second = std::max(rep.merged.back().second, p.second);
    } else {
      rep.merged.push_back(p);
    }
  }
  rep.full_spectrum = rep.merged.size() == 1 && rep.merged[0].first == 0.0 && rep.merged[0].second >= rep.dim.h_lo;
}

void bootstrap(const Alphabet& a, const SpectrumConfig& cfg, SpectrumReport& rep) {
  const double theta = a.theta();
  double s = rep.dim.h_hi, s_report = rep.dim.h_lo;
  bool reached_zero = false;
  for (std::size_t step = 0; step < cfg.max_bootstrap; ++step) {
    if (!(s > theta)) break;
    std::optional<AllKCertificate> best;
    for (SumCriterion c : {SumCriterion::AB, SumCriterion::Deriv}) {
      auto cert = find_all_k(a, c, s, cfg.explicit_cap);
      if (cert && (!best || cert->k0 < best->k0)) best = cert;
    }
    if (!best) {
      rep.log.push_back("no sum condition certified at s=" + fmt(s));
      break;
    }
    const std::size_t m = best->k0 - 1;
    rep.log.push_back(std::string(criterion_name(best->criterion)) + " condition holds for k >= " +
                      std::to_string(best->k0) + " at s=" + fmt(s));
    SpectrumInterval iv;
    iv.hi = s_report;
    iv.extends_to_dim = step == 0;
    iv.condition = best;
    if (m <= 1) {
      iv.lo = 0.0;
      iv.criterion = std::string(criterion_name(best->criterion)) + "-all-k";
      rep.full_intervals.push_back(iv);
      reached_zero = true;
      break;
    }
    BisectionOptions bo;
    bo.tol = cfg.segment_tol;
    bo.workers = cfg.workers;
    DimensionCertificate seg;
    try {
      seg = dimension_bisection(a.truncated(m), 0, cfg.segment_N, Strategy::Finite, bo);
    } catch (const Error& e) {
      rep.log.push_back("initial segment of " + std::to_string(m) + " letters failed: " + e.what());
      break;
    }
    const double t = seg.h_hi;
    if (!(t < s_report)) {
      rep.log.push_back("initial segment bound " + fmt(t) + " does not improve on " + fmt(s_report));
      break;
    }
    iv.lo = t;
    iv.criterion = std::string(criterion_name(best->criterion)) + "-segment";
    iv.assumptions.push_back("pressure of the first " + std::to_string(m) + " letters is <= 0 at " + fmt(t));
    iv.segment = seg;
    rep.full_intervals.push_back(iv);
    s = t;
    s_report = t;
  }
  if (!reached_zero && theta > 0) {
    if (cfg.use_external_facts) {
      SpectrumInterval ext;
      ext.lo = 0.0;
      ext.hi = theta;
      ext.hi_open = true;
      ext.criterion = "external-fact";
      std::string fact = "[0, " + fmt(theta) + ") is contained in DS for systems with convergence exponent " +
                         fmt(theta) + " (external theorem)";
      ext.assumptions.push_back(fact);
      rep.full_intervals.push_back(ext);
      rep.external_facts_used.push_back(fact);
    } else {
      rep.log.push_back("external fact disabled; [0, " + fmt(s_report) + ") left unknown");
    }
  }
}

}  // namespace

SpectrumReport full_spectrum_certify(const Alphabet& a, const SpectrumConfig& cfg) {
  SpectrumReport rep;
  rep.alphabet = a.descriptor();
  if (cfg.dim) {
    rep.dim = *cfg.dim;
  } else {
    DimensionPlan plan = cfg.plan.value_or(default_dimension_plan(a));
    BisectionOptions bo;
    bo.tol = plan.tol;
    bo.workers = cfg.workers;
    try {
      rep.dim = certify_dimension(a, plan.M, plan.N, plan.strategy, bo);
    } catch (const Error& e) {
      rep.log.push_back(std::string("dimension certificate failed: ") + e.what());
      return rep;
    }
  }
  if (a.is_finite()) {
    rep.log.push_back("finite alphabet: the spectrum is a finite set, no intervals");
    return rep;
  }

  if (auto pp = power_params(a)) {
    SpectrumInterval iv;
    iv.root = power_threshold(pp->first, pp->second);
    iv.lo = 0.0;
    iv.hi = std::min(iv.root->lo(), rep.dim.h_lo);
    iv.criterion = "power-threshold";
    rep.full_intervals.push_back(iv);
  } else if (std::holds_alternative<Lacunary>(a.family())) {
    // nothing contained; handled by the window below
  } else {
    bootstrap(a, cfg, rep);
  }

  if (power_params(a) || std::holds_alternative<Lacunary>(a.family())) {
    const double r = rep.dim.h_hi;
    if (auto start = nowhere_dense_start(a, r)) {
      NowhereDenseWindow w;
      w.lo = *start;
      w.hi = r;
      WindowCheck chk = nowhere_dense_check(a, w.lo, w.hi);
      w.pieces = chk.pieces;
      if (auto* lac = std::get_if<Lacunary>(&a.family())) {
        w.criterion = "nd-lacunary";
        w.derivative_bound = lacunary_derivative_bound(lac->b, w.lo, w.hi);
      } else {
        w.criterion = "nd-power";
      }
      rep.nowhere_dense_windows.push_back(w);
    } else {
      rep.log.push_back("no nowhere-dense window certified below " + fmt(r));
    }
  }
  merge_intervals(rep);
  return rep;
}

bool verify_report(const Alphabet& a, const SpectrumReport& rep) {
  for (const auto& iv : rep.full_intervals) {
    if (iv.hi > rep.dim.h_hi) return false;
    if (iv.condition && !verify_all_k(a, *iv.condition)) return false;
    if (iv.segment && !(iv.segment->h_hi <= iv.lo)) return false;
    if (iv.root) {
      auto pp = power_params(a);
      if (!pp) return false;
      RInterval again = power_threshold(pp->first, pp->second);
      if (iv.hi > again.lo()) return false;
    }
  }
  for (const auto& w : rep.nowhere_dense_windows) {
    if (w.hi > rep.dim.h_hi || !nowhere_dense_window(a, w.lo, w.hi)) return false;
  }
  return true;
}

}  // namespace cfdim
