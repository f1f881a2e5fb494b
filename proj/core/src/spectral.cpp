#include "cfdim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "cfdim/error.hpp"
#include "cfdim/workers.hpp"

namespace cfdim {
namespace {

constexpr std::size_t kParallelRows = 2048;

void rows(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  if (n < kParallelRows) {
    body(0, n);
  } else {
    parallel_chunks(n, 0, body);
  }
}

// side > 0: lower sum of (Mw)_j compared against the upper product lam*w_j.
bool certify(const IMatrix& m, const std::vector<double>& w, double lam, bool lower, bool strict) {
  if (w.size() != m.n) throw ParameterError("vector length does not match matrix");
  for (double x : w) {
    if (!(x > 0)) throw ParameterError("certificate vector must be strictly positive");
  }
  std::vector<char> ok(m.n, 0);
  rows(m.n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double acc = 0.0;
      for (std::size_t p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p) {
        const std::size_t c = m.col[p];
        acc = lower ? rnd::add_down(acc, rnd::mul_down(m.val[p].lo(), w[c]))
                    : rnd::add_up(acc, rnd::mul_up(m.val[p].hi(), w[c]));
      }
      if (lower) {
        double rhs = rnd::mul_up(lam, w[i]);
        ok[i] = strict ? acc > rhs : acc >= rhs;
      } else {
        double rhs = rnd::mul_down(lam, w[i]);
        ok[i] = strict ? acc < rhs : acc <= rhs;
      }
    }
  });
  return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

struct Probe {
  bool certified = false;
  BisectionStep step;
  RInterval corr{0.0};
  double max_err = 0.0;
};

}  // namespace

PerronEstimate estimate_perron(const IMatrix& m, double tol, std::size_t max_iter) {
  const std::size_t n = m.n;
  if (n == 0) throw ParameterError("empty matrix");
  std::vector<double> mid(m.nnz());
  for (std::size_t p = 0; p < m.nnz(); ++p) {
    mid[p] = m.val[p].mid();
    if (m.val[p].lo() < 0) throw ParameterError("matrix has negative entries");
  }
  for (std::size_t i = 0; i < n; ++i) {
    bool nonzero = false;
    for (std::size_t p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p) nonzero = nonzero || mid[p] > 0;
    if (!nonzero) throw DomainError("degenerate matrix: row " + std::to_string(i) + " is zero");
  }

  PerronEstimate est;
  est.w.assign(n, 1.0);
  std::vector<double> v(n);
  double best = std::numeric_limits<double>::infinity();
  std::size_t stale = 0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    rows(n, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        double acc = 0.0;
        for (std::size_t p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p) acc += mid[p] * est.w[m.col[p]];
        v[i] = acc;
      }
    });
    double rho = *std::max_element(v.begin(), v.end());
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double wi = v[i] / rho;
      res = std::max(res, std::fabs(wi - est.w[i]));
      est.w[i] = wi;
    }
    est.radius = rho;
    est.iterations = it;
    est.residual = res;
    if (res < tol) break;
    if (res < best) {
      best = res;
      stale = 0;
    } else if (++stale >= 50) {
      break;
    }
  }
  // Components can underflow to zero only for pathological inputs; keep w positive.
  for (double& x : est.w) x = std::max(x, std::numeric_limits<double>::min());
  return est;
}

bool certify_radius_lower(const IMatrix& m, const std::vector<double>& w, double lam) {
  return certify(m, w, lam, true, false);
}
bool certify_radius_upper(const IMatrix& m, const std::vector<double>& w, double lam) {
  return certify(m, w, lam, false, false);
}
bool certify_radius_above(const IMatrix& m, const std::vector<double>& w, double lam) {
  return certify(m, w, lam, true, true);
}
bool certify_radius_below(const IMatrix& m, const std::vector<double>& w, double lam) {
  return certify(m, w, lam, false, true);
}

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Finite:
      return "finite";
    case Strategy::Strategy1:
      return "1";
    case Strategy::Strategy2:
      return "2";
  }
  return "?";
}

Strategy parse_strategy(const std::string& s) {
  if (s == "finite") return Strategy::Finite;
  if (s == "1" || s == "strategy1") return Strategy::Strategy1;
  if (s == "2" || s == "strategy2") return Strategy::Strategy2;
  throw ParameterError("unknown strategy '" + s + "'");
}

double default_t_lo(const Alphabet& a) {
  double theta = a.theta();
  return theta >= 0.5 ? theta + 1e-3 : 1e-3;
}

DimensionCertificate dimension_bisection(const Alphabet& a, std::size_t M, std::size_t N, Strategy strategy,
                                         const BisectionOptions& opts) {
  if (!(opts.tol > 0)) throw ParameterError("tol must be positive");
  if (strategy == Strategy::Strategy1) throw ParameterError("use strategy1_bound for strategy 1");
  if (auto sz = a.size(); sz && (M == 0 || M > *sz)) M = *sz;
  if (M == 0) throw ParameterError("M must be >= 1 for infinite alphabets");
  const bool with_tail = strategy == Strategy::Strategy2;

  DimensionCertificate cert;
  cert.alphabet = a.descriptor();
  cert.strategy = strategy;
  cert.M = M;
  cert.N = N;
  cert.tol = opts.tol;
  std::size_t probes = 0;

  auto probe = [&](double t, Side side) {
    Probe out;
    out.step.t = t;
    out.step.matrix = side == Side::Lower ? 'A' : 'B';
    AssembleOptions ao;
    ao.side = side;
    ao.P_cap = opts.P_cap;
    ao.workers = opts.workers;
    ++probes;
    std::optional<TransferPair> built;
    try {
      built.emplace(assemble(a, M, N, RInterval(t), with_tail && side == Side::Upper, ao));
    } catch (const DivergenceError&) {
      cert.log.push_back(out.step);
      return out;  // tail not summable at t: no certificate here
    }
    const TransferPair& tp = *built;
    const IMatrix& mat = side == Side::Lower ? tp.A : tp.B;
    PerronEstimate est = estimate_perron(mat);
    out.certified = side == Side::Lower ? certify_radius_above(mat, est.w, 1.0) : certify_radius_below(mat, est.w, 1.0);
    out.step.certified = out.certified;
    out.step.radius = est.radius;
    out.step.iterations = est.iterations;
    out.corr = tp.corr;
    out.max_err = tp.max_err;
    cert.max_err = std::max(cert.max_err, tp.max_err);
    cert.log.push_back(out.step);
    return out;
  };
  auto budget_left = [&] { return probes < opts.max_iter; };

  const double quarter = opts.tol / 4;
  const double t_hi = opts.t_hi;
  double a_cert = 0.0, a_fail = t_hi;
  const bool singleton = M == 1 && strategy == Strategy::Finite;
  if (!singleton) {
    double t_lo = opts.t_lo.value_or(default_t_lo(a));
    if (!probe(t_lo, Side::Lower).certified) {
      throw BracketError("r(A) > 1 could not be certified at t_lo=" + std::to_string(t_lo) +
                         "; lower t_lo or refine the mesh");
    }
    a_cert = t_lo;
    while (a_fail - a_cert > quarter && budget_left()) {
      double mid = 0.5 * (a_cert + a_fail);
      if (probe(mid, Side::Lower).certified) {
        a_cert = mid;
      } else {
        a_fail = mid;
      }
    }
  } else {
    a_fail = 0.0;  // a single map has a one-point limit set
  }

  // Upper phase: gallop upward from the last lower failure, then bisect.
  double b_fail = a_cert, b_cert = -1.0;
  double step = std::max(a_fail - a_cert, quarter);
  double cand = std::max(a_fail, a_cert + quarter);
  RInterval corr_at_cert(0.0);
  while (budget_left() || b_cert < 0) {
    cand = std::min(cand, t_hi);
    Probe p = probe(cand, Side::Upper);
    if (p.certified) {
      b_cert = cand;
      corr_at_cert = p.corr;
      break;
    }
    b_fail = cand;
    if (cand >= t_hi) {
      throw BracketError("r(B) < 1 could not be certified at t_hi=" + std::to_string(t_hi) +
                         "; increase M or N");
    }
    step *= 4;
    cand = a_fail + step;
  }
  while (b_cert - b_fail > quarter && budget_left()) {
    double mid = 0.5 * (b_fail + b_cert);
    Probe p = probe(mid, Side::Upper);
    if (p.certified) {
      b_cert = mid;
      corr_at_cert = p.corr;
    } else {
      b_fail = mid;
    }
  }

  cert.h_lo = a_cert;
  cert.h_hi = b_cert;
  cert.corr = corr_at_cert;
  cert.converged = (a_fail - a_cert <= quarter || singleton) && (b_cert - b_fail <= quarter);
  return cert;
}

RInterval hein_gap(const Alphabet& a, std::size_t M, double h_lo, double h_hi) {
  if (M == 0) throw ParameterError("hein_gap needs M >= 1");
  if (auto sz = a.size(); sz && M >= *sz) return RInterval(0.0);
  if (!(h_lo > a.theta())) {
    throw DivergenceError("subsystem gap needs h_lo above the convergence exponent " + std::to_string(a.theta()));
  }
  if (h_lo > h_hi) throw ParameterError("hein_gap needs h_lo <= h_hi");
  RInterval K = distortion_bound(a);
  double chi = lyapunov_lower_bound(a).lo();
  RInterval tail = tail_sum_upper(a, M, RInterval(h_lo));
  RInterval g = pow(K, RInterval(h_hi)) / RInterval(chi) * tail;
  return RInterval(0.0, g.hi());
}

DimensionCertificate strategy1_bound(const Alphabet& a, std::size_t M, std::size_t N, const BisectionOptions& opts) {
  BisectionOptions o = opts;
  if (!o.t_lo) o.t_lo = default_t_lo(a);
  DimensionCertificate cert = dimension_bisection(a, M, N, Strategy::Finite, o);
  cert.strategy = Strategy::Strategy1;
  cert.alphabet = a.descriptor();
  cert.gap = hein_gap(a, cert.M, cert.h_lo, cert.h_hi);
  cert.h_hi = std::min(1.0, rnd::add_up(cert.h_hi, cert.gap.hi()));
  return cert;
}

DimensionCertificate certify_dimension(const Alphabet& a, std::size_t M, std::size_t N, Strategy strategy,
                                       const BisectionOptions& opts) {
  if (strategy == Strategy::Strategy1) return strategy1_bound(a, M, N, opts);
  return dimension_bisection(a, M, N, strategy, opts);
}

}  // namespace cfdim
