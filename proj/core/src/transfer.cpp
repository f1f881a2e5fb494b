#include "cfdim/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "cfdim/error.hpp"
#include "cfdim/workers.hpp"

namespace cfdim {
namespace {

constexpr std::uint64_t kExactLimit = 1ull << 53;

// Per-row dense accumulator. Terms are nonnegative, so a plain running sum
// of n terms is within gamma_{n-1} = (n-1)u/(1-(n-1)u) of the exact sum of
// the same terms; flush() widens by (n+2) 2^-52 to cover it.
struct RowSums {
  std::vector<double> lo, hi;
  std::vector<std::uint32_t> count;

  explicit RowSums(std::size_t n) : lo(n, 0.0), hi(n, 0.0), count(n, 0) {}

  void add(std::size_t c, double l, double h) {
    lo[c] += l;
    hi[c] += h;
    ++count[c];
  }

  void flush(std::vector<std::uint32_t>& cols, std::vector<RInterval>& vals) {
    for (std::size_t c = 0; c < lo.size(); ++c) {
      if (count[c] == 0) continue;
      const double g = (static_cast<double>(count[c]) + 2.0) * 0x1p-52;
      if (g > 0.01) throw Error("too many deposits in one matrix entry");
      cols.push_back(static_cast<std::uint32_t>(c));
      vals.emplace_back(lo[c] * (1.0 - g), hi[c] * (1.0 + g));
      lo[c] = hi[c] = 0.0;
      count[c] = 0;
    }
  }
};

struct Prepared {
  std::uint64_t value = 0;
  bool exact = false;  // j + value*N is an exact double for every row
  RInterval iv;
  RInterval log;
};

// Relative slack factors for the inline kernel. Each covers one correctly
// rounded operation (or a libm call within 2 ulps) plus the rounding of the
// scaling product itself.
constexpr double kDn = 1.0 - 0x1p-50;
constexpr double kUp = 1.0 + 0x1p-50;
constexpr double kDn1 = 1.0 - 0x1p-51;
constexpr double kUp1 = 1.0 + 0x1p-51;

IMatrix build_csr(std::size_t n, std::vector<std::vector<std::uint32_t>>& cols,
                  std::vector<std::vector<RInterval>>& vals) {
  IMatrix out;
  out.n = n;
  out.row_ptr.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) out.row_ptr[i + 1] = out.row_ptr[i] + cols[i].size();
  out.col.reserve(out.row_ptr[n]);
  out.val.reserve(out.row_ptr[n]);
  for (std::size_t i = 0; i < n; ++i) {
    out.col.insert(out.col.end(), cols[i].begin(), cols[i].end());
    out.val.insert(out.val.end(), vals[i].begin(), vals[i].end());
    std::vector<std::uint32_t>().swap(cols[i]);
    std::vector<RInterval>().swap(vals[i]);
  }
  return out;
}

}  // namespace

Mesh build_mesh(std::size_t N) {
  if (N == 0) throw ParameterError("mesh needs N >= 1");
  if (N >= (1u << 26)) throw ParameterError("mesh too fine for exact cell location");
  Mesh m;
  m.N = N;
  m.l = 1.0 / static_cast<double>(N);
  m.nodes.resize(N + 1);
  for (std::size_t i = 0; i <= N; ++i) m.nodes[i] = static_cast<double>(i) / static_cast<double>(N);
  return m;
}

RInterval interp_error_factor(const Mesh& mesh, const RInterval& t, std::uint64_t k, const RInterval& y, std::size_t m) {
  if (m >= mesh.N) throw ParameterError("cell index out of range");
  RInterval xm = mesh.node(m), xm1 = mesh.node(m + 1);
  if (y.lo() < xm.lo() || y.hi() > xm1.hi()) throw ParameterError("point not inside the given cell");
  RInterval kk = RInterval::from_u64(k);
  RInterval two_t = RInterval(2.0) * t;
  RInterval a = max(xm1 - y, RInterval(0.0));
  RInterval b = max(y - xm, RInterval(0.0));
  RInterval err = RInterval(0.5) * a * b * two_t * (two_t + RInterval(1.0)) * exp(two_t * mesh.spacing() / kk) / sqr(kk);
  if (err.hi() >= 1.0) throw MeshTooCoarse("interpolation error factor reaches 1; refine the mesh");
  return err;
}

RInterval IMatrix::at(std::size_t i, std::size_t j) const {
  for (std::size_t p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
    if (col[p] == j) return val[p];
  }
  return RInterval(0.0);
}

IMatrix IMatrix::from_dense(const std::vector<std::vector<RInterval>>& rows) {
  IMatrix m;
  m.n = rows.size();
  m.row_ptr.push_back(0);
  for (const auto& r : rows) {
    if (r.size() != m.n) throw ParameterError("matrix must be square");
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (r[j].lo() != 0.0 || r[j].hi() != 0.0) {
        m.col.push_back(static_cast<std::uint32_t>(j));
        m.val.push_back(r[j]);
      }
    }
    m.row_ptr.push_back(m.val.size());
  }
  return m;
}

TransferPair assemble(const Alphabet& a, std::size_t M, std::size_t N, const RInterval& t, bool with_tail,
                      const AssembleOptions& opts) {
  if (M == 0) throw ParameterError("assemble needs M >= 1");
  if (!(t.lo() > 0)) throw ParameterError("transfer exponent must be positive");
  if (auto sz = a.size(); sz && M > *sz) throw LengthError("M exceeds the alphabet size");

  TransferPair tp{IMatrix{}, IMatrix{}, t, M, a, build_mesh(N), RInterval(0.0), with_tail, opts.P_cap, 0.0};
  const Mesh& mesh = tp.mesh;
  const std::size_t n = N + 1;
  const std::uint64_t k = a.min_element();
  const RInterval kk = RInterval::from_u64(k);
  const RInterval one(1.0), two_t = RInterval(2.0) * t, minus_two_t = -two_t;
  const RInterval NN = RInterval::from_u64(N);
  const RInterval logN = log(NN);
  const double logN_lo = logN.lo(), logN_hi = logN.hi();
  const double two_t_lo = two_t.lo(), two_t_hi = two_t.hi();
  // err = c_t * left * right, where left/right are the hat weights in [0,1].
  const RInterval c_t = RInterval(0.5) * sqr(mesh.spacing()) * two_t * (two_t + one) *
                        exp(two_t * mesh.spacing() / kk) / sqr(kk);
  const double c_hi = c_t.hi();

  std::vector<Letter> ls = a.letters(M);
  std::vector<Prepared> prep(M);
  const std::uint64_t exact_cap = (kExactLimit - N) / N;
  for (std::size_t i = 0; i < M; ++i) {
    prep[i].value = ls[i].value;
    prep[i].exact = ls[i].fits && ls[i].value <= exact_cap;
    prep[i].iv = ls[i].iv;
    prep[i].log = ls[i].log;
    if (!prep[i].exact && !(ls[i].iv.lo() > static_cast<double>(N))) {
      throw ParameterError("letter too large for exact cell location but not beyond the first cell");
    }
  }

  if (with_tail) {
    bool exhausted = a.size() && M >= *a.size();
    if (!exhausted) {
      RInterval tail(0.0);
      if (opts.P_cap) {
        if (*opts.P_cap < M) throw ParameterError("P_cap must be >= M");
        for (std::size_t i = M + 1; i <= *opts.P_cap; ++i) tail += a.letter_power(i, t);
      } else {
        tail = tail_sum_upper(a, M, t);
      }
      Letter next = a.letter(M + 1);
      tp.corr = exp(RInterval(2.0) / (kk * next.iv)) * tail;
    }
  }

  const bool want_a = opts.side != Side::Upper;
  const bool want_b = opts.side != Side::Lower;
  std::vector<std::vector<std::uint32_t>> acols(n), bcols(n);
  std::vector<std::vector<RInterval>> avals(n), bvals(n);
  std::vector<double> row_max_err(n, 0.0);
  const std::uint64_t NN2 = static_cast<std::uint64_t>(N) * N;

  parallel_chunks(n, opts.workers, [&](std::size_t begin, std::size_t end) {
    RowSums arow(n), brow(n);
    for (std::size_t j = begin; j < end; ++j) {
      const RInterval xj = mesh.node(j);
      double worst = 0.0;
      for (std::size_t i = 0; i < M; ++i) {
        const Prepared& e = prep[i];
        if (e.exact) {
          // S = x_j + e = P/N with P an exact integer; y = N/P. All
          // quantities are positive and bounded with relative slack.
          const std::uint64_t P = j + e.value * N;
          const double Pd = static_cast<double>(P);
          const double L = std::log(Pd);
          const double d_lo = L * kDn - logN_hi, d_hi = L * kUp - logN_lo;
          const double logS_lo = d_lo > 0 ? d_lo * kDn1 : 0.0;
          const double logS_hi = d_hi * kUp1;
          const double u_lo = -(two_t_hi * logS_hi) * kUp1;
          const double u_hi = -(two_t_lo * logS_lo) * kDn1;
          const double E1 = std::exp(u_lo);
          const double W_lo = E1 * kDn;
          const double delta = (u_hi - u_lo) * kUp1;
          const double W_hi = delta < 1e-3 ? E1 * ((1.0 + delta * (1.0 + delta)) * (1.0 + 0x1p-48)) : std::exp(u_hi) * kUp;

          const std::uint64_t m = NN2 / P;
          const std::uint64_t r = NN2 - m * P;  // N y - m = r/P
          if (r == 0) {
            if (want_a) arow.add(m, W_lo * kDn, W_hi * kUp);
            if (want_b) brow.add(m, W_lo * kDn, W_hi * kUp);
            continue;
          }
          const double qr = static_cast<double>(r) / Pd;
          const double ql = static_cast<double>(P - r) / Pd;
          const double r_lo = qr * kDn1, r_hi = qr * kUp1;
          const double l_lo = ql * kDn1, l_hi = ql * kUp1;
          const double err_hi = c_hi * l_hi * r_hi * kUp;
          if (err_hi >= 1.0) throw MeshTooCoarse("interpolation error factor reaches 1; refine the mesh");
          worst = std::max(worst, err_hi);
          if (want_a) {
            const double om = (1.0 - err_hi) - 0x1p-52;
            const double wa = W_lo * om;
            arow.add(m, wa * l_lo * kDn, W_hi * l_hi * kUp);
            arow.add(m + 1, wa * r_lo * kDn, W_hi * r_hi * kUp);
          }
          if (want_b) {
            brow.add(m, W_lo * l_lo * kDn, W_hi * l_hi * kUp);
            brow.add(m + 1, W_lo * r_lo * kDn, W_hi * r_hi * kUp);
          }
          continue;
        }
        // Letters beyond 2^53/N: y < 1/N, so y lies in the first cell.
        const RInterval S(rnd::add_down(e.iv.lo(), xj.lo()), rnd::add_up(e.iv.hi(), xj.hi()));
        const RInterval logS(e.log.lo(), rnd::add_up(e.log.hi(), rnd::div_up(xj.hi(), e.iv.lo())));
        const RInterval W = exp(minus_two_t * logS);
        const RInterval right = NN / S;
        if (!(right.hi() < 1.0)) throw Error("huge letter not inside the first cell");
        const RInterval left = one - right;
        const RInterval err = c_t * left * right;
        if (err.hi() >= 1.0) throw MeshTooCoarse("interpolation error factor reaches 1; refine the mesh");
        worst = std::max(worst, err.hi());
        if (want_a) {
          const RInterval WA = W * (one - err);
          const RInterval wl = WA * left, wr = WA * right;
          arow.add(0, wl.lo(), wl.hi());
          arow.add(1, wr.lo(), wr.hi());
        }
        if (want_b) {
          const RInterval wl = W * left, wr = W * right;
          brow.add(0, wl.lo(), wl.hi());
          brow.add(1, wr.lo(), wr.hi());
        }
      }
      if (want_b && (tp.corr.hi() > 0)) brow.add(0, tp.corr.lo(), tp.corr.hi());
      if (want_a) arow.flush(acols[j], avals[j]);
      if (want_b) brow.flush(bcols[j], bvals[j]);
      row_max_err[j] = worst;
    }
  });

  if (want_a) tp.A = build_csr(n, acols, avals);
  if (want_b) tp.B = build_csr(n, bcols, bvals);
  tp.max_err = *std::max_element(row_max_err.begin(), row_max_err.end());
  return tp;
}

void dump_triplets(std::ostream& os, const IMatrix& m) {
  char buf[128];
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t p = m.row_ptr[i]; p < m.row_ptr[i + 1]; ++p) {
      std::snprintf(buf, sizeof buf, "%zu %u %a %a\n", i, m.col[p], m.val[p].lo(), m.val[p].hi());
      os << buf;
    }
  }
}

}  // namespace cfdim
