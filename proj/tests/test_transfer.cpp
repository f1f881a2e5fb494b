#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "cfdim/error.hpp"
#include "cfdim/spectral.hpp"
#include "cfdim/transfer.hpp"
#include "properties.hpp"

using namespace cfdim;

TEST_CASE("mesh nodes") {
  Mesh m = build_mesh(4);
  REQUIRE(m.nodes.size() == 5);
  CHECK(m.nodes == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(build_mesh(1).nodes == std::vector<double>{0, 1});
  Mesh big = build_mesh(6000);
  CHECK(big.nodes.size() == 6001);
  CHECK(big.nodes.front() == 0.0);
  CHECK(big.nodes.back() == 1.0);
  CHECK(big.node(1).contains(1.0 / 6000));
  CHECK_THROWS_AS(build_mesh(0), ParameterError);
}

TEST_CASE("interpolation error factor") {
  Mesh m = build_mesh(100);
  RInterval at_node = interp_error_factor(m, RInterval(0.5), 2, m.node(30), 30);
  CHECK(at_node.contains(0.0));
  CHECK(at_node.hi() < 1e-18);

  // midpoint of cell 30: (l^2/8)(2t)(2t+1) e^{2tl/k} k^{-2} = 6.28132825537125664...e-6
  RInterval y = RInterval::ratio(61, 200);
  RInterval mid = interp_error_factor(m, RInterval(0.5), 2, y, 30);
  CHECK(mid.contains(6.2813282553712566e-6));
  CHECK(mid.width() < 1e-18);

  // N = 1, t = 1, k = 1 at the cell midpoint: (1/8) * 2 * 3 * e^2 > 1
  CHECK_THROWS_AS(interp_error_factor(build_mesh(1), RInterval(1.0), 1, RInterval(0.5), 0), MeshTooCoarse);
}

TEST_CASE("single letter, one cell") {
  TransferPair tp = assemble(Alphabet::parse("explicit:2"), 1, 1, RInterval(0.5), false);
  REQUIRE(tp.B.n == 2);
  // row x = 0: y = 1/2, weights 1/2 and 1/2, scaled by 2^{-1}
  CHECK(tp.B.at(0, 0).contains(0.25));
  CHECK(tp.B.at(0, 1).contains(0.25));
  CHECK(tp.A.at(0, 0).hi() <= 0.25 * (1 + 1e-13));
  CHECK(tp.A.at(0, 0).lo() > 0.2);
  // row x = 1: y = 1/3, |3|^{-1}, weights 2/3 and 1/3
  CHECK(tp.B.at(1, 0).contains(2.0 / 9));
  CHECK(tp.B.at(1, 1).contains(1.0 / 9));
  CHECK(tp.corr.hi() == 0.0);
  CHECK_FALSE(tp.with_tail);
}

TEST_CASE("no tail term for a complete finite alphabet") {
  TransferPair tp = assemble(Alphabet::parse("explicit:1,4,9"), 3, 20, RInterval(0.6), true);
  CHECK(tp.corr.hi() == 0.0);
}

TEST_CASE("entry signs, ordering and row sparsity") {
  struct Case {
    const char* alphabet;
    std::size_t M, N;
    double t;
    bool tail;
  };
  for (const Case c : {Case{"explicit:1,2,5", 3, 40, 0.6, false}, Case{"powers:2", 20, 200, 0.47, true},
                       Case{"squares", 50, 100, 0.6, true}, Case{"odd", 200, 50, 0.82, true},
                       Case{"lacunary:2", 10, 100, 0.24, true}}) {
    CAPTURE(c.alphabet);
    TransferPair tp = assemble(Alphabet::parse(c.alphabet), c.M, c.N, RInterval(c.t), c.tail);
    REQUIRE(tp.A.n == c.N + 1);
    for (std::size_t j = 0; j < tp.A.n; ++j) {
      CHECK(tp.A.row_nnz(j) <= 2 * c.M);
      CHECK(tp.B.row_nnz(j) <= 2 * c.M + 1);
      for (std::size_t p = tp.A.row_ptr[j]; p < tp.A.row_ptr[j + 1]; ++p) {
        CHECK(tp.A.val[p].lo() >= 0.0);
        CHECK(tp.A.val[p].lo() <= tp.B.at(j, tp.A.col[p]).hi());
      }
      for (std::size_t p = tp.B.row_ptr[j]; p < tp.B.row_ptr[j + 1]; ++p) CHECK(tp.B.val[p].lo() >= 0.0);
    }
    if (c.tail) CHECK(tp.corr.lo() > 0.0);
    std::vector<double> w(tp.A.n, 1.0);
    // (A w)_j <= (B w)_j for a positive w: A certified above r, B below, never crossing
    for (double lam : {0.5, 0.9, 1.0, 1.1}) {
      if (certify_radius_above(tp.A, w, lam)) CHECK_FALSE(certify_radius_below(tp.B, w, lam));
    }
  }
}

TEST_CASE("powers of two at M = 50, N = 1000 bracket radius one") {
  Alphabet a = Alphabet::parse("powers:2");
  TransferPair lo = assemble(a, 50, 1000, RInterval(0.472071520), true);
  TransferPair hi = assemble(a, 50, 1000, RInterval(0.472071540), true);
  PerronEstimate el = estimate_perron(lo.A), eh = estimate_perron(hi.B);
  CHECK(certify_radius_above(lo.A, el.w, 1.0));
  CHECK(certify_radius_below(hi.B, eh.w, 1.0));
}

TEST_CASE("sandwich against dense collocation") {
  auto r = props::transfer_sandwich(400, 99);
  INFO(r.failure);
  CHECK(r.ok);
  CHECK(r.cases == 400);
}

TEST_CASE("mesh too coarse is reported, not ignored") {
  CHECK_THROWS_AS(assemble(Alphabet::parse("explicit:1,2"), 2, 1, RInterval(1.0), false), MeshTooCoarse);
}

TEST_CASE("triplet dump has one line per stored entry") {
  TransferPair tp = assemble(Alphabet::parse("explicit:2,3"), 2, 4, RInterval(0.5), false);
  std::ostringstream os;
  dump_triplets(os, tp.B);
  std::istringstream in(os.str());
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::size_t i, j;
    std::string lo, hi;
    CHECK(static_cast<bool>(fields >> i >> j >> lo >> hi));
    CHECK(std::strtod(lo.c_str(), nullptr) == tp.B.at(i, j).lo());
    ++lines;
  }
  CHECK(lines == tp.B.nnz());
}

TEST_CASE("P_cap universe sits between the finite truncation and the full tail") {
  Alphabet a = Alphabet::parse("powers:2");
  RInterval t(0.47);
  TransferPair capped = assemble(a, 10, 50, t, true, AssembleOptions{30, Side::Both, 0});
  TransferPair full = assemble(a, 10, 50, t, true);
  CHECK(capped.corr.hi() <= full.corr.hi());
  CHECK(capped.corr.lo() > 0.0);
}
