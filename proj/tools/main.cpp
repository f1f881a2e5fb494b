// cfdim: certified Hausdorff dimension and dimension spectrum of continued
// fraction sets.
//
// Exit codes
//   0  success
//   1  usage or other error
//   2  invalid alphabet descriptor or config
//   3  divergent exponent range (tail sum at or below theta)
//   4  mesh too coarse for the requested letters
//   5  cached certificate does not match the request
//   6  at least one table row failed
//   7  bisection could not certify its initial bracket

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cfdim/error.hpp"
#include "cfdim/spectral.hpp"
#include "cfdim/spectrum.hpp"
#include "cfdim/transfer.hpp"
#include "record.hpp"
#include "tables.hpp"

namespace {

using namespace cfdim;
using cfdim::cli::json;

enum Exit : int { kOk = 0, kOther = 1, kAlphabet = 2, kDivergence = 3, kMesh = 4, kCache = 5, kRow = 6, kBracket = 7 };

class InvalidAlphabet : public Error {
 public:
  using Error::Error;
};
class CacheMismatch : public Error {
 public:
  using Error::Error;
};

struct Output {
  std::string format = "text";
  std::string record_path;
  unsigned workers = 0;
};

struct AlphabetArg {
  std::string spec;
  std::string config;

  Alphabet load() const {
    std::string text = spec;
    if (!config.empty()) {
      std::ifstream in(config);
      if (!in) throw InvalidAlphabet("cannot read " + config);
      std::stringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    if (text.empty()) throw InvalidAlphabet("give --alphabet or --config");
    try {
      return Alphabet::parse(text);
    } catch (const ConfigError& e) {
      throw InvalidAlphabet(e.what());
    } catch (const ParameterError& e) {
      throw InvalidAlphabet(e.what());
    }
  }
};

std::string fmt(double x, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string csv_header() { return "alphabet,M,N,strategy,h_lo,h_hi,width,gap_hi,seconds"; }

std::string csv_cells(const DimensionCertificate& c, double seconds) {
  std::ostringstream os;
  os << c.alphabet << ',' << c.M << ',' << c.N << ',' << strategy_name(c.strategy) << ',' << fmt(c.h_lo, 17) << ','
     << fmt(c.h_hi, 17) << ',' << fmt(c.width(), 6) << ',' << fmt(c.gap.hi(), 6) << ',' << fmt(seconds, 4);
  return os.str();
}

std::string text_cert(const DimensionCertificate& c) {
  std::ostringstream os;
  os << "alphabet   " << c.alphabet << '\n'
     << "strategy   " << strategy_name(c.strategy) << "  M=" << c.M << " N=" << c.N << " tol=" << fmt(c.tol, 3) << '\n'
     << "dimension  [" << fmt(c.h_lo) << ", " << fmt(c.h_hi) << "]  width " << fmt(c.width(), 3) << '\n';
  if (c.strategy == Strategy::Strategy1) os << "gap        " << fmt(c.gap.hi(), 3) << '\n';
  if (c.strategy == Strategy::Strategy2) os << "corr       " << fmt(c.corr.hi(), 3) << '\n';
  if (!c.converged) os << "warning    bisection hit max_iter\n";
  return os.str();
}

void emit(const cli::RunRecord& rec, const Output& out, const std::string& text, const std::string& csv) {
  json j = rec.to_json();
  if (!out.record_path.empty()) {
    std::ofstream f(out.record_path);
    if (!f) throw Error("cannot write " + out.record_path);
    f << j.dump(2) << '\n';
  }
  if (out.format == "json") {
    std::cout << j.dump(2) << '\n';
  } else if (out.format == "csv") {
    std::cout << csv;
  } else {
    std::cout << text;
  }
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct DimArgs {
  AlphabetArg alphabet;
  std::optional<std::size_t> M, N;
  std::optional<std::string> strategy;
  std::optional<double> tol;
  std::size_t max_iter = 200;
  std::optional<double> t_lo;
  double t_hi = 1.0;
};

DimensionPlan resolve_plan(const Alphabet& a, const DimArgs& d) {
  DimensionPlan p = default_dimension_plan(a);
  if (d.M) p.M = *d.M;
  if (d.N) p.N = *d.N;
  if (d.strategy) p.strategy = parse_strategy(*d.strategy);
  if (d.tol) p.tol = *d.tol;
  return p;
}

json plan_json(const DimensionPlan& p) {
  return json{{"M", p.M}, {"N", p.N}, {"strategy", strategy_name(p.strategy)}, {"tol", cli::encode(p.tol)}};
}

int cmd_dim(const DimArgs& d, const Output& out) {
  auto start = std::chrono::steady_clock::now();
  Alphabet a = d.alphabet.load();
  DimensionPlan p = resolve_plan(a, d);
  BisectionOptions bo;
  bo.tol = p.tol;
  bo.max_iter = d.max_iter;
  bo.t_lo = d.t_lo;
  bo.t_hi = d.t_hi;
  bo.workers = out.workers;
  DimensionCertificate c = certify_dimension(a, p.M, p.N, p.strategy, bo);

  cli::RunRecord rec;
  rec.command = "dim";
  rec.alphabet = a.descriptor();
  rec.parameters = plan_json(p);
  rec.payload = cli::to_json(c);
  rec.wall_seconds = elapsed(start);
  rec.timestamp = cli::utc_timestamp();
  emit(rec, out, text_cert(c), csv_header() + '\n' + csv_cells(c, rec.wall_seconds) + '\n');
  return kOk;
}

struct SpectrumArgs {
  DimArgs dim;
  std::string cert;
  std::string external = "on";
};

// Accepts a RunRecord written by `dim` or `spectrum`.
DimensionCertificate load_cached(const std::string& path, const Alphabet& a) {
  std::ifstream in(path);
  if (!in) throw CacheMismatch("cannot read " + path);
  try {
    json j = json::parse(in);
    if (j.value("schema", "") != cli::kSchema) throw CacheMismatch(path + ": schema is not " + cli::kSchema);
    const json& p = j.at("payload");
    DimensionCertificate c = cli::certificate_from_json(p.contains("dim") ? p.at("dim") : p);
    if (c.alphabet != a.descriptor())
      throw CacheMismatch(path + " certifies '" + c.alphabet + "', not '" + a.descriptor() + "'");
    return c;
  } catch (const json::exception& e) {
    throw CacheMismatch(path + ": " + e.what());
  } catch (const ConfigError& e) {
    throw CacheMismatch(path + ": " + e.what());
  } catch (const ParameterError& e) {
    throw CacheMismatch(path + ": " + e.what());
  }
}

std::string text_report(const SpectrumReport& r) {
  std::ostringstream os;
  os << text_cert(r.dim);
  for (const auto& iv : r.full_intervals) {
    os << "full       [" << fmt(iv.lo, 9) << ", " << fmt(iv.hi, 9) << (iv.hi_open ? ")" : "]") << "  " << iv.criterion;
    if (iv.condition) os << " k0=" << iv.condition->k0;
    if (!iv.assumptions.empty()) {
      os << "  assumes";
      for (const auto& s : iv.assumptions) os << ' ' << s;
    }
    os << '\n';
  }
  for (const auto& w : r.nowhere_dense_windows)
    os << "nowhere    [" << fmt(w.lo, 9) << ", " << fmt(w.hi, 9) << "]  " << w.criterion << " pieces=" << w.pieces << '\n';
  os << "union     ";
  for (const auto& [lo, hi] : r.merged) os << " [" << fmt(lo, 9) << ", " << fmt(hi, 9) << ']';
  os << '\n' << "full spectrum  " << (r.full_spectrum ? "yes" : "no") << '\n';
  return os.str();
}

std::string csv_report(const SpectrumReport& r) {
  std::ostringstream os;
  os << "kind,lo,hi,hi_open,criterion,assumptions\n";
  for (const auto& iv : r.full_intervals) {
    os << "full," << fmt(iv.lo, 17) << ',' << fmt(iv.hi, 17) << ',' << iv.hi_open << ',' << iv.criterion << ',';
    for (std::size_t i = 0; i < iv.assumptions.size(); ++i) os << (i ? ";" : "") << iv.assumptions[i];
    os << '\n';
  }
  for (const auto& w : r.nowhere_dense_windows)
    os << "nowhere_dense," << fmt(w.lo, 17) << ',' << fmt(w.hi, 17) << ",0," << w.criterion << ",\n";
  return os.str();
}

int cmd_spectrum(const SpectrumArgs& s, const Output& out) {
  auto start = std::chrono::steady_clock::now();
  Alphabet a = s.dim.alphabet.load();
  SpectrumConfig cfg;
  cfg.workers = out.workers;
  cfg.use_external_facts = s.external == "on";
  DimensionPlan p = resolve_plan(a, s.dim);
  cfg.plan = p;
  if (!s.cert.empty()) cfg.dim = load_cached(s.cert, a);
  SpectrumReport r = full_spectrum_certify(a, cfg);

  cli::RunRecord rec;
  rec.command = "spectrum";
  rec.alphabet = a.descriptor();
  rec.parameters = plan_json(p);
  rec.parameters["use_external_facts"] = cfg.use_external_facts;
  rec.parameters["cached_certificate"] = !s.cert.empty();
  rec.payload = cli::to_json(r);
  rec.wall_seconds = elapsed(start);
  rec.timestamp = cli::utc_timestamp();
  emit(rec, out, text_report(r), csv_report(r));
  return kOk;
}

struct TableArgs {
  int table = 3;
  std::string scale = "desk";
  std::vector<std::string> rows;
  std::size_t max_letters = 100000;
  std::size_t max_N = 2000;
};

int cmd_table(const TableArgs& t, const Output& out) {
  auto start = std::chrono::steady_clock::now();
  cli::ScaleCaps caps{t.scale == "full", t.max_letters, t.max_N};
  json rows = json::array(), timing = json::object();
  std::ostringstream text, csv;
  csv << csv_header() << ",table,row,paper_M,paper_lo,paper_hi,status\n";
  bool ok = true, any = false;
  for (const auto& row : cli::table_rows(t.table)) {
    if (!t.rows.empty() && std::find(t.rows.begin(), t.rows.end(), row.name) == t.rows.end()) continue;
    any = true;
    cli::RowResult r = cli::run_row(row, caps, out.workers);
    ok = ok && r.status == "PASS";
    timing[row.name] = r.seconds;
    json o{{"row", row.name}, {"alphabet", row.alphabet}, {"M", r.M}, {"N", r.N}, {"tol", cli::encode(r.tol)},
           {"strategy", strategy_name(row.strategy)}, {"paper_M", row.paper_M}, {"paper_lo", cli::encode(row.lo)},
           {"paper_hi", cli::encode(row.hi)}, {"status", r.status}, {"detail", r.detail}};
    if (r.cert) o["certificate"] = cli::to_json(*r.cert);
    rows.push_back(o);

    char line[256];
    if (r.cert) {
      std::snprintf(line, sizeof line, "%-8s M=%-8zu N=%-5zu [%.11f, %.11f] width %.2e  paper [%.10g, %.10g]  %s %.1fs\n",
                    row.name.c_str(), r.M, r.N, r.cert->h_lo, r.cert->h_hi, r.cert->width(), row.lo, row.hi,
                    r.status.c_str(), r.seconds);
    } else {
      std::snprintf(line, sizeof line, "%-8s M=%-8zu N=%-5zu %s: %s\n", row.name.c_str(), r.M, r.N, r.status.c_str(),
                    r.detail.c_str());
    }
    text << line;
    if (r.cert) {
      csv << csv_cells(*r.cert, r.seconds);
    } else {
      csv << row.alphabet << ',' << r.M << ',' << r.N << ',' << strategy_name(row.strategy) << ",,,,," << fmt(r.seconds, 4);
    }
    csv << ',' << t.table << ',' << row.name << ',' << row.paper_M << ',' << fmt(row.lo, 11) << ',' << fmt(row.hi, 11) << ','
        << r.status << '\n';
  }
  if (!any) throw ParameterError("no table row matches --row");

  cli::RunRecord rec;
  rec.command = "table";
  rec.alphabet = "";
  rec.parameters = {{"table", t.table}, {"scale", t.scale}, {"max_letters", t.max_letters}, {"max_N", t.max_N}};
  rec.payload = {{"rows", rows}, {"all_pass", ok}};
  rec.wall_seconds = elapsed(start);
  rec.timing = timing;
  rec.timestamp = cli::utc_timestamp();
  emit(rec, out, text.str(), csv.str());
  return ok ? kOk : kRow;
}

struct MatrixArgs {
  AlphabetArg alphabet;
  std::size_t M = 0, N = 100;
  double t = 0.5;
  bool tail = false;
  std::string side = "both";
};

int cmd_matrices(const MatrixArgs& m, const Output& out) {
  Alphabet a = m.alphabet.load();
  AssembleOptions ao;
  ao.workers = out.workers;
  ao.side = m.side == "A" ? Side::Lower : m.side == "B" ? Side::Upper : Side::Both;
  std::size_t M = m.M;
  if (M == 0) {
    if (!a.is_finite()) throw ParameterError("--M is required for infinite alphabets");
    M = *a.size();
  }
  TransferPair tp = assemble(a, M, m.N, RInterval(m.t), m.tail, ao);
  if (ao.side != Side::Upper) {
    std::cout << "# A " << tp.A.n << '\n';
    dump_triplets(std::cout, tp.A);
  }
  if (ao.side != Side::Lower) {
    std::cout << "# B " << tp.B.n << '\n';
    dump_triplets(std::cout, tp.B);
  }
  return kOk;
}

void add_alphabet(CLI::App* sub, AlphabetArg& a) {
  sub->add_option("--alphabet,-a", a.spec, "descriptor, e.g. powers:2, ap:1,2, explicit:1,4");
  sub->add_option("--config", a.config, "file holding a key=value alphabet config");
}

void add_plan(CLI::App* sub, DimArgs& d) {
  add_alphabet(sub, d.alphabet);
  sub->add_option("--M", d.M, "number of letters (0 = all, finite alphabets)");
  sub->add_option("--N", d.N, "mesh intervals");
  sub->add_option("--strategy", d.strategy, "1, 2 or finite")->check(CLI::IsMember({"1", "2", "finite"}));
  sub->add_option("--tol", d.tol, "bisection tolerance");
  sub->add_option("--max-iter", d.max_iter, "bisection step limit");
  sub->add_option("--t-lo", d.t_lo, "initial lower bracket (default just above theta)");
  sub->add_option("--t-hi", d.t_hi, "initial upper bracket");
}

int run(int argc, char** argv) {
  CLI::App app{"Certified dimension estimates for continued fraction sets"};
  app.require_subcommand(1);
  Output out;
  DimArgs dim;
  SpectrumArgs spec;
  TableArgs table;
  MatrixArgs mat;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out.format, "stdout format")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--record", out.record_path, "write the JSON run record here");
    sub->add_option("--workers", out.workers, "worker threads (default CFDIM_WORKERS or all cores)");
  };

  auto* d = app.add_subcommand("dim", "certify the Hausdorff dimension");
  add_plan(d, dim);
  common(d);

  auto* s = app.add_subcommand("spectrum", "certify parts of the dimension spectrum");
  add_plan(s, spec.dim);
  s->add_option("--cert", spec.cert, "reuse a dimension certificate from a run record");
  s->add_option("--use-external-facts", spec.external, "allow the gated initial-interval fact")
      ->check(CLI::IsMember({"on", "off"}));
  common(s);

  auto* t = app.add_subcommand("table", "rerun a published dimension table");
  t->add_option("--table", table.table, "1, 2 or 3")->check(CLI::Range(1, 3));
  t->add_option("--scale", table.scale, "desk or full")->check(CLI::IsMember({"desk", "full"}));
  t->add_option("--row", table.rows, "restrict to these rows (odd, even, prime, square, power2, lac, ...)");
  t->add_option("--max-letters", table.max_letters, "desk cap on letters");
  t->add_option("--max-N", table.max_N, "desk cap on N");
  common(t);

  auto* m = app.add_subcommand("matrices", "dump A and B as row col lo hi triplets");
  add_alphabet(m, mat.alphabet);
  m->add_option("--M", mat.M, "number of letters");
  m->add_option("--N", mat.N, "mesh intervals");
  m->add_option("--t", mat.t, "exponent");
  m->add_flag("--tail", mat.tail, "fold the tail into B");
  m->add_option("--side", mat.side, "A, B or both")->check(CLI::IsMember({"A", "B", "both"}));
  common(m);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kOther;
  }

  if (d->parsed()) return cmd_dim(dim, out);
  if (s->parsed()) return cmd_spectrum(spec, out);
  if (t->parsed()) return cmd_table(table, out);
  return cmd_matrices(mat, out);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InvalidAlphabet& e) {
    std::cerr << "cfdim: invalid alphabet: " << e.what() << '\n';
    return kAlphabet;
  } catch (const DivergenceError& e) {
    std::cerr << "cfdim: divergent: " << e.what() << '\n';
    return kDivergence;
  } catch (const MeshTooCoarse& e) {
    std::cerr << "cfdim: mesh too coarse: " << e.what() << '\n';
    return kMesh;
  } catch (const CacheMismatch& e) {
    std::cerr << "cfdim: cache mismatch: " << e.what() << '\n';
    return kCache;
  } catch (const BracketError& e) {
    std::cerr << "cfdim: bracket: " << e.what() << '\n';
    return kBracket;
  } catch (const std::exception& e) {
    std::cerr << "cfdim: " << e.what() << '\n';
    return kOther;
  }
}
