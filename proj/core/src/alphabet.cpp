#include "cfdim/alphabet.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "cfdim/error.hpp"
#include "cfdim/primes.hpp"

namespace cfdim {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool checked_mul(std::uint64_t a, std::uint64_t b, std::uint64_t& out) { return !__builtin_mul_overflow(a, b, &out); }
bool checked_add(std::uint64_t a, std::uint64_t b, std::uint64_t& out) { return !__builtin_add_overflow(a, b, &out); }

// lambda^e, or nullopt on overflow.
std::optional<std::uint64_t> checked_pow(std::uint64_t lambda, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (!checked_mul(r, lambda, r)) return std::nullopt;
  }
  return r;
}

Letter exact_letter(std::uint64_t v) {
  RInterval iv = RInterval::from_u64(v);
  return Letter{v, true, iv, log(iv)};
}

Letter huge_letter(const RInterval& log_value) { return Letter{0, false, exp(log_value), log_value}; }

// ln(e + shift), valid for huge letters via ln e <= ln(e + shift) <= ln e + shift / e.
RInterval shifted_log(const Letter& e, std::uint64_t shift) {
  if (shift == 0) return e.log;
  std::uint64_t v = 0;
  if (e.fits && checked_add(e.value, shift, v)) return log(RInterval::from_u64(v));
  double slack = rnd::div_up(static_cast<double>(shift), e.iv.lo());
  return RInterval(e.log.lo(), rnd::add_up(e.log.hi(), slack));
}

// (1 + shift/e)^{-2s} for e >= e_min, as an interval whose lower end is valid
// for every such e.
RInterval shift_factor(const Letter& e_min, std::uint64_t shift, const RInterval& s) {
  if (shift == 0) return RInterval(1.0);
  RInterval ratio = RInterval(static_cast<double>(shift)) / e_min.iv;
  RInterval f = exp(RInterval(-2.0) * s * log(RInterval(1.0) + ratio));
  return RInterval(f.lo(), 1.0);
}

void require_above(const RInterval& t, double threshold, const char* what) {
  if (!(t.lo() > threshold)) {
    std::ostringstream os;
    os << "tail sum for " << what << " diverges at exponent t.lo=" << t.lo() << " (needs t > " << threshold << ")";
    throw DivergenceError(os.str());
  }
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out(s.substr(b, e - b));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::uint64_t parse_u64(const std::string& s, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError("expected a natural number for " + std::string(what) + ", got '" + s + "'");
  }
  return v;
}

std::vector<std::uint64_t> parse_list(const std::string& s, std::string_view what) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_u64(trim(item), what));
  return out;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("expected a boolean, got '" + s + "'");
}

Family family_from(const std::string& name, const std::map<std::string, std::string>& kv,
                   const std::vector<std::string>& args) {
  auto arg = [&](std::size_t i, const char* key) -> std::string {
    if (auto it = kv.find(key); it != kv.end()) return it->second;
    if (i < args.size()) return args[i];
    throw ConfigError("alphabet '" + name + "' is missing parameter '" + key + "'");
  };
  auto u = [&](std::size_t i, const char* key) { return parse_u64(arg(i, key), key); };

  if (name == "explicit" || name == "list") {
    std::vector<std::uint64_t> elems;
    if (auto it = kv.find("elems"); it != kv.end()) {
      elems = parse_list(it->second, "elems");
    } else {
      for (const auto& a : args) elems.push_back(parse_u64(a, "elems"));
    }
    return Explicit{elems};
  }
  if (name == "ap" || name == "progression") return ArithmeticProgression{u(0, "s"), u(1, "q")};
  if (name == "odd") return ArithmeticProgression{1, 2};
  if (name == "even") return ArithmeticProgression{2, 2};
  if (name == "primes" || name == "prime") return Primes{};
  if (name == "squares" || name == "square") return Squares{};
  if (name == "powers" || name == "power" || name == "powers+" || name == "power+") {
    bool one = name.back() == '+';
    if (auto it = kv.find("include_one"); it != kv.end()) one = parse_bool(it->second);
    return Powers{u(0, "lambda"), one};
  }
  if (name == "scaledpowers" || name == "scaled") return ScaledPowers{u(0, "r"), u(1, "lambda")};
  if (name == "lacunary" || name == "lac") return Lacunary{u(0, "b")};
  throw ConfigError("unknown alphabet family '" + name + "'");
}

}  // namespace

Alphabet::Alphabet(Family family) : family_(std::move(family)) {
  std::visit(Overloaded{
                 [](Explicit& e) {
                   if (e.elems.empty()) throw ParameterError("explicit alphabet must be non-empty");
                   std::sort(e.elems.begin(), e.elems.end());
                   if (e.elems.front() == 0) throw ParameterError("alphabet letters must be >= 1");
                   if (std::adjacent_find(e.elems.begin(), e.elems.end()) != e.elems.end()) {
                     throw ParameterError("explicit alphabet has repeated letters");
                   }
                 },
                 [](ArithmeticProgression& p) {
                   if (p.s == 0 || p.q == 0) throw ParameterError("progression needs s >= 1 and q >= 1");
                 },
                 [](Primes&) {},
                 [](Squares&) {},
                 [](Powers& p) {
                   if (p.lambda < 2) throw ParameterError("powers need lambda >= 2");
                 },
                 [](ScaledPowers& p) {
                   if (p.lambda < 2 || p.r == 0 || p.lambda % p.r != 0) {
                     throw ParameterError("scaled powers need lambda >= 2 and r | lambda");
                   }
                 },
                 [](Lacunary& l) {
                   if (l.b < 2) throw ParameterError("lacunary base must be >= 2");
                 },
             },
             family_);
}

Alphabet Alphabet::parse(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw ConfigError("empty alphabet descriptor");
  if (s.find('=') != std::string::npos) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(s);
    std::string tok;
    while (ss >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + tok + "'");
      kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto it = kv.find("family");
    if (it == kv.end()) throw ConfigError("config lacks 'family='");
    return Alphabet(family_from(it->second, kv, {}));
  }
  std::string name = s;
  std::vector<std::string> args;
  if (auto colon = s.find(':'); colon != std::string::npos) {
    name = s.substr(0, colon);
    std::stringstream ss(s.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) args.push_back(trim(item));
  }
  return Alphabet(family_from(name, {}, args));
}

bool Alphabet::is_finite() const { return std::holds_alternative<Explicit>(family_); }

std::optional<std::size_t> Alphabet::size() const {
  if (const auto* e = std::get_if<Explicit>(&family_)) return e->elems.size();
  return std::nullopt;
}

std::uint64_t Alphabet::min_element() const { return letter(1).value; }

bool Alphabet::contains_one() const { return min_element() == 1; }

double Alphabet::theta() const {
  return std::visit(Overloaded{
                        [](const ArithmeticProgression&) { return 0.5; },
                        [](const Primes&) { return 0.5; },
                        [](const Squares&) { return 0.25; },
                        [](const auto&) { return 0.0; },
                    },
                    family_);
}

std::string Alphabet::descriptor() const {
  return std::visit(Overloaded{
                        [](const Explicit& e) {
                          std::string s = "explicit:";
                          for (std::size_t i = 0; i < e.elems.size(); ++i) {
                            if (i) s += ',';
                            s += std::to_string(e.elems[i]);
                          }
                          return s;
                        },
                        [](const ArithmeticProgression& p) {
                          return "ap:" + std::to_string(p.s) + "," + std::to_string(p.q);
                        },
                        [](const Primes&) { return std::string("primes"); },
                        [](const Squares&) { return std::string("squares"); },
                        [](const Powers& p) {
                          return std::string(p.include_one ? "powers+:" : "powers:") + std::to_string(p.lambda);
                        },
                        [](const ScaledPowers& p) {
                          return "scaledpowers:" + std::to_string(p.r) + "," + std::to_string(p.lambda);
                        },
                        [](const Lacunary& l) { return "lacunary:" + std::to_string(l.b); },
                    },
                    family_);
}

Letter Alphabet::letter(std::size_t n) const {
  if (n == 0) throw ParameterError("letter index is 1-based");
  return std::visit(
      Overloaded{
          [n](const Explicit& e) {
            if (n > e.elems.size()) throw LengthError("explicit alphabet has only " + std::to_string(e.elems.size()) + " letters");
            return exact_letter(e.elems[n - 1]);
          },
          [n](const ArithmeticProgression& p) {
            std::uint64_t v = 0;
            if (checked_mul(n - 1, p.q, v) && checked_add(v, p.s, v)) return exact_letter(v);
            return huge_letter(log(RInterval::from_u64(p.s) + RInterval::from_u64(n - 1) * RInterval::from_u64(p.q)));
          },
          [n](const Primes&) { return exact_letter(primes::nth(n)); },
          [n](const Squares&) {
            std::uint64_t v = 0;
            if (checked_mul(n, n, v)) return exact_letter(v);
            return huge_letter(RInterval(2.0) * log(RInterval::from_u64(n)));
          },
          [n](const Powers& p) {
            std::uint64_t e = p.include_one ? n - 1 : n;
            if (auto v = checked_pow(p.lambda, e)) return exact_letter(*v);
            return huge_letter(RInterval::from_u64(e) * log(RInterval::from_u64(p.lambda)));
          },
          [n](const ScaledPowers& p) {
            if (auto v = checked_pow(p.lambda, n)) return exact_letter(*v / p.r);
            return huge_letter(RInterval::from_u64(n) * log(RInterval::from_u64(p.lambda)) -
                               log(RInterval::from_u64(p.r)));
          },
          [n](const Lacunary& l) {
            std::uint64_t e = 0;
            if (checked_mul(n, n, e)) {
              if (auto v = checked_pow(l.b, e)) return exact_letter(*v);
            }
            RInterval nn = RInterval::from_u64(n);
            return huge_letter(sqr(nn) * log(RInterval::from_u64(l.b)));
          },
      },
      family_);
}

std::vector<Letter> Alphabet::letters(std::size_t count) const {
  std::vector<Letter> out;
  out.reserve(count);
  if (std::holds_alternative<Primes>(family_)) {
    for (std::uint64_t p : primes::first(count)) out.push_back(exact_letter(p));
    return out;
  }
  for (std::size_t n = 1; n <= count; ++n) out.push_back(letter(n));
  return out;
}

std::vector<std::uint64_t> Alphabet::enumerate(std::size_t count) const {
  if (count == 0) throw ParameterError("enumerate needs count >= 1");
  if (auto sz = size(); sz && count > *sz) {
    throw LengthError("explicit alphabet has only " + std::to_string(*sz) + " letters");
  }
  if (std::holds_alternative<Primes>(family_)) return primes::first(count);
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::size_t n = 1; n <= count; ++n) {
    Letter l = letter(n);
    if (!l.fits) throw DomainError("letter " + std::to_string(n) + " exceeds 64 bits");
    out.push_back(l.value);
  }
  return out;
}

RInterval Alphabet::letter_power(std::size_t n, const RInterval& t) const {
  return exp(RInterval(-2.0) * t * letter(n).log);
}

Alphabet Alphabet::truncated(std::size_t M) const {
  if (const auto* e = std::get_if<Explicit>(&family_); e && M >= e->elems.size()) return *this;
  return Alphabet(Explicit{enumerate(M)});
}

RInterval distortion_bound(const Alphabet& a) {
  std::uint64_t k = a.min_element();
  if (k == 1) return RInterval(4.0);
  RInterval kk = RInterval::from_u64(k);
  return exp(RInterval(2.0) / (sqr(kk) - RInterval(1.0)));
}

RInterval lyapunov_lower_bound(const Alphabet& a) {
  RInterval k = RInterval::from_u64(a.min_element());
  return RInterval(2.0) * log((k + sqrt(sqr(k) + RInterval(4.0))) / RInterval(2.0));
}

RInterval tail_sum_upper(const Alphabet& a, std::size_t M, const RInterval& t) {
  const RInterval one(1.0), two(2.0);
  auto head = [&](std::size_t from, std::size_t to) {  // sum over from < n <= to
    RInterval s(0.0);
    for (std::size_t n = from + 1; n <= to; ++n) s += a.letter_power(n, t);
    return s;
  };
  return std::visit(
      Overloaded{
          [&](const Explicit& e) {
            if (M >= e.elems.size()) return RInterval(0.0);
            require_above(t, 0.0, "explicit alphabet");
            return head(M, e.elems.size());
          },
          [&](const ArithmeticProgression& p) {
            require_above(t, 0.5, "arithmetic progression");
            std::size_t m = std::max<std::size_t>(M, 1);
            // sum_{n>m} e_n^{-2t} <= int_m^inf (s+(x-1)q)^{-2t} dx = e_m^{1-2t} / (q(2t-1))
            RInterval em = a.letter(m).log;
            RInterval tail = exp((one - two * t) * em) / (RInterval::from_u64(p.q) * (two * t - one));
            return head(M, m) + tail;
          },
          [&](const Squares&) {
            require_above(t, 0.25, "squares");
            std::size_t m = std::max<std::size_t>(M, 1);
            RInterval four_t = RInterval(4.0) * t;
            RInterval tail = exp((one - four_t) * log(RInterval::from_u64(m))) / (four_t - one);
            return head(M, m) + tail;
          },
          [&](const Primes&) {
            require_above(t, 0.5, "primes");
            std::size_t m = std::max<std::size_t>(M, 2);
            // p(n) >= n (ln n + ln ln n - 1) for n >= 2, and the bracket is increasing in n.
            RInterval ln1 = log(RInterval::from_u64(m + 1));
            RInterval c = ln1 + log(ln1) - one;
            RInterval mm = RInterval::from_u64(m);
            RInterval tail = exp(RInterval(-2.0) * t * log(c)) * exp((one - two * t) * log(mm)) / (two * t - one);
            return head(M, m) + tail;
          },
          [&](const Powers& p) {
            require_above(t, 0.0, "powers");
            RInterval ratio = exp(RInterval(-2.0) * t * log(RInterval::from_u64(p.lambda)));
            return a.letter_power(M + 1, t) / (one - ratio);
          },
          [&](const ScaledPowers& p) {
            require_above(t, 0.0, "scaled powers");
            RInterval ratio = exp(RInterval(-2.0) * t * log(RInterval::from_u64(p.lambda)));
            return a.letter_power(M + 1, t) / (one - ratio);
          },
          [&](const Lacunary& l) {
            require_above(t, 0.0, "lacunary");
            // n^2 >= (M+1)^2 + (n - M - 1) for n > M.
            RInterval ratio = exp(RInterval(-2.0) * t * log(RInterval::from_u64(l.b)));
            return a.letter_power(M + 1, t) / (one - ratio);
          },
      },
      a.family());
}

std::size_t explicit_terms(const Alphabet& a) {
  return std::visit(Overloaded{
                        [](const Explicit& e) { return e.elems.size(); },
                        [](const ArithmeticProgression&) { return std::size_t{10000}; },
                        [](const Primes&) { return std::size_t{10000}; },
                        [](const Squares&) { return std::size_t{10000}; },
                        [](const Lacunary&) { return std::size_t{16}; },
                        [](const auto&) { return std::size_t{64}; },
                    },
                    a.family());
}

RInterval tail_sum_lower(const Alphabet& a, std::size_t k, const RInterval& s, std::uint64_t shift) {
  const RInterval one(1.0), two(2.0), minus_two_s = RInterval(-2.0) * s;
  require_above(s, a.theta(), "lower tail");
  std::size_t T = explicit_terms(a);
  std::size_t last = k + T;
  if (auto sz = a.size()) last = std::max(k, *sz);
  std::vector<Letter> ls = a.letters(a.is_finite() ? *a.size() : last + 1);

  RInterval partial(0.0);
  for (std::size_t n = k + 1; n <= last; ++n) partial += exp(minus_two_s * shifted_log(ls[n - 1], shift));
  if (a.is_finite()) return partial;

  // Analytic lower tail over n > K.
  const std::size_t K = last;
  const Letter& next = ls[K];  // e_{K+1}
  RInterval tail = std::visit(
      Overloaded{
          [&](const ArithmeticProgression& p) {
            // term n >= int_n^{n+1}, so sum_{n>K} >= (e_{K+1} + shift)^{1-2s} / (q(2s-1))
            return exp((one - two * s) * shifted_log(next, shift)) / (RInterval::from_u64(p.q) * (two * s - one));
          },
          [&](const Squares&) {
            RInterval four_s = RInterval(4.0) * s;
            return shift_factor(next, shift, s) * exp((one - four_s) * log(RInterval::from_u64(K + 1))) /
                   (four_s - one);
          },
          [&](const Primes&) {
            // For n >= X >= 16: p(n) <= n ln n (1 + g), g = lnln X / ln X, and
            // ln n <= ln X (n/X)^d with d = 1/ln X. Integrating the resulting
            // power gives (1+g)^{-2s} (ln X)^{-2s} X^{1-2s} / (2s(1+d) - 1).
            RInterval X = RInterval::from_u64(K + 1);
            RInterval lnX = log(X);
            RInterval g = log(lnX) / lnX;
            RInterval d = one / lnX;
            RInterval denom = two * s * (one + d) - one;
            if (!(denom.lo() > 0)) return RInterval(0.0);
            RInterval v = exp(minus_two_s * log(one + g)) * exp(minus_two_s * log(lnX)) *
                          exp((one - two * s) * log(X)) / denom;
            return shift_factor(next, shift, s) * v;
          },
          [&](const Powers& p) {
            RInterval ratio = exp(minus_two_s * log(RInterval::from_u64(p.lambda)));
            return shift_factor(next, shift, s) * exp(minus_two_s * next.log) / (one - ratio);
          },
          [&](const ScaledPowers& p) {
            RInterval ratio = exp(minus_two_s * log(RInterval::from_u64(p.lambda)));
            return shift_factor(next, shift, s) * exp(minus_two_s * next.log) / (one - ratio);
          },
          [&](const auto&) { return RInterval(0.0); },
      },
      a.family());
  // Only the lower end of the analytic part is meaningful.
  return partial + RInterval(tail.lo(), tail.lo());
}

}  // namespace cfdim
