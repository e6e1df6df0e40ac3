#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "timeop/series.hpp"

namespace timeop {

// ---------------------------------------------------------------------------
// Spectral functions f : N -> (0, inf).
//
// Three families are supported:
//   PowerLaw   f(x) = a*x^lambda + b          (a > 0, lambda > 0, b >= 0)
//   SqrtShift  f(x) = sqrt(x + 1)
//   Tabulated  finite list of positive values, optionally continued by a
//              declared power-law tail; indexing past the data without a
//              tail is an error, never a silent extrapolation.
// ---------------------------------------------------------------------------

enum class Family { PowerLaw, SqrtShift, Tabulated };

struct TabulatedTail {
  double a;
  double lambda;
  double b;
};

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// n^p - m^p for n > m >= 0, safe against cancellation when n/m ~ 1.
inline double power_gap(double n, double m, double p) {
  if (m <= 0.0) return std::pow(n, p);
  const double r = (n - m) / m;
  if (r < 0x1p-20) return std::pow(m, p) * std::expm1(p * std::log1p(r));
  return std::pow(n, p) - std::pow(m, p);
}

}  // namespace detail

class SpectralFunction {
 public:
  static SpectralFunction power_law(double a, double lambda, double b,
                                    std::string label = "") {
    if (!(a > 0.0)) throw std::invalid_argument("power_law: a must be > 0");
    if (!(lambda > 0.0))
      throw std::invalid_argument("power_law: lambda must be > 0");
    if (!(b >= 0.0)) throw std::invalid_argument("power_law: b must be >= 0");
    SpectralFunction f;
    f.family_ = Family::PowerLaw;
    f.a_ = a;
    f.lambda_ = lambda;
    f.b_ = b;
    f.label_ = label.empty() ? default_power_label(a, lambda, b) : std::move(label);
    return f;
  }

  static SpectralFunction sqrt_shift(std::string label = "") {
    SpectralFunction f;
    f.family_ = Family::SqrtShift;
    f.label_ = label.empty() ? "sqrt(x+1)" : std::move(label);
    return f;
  }

  static SpectralFunction tabulated(std::vector<double> values,
                                    std::optional<TabulatedTail> tail = {},
                                    std::string source_path = "",
                                    std::string label = "") {
    if (values.empty())
      throw std::invalid_argument("tabulated: value list is empty");
    for (std::size_t i = 0; i < values.size(); ++i)
      if (!(values[i] > 0.0) || !std::isfinite(values[i]))
        throw std::invalid_argument("tabulated: value at index " +
                                    std::to_string(i) + " is not positive");
    if (tail && (!(tail->a > 0.0) || !(tail->lambda > 0.0) || !(tail->b >= 0.0)))
      throw std::invalid_argument("tabulated: invalid tail parameters");
    SpectralFunction f;
    f.family_ = Family::Tabulated;
    f.values_ = std::move(values);
    f.tail_ = tail;
    f.source_path_ = std::move(source_path);
    f.label_ = label.empty() ? "tab[" + std::to_string(f.values_.size()) + "]"
                             : std::move(label);
    return f;
  }

  Family family() const { return family_; }
  double a() const { return a_; }
  double lambda() const { return lambda_; }
  double b() const { return b_; }
  const std::vector<double>& values() const { return values_; }
  const std::optional<TabulatedTail>& tail() const { return tail_; }
  const std::string& label() const { return label_; }
  const std::string& source_path() const { return source_path_; }

  double operator()(std::size_t n) const {
    switch (family_) {
      case Family::PowerLaw:
        return a_ * std::pow(static_cast<double>(n), lambda_) + b_;
      case Family::SqrtShift:
        return std::sqrt(static_cast<double>(n) + 1.0);
      case Family::Tabulated:
        if (n < values_.size()) return values_[n];
        if (tail_)
          return tail_->a * std::pow(static_cast<double>(n), tail_->lambda) +
                 tail_->b;
        throw std::out_of_range("tabulated spectrum: index " +
                                std::to_string(n) + " beyond stored range (" +
                                std::to_string(values_.size()) +
                                " values, no tail declared)");
    }
    throw std::logic_error("unreachable");
  }

  // Largest index guaranteed evaluable (SIZE_MAX for closed forms).
  std::size_t max_index() const {
    if (family_ == Family::Tabulated && !tail_) return values_.size() - 1;
    return std::numeric_limits<std::size_t>::max();
  }

  bool operator==(const SpectralFunction& o) const {
    if (family_ != o.family_) return false;
    switch (family_) {
      case Family::PowerLaw:
        return a_ == o.a_ && lambda_ == o.lambda_ && b_ == o.b_;
      case Family::SqrtShift:
        return true;
      case Family::Tabulated:
        return values_ == o.values_ &&
               tail_.has_value() == o.tail_.has_value() &&
               (!tail_ || (tail_->a == o.tail_->a &&
                           tail_->lambda == o.tail_->lambda &&
                           tail_->b == o.tail_->b));
    }
    return false;
  }

 private:
  SpectralFunction() = default;

  static std::string default_power_label(double a, double lambda, double b) {
    std::string s;
    if (a != 1.0) s += detail::format_double(a) + "*";
    s += "x^" + detail::format_double(lambda);
    if (b != 0.0) s += "+" + detail::format_double(b);
    return s;
  }

  Family family_ = Family::PowerLaw;
  double a_ = 1.0;
  double lambda_ = 1.0;
  double b_ = 0.0;
  std::vector<double> values_;
  std::optional<TabulatedTail> tail_;
  std::string source_path_;
  std::string label_;
};

inline double eval(const SpectralFunction& f, std::size_t n) { return f(n); }

// Spectral gap f(n+k) - f(n), k >= 1.
//
// For PowerLaw with n > 0 and k/n < 2^-20 the direct subtraction would lose
// about log2(n^lambda / gap) bits, so the gap is computed as
// a * n^lambda * expm1(lambda * log1p(k/n)) instead (the additive constant
// cancels exactly either way).  SqrtShift always uses the conjugate form.
inline double gap(const SpectralFunction& f, std::size_t k, std::size_t n) {
  if (k < 1) throw std::invalid_argument("gap: k must be >= 1");
  switch (f.family()) {
    case Family::PowerLaw: {
      const double nd = static_cast<double>(n);
      const double kd = static_cast<double>(k);
      if (n > 0 && kd / nd < 0x1p-20)
        return f.a() * std::pow(nd, f.lambda()) *
               std::expm1(f.lambda() * std::log1p(kd / nd));
      return f.a() * detail::power_gap(nd + kd, nd, f.lambda());
    }
    case Family::SqrtShift: {
      const double nd = static_cast<double>(n);
      const double kd = static_cast<double>(k);
      return kd / (std::sqrt(nd + kd + 1.0) + std::sqrt(nd + 1.0));
    }
    case Family::Tabulated:
      return f(n + k) - f(n);
  }
  throw std::logic_error("unreachable");
}

// Mean-value lower bound lambda*k/(n+k)^(1-lambda) on gap(f,k,n), valid for
// f(x) = x^lambda + b with 0 < lambda < 1.
inline double gap_lower_bound(const SpectralFunction& f, std::size_t k,
                              std::size_t n) {
  if (f.family() != Family::PowerLaw || f.a() != 1.0)
    throw std::invalid_argument(
        "gap_lower_bound: requires a power law with a = 1");
  if (!(f.lambda() < 1.0))
    throw std::domain_error("gap_lower_bound: requires lambda < 1");
  if (k < 1) throw std::invalid_argument("gap_lower_bound: k must be >= 1");
  const double nk = static_cast<double>(n) + static_cast<double>(k);
  return f.lambda() * static_cast<double>(k) / std::pow(nk, 1.0 - f.lambda());
}

// ---------------------------------------------------------------------------
// Class-membership verdicts.  Three-valued: a finite computation cannot
// decide square-summability of 1/f from tabulated data alone.
// ---------------------------------------------------------------------------

struct ClassVerdict {
  enum class State { Pass, Fail, Inconclusive };
  State state = State::Inconclusive;
  std::string reason;
  double partial_sum = std::numeric_limits<double>::quiet_NaN();
  double tail_bound = std::numeric_limits<double>::quiet_NaN();

  bool pass() const { return state == State::Pass; }
  bool fail() const { return state == State::Fail; }
};

inline const char* to_string(ClassVerdict::State s) {
  switch (s) {
    case ClassVerdict::State::Pass: return "pass";
    case ClassVerdict::State::Fail: return "fail";
    case ClassVerdict::State::Inconclusive: return "inconclusive";
  }
  return "?";
}

// f(0) > 0 and f strictly increasing on {0..n_max}.  Closed-form families
// are also decided from parameters; tabulated data is checked over the
// stored values.
inline ClassVerdict check_spectrum_admissible(const SpectralFunction& f,
                                              std::size_t n_max) {
  if (n_max < 1)
    throw std::invalid_argument("check_spectrum_admissible: n_max must be >= 1");
  ClassVerdict v;
  if (f.family() == Family::PowerLaw && f.b() <= 0.0) {
    v.state = ClassVerdict::State::Fail;
    v.reason = "f(0) = " + detail::format_double(f.b()) + " is not > 0";
    return v;
  }
  std::size_t top = n_max;
  if (f.family() == Family::Tabulated && !f.tail())
    top = std::min(top, f.values().size() - 1);
  if (!(f(0) > 0.0)) {
    v.state = ClassVerdict::State::Fail;
    v.reason = "f(0) = " + detail::format_double(f(0)) + " is not > 0";
    return v;
  }
  double prev = f(0);
  for (std::size_t n = 1; n <= top; ++n) {
    const double cur = f(n);
    if (!(cur > prev)) {
      v.state = ClassVerdict::State::Fail;
      v.reason = "not increasing at n = " + std::to_string(n - 1) + " (f = " +
                 detail::format_double(prev) + " -> " +
                 detail::format_double(cur) + ")";
      return v;
    }
    prev = cur;
  }
  v.state = ClassVerdict::State::Pass;
  return v;
}

// 1/f in l^2?  PowerLaw is decided analytically (pass iff lambda > 1/2);
// SqrtShift fails (harmonic series); tabulated data is inconclusive unless a
// closed-form tail decides it.  Always reports the partial sum of 1/f(n)^2
// over the checked range and, when available, an integral tail bound.
inline ClassVerdict check_reciprocal_l2(const SpectralFunction& f,
                                        std::size_t n_max) {
  ClassVerdict k = check_spectrum_admissible(f, std::max<std::size_t>(n_max, 1));
  if (!k.pass()) {
    k.reason = "not an admissible spectrum: " + k.reason;
    return k;
  }
  ClassVerdict v;
  std::size_t top = n_max;
  if (f.family() == Family::Tabulated && !f.tail())
    top = std::min(top, f.values().size() - 1);
  KahanSum s;
  for (std::size_t n = 0; n <= top; ++n) {
    const double fn = f(n);
    s.add(1.0 / (fn * fn));
  }
  v.partial_sum = s.value();

  const double inf = std::numeric_limits<double>::infinity();
  switch (f.family()) {
    case Family::PowerLaw:
      if (f.lambda() > 0.5) {
        // 1/f(n)^2 <= a^-2 n^-2lambda for n >= 1
        v.tail_bound = power_tail_bound(2.0 * f.lambda(),
                                        static_cast<double>(top)) /
                       (f.a() * f.a());
        v.state = ClassVerdict::State::Pass;
      } else {
        v.tail_bound = inf;
        v.state = ClassVerdict::State::Fail;
        v.reason = "lambda = " + detail::format_double(f.lambda()) +
                   " <= 1/2: sum of 1/f(n)^2 diverges";
      }
      return v;
    case Family::SqrtShift:
      v.tail_bound = inf;
      v.state = ClassVerdict::State::Fail;
      v.reason = "1/f(n)^2 = 1/(n+1): harmonic series diverges";
      return v;
    case Family::Tabulated:
      if (f.tail()) {
        if (f.tail()->lambda > 0.5) {
          v.tail_bound = power_tail_bound(2.0 * f.tail()->lambda,
                                          static_cast<double>(top)) /
                         (f.tail()->a * f.tail()->a);
          v.state = ClassVerdict::State::Pass;
        } else {
          v.tail_bound = inf;
          v.state = ClassVerdict::State::Fail;
          v.reason = "declared tail has lambda <= 1/2";
        }
      } else {
        v.state = ClassVerdict::State::Inconclusive;
        v.reason = "finite table: square-summability of 1/f undecidable";
      }
      return v;
  }
  throw std::logic_error("unreachable");
}

// Does f(n) - f(m) >= C*(n^lambda - m^lambda) hold at every supplied pair?
struct IndexPair {
  std::size_t n;
  std::size_t m;
};

inline ClassVerdict check_gap_dominates_power(const SpectralFunction& f,
                                              double C, double lambda,
                                              std::span<const IndexPair> pairs) {
  if (!(C > 0.0))
    throw std::invalid_argument("check_gap_dominates_power: C must be > 0");
  if (!(lambda > 1.0))
    throw std::invalid_argument("check_gap_dominates_power: lambda must be > 1");
  ClassVerdict v;
  // tolerate rounding in the equality case
  constexpr double kRelTol = 1e-12;
  for (const auto& p : pairs) {
    if (p.n <= p.m)
      throw std::invalid_argument("check_gap_dominates_power: pairs need n > m");
    const double lhs = gap(f, p.n - p.m, p.m);
    const double rhs = C * detail::power_gap(static_cast<double>(p.n),
                                             static_cast<double>(p.m), lambda);
    if (lhs < rhs - kRelTol * std::max(std::abs(lhs), std::abs(rhs))) {
      v.state = ClassVerdict::State::Fail;
      v.reason = "violated at (n,m) = (" + std::to_string(p.n) + "," +
                 std::to_string(p.m) + "): gap " + detail::format_double(lhs) +
                 " < " + detail::format_double(rhs);
      return v;
    }
  }
  v.state = ClassVerdict::State::Pass;
  return v;
}

// All pairs n > m with n <= n_max.
inline std::vector<IndexPair> all_index_pairs(std::size_t n_max) {
  std::vector<IndexPair> ps;
  ps.reserve(n_max * (n_max + 1) / 2);
  for (std::size_t n = 1; n <= n_max; ++n)
    for (std::size_t m = 0; m < n; ++m) ps.push_back({n, m});
  return ps;
}

// ---------------------------------------------------------------------------
// Text record, e.g.
//   family=powerlaw a=1 lambda=0.8 b=1
//   family=sqrtshift
//   family=tabulated file=spec.txt [tail_a=1 tail_lambda=2 tail_b=1]
// Tabulated files hold one positive real per line, index = line number.
// ---------------------------------------------------------------------------

inline std::string render_spectral_record(const SpectralFunction& f) {
  using detail::format_double;
  switch (f.family()) {
    case Family::PowerLaw:
      return "family=powerlaw a=" + format_double(f.a()) +
             " lambda=" + format_double(f.lambda()) +
             " b=" + format_double(f.b());
    case Family::SqrtShift:
      return "family=sqrtshift";
    case Family::Tabulated: {
      std::string s = "family=tabulated file=" + f.source_path();
      if (f.tail())
        s += " tail_a=" + format_double(f.tail()->a) +
             " tail_lambda=" + format_double(f.tail()->lambda) +
             " tail_b=" + format_double(f.tail()->b);
      return s;
    }
  }
  throw std::logic_error("unreachable");
}

inline std::vector<double> read_spectrum_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spectrum file: " + path);
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line)) {
    // allow blank lines and # comments
    auto pos = line.find('#');
    if (pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    double v;
    if (ls >> v) vals.push_back(v);
  }
  return vals;
}

inline SpectralFunction parse_spectral_record(std::string_view record) {
  double a = 1.0, lambda = 1.0, b = 0.0;
  std::optional<double> ta, tl, tb;
  std::string family, file;
  std::istringstream in{std::string(record)};
  std::string tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("spectral record: expected key=value, got '" +
                                  tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    auto num = [&](const std::string& v) {
      std::size_t used = 0;
      double x = std::stod(v, &used);
      if (used != v.size())
        throw std::invalid_argument("spectral record: malformed number '" + v +
                                    "' for key " + key);
      return x;
    };
    if (key == "family") family = val;
    else if (key == "a") a = num(val);
    else if (key == "lambda") lambda = num(val);
    else if (key == "b") b = num(val);
    else if (key == "file") file = val;
    else if (key == "tail_a") ta = num(val);
    else if (key == "tail_lambda") tl = num(val);
    else if (key == "tail_b") tb = num(val);
    else
      throw std::invalid_argument("spectral record: unknown key '" + key + "'");
  }
  if (family == "powerlaw") return SpectralFunction::power_law(a, lambda, b);
  if (family == "sqrtshift") return SpectralFunction::sqrt_shift();
  if (family == "tabulated") {
    if (file.empty())
      throw std::invalid_argument("spectral record: tabulated needs file=");
    std::optional<TabulatedTail> tail;
    if (ta || tl || tb) {
      if (!(ta && tl && tb))
        throw std::invalid_argument(
            "spectral record: tail needs all of tail_a, tail_lambda, tail_b");
      tail = TabulatedTail{*ta, *tl, *tb};
    }
    return SpectralFunction::tabulated(read_spectrum_file(file), tail, file);
  }
  throw std::invalid_argument("spectral record: unknown family '" + family +
                              "'");
}

}  // namespace timeop
