#include "subspace_forge/spectrum.hpp"

#include "subspace_forge/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace sforge {

using boost::multiprecision::cpp_int;

std::string to_string(const Rational& r) {
  const cpp_int num = boost::multiprecision::numerator(r);
  const cpp_int den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

cpp_int parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw InputError("not a number: '" + std::string(s) + "'");
  const cpp_int v{std::string(s)};
  return negative ? cpp_int(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw InputError("empty rational");

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const cpp_int num = parse_integer(text.substr(0, slash));
    const cpp_int den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator");
    return Rational(num, den);
  }
  if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    const std::string_view frac = text.substr(dot + 1);
    bool negative = false;
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) {
      negative = whole.front() == '-';
      whole.remove_prefix(1);
    }
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      throw InputError("not a decimal: '" + std::string(text) + "'");
    }
    cpp_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const cpp_int w = whole.empty() ? cpp_int(0) : cpp_int(std::string(whole));
    const cpp_int f = frac.empty() ? cpp_int(0) : cpp_int(std::string(frac));
    Rational r(w * scale + f, scale);
    return negative ? Rational(-r) : r;
  }
  return Rational(parse_integer(text));
}

namespace spectrum {

std::string_view family_name(Family f) {
  switch (f) {
    case Family::Lambda0: return "Lambda0";
    case Family::Lambda1: return "Lambda1";
    case Family::ReflectedLambda1: return "ReflectedLambda1";
    case Family::ReflectedLambda0: return "ReflectedLambda0";
    case Family::Continuous: return "Continuous";
    case Family::NotInSigma: return "NotInSigma";
  }
  return "?";
}

namespace {

// 1 + 1/((n-2) - 1/((n-2) - ... - 1/innermost)) with `levels` copies of n-2
// above the innermost denominator. Empty when a denominator vanishes.
std::optional<Rational> continued_fraction(unsigned n, unsigned levels, const Rational& innermost) {
  Rational x = innermost;
  const Rational partial(static_cast<int>(n) - 2);
  for (unsigned l = 0; l < levels; ++l) {
    if (x == 0) return std::nullopt;
    x = partial - Rational(1) / x;
  }
  if (x == 0) return std::nullopt;
  return Rational(1) + Rational(1) / x;
}

std::vector<Rational> family(unsigned n, unsigned depth, const Rational& leading,
                             const Rational& innermost) {
  if (n < 3) throw InputError("continued-fraction families need n >= 3");
  if (depth == 0) throw InputError("depth must be >= 1");
  std::vector<Rational> out{leading};
  for (unsigned j = 1; j < depth; ++j) {
    const auto next = continued_fraction(n, j - 1, innermost);
    // finite families (n = 3) end when the fraction degenerates
    if (!next || *next <= out.back()) break;
    out.push_back(*next);
  }
  return out;
}

}  // namespace

std::vector<Rational> lambda0(unsigned n, unsigned depth) {
  return family(n, depth, Rational(0), Rational(static_cast<int>(n) - 1));
}

std::vector<Rational> lambda1(unsigned n, unsigned depth) {
  return family(n, depth, Rational(1), Rational(static_cast<int>(n) - 2));
}

std::pair<double, double> continuous_interval(unsigned n) {
  if (n < 4) throw InputError("continuous interval exists only for n >= 4");
  const double nn = static_cast<double>(n);
  const double disc = std::sqrt(nn * nn - 4.0 * nn);
  return {(nn - disc) / 2.0, (nn + disc) / 2.0};
}

bool in_continuous_interval(unsigned n, const Rational& x) {
  if (n < 4) return false;
  const Rational nn(n);
  return x * x - nn * x + nn <= 0;
}

SpectrumPoint classify_alpha(unsigned n, const Rational& alpha, unsigned depth) {
  if (n < 2) throw InputError("classify_alpha needs n >= 2");
  SpectrumPoint point;
  point.value = alpha;
  if (n == 2) {
    // Sigma_2 = {0, 1, 2}
    if (alpha == 0) point = {alpha, Family::Lambda0, 0u};
    else if (alpha == 1) point = {alpha, Family::Lambda1, 0u};
    else if (alpha == 2) point = {alpha, Family::ReflectedLambda0, 0u};
    return point;
  }
  const Rational nn(n);
  const auto l0 = lambda0(n, depth);
  const auto l1 = lambda1(n, depth);
  auto find = [](const std::vector<Rational>& xs, const Rational& x) -> std::optional<unsigned> {
    const auto it = std::find(xs.begin(), xs.end(), x);
    if (it == xs.end()) return std::nullopt;
    return static_cast<unsigned>(it - xs.begin());
  };
  if (auto i = find(l0, alpha)) return {alpha, Family::Lambda0, i};
  if (auto i = find(l1, alpha)) return {alpha, Family::Lambda1, i};
  if (auto i = find(l1, nn - alpha)) return {alpha, Family::ReflectedLambda1, i};
  if (auto i = find(l0, nn - alpha)) return {alpha, Family::ReflectedLambda0, i};
  if (in_continuous_interval(n, alpha)) return {alpha, Family::Continuous, std::nullopt};
  return point;
}

SpectrumPoint classify_alpha(unsigned n, double alpha, unsigned depth, double abs_tol) {
  if (n < 2) throw InputError("classify_alpha needs n >= 2");
  if (!std::isfinite(alpha)) throw InputError("alpha must be finite");
  SpectrumPoint point;
  point.value = alpha;
  auto near = [&](double x) { return std::abs(alpha - x) <= abs_tol; };
  if (n == 2) {
    if (near(0.0)) point.family = Family::Lambda0, point.index = 0u;
    else if (near(1.0)) point.family = Family::Lambda1, point.index = 0u;
    else if (near(2.0)) point.family = Family::ReflectedLambda0, point.index = 0u;
    return point;
  }
  const double nn = n;
  const auto l0 = lambda0(n, depth);
  const auto l1 = lambda1(n, depth);
  auto find = [&](const std::vector<Rational>& xs, bool reflect) -> std::optional<unsigned> {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double v = to_double(xs[i]);
      if (near(reflect ? nn - v : v)) return static_cast<unsigned>(i);
    }
    return std::nullopt;
  };
  if (auto i = find(l0, false)) point.family = Family::Lambda0, point.index = i;
  else if (auto i1 = find(l1, false)) point.family = Family::Lambda1, point.index = i1;
  else if (auto i2 = find(l1, true)) point.family = Family::ReflectedLambda1, point.index = i2;
  else if (auto i3 = find(l0, true)) point.family = Family::ReflectedLambda0, point.index = i3;
  else if (n >= 4 && alpha * alpha - nn * alpha + nn <= abs_tol) point.family = Family::Continuous;
  return point;
}

Rational alpha_map_T(unsigned n, const Rational& alpha) { return Rational(n) - alpha; }

Rational alpha_map_S(const Rational& alpha) {
  if (alpha == 1) throw DomainError("S-map undefined at alpha = 1");
  return alpha / (alpha - 1);
}

Rational alpha_map_phi_plus(unsigned n, const Rational& alpha) {
  if (alpha >= Rational(static_cast<int>(n) - 1)) {
    throw DomainError("Phi+ requires alpha < n - 1 (alpha = " + to_string(alpha) + ")");
  }
  return Rational(1) + Rational(1) / (Rational(static_cast<int>(n) - 1) - alpha);
}

std::vector<Rational> sigma_points(unsigned n, unsigned depth) {
  if (n < 2) throw InputError("sigma_points needs n >= 2");
  if (n == 2) return {Rational(0), Rational(1), Rational(2)};
  const Rational nn(n);
  std::vector<Rational> out;
  for (const auto& x : lambda0(n, depth)) {
    out.push_back(x);
    out.push_back(nn - x);
  }
  for (const auto& x : lambda1(n, depth)) {
    out.push_back(x);
    out.push_back(nn - x);
  }
  if (n == 4) out.push_back(Rational(2));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Rational> sigma_tilde4(unsigned depth) {
  if (depth == 0) throw InputError("depth must be >= 1");
  std::vector<Rational> out{Rational(0)};
  for (const auto& a : sigma_points(4, depth)) {
    if (a != 0) out.push_back(Rational(1) / a);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace spectrum
}  // namespace sforge
