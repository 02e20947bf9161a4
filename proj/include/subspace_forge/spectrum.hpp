#pragma once

// Admissible parameter sets for n projections summing to a scalar:
// the continued-fraction families, their reflections, and the continuous
// interval. All arithmetic on the families is exact.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace sforge {

using Rational = boost::multiprecision::cpp_rational;

/// "p/q" (or "p" when q = 1).
std::string to_string(const Rational& r);
double to_double(const Rational& r);

/// Parses "p/q", an integer, or a finite decimal such as "1.5" or "-0.25"
/// (decimals are converted exactly). Throws InputError otherwise.
Rational parse_rational(std::string_view text);

namespace spectrum {

inline constexpr unsigned kDefaultDepth = 16;

enum class Family {
  Lambda0,
  Lambda1,
  ReflectedLambda1,
  ReflectedLambda0,
  Continuous,
  NotInSigma,
};

std::string_view family_name(Family f);

struct SpectrumPoint {
  std::variant<Rational, double> value;
  Family family = Family::NotInSigma;
  /// Position inside the family (0 = leading 0 or 1); empty for Continuous/NotInSigma.
  std::optional<unsigned> index;

  bool in_sigma() const { return family != Family::NotInSigma; }
};

/// First `depth` elements of the family starting 0, 1 + 1/(n-1), ...
/// For n = 3 the family is finite and fewer elements are returned.
std::vector<Rational> lambda0(unsigned n, unsigned depth);

/// First `depth` elements of the family starting 1, 1 + 1/(n-2), ...
std::vector<Rational> lambda1(unsigned n, unsigned depth);

/// Endpoints of the continuous part, (n -+ sqrt(n^2 - 4n)) / 2. Requires n >= 4.
std::pair<double, double> continuous_interval(unsigned n);

/// Exact test x^2 - n x + n <= 0, i.e. x inside the continuous interval (n >= 4).
bool in_continuous_interval(unsigned n, const Rational& x);

SpectrumPoint classify_alpha(unsigned n, const Rational& alpha, unsigned depth = kDefaultDepth);

/// Floating-point variant; family membership is decided within `abs_tol`.
SpectrumPoint classify_alpha(unsigned n, double alpha, unsigned depth = kDefaultDepth,
                             double abs_tol = 1e-12);

Rational alpha_map_T(unsigned n, const Rational& alpha);
Rational alpha_map_S(const Rational& alpha);
Rational alpha_map_phi_plus(unsigned n, const Rational& alpha);

/// Sorted distinct points of Sigma_n reachable by enumeration to `depth`: the
/// four discrete families, plus the continuous interval when it is a single
/// point (n = 4). Sigma_2 = {0,1,2} is returned as is.
std::vector<Rational> sigma_points(unsigned n, unsigned depth = kDefaultDepth);

/// {0} together with 1/alpha for the nonzero enumerated points of Sigma_4.
std::vector<Rational> sigma_tilde4(unsigned depth = kDefaultDepth);

}  // namespace spectrum
}  // namespace sforge
