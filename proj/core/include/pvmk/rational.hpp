#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace pvmk {

using Rational = boost::multiprecision::mpq_rational;
using RationalVector = std::vector<Rational>;

/// Parses "p/q", "p", or a finite decimal such as "0.25" / "-1.5e-2" exactly.
Rational parse_rational(std::string_view text);

/// Exact conversion of a finite double (every double is a dyadic rational).
Rational rational_from_double(double value);

/// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_string(const Rational& value);

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

std::vector<double> to_double(const RationalVector& values);

}  // namespace pvmk
