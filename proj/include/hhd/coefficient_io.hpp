#pragma once

#include <iosfwd>
#include <string>

#include "hhd/constraints.hpp"

namespace hhd {

/// Plain-text coefficient format:
///
///   # hhd coefficients
///   kind divergence_free|curl_free
///   dimension n
///   lengths L_1 ... L_n
///   members M
///   a_1 ... a_n  Re(c_1) Im(c_1) [Re(c_2) Im(c_2)]
///   ...
///
/// One line per member. Nonzero members carry their reduced scalars (the
/// -alpha line holds -conj of the canonical scalars). The zero line carries
/// the n components of the mean as (value, 0) pairs. Numbers use 17
/// significant digits so the round trip is bit-exact.
void write_coefficients(std::ostream& out, const CoefficientSet& coeffs);
void write_coefficients(const std::string& path, const CoefficientSet& coeffs);

/// Throws std::runtime_error naming the line for malformed input, a missing
/// partner of a +/- pair, or inconsistent pair values.
CoefficientSet read_coefficients(std::istream& in);
CoefficientSet read_coefficients(const std::string& path);

/// Shortest round-trip-safe text for a double (17 significant digits).
std::string format_double(double v);

}  // namespace hhd
