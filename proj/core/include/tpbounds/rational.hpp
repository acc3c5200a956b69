#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>

namespace tpb {

// Exact rational arithmetic is used end to end; doubles appear only when a
// report is emitted. Point collapses in the bounds are exact identities of
// the data and survive only if no intermediate rounding happens.
using Rat = boost::multiprecision::mpq_rational;

inline Rat ratio(std::int64_t num, std::int64_t den) { return Rat(num, den); }

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

// Parses "0.279", "1", "279/1000", or "2.5e-3" into an exact rational.
// Throws Error(ParseError) on malformed input.
Rat parse_rational(const std::string& text);

// Exact rational equal to the shortest decimal that round-trips the double,
// so a JSON literal like 0.279 comes back as 279/1000 rather than the
// nearest binary fraction. Requires a finite input.
Rat rational_from_shortest_decimal(double value);

// "279/1000" for non-integers, "0"/"1"/"7" for integers.
std::string exact_string(const Rat& q);

// Display rounding: three decimal places, half away from zero, trailing
// zeros trimmed ("0.279", "0.49", "3.584", "0").
std::string display_string(const Rat& q);
std::string display_string(double value);

} // namespace tpb
