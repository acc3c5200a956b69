#include "tpbounds/rational.hpp"

#include "tpbounds/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

namespace tpb {

namespace {

using Int = boost::multiprecision::mpz_int;

Int pow10(unsigned n) {
    Int p = 1;
    for (unsigned i = 0; i < n; ++i) p *= 10;
    return p;
}

// The mpz_int string constructor reads a leading zero as an octal prefix,
// so digit strings are validated and normalized to base 10 here.
Int parse_int(const std::string& text) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }
    if (pos >= text.size()) raise(ErrorKind::ParseError, "not an integer: '" + text + "'");
    for (std::size_t i = pos; i < text.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            raise(ErrorKind::ParseError, "not an integer: '" + text + "'");
    while (pos + 1 < text.size() && text[pos] == '0') ++pos;
    Int magnitude(text.substr(pos));
    return negative ? Int(-magnitude) : magnitude;
}

// Decimal with optional sign, fraction part, and exponent. No leading or
// trailing junk allowed.
Rat parse_decimal(const std::string& text) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }

    std::string digits;
    long frac_digits = 0;
    bool any_digit = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        digits += text[pos++];
        any_digit = true;
    }
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            digits += text[pos++];
            ++frac_digits;
            any_digit = true;
        }
    }
    if (!any_digit) raise(ErrorKind::ParseError, "not a number: '" + text + "'");

    long exponent = 0;
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        bool exp_neg = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            exp_neg = text[pos] == '-';
            ++pos;
        }
        if (pos >= text.size()) raise(ErrorKind::ParseError, "bad exponent in '" + text + "'");
        long e = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            e = e * 10 + (text[pos++] - '0');
            if (e > 1000000) raise(ErrorKind::ParseError, "exponent overflow in '" + text + "'");
        }
        exponent = exp_neg ? -e : e;
    }
    if (pos != text.size()) raise(ErrorKind::ParseError, "trailing characters in '" + text + "'");

    Int mantissa = digits.empty() ? Int(0) : parse_int(digits);
    if (negative) mantissa = -mantissa;

    long net = exponent - frac_digits;
    Rat value(mantissa, 1);
    if (net > 0)
        value *= Rat(pow10(static_cast<unsigned>(net)), 1);
    else if (net < 0)
        value /= Rat(pow10(static_cast<unsigned>(-net)), 1);
    return value;
}

} // namespace

Rat parse_rational(const std::string& text) {
    if (text.empty()) raise(ErrorKind::ParseError, "empty number");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        const std::string num = text.substr(0, slash);
        const std::string den = text.substr(slash + 1);
        try {
            Int n = parse_int(num), d = parse_int(den);
            if (d == 0) raise(ErrorKind::ParseError, "zero denominator in '" + text + "'");
            return Rat(n, d);
        } catch (const std::exception&) {
            raise(ErrorKind::ParseError, "bad fraction: '" + text + "'");
        }
    }
    return parse_decimal(text);
}

Rat rational_from_shortest_decimal(double value) {
    if (!std::isfinite(value)) raise(ErrorKind::ValueError, "non-finite number");
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return parse_decimal(std::string(buf, res.ptr));
}

std::string exact_string(const Rat& q) {
    return q.str();
}

std::string display_string(const Rat& q) {
    // Round to 3 decimal places, half away from zero, in exact arithmetic.
    Rat scaled = q * 1000;
    Int num = numerator(scaled);
    Int den = denominator(scaled);
    Int quot = num / den;
    Int rem = num - quot * den;
    if (rem != 0) {
        Int twice = 2 * abs(rem);
        if (twice >= den) quot += (num < 0) ? -1 : 1;
    }
    bool negative = quot < 0;
    Int mag = abs(quot);
    Int whole = mag / 1000;
    Int milli = mag % 1000;

    std::string out = negative && (whole != 0 || milli != 0) ? "-" : "";
    out += whole.str();
    if (milli != 0) {
        std::string frac = milli.str();
        frac.insert(0, 3 - frac.size(), '0');
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        out += "." + frac;
    }
    return out;
}

std::string display_string(double value) {
    if (!std::isfinite(value)) return value > 0 ? "inf" : (value < 0 ? "-inf" : "nan");
    return display_string(rational_from_shortest_decimal(value));
}

} // namespace tpb
