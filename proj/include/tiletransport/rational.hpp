#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "tiletransport/error.hpp"

namespace tiletransport {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den) {
    if (den == 0) fail(ErrorCode::BadArgument, "rational with zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

/// Exact conversion; every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) fail(ErrorCode::BadArgument, "non-finite value");
    return Rational(x);
}

inline double to_double(const Rational& r) {
    return r.convert_to<double>();
}

inline int sign_of(const Rational& r) {
    return r.sign();
}

inline BigInt floor_div(const BigInt& num, const BigInt& den) {
    BigInt q = num / den;
    if ((num % den) != 0 && ((num < 0) != (den < 0))) --q;
    return q;
}

/// Largest integer <= r.
inline BigInt floor_rational(const Rational& r) {
    return floor_div(numerator(r), denominator(r));
}

/// Smallest integer >= r.
inline BigInt ceil_rational(const Rational& r) {
    return -floor_rational(-r);
}

/// Canonical "p/q" form used inside exact scalar strings.
inline std::string rational_to_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) fail(ErrorCode::BadArgument, "zero denominator in '" + text + "'");
        return Rational(num, den);
    } catch (const std::exception&) {
        fail(ErrorCode::BadArgument, "malformed rational '" + text + "'");
    }
}

} // namespace tiletransport
