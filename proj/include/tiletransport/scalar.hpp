#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>

#include "tiletransport/rational.hpp"

namespace tiletransport {

/// Exact element of the golden field: a + b*phi with rational a, b and
/// phi^2 = phi + 1. All masses, lengths and cochain values live here.
///
/// Comparisons are decided with integer arithmetic only: writing
/// 2*(a + b*phi) = u + v*sqrt(5) with u = 2a + b, v = b, the sign follows
/// from the signs of u, v and of u^2 - 5 v^2.
class Scalar {
public:
    Scalar() = default;
    Scalar(long long n) : a_(n) {}                                  // NOLINT implicit
    Scalar(const Rational& a) : a_(a) {}                            // NOLINT implicit
    Scalar(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

    static Scalar phi() { return Scalar(Rational(0), Rational(1)); }

    /// phi^n for any integer n (phi^-1 = phi - 1).
    static Scalar phi_power(long long n) {
        Scalar base = n >= 0 ? phi() : Scalar(Rational(-1), Rational(1));
        Scalar acc(1);
        for (long long i = 0, e = n >= 0 ? n : -n; i < e; ++i) acc = acc * base;
        return acc;
    }

    const Rational& rational_part() const { return a_; }
    const Rational& phi_part() const { return b_; }

    bool is_rational() const { return b_ == 0; }
    bool is_zero() const { return a_ == 0 && b_ == 0; }

    friend Scalar operator+(const Scalar& x, const Scalar& y) {
        return Scalar(x.a_ + y.a_, x.b_ + y.b_);
    }
    friend Scalar operator-(const Scalar& x, const Scalar& y) {
        return Scalar(x.a_ - y.a_, x.b_ - y.b_);
    }
    friend Scalar operator-(const Scalar& x) { return Scalar(-x.a_, -x.b_); }

    // (a + b phi)(c + d phi) = ac + bd + (ad + bc + bd) phi
    friend Scalar operator*(const Scalar& x, const Scalar& y) {
        Rational bd = x.b_ * y.b_;
        return Scalar(x.a_ * y.a_ + bd, x.a_ * y.b_ + x.b_ * y.a_ + bd);
    }

    /// Field inverse: 1/(a + b phi) via the algebraic conjugate
    /// a + b - b phi over the rational norm a^2 + ab - b^2.
    Scalar inverse() const {
        Rational norm = a_ * a_ + a_ * b_ - b_ * b_;
        if (norm == 0) fail(ErrorCode::BadArgument, "division by zero scalar");
        return Scalar((a_ + b_) / norm, -b_ / norm);
    }
    friend Scalar operator/(const Scalar& x, const Scalar& y) { return x * y.inverse(); }

    Scalar& operator+=(const Scalar& y) { a_ += y.a_; b_ += y.b_; return *this; }
    Scalar& operator-=(const Scalar& y) { a_ -= y.a_; b_ -= y.b_; return *this; }
    Scalar& operator*=(const Scalar& y) { *this = *this * y; return *this; }

    friend bool operator==(const Scalar& x, const Scalar& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const Scalar& x, const Scalar& y) { return !(x == y); }

    /// Exact sign of the real embedding; no floating point involved.
    int sign() const {
        Rational u = 2 * a_ + b_;
        const Rational& v = b_;
        int su = sign_of(u), sv = sign_of(v);
        if (su >= 0 && sv >= 0) return (su == 0 && sv == 0) ? 0 : 1;
        if (su <= 0 && sv <= 0) return -1;
        // Mixed signs: compare u^2 against 5 v^2.
        int cmp = sign_of(u * u - 5 * v * v);
        return su > 0 ? cmp : -cmp;
    }

    friend bool operator<(const Scalar& x, const Scalar& y) { return (x - y).sign() < 0; }
    friend bool operator>(const Scalar& x, const Scalar& y) { return (x - y).sign() > 0; }
    friend bool operator<=(const Scalar& x, const Scalar& y) { return (x - y).sign() <= 0; }
    friend bool operator>=(const Scalar& x, const Scalar& y) { return (x - y).sign() >= 0; }

    Scalar abs() const { return sign() < 0 ? -*this : *this; }

    /// Largest integer <= value, found exactly from a double seed.
    BigInt floor() const {
        BigInt n(static_cast<long long>(std::floor(to_double())));
        while (*this < Scalar(Rational(n))) --n;
        while (*this >= Scalar(Rational(n + 1))) ++n;
        return n;
    }
    BigInt ceil() const { return -(-*this).floor(); }

    double to_double() const {
        static const double kPhi = 1.6180339887498948482;
        return tiletransport::to_double(a_) + tiletransport::to_double(b_) * kPhi;
    }

    friend std::ostream& operator<<(std::ostream& os, const Scalar& s);

private:
    Rational a_;
    Rational b_;
};

/// Wire format for exact scalars: "p/q+r/sφ" (UTF-8 phi).
inline std::string to_string(const Scalar& s) {
    return rational_to_string(s.rational_part()) + "+" +
           rational_to_string(s.phi_part()) + "\xcf\x86";
}

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) {
    return os << to_string(s);
}

/// Accepts the canonical form, plain rationals ("3", "-5/2") and the
/// shorthand without denominators ("2+1φ" or trailing "phi").
inline Scalar parse_scalar(std::string text) {
    auto strip = [](std::string& t, const std::string& suffix) {
        if (t.size() >= suffix.size() &&
            t.compare(t.size() - suffix.size(), suffix.size(), suffix) == 0) {
            t.erase(t.size() - suffix.size());
            return true;
        }
        return false;
    };
    // Split on the '+' or '-' that separates the rational and phi parts.
    // Scan from position 1 so leading signs survive; the separator is the
    // sign immediately preceding the last term when a phi suffix exists.
    std::string phi_utf8 = "\xcf\x86";
    bool has_phi_term = text.find(phi_utf8) != std::string::npos ||
                        text.find("phi") != std::string::npos;
    if (!has_phi_term) return Scalar(parse_rational(text));

    std::string phi_text = text;
    std::string rat_text = "0";
    // Find a top-level separator: a '+'/'-' not at position 0 and not right
    // after '/' (denominators are unsigned in canonical form).
    for (size_t i = 1; i < text.size(); ++i) {
        if ((text[i] == '+' || text[i] == '-') && text[i - 1] != '/') {
            rat_text = text.substr(0, i);
            phi_text = text.substr(text[i] == '+' ? i + 1 : i);
            break;
        }
    }
    if (!strip(phi_text, phi_utf8) && !strip(phi_text, "phi"))
        fail(ErrorCode::BadArgument, "malformed scalar '" + text + "'");
    if (phi_text.empty() || phi_text == "+") phi_text = "1";
    if (phi_text == "-") phi_text = "-1";
    return Scalar(parse_rational(rat_text), parse_rational(phi_text));
}

inline Scalar min(const Scalar& x, const Scalar& y) { return x <= y ? x : y; }
inline Scalar max(const Scalar& x, const Scalar& y) { return x >= y ? x : y; }

} // namespace tiletransport
