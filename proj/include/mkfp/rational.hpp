#pragma once

// Exact scalar types used throughout the finite (certifying) mode.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mkfp {

// Expression templates are disabled so that arithmetic yields plain values
// (usable in ?:, auto, and std::max without surprises).
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

/// Raised for malformed inputs and violated operation preconditions.
class precondition_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value in [0, inf] (or the extended reals): either a finite rational or +inf.
class Extended {
public:
    Extended() = default;
    Extended(Rational v) : value_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
    Extended(long long v) : value_(v) {}            // NOLINT(google-explicit-constructor)

    static Extended infinity() {
        Extended e;
        e.infinite_ = true;
        return e;
    }

    [[nodiscard]] bool is_infinite() const { return infinite_; }
    [[nodiscard]] bool is_finite() const { return !infinite_; }

    /// Finite payload; throws on infinity.
    [[nodiscard]] const Rational& value() const {
        if (infinite_) throw std::logic_error("Extended::value() on infinity");
        return value_;
    }

    friend bool operator==(const Extended& a, const Extended& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.value_ == b.value_;
    }

    friend std::strong_ordering operator<=>(const Extended& a, const Extended& b) {
        if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
        if (a.infinite_) return std::strong_ordering::greater;
        if (b.infinite_) return std::strong_ordering::less;
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (a.value_ > b.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend Extended operator+(const Extended& a, const Extended& b) {
        if (a.infinite_ || b.infinite_) return infinity();
        return Extended(a.value_ + b.value_);
    }

    /// a - r for finite r; inf - r = inf.
    friend Extended operator-(const Extended& a, const Rational& r) {
        if (a.infinite_) return infinity();
        return Extended(a.value_ - r);
    }

private:
    Rational value_{0};
    bool infinite_ = false;
};

inline Extended min(const Extended& a, const Extended& b) { return b < a ? b : a; }
inline Extended max(const Extended& a, const Extended& b) { return a < b ? b : a; }

/// Formats as "p" or "p/q".
inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline std::string to_string(const Extended& e) {
    return e.is_infinite() ? std::string("inf") : to_string(e.value());
}

inline std::ostream& operator<<(std::ostream& os, const Extended& e) { return os << to_string(e); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline double to_double(const Extended& e) {
    return e.is_infinite() ? std::numeric_limits<double>::infinity() : to_double(e.value());
}

namespace detail {

inline BigInt parse_integer(std::string_view s, std::string_view whole) {
    if (s.empty()) throw parse_error("empty number in \"" + std::string(whole) + "\"");
    std::size_t i = 0;
    if (s[0] == '-' || s[0] == '+') i = 1;
    if (i == s.size()) throw parse_error("bad number \"" + std::string(whole) + "\"");
    for (std::size_t k = i; k < s.size(); ++k) {
        if (s[k] < '0' || s[k] > '9') throw parse_error("bad number \"" + std::string(whole) + "\"");
    }
    // cpp_int reads a leading 0 as an octal prefix.
    std::size_t first = i;
    while (first + 1 < s.size() && s[first] == '0') ++first;
    BigInt v(std::string(s.substr(first)));
    return s[0] == '-' ? BigInt(-v) : v;
}

}  // namespace detail

/// Parses "p", "p/q", or a terminating decimal "1.25" into an exact rational.
inline Rational parse_rational(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (c != ' ') s.push_back(c);
    }
    if (auto slash = s.find('/'); slash != std::string::npos) {
        BigInt p = detail::parse_integer(std::string_view(s).substr(0, slash), text);
        BigInt q = detail::parse_integer(std::string_view(s).substr(slash + 1), text);
        if (q == 0) throw parse_error("zero denominator in \"" + std::string(text) + "\"");
        return Rational(p, q);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t frac = s.size() - dot - 1;
        if (digits == "-" || digits == "+" || digits.empty()) throw parse_error("bad number \"" + s + "\"");
        BigInt p = detail::parse_integer(digits, text);
        BigInt q = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac));
        return Rational(p, q);
    }
    return Rational(detail::parse_integer(s, text));
}

/// Accepts "inf" in addition to the rational forms.
inline Extended parse_extended(std::string_view text) {
    if (text == "inf" || text == "+inf" || text == "infinity") return Extended::infinity();
    return Extended(parse_rational(text));
}

/// Comparison policy: exact for rationals, tolerance-based for floating point.
template <typename Scalar>
struct NumberTraits;

template <>
struct NumberTraits<Rational> {
    static bool eq(const Rational& a, const Rational& b, double = 0.0) { return a == b; }
    static bool lt(const Rational& a, const Rational& b, double = 0.0) { return a < b; }
    static bool le(const Rational& a, const Rational& b, double = 0.0) { return a <= b; }
    static bool is_zero(const Rational& a, double = 0.0) { return a == 0; }
    static std::string str(const Rational& a) { return to_string(a); }
    static constexpr bool exact = true;
};

template <>
struct NumberTraits<double> {
    static bool eq(double a, double b, double tol) { return std::abs(a - b) <= tol; }
    static bool lt(double a, double b, double tol) { return a < b - tol; }
    static bool le(double a, double b, double tol) { return a <= b + tol; }
    static bool is_zero(double a, double tol) { return std::abs(a) <= tol; }
    static std::string str(double a) { return std::to_string(a); }
    static constexpr bool exact = false;
};

}  // namespace mkfp
