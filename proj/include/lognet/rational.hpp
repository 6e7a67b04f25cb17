#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace lognet {

/// Non-negative exact fraction. Used for coherence values and the refusal
/// threshold so that comparisons like 4/5 vs 0.8 are decided exactly.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Rational() = default;
    Rational(std::int64_t n, std::int64_t d);

    /// Parses a plain decimal literal such as "0.8" or "1" into an exact fraction.
    static Rational from_decimal(std::string_view text);
    /// Exact fraction of the shortest decimal that round-trips to `value`.
    static Rational from_double(double value);

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const; // "num/den"
    std::string decimal() const;

    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b);
};

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);
/// Strict parse of a full decimal/scientific literal; throws std::invalid_argument.
double parse_double(std::string_view text);

} // namespace lognet
