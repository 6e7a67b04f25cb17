#include "lognet/rational.hpp"

#include <charconv>
#include <numeric>
#include <stdexcept>
#include <system_error>

namespace lognet {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d)
{
    if (d <= 0 || n < 0) {
        throw std::invalid_argument("rational must have non-negative numerator and positive denominator");
    }
    const auto g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::from_decimal(std::string_view text)
{
    const auto bad = [&] { return std::invalid_argument("not a non-negative decimal: " + std::string(text)); };
    if (text.empty()) {
        throw bad();
    }
    std::int64_t n = 0;
    std::int64_t d = 1;
    bool seen_point = false;
    bool seen_digit = false;
    for (const char ch : text) {
        if (ch == '.') {
            if (seen_point) {
                throw bad();
            }
            seen_point = true;
            continue;
        }
        if (ch < '0' || ch > '9') {
            throw bad();
        }
        seen_digit = true;
        if (n > (INT64_MAX - 9) / 10 || (seen_point && d > INT64_MAX / 10)) {
            throw std::invalid_argument("decimal has too many digits: " + std::string(text));
        }
        n = n * 10 + (ch - '0');
        if (seen_point) {
            d *= 10;
        }
    }
    if (!seen_digit) {
        throw bad();
    }
    return Rational{n, d};
}

Rational Rational::from_double(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
    if (res.ec != std::errc{}) {
        throw std::invalid_argument("value cannot be represented as a decimal");
    }
    return from_decimal(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
}

std::string Rational::str() const
{
    return std::to_string(num) + "/" + std::to_string(den);
}

std::string Rational::decimal() const
{
    return format_double(to_double());
}

// Cross products of two int64 values need 128 bits.
__extension__ using wide = __int128;

std::strong_ordering operator<=>(const Rational& a, const Rational& b)
{
    const wide lhs = static_cast<wide>(a.num) * b.den;
    const wide rhs = static_cast<wide>(b.num) * a.den;
    if (lhs < rhs) {
        return std::strong_ordering::less;
    }
    if (lhs > rhs) {
        return std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

bool operator==(const Rational& a, const Rational& b)
{
    return (a <=> b) == 0;
}

std::string format_double(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text)
{
    // from_chars rejects a leading '+', which CSV writers sometimes emit
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (text.empty() || res.ec != std::errc{} || res.ptr != last) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return value;
}

} // namespace lognet
