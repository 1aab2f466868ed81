#include "nocsit/rational.hpp"

#include "nocsit/errors.hpp"

#include <cmath>
#include <cstdlib>

namespace nocsit {

using boost::multiprecision::cpp_int;

std::string to_string(const Rational& r, bool always_fraction) {
    const cpp_int num = boost::multiprecision::numerator(r);
    const cpp_int den = boost::multiprecision::denominator(r);
    if (den == 1 && !always_fraction) {
        return num.str();
    }
    return num.str() + "/" + den.str();
}

namespace {

cpp_int parse_integer(std::string_view s, std::string_view whole) {
    std::size_t pos = 0;
    bool neg = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        neg = s[pos] == '-';
        ++pos;
    }
    if (pos == s.size()) {
        throw FormatError("malformed rational '" + std::string(whole) + "'");
    }
    cpp_int v = 0;
    for (; pos < s.size(); ++pos) {
        const char c = s[pos];
        if (c < '0' || c > '9') {
            throw FormatError("malformed rational '" + std::string(whole) + "'");
        }
        v = v * 10 + (c - '0');
    }
    return neg ? cpp_int(-v) : v;
}

} // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_integer(text, text));
    }
    const cpp_int num = parse_integer(text.substr(0, slash), text);
    const std::string_view den_text = text.substr(slash + 1);
    if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+')) {
        throw FormatError("malformed rational '" + std::string(text) + "'");
    }
    const cpp_int den = parse_integer(den_text, text);
    if (den == 0) {
        throw FormatError("zero denominator in '" + std::string(text) + "'");
    }
    return Rational(num, den);
}

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

Rational approximate(double x, std::int64_t max_den) {
    if (!std::isfinite(x)) {
        throw NumericError("cannot approximate a non-finite value");
    }
    const bool neg = x < 0;
    double rest = std::fabs(x);
    // Convergents h/k.
    std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(rest));
    std::int64_t k_prev = 0, k = 1;
    double frac = rest - std::floor(rest);
    while (frac > 1e-15) {
        const double inv = 1.0 / frac;
        const auto a = static_cast<std::int64_t>(std::floor(inv));
        frac = inv - std::floor(inv);
        if (k_prev + a * k > max_den) {
            // Largest admissible semiconvergent, if it beats the convergent.
            const std::int64_t t = (max_den - k_prev) / k;
            if (t > 0 && 2 * t >= a) {
                const std::int64_t hs = h_prev + t * h;
                const std::int64_t ks = k_prev + t * k;
                if (std::fabs(static_cast<double>(hs) / ks - rest) <
                    std::fabs(static_cast<double>(h) / k - rest)) {
                    h = hs;
                    k = ks;
                }
            }
            break;
        }
        const std::int64_t h_next = a * h + h_prev;
        const std::int64_t k_next = a * k + k_prev;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
    }
    Rational r(h, k);
    return neg ? Rational(-r) : r;
}

} // namespace nocsit
