#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>

#include "rlct/error.hpp"

namespace rlct {

// Exact arithmetic everywhere except the free-energy estimator. GMP-backed
// rationals are always kept in lowest terms with positive denominator by the
// backend itself.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

inline Rat rat(long num, long den = 1) { return Rat(num, den); }

inline double to_double(const Rat& x) { return x.convert_to<double>(); }

inline Int factorial(int n) {
    Int out = 1;
    for (int k = 2; k <= n; ++k) out *= k;
    return out;
}

inline Int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    Int out = 1;
    for (int j = 0; j < k; ++j) {
        out *= (n - j);
        out /= (j + 1);
    }
    return out;
}

// Exact square root when x is a perfect square of a rational; nullopt otherwise.
inline std::optional<Rat> exact_sqrt(const Rat& x) {
    using boost::multiprecision::numerator;
    using boost::multiprecision::denominator;
    if (x < 0) return std::nullopt;
    Int num = numerator(x), den = denominator(x);
    Int rn = sqrt(num), rd = sqrt(den);
    if (rn * rn != num || rd * rd != den) return std::nullopt;
    return Rat(rn, rd);
}

inline std::string to_string(const Rat& x) { return x.str(); }

// Parses "a" or "a/b" with optional leading sign. Returns nullopt on bad input.
inline std::optional<Rat> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') {
        negative = text[pos] == '-';
        ++pos;
    }
    auto read_int = [&](Int& out) -> bool {
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            return false;
        out = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            out = out * 10 + (text[pos] - '0');
            ++pos;
        }
        return true;
    };
    Int num, den = 1;
    if (!read_int(num)) return std::nullopt;
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        if (!read_int(den) || den == 0) return std::nullopt;
    }
    if (pos != text.size()) return std::nullopt;
    Rat out(num, den);
    return negative ? Rat(-out) : out;
}

}  // namespace rlct
