#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "melnikov/errors.hpp"

namespace melnikov {

/// Exact rational number, always in lowest terms with positive denominator.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Canonical text "num/den" (denominator always printed).
inline std::string to_string(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Accepts "n", "n/d", with optional sign.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw ValidationError("empty rational");
    if (s.front() == '+') s.erase(0, 1);
    Rational r;
    if (r.set_str(s, 10) != 0 || r.get_den() == 0)
        throw ValidationError("bad rational literal '" + std::string(text) + "'");
    r.canonicalize();
    return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

inline long double to_long_double(const Rational& r) {
    // mpq get_d loses precision past 53 bits; long double users only need
    // the extra exponent range, rationals here are small.
    return static_cast<long double>(r.get_num().get_d()) /
           static_cast<long double>(r.get_den().get_d());
}

}  // namespace melnikov
