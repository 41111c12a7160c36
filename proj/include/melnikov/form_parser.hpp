#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "melnikov/hamiltonian.hpp"

namespace melnikov {

/// Parse a polynomial one-form written as a sum of terms  c * x^i y^j (dx|dy),
/// with c an integer or num/den. Factors may be separated by '*' or spaces;
/// H^k factors are accepted as well.
inline OneForm parse_form(std::string_view s) {
    OneForm w;
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < s.size() && (std::isspace(static_cast<unsigned char>(s[pos])) || s[pos] == '*')) ++pos;
    };
    auto fail = [&](const std::string& what) {
        throw ValidationError("form: " + what + " at position " + std::to_string(pos) + " in '" + std::string(s) + "'");
    };
    auto integer = [&]() -> std::string {
        const std::size_t st = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        return std::string(s.substr(st, pos - st));
    };
    skip();
    if (pos == s.size()) fail("empty form");
    bool first = true;
    while (true) {
        skip();
        if (pos == s.size()) break;
        int sign = 1;
        if (s[pos] == '+' || s[pos] == '-') {
            sign = s[pos] == '-' ? -1 : 1;
            ++pos;
            skip();
        } else if (!first) {
            fail("expected '+' or '-'");
        }
        first = false;
        Rational c = 1;
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            std::string num = integer();
            if (pos < s.size() && s[pos] == '/') {
                ++pos;
                std::string den = integer();
                if (den.empty()) fail("missing denominator");
                num += "/" + den;
            }
            c = parse_rational(num);
        }
        int e[3] = {0, 0, 0};
        bool done = false;
        while (!done) {
            skip();
            if (pos >= s.size()) fail("term without dx or dy");
            if (s.substr(pos, 2) == "dx" || s.substr(pos, 2) == "dy") {
                const bool is_dx = s[pos + 1] == 'x';
                pos += 2;
                const auto m = WeightedPoly::mono(e[0], e[1], e[2], c * sign);
                (is_dx ? w.a : w.b) += m;
                done = true;
                continue;
            }
            const char v = s[pos];
            const int slot = v == 'x' ? 0 : v == 'y' ? 1 : v == 'H' ? 2 : -1;
            if (slot < 0) fail(std::string("unexpected '") + v + "'");
            ++pos;
            int p = 1;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                bool neg = pos < s.size() && s[pos] == '-';
                if (neg) ++pos;
                std::string d = integer();
                if (d.empty()) fail("missing exponent");
                p = std::stoi(d) * (neg ? -1 : 1);
                if (neg && slot != 2) fail("negative exponent on x or y");
            }
            e[slot] += p;
        }
    }
    return w;
}

/// Inverse of parse_form: "c*x^i*y^j dx + ..." in canonical term order.
inline std::string form_to_string(const OneForm& w) {
    std::string out;
    for (const auto& [p, tag] : {std::pair{&w.a, "dx"}, std::pair{&w.b, "dy"}}) {
        for (const auto& [m, c] : p->terms()) {
            std::string coef = to_string(c < 0 ? Rational(-c) : c);
            out += out.empty() ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
            out += coef;
            if (m.i) out += "*x" + (m.i > 1 ? "^" + std::to_string(m.i) : std::string());
            if (m.j) out += "*y" + (m.j > 1 ? "^" + std::to_string(m.j) : std::string());
            if (m.k) out += "*H" + (m.k != 1 ? "^" + std::to_string(m.k) : std::string());
            out += std::string(" ") + tag;
        }
    }
    return out.empty() ? "0 dx" : out;
}

}  // namespace melnikov
