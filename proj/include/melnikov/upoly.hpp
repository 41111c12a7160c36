#pragma once

#include <string>
#include <utility>
#include <vector>

#include "melnikov/laurent.hpp"

namespace melnikov {

// Univariate polynomial helpers on Laurent values with no negative powers.

inline void require_poly(const Laurent& p) {
    if (!p.is_polynomial()) throw ValidationError("expected a polynomial, got negative powers");
}

/// Quotient and remainder of a / b.
inline std::pair<Laurent, Laurent> poly_divmod(const Laurent& a, const Laurent& b) {
    require_poly(a);
    require_poly(b);
    if (b.is_zero()) throw ValidationError("polynomial division by zero");
    Laurent q, r = a;
    const int db = b.degree();
    const Rational lb = b.coeff(db);
    while (!r.is_zero() && r.degree() >= db) {
        const int s = r.degree() - db;
        const Rational c = r.coeff(r.degree()) / lb;
        q.add(s, c);
        r -= Laurent::monomial(s, c) * b;
    }
    return {q, r};
}

inline Laurent monic(const Laurent& p) {
    if (p.is_zero()) return p;
    return Laurent(Rational(1) / p.coeff(p.degree())) * p;
}

inline Laurent poly_gcd(Laurent a, Laurent b) {
    while (!b.is_zero()) {
        auto r = poly_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

/// p(t0 + s) as a polynomial in s.
inline Laurent taylor_shift(const Laurent& p, const Rational& t0) {
    require_poly(p);
    Laurent out;
    Laurent base = Laurent::from_coeffs({t0, 1});
    Laurent pw(Rational(1));
    for (int e = 0; e <= std::max(p.degree(), 0); ++e) {
        out += Laurent(p.coeff(e)) * pw;
        pw = pw * base;
    }
    return out;
}

/// Rational multiple making the coefficients coprime integers with positive leading term.
inline Rational primitive_scale(const Laurent& p) {
    if (p.is_zero()) return 1;
    mpz_class l = 1, g = 0;
    for (const auto& [e, c] : p.terms()) l = lcm(l, mpz_class(c.get_den()));
    for (const auto& [e, c] : p.terms()) g = gcd(g, mpz_class(c.get_num() * (l / c.get_den())));
    Rational s(l, g);
    s.canonicalize();
    if (p.coeff(p.degree()) < 0) s = -s;
    return s;
}

/// Rational roots with multiplicity, plus the leftover factor without rational roots.
inline std::pair<std::vector<Rational>, Laurent> rational_roots(Laurent p) {
    require_poly(p);
    std::vector<Rational> roots;
    if (p.is_zero()) throw ValidationError("roots of the zero polynomial");
    while (p.degree() > 0 && p.coeff(0) == 0) {
        roots.push_back(0);
        p = p.shifted(-1);
    }
    bool found = true;
    while (found && p.degree() > 0) {
        found = false;
        Laurent z = Laurent(primitive_scale(p)) * p;
        mpz_class lead = abs(z.coeff(z.degree()).get_num());
        mpz_class cst = abs(z.coeff(0).get_num());
        auto divisors = [](mpz_class n) {
            std::vector<mpz_class> d;
            for (mpz_class i = 1; i * i <= n; ++i)
                if (n % i == 0) {
                    d.push_back(i);
                    if (i * i != n) d.push_back(n / i);
                }
            return d;
        };
        for (const auto& num : divisors(cst)) {
            for (const auto& den : divisors(lead)) {
                for (int sg : {1, -1}) {
                    Rational r(sg * num, den);
                    r.canonicalize();
                    if (z.eval(r) == 0) {
                        roots.push_back(r);
                        p = poly_divmod(p, Laurent::from_coeffs({-r, 1})).first;
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            if (found) break;
        }
    }
    return {roots, p};
}

}  // namespace melnikov
