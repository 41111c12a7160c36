#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "melnikov/ext_elem.hpp"
#include "melnikov/linsolve.hpp"
#include "melnikov/moments.hpp"
#include "melnikov/upoly.hpp"

namespace melnikov {

// The L-ring for f = x[y^2 - (x-3)^2]: ExtElem with generator L = ln((3-x-y)/(3-x+y))
// and the symbol H standing for f.

inline const HamiltonianSpec& d4_spec() {
    static const HamiltonianSpec sp = make_spec(HamiltonianId::D4Triangle);
    return sp;
}

/// f dL = 2xy dx + (6x - 2x^2) dy.
inline OneForm d4_f_dL() {
    return {WeightedPoly::mono(1, 1, 0, 2), WeightedPoly::mono(1, 0, 0, 6) - WeightedPoly::mono(2, 0, 0, 2)};
}

inline OneForm d4_dL() {
    OneForm w = d4_f_dL();
    return {w.a.times_H(-1), w.b.times_H(-1)};
}

/// Zero test in the ring: clear negative powers of H, then expand H as f.
inline bool d4_is_zero(const WeightedPoly& p) {
    return expand_H(p.times_H(p.pole_order()), d4_spec()).is_zero();
}
inline bool d4_is_zero(const ExtElem& e) {
    for (const auto& [j, p] : e.parts())
        if (!d4_is_zero(p)) return false;
    return true;
}

/// d(L^j P) = L^j dP + j L^(j-1) P dL.
inline ExtForm d4_d(const ExtElem& e) {
    ExtForm out;
    const OneForm dl = d4_dL();
    for (const auto& [j, p] : e.parts()) {
        out[j] += d(p, d4_spec());
        if (j != 0) out[j - 1] += (WeightedPoly(Rational(j)) * p) * dl;
    }
    return out;
}

/// Coefficient of dx ^ dy in the exterior derivative of an L-ring one-form.
inline ExtElem d4_exterior_d(const ExtForm& w) {
    ExtElem r;
    const OneForm dl = d4_dL();
    for (const auto& [j, f] : w) {
        r.add(j, exterior_d(f, d4_spec()));
        // d(L^j) ^ (a dx + b dy) = j L^(j-1) (dL_x b - dL_y a)
        if (j != 0) r.add(j - 1, WeightedPoly(Rational(j)) * (dl.a * f.b - dl.b * f.a));
    }
    return r;
}

inline ExtForm d4_times(const ExtElem& q, const OneForm& w) {
    ExtForm out;
    for (const auto& [j, p] : q.parts()) out[j] += p * w;
    return out;
}

/// Generating function t M3 = (alpha + beta t) I0 + gamma I2 + delta I*, equivalently
/// M3 = c_{-1} I_{-1} + (c0 + c1/t) I0 + (c*/t) I*.
struct D4GenFn {
    Rational cm1, c0, c1, cstar;

    Rational alpha() const { return c1 - 12 * cm1; }
    Rational beta() const { return c0; }
    Rational gamma() const { return 8 * cm1; }
    Rational delta() const { return cstar; }

    static D4GenFn from_abgd(const Rational& a, const Rational& b, const Rational& g, const Rational& d) {
        const Rational cm1 = g / 8;
        return {cm1, b, a + 12 * cm1, d};
    }
    bool is_zero() const { return cm1 == 0 && c0 == 0 && c1 == 0 && cstar == 0; }
    bool operator==(const D4GenFn&) const = default;

    MomentExpr as_moments() const {
        MomentExpr e;
        e.add(I(-1), Laurent(cm1));
        e.add(I(0), Laurent::from_coeffs({c0}) + Laurent::monomial(-1, c1));
        e.add(IStar(), Laurent::monomial(-1, cstar));
        return e;
    }

    double eval(double t, double im1, double i0, double istar) const {
        return to_double(cm1) * im1 + (to_double(c0) + to_double(c1) / t) * i0 + to_double(cstar) / t * istar;
    }
};

/// Read the constants off a canonical moment expression; nothing if it is not of that shape.
inline std::optional<D4GenFn> d4_genfn_from(const MomentExpr& m) {
    const MomentExpr e = d4_canonical(m);
    D4GenFn g{};
    for (const auto& [mom, c] : e.terms()) {
        if (mom == I(-1) && c.low_degree() >= 0 && c.degree() <= 0) {
            g.cm1 = c.coeff(0);
        } else if (mom == I(0) && c.low_degree() >= -1 && c.degree() <= 0) {
            g.c0 = c.coeff(0);
            g.c1 = c.coeff(-1);
        } else if (mom == IStar() && c.low_degree() == -1 && c.degree() == -1) {
            g.cstar = c.coeff(-1);
        } else {
            return std::nullopt;
        }
    }
    return g;
}

struct D4Chain {
    OneForm omega;
    Rational a;          // q1 = a L + p, Q1 = -a f L + P
    WeightedPoly p, P;
    Rational b;          // q2 = b L^2 + u L + v + w/f
    WeightedPoly u, v, w;
    ExtElem Q1, q1, q2;
    MomentExpr M1, M2, M3raw;
    D4GenFn M3;
    bool integrable = false;
};

namespace detail {

struct Ansatz {
    std::vector<WeightedPoly> images;
    std::optional<Vector> solve(const WeightedPoly& target) const {
        std::map<Monomial, std::size_t, MonomialOrder> rows;
        auto row_of = [&](const Monomial& m) { return rows.try_emplace(m, rows.size()).first->second; };
        for (const auto& im : images)
            for (const auto& [m, c] : im.terms()) row_of(m);
        for (const auto& [m, c] : target.terms()) row_of(m);
        Matrix A(rows.size(), Vector(images.size(), Rational(0)));
        Vector rhs(rows.size(), Rational(0));
        for (std::size_t col = 0; col < images.size(); ++col)
            for (const auto& [m, c] : images[col].terms()) A[rows[m]][col] = c;
        for (const auto& [m, c] : target.terms()) rhs[rows[m]] = c;
        return melnikov::solve(A, rhs, images.size());
    }
};

/// Monomials x^i y^j with lo <= i + j <= hi, ordered by y-degree then x-degree.
inline std::vector<WeightedPoly> monomials(int lo, int hi) {
    std::vector<WeightedPoly> out;
    for (int j = 0; j <= hi; ++j)
        for (int i = 0; i + j <= hi; ++i)
            if (i + j >= lo) out.push_back(WeightedPoly::mono(i, j));
    return out;
}

inline WeightedPoly bracket(const WeightedPoly& g) {
    // dg ^ df as a polynomial
    const auto& sp = d4_spec();
    return g.dx_formal() * sp.hy - g.dy_formal() * sp.hx;
}

inline WeightedPoly integrate_exact(const OneForm& w) {
    WeightedPoly P;
    for (const auto& [m, c] : w.a.terms()) P.add({m.i + 1, m.j, 0}, c / (m.i + 1));
    const WeightedPoly rest = w.b - P.dy_formal();
    for (const auto& [m, c] : rest.terms()) {
        if (m.i != 0) throw ShapeViolation("form is not closed");
        P.add({0, m.j + 1, 0}, c / (m.j + 1));
    }
    return P;
}

inline int degree_xy(const OneForm& w) {
    int d = 0;
    for (const auto* p : {&w.a, &w.b})
        for (const auto& [m, c] : p->terms()) d = std::max(d, m.i + m.j);
    return d;
}

inline MomentExpr scaled(const Laurent& s, const MomentExpr& e) { return s * e; }

}  // namespace detail

/// Third-order chain for a polynomial perturbation w of df around the center of the triangle.
/// Throws ValidationError when M1 or M2 does not vanish, ShapeViolation when q1 or q2
/// falls outside L-degree <= 1 resp. 2 with at most a simple pole in f.
inline D4Chain d4_chain(const OneForm& w, const Rational& L_shift = 0) {
    using detail::bracket;
    const auto& sp = d4_spec();
    for (const auto* p : {&w.a, &w.b})
        if (p->max_H() > 0 || p->pole_order() > 0) throw ValidationError("perturbation must be polynomial in x, y");
    D4Chain ch;
    ch.omega = w;
    ch.M1 = d4_canonical(d4_abelian_integral(w));
    if (!ch.M1.is_zero()) throw ValidationError("M1 or M2 nonzero: M1 = " + ch.M1.to_string());

    const int n = std::max(detail::degree_xy(w), 1);
    const WeightedPoly dw = exterior_d(w, sp);

    // dw = a dL^df + dp^df with dL^df = 6(x - 1)
    detail::Ansatz s1;
    s1.images.push_back(WeightedPoly::mono(1, 0, 0, 6) - WeightedPoly(6));
    const auto pm = detail::monomials(1, n);
    for (const auto& m : pm) s1.images.push_back(bracket(m));
    auto sol1 = s1.solve(dw);
    if (!sol1) throw ShapeViolation("no q1 of the form aL + polynomial solves dw = dq1 ^ df");
    ch.a = (*sol1)[0];
    for (std::size_t i = 0; i < pm.size(); ++i) ch.p += WeightedPoly((*sol1)[i + 1]) * pm[i];
    ch.p += WeightedPoly(ch.a * L_shift);

    const OneForm theta = w - ch.p * dH(sp) + WeightedPoly(ch.a) * d4_f_dL();
    if (!exterior_d(theta, sp).is_zero()) throw ShapeViolation("w - q1 df is not exact");
    ch.P = detail::integrate_exact(theta) - WeightedPoly(ch.a * L_shift) * WeightedPoly::H();
    ch.q1 = ExtElem::phi_power(1, WeightedPoly(ch.a)) + ExtElem(ch.p);
    ch.Q1 = ExtElem::phi_power(1, WeightedPoly(-ch.a) * WeightedPoly::H()) + ExtElem(ch.P);

    const OneForm dl = d4_dL();
    ch.M2 = d4_canonical(detail::scaled(Laurent(ch.a), d4_L_integral(w)) + d4_abelian_integral(ch.p * w));
    if (!ch.M2.is_zero()) throw ValidationError("M1 or M2 nonzero: M2 = " + ch.M2.to_string());

    // d(q1 w) = dq2 ^ df, q2 = b L^2 + u L + v + w/f; both sides multiplied by f.
    const WeightedPoly f = sp.h;
    const WeightedPoly lhs1 = WeightedPoly(ch.a) * dw;
    const WeightedPoly lhs0 = WeightedPoly(ch.a) * (d4_f_dL().a * w.b - d4_f_dL().b * w.a) +
                              f * (ch.p.dx_formal() * w.b - ch.p.dy_formal() * w.a + ch.p * dw);
    const auto um = detail::monomials(0, n);
    const auto wm = detail::monomials(0, n + 2);
    const auto vm = detail::monomials(1, n + 1);
    // Unknowns stacked as [b, u, w, v]; the two equations are stacked with a marker power of H
    // so that they occupy disjoint rows.
    detail::Ansatz s2;
    const WeightedPoly six_x_1 = WeightedPoly::mono(1, 0, 0, 6) - WeightedPoly(6);
    s2.images.push_back((WeightedPoly(2) * six_x_1).times_H(1));
    for (const auto& m : um) s2.images.push_back(bracket(m).times_H(1) + six_x_1 * m * f);
    for (const auto& m : wm) s2.images.push_back(bracket(m));
    for (const auto& m : vm) s2.images.push_back(bracket(m) * f);
    auto sol2 = s2.solve(lhs1.times_H(1) + lhs0);
    if (!sol2) throw ShapeViolation("no q2 within L-degree 2 and a simple pole in f");
    std::size_t col = 0;
    ch.b = (*sol2)[col++];
    for (const auto& m : um) ch.u += WeightedPoly((*sol2)[col++]) * m;
    for (const auto& m : wm) ch.w += WeightedPoly((*sol2)[col++]) * m;
    for (const auto& m : vm) ch.v += WeightedPoly((*sol2)[col++]) * m;
    // q2 is fixed only up to functions of f; pick the representative whose pole numerator
    // vanishes at the vertex (3, 0).
    Rational w30 = 0;
    for (const auto& [m, c] : ch.w.terms()) {
        if (m.j != 0) continue;
        Rational pw = 1;
        for (int e = 0; e < m.i; ++e) pw *= 3;
        w30 += c * pw;
    }
    ch.w -= WeightedPoly(w30);
    ch.q2 = ExtElem::phi_power(2, WeightedPoly(ch.b)) + ExtElem::phi_power(1, ch.u) +
            ExtElem(ch.v + ch.w.times_H(-1));

    // M3 = \oint q2 w = -\oint Q1 dq2; on the oval Q1 = kappa L + P with kappa = -a t and
    // \oint L^2 du = -2 \oint L u dL.
    const OneForm du = d(ch.u, sp);
    const OneForm dr = d(ch.v, sp) + [&] {
        OneForm t = d(ch.w, sp);
        return OneForm{t.a.times_H(-1), t.b.times_H(-1)};
    }();
    const MomentExpr T1 = detail::scaled(Laurent::monomial(1, -ch.a), d4_L_integral(dr - ch.u * dl));
    const MomentExpr T2 = d4_L_integral(ch.P * (WeightedPoly(2 * ch.b) * dl + du));
    const MomentExpr T3 = d4_abelian_integral(ch.P * (ch.u * dl + dr));
    ch.M3raw = MomentExpr() - (T1 + T2 + T3);
    auto g = d4_genfn_from(ch.M3raw);
    if (!g) throw ShapeViolation("M3 is outside c_{-1} I_{-1} + (c0 + c1/t) I0 + (c*/t) I*: " +
                                 d4_canonical(ch.M3raw).to_string());
    ch.M3 = *g;
    ch.integrable = ch.M3.is_zero();
    return ch;
}

/// q1 w - q2 df as an L-ring form; it is closed for a valid chain.
inline ExtForm d4_second_step_form(const D4Chain& ch) {
    ExtForm r = d4_times(ch.q1, ch.omega);
    for (const auto& [j, c] : ch.q2.parts()) r[j] -= c * dH(d4_spec());
    return r;
}

struct FuchsOde {
    int order = 0;
    std::vector<Laurent> coeffs;  // a_0 ... a_n
    Laurent D;                    // t (t + 4)

    /// Distinct rational roots of the leading coefficient.
    std::vector<Rational> singular_points() const {
        auto r = rational_roots(coeffs.back()).first;
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        return r;
    }
    std::string to_string() const {
        std::string s;
        for (int i = order; i >= 0; --i) {
            if (coeffs[i].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += "(" + coeffs[i].to_string() + ")*M" + std::string(i, '\'');
        }
        return s + " = 0";
    }
};

/// The P and Q polynomials of the second-order equation for u = t^2 M3'.
inline std::pair<Laurent, Laurent> d4_PQ(const D4GenFn& g) {
    const Rational a = g.alpha(), b = g.beta(), c = g.gamma(), d = g.delta();
    Laurent P = Laurent::from_coeffs({
        96 * a * d + 144 * c * d + 64 * d * d,
        8 * a * a - 288 * a * b + 12 * a * c - 432 * b * c + 24 * a * d - 192 * b * d + 28 * c * d + 16 * d * d,
        -(56 * a * b + a * c + 96 * b * c + 2 * c * c + 48 * b * d + 2 * c * d),
        8 * b * b - b * c,
    });
    Laurent Q = Laurent(make_rational(4, 9)) *
                Laurent::from_coeffs({
                    32 * d * d,
                    4 * a * a - 144 * a * b + 12 * a * c - 432 * b * c + 12 * a * d - 240 * b * d - 4 * c * d +
                        8 * d * d,
                    -(64 * a * b + 2 * a * c - 288 * b * b + 144 * b * c + 4 * c * c + 48 * b * d + 4 * c * d),
                    40 * b * b - 5 * b * c,
                });
    return {P, Q};
}

/// Third-order equation for M3 from D P u'' + (t P - D P') u' + Q u = 0, u = t^2 M3'.
inline FuchsOde d4_fuchs_ode(const D4GenFn& g) {
    if (g.is_zero()) throw ValidationError("degenerate generating function: all parameters vanish");
    const auto [P, Q] = d4_PQ(g);
    const Laurent t = Laurent::monomial(1, 1);
    const Laurent D = Laurent::from_coeffs({0, 4, 1});
    const Laurent DP = D * P;
    const Laurent B = t * P - D * P.derivative();
    // u = t^2 M', u' = 2t M' + t^2 M'', u'' = 2 M' + 4t M'' + t^2 M'''
    std::vector<Laurent> a(4);
    a[3] = DP * t * t;
    a[2] = Laurent(Rational(4)) * DP * t + B * t * t;
    a[1] = Laurent(Rational(2)) * DP + Laurent(Rational(2)) * B * t + Q * t * t;
    if (a[3].is_zero()) throw ValidationError("degenerate generating function: leading coefficient vanishes");
    Laurent g0;
    for (int i = 1; i <= 3; ++i) g0 = poly_gcd(g0, a[i]);
    for (int i = 1; i <= 3; ++i) a[i] = poly_divmod(a[i], g0).first;
    const Rational s = primitive_scale(a[3]);
    for (auto& c : a) c = Laurent(s) * c;
    return {3, a, D};
}

struct LocalExponents {
    std::vector<Rational> exact;  // rational roots with multiplicity
    Laurent leftover;             // factor without rational roots (constant when fully split)
    Laurent indicial;
    std::string to_string() const {
        std::string s = "{";
        for (std::size_t i = 0; i < exact.size(); ++i) s += (i ? ", " : "") + melnikov::to_string(exact[i]);
        if (leftover.degree() > 0) s += std::string(exact.empty() ? "" : ", ") + "roots of " + leftover.to_string("r");
        return s + "}";
    }
};

namespace detail {
/// rho (rho - 1) ... (rho - i + 1)
inline Laurent falling(int i) {
    Laurent r(Rational(1));
    for (int m = 0; m < i; ++m) r = r * Laurent::from_coeffs({Rational(-m), 1});
    return r;
}
}  // namespace detail

/// Indicial roots at a finite singular point t0, or at infinity when t0 is empty.
/// At infinity the exponents rho refer to solutions ~ t^(-rho).
inline LocalExponents d4_local_exponents(const FuchsOde& ode, const std::optional<Rational>& t0) {
    const int n = ode.order;
    Laurent ind;
    if (t0) {
        {
            std::vector<Laurent> sh;
            for (const auto& c : ode.coeffs) sh.push_back(taylor_shift(c, *t0));
            if (sh[n].coeff(0) != 0) throw ValidationError("t0 = " + to_string(*t0) + " is an ordinary point");
            int mu = sh[n].low_degree() - n;
            for (int i = 0; i < n; ++i)
                if (!sh[i].is_zero()) mu = std::min(mu, sh[i].low_degree() - i);
            if (mu != sh[n].low_degree() - n) throw ValidationError("irregular singular point");
            for (int i = 0; i <= n; ++i)
                if (!sh[i].is_zero() && sh[i].low_degree() - i == mu)
                    ind += Laurent(sh[i].coeff(mu + i)) * detail::falling(i);
        }
    } else {
        int nu = ode.coeffs[n].degree() - n;
        for (int i = 0; i < n; ++i)
            if (!ode.coeffs[i].is_zero()) nu = std::max(nu, ode.coeffs[i].degree() - i);
        if (nu != ode.coeffs[n].degree() - n) throw ValidationError("irregular singular point at infinity");
        Laurent lam;
        for (int i = 0; i <= n; ++i)
            if (!ode.coeffs[i].is_zero() && ode.coeffs[i].degree() - i == nu)
                lam += Laurent(ode.coeffs[i].coeff(nu + i)) * detail::falling(i);
        // rho = -lambda
        for (const auto& [e, c] : lam.terms()) ind.add(e, e % 2 ? -c : c);
    }
    auto [roots, rest] = rational_roots(ind);
    std::sort(roots.begin(), roots.end());
    return {roots, rest, ind};
}

}  // namespace melnikov
