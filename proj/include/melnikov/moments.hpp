#pragma once

#include <map>
#include <string>
#include <utility>

#include "melnikov/hamiltonian.hpp"

namespace melnikov {

// Integrals over the D4 oval f = t, f = x[y^2 - (x - 3)^2]:
//   I_k = \oint x^k y dx,   K_k = \oint x^k y ln(x) dx,   I_* = K_1 - K_0.

enum class MomentKind { I, K, Star };

struct Moment {
    MomentKind kind;
    int index = 0;
    auto operator<=>(const Moment&) const = default;
};

inline Moment I(int k) { return {MomentKind::I, k}; }
inline Moment K(int k) { return {MomentKind::K, k}; }
inline Moment IStar() { return {MomentKind::Star, 0}; }

inline std::string to_string(const Moment& m) {
    switch (m.kind) {
        case MomentKind::I: return "I" + std::to_string(m.index);
        case MomentKind::K: return "K" + std::to_string(m.index);
        default: return "I*";
    }
}

/// Finite combination of moments with Laurent coefficients in t.
class MomentExpr {
public:
    MomentExpr() = default;
    explicit MomentExpr(const Moment& m, const Laurent& c = Laurent(Rational(1))) { add(m, c); }

    void add(const Moment& m, const Laurent& c) {
        if (c.is_zero()) return;
        auto& slot = terms_[m];
        slot += c;
        if (slot.is_zero()) terms_.erase(m);
    }
    Laurent coeff(const Moment& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Laurent() : it->second;
    }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Moment, Laurent>& terms() const { return terms_; }

    MomentExpr& operator+=(const MomentExpr& o) {
        for (const auto& [m, c] : o.terms_) add(m, c);
        return *this;
    }
    MomentExpr& operator-=(const MomentExpr& o) {
        for (const auto& [m, c] : o.terms_) add(m, Laurent() - c);
        return *this;
    }
    friend MomentExpr operator+(MomentExpr a, const MomentExpr& b) { return a += b; }
    friend MomentExpr operator-(MomentExpr a, const MomentExpr& b) { return a -= b; }
    friend MomentExpr operator*(const Laurent& s, const MomentExpr& e) {
        MomentExpr r;
        for (const auto& [m, c] : e.terms_) r.add(m, s * c);
        return r;
    }
    bool operator==(const MomentExpr&) const = default;

    /// Value given numeric moments.
    template <class F>
    double eval(double t, F&& value_of) const {
        double s = 0;
        for (const auto& [m, c] : terms_) s += c.eval(t) * value_of(m);
        return s;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [m, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += "(" + c.to_string() + ")*" + melnikov::to_string(m);
        }
        return s;
    }

private:
    std::map<Moment, Laurent> terms_;
};

namespace detail {

/// Coefficients of the relation (2a+6)X_{a+1} - (12a+18)X_a + 18a X_{a-1} + (2a-3)t X_{a-2},
/// indexed by the moment index.
inline std::map<int, Laurent> recursion_row(int a) {
    return {{a + 1, Laurent(Rational(2 * a + 6))},
            {a, Laurent(Rational(-(12 * a + 18)))},
            {a - 1, Laurent(Rational(18 * a))},
            {a - 2, Laurent::monomial(1, Rational(2 * a - 3))}};
}

/// Right side for the K relation: -2(I_{a+1} - 6 I_a + 9 I_{a-1} + t I_{a-2}).
inline MomentExpr k_inhomogeneity(int a) {
    MomentExpr r;
    r.add(I(a + 1), Laurent(Rational(-2)));
    r.add(I(a), Laurent(Rational(12)));
    r.add(I(a - 1), Laurent(Rational(-18)));
    r.add(I(a - 2), Laurent::monomial(1, Rational(-2)));
    return r;
}

inline bool reducible(const Moment& m) {
    if (m.kind == MomentKind::I) return m.index >= 3 || m.index == 1 || m.index <= -2;
    if (m.kind == MomentKind::K) return m.index >= 2 || m.index <= -2;
    return false;
}

/// One reduction step of a non-basis moment.
inline MomentExpr rewrite(const Moment& m) {
    if (m.kind == MomentKind::I && m.index == 1) return MomentExpr(I(0));
    const int k = m.index;
    const int a = k >= 2 ? k - 1 : k + 2;  // relation whose extreme index is k
    const auto row = recursion_row(a);
    const Laurent pivot = row.at(k);
    const Laurent inv = Laurent(Rational(1)) * Laurent::monomial(-pivot.degree(), 1 / pivot.coeff(pivot.degree()));
    MomentExpr r;
    for (const auto& [idx, c] : row)
        if (idx != k) r.add({m.kind, idx}, Laurent() - inv * c);
    if (m.kind == MomentKind::K) r += inv * k_inhomogeneity(a);
    return r;
}

}  // namespace detail

/// Rewrite to the basis {I_{-1}, I_0, I_2, I_*} (plus K_{-1}, K_0 when present),
/// using I_1 = I_0, the three-term recursion, and K_1 = I_* + K_0.
inline MomentExpr d4_reduce_moments(const MomentExpr& e) {
    MomentExpr done;
    MomentExpr todo = e;
    while (!todo.is_zero()) {
        // Largest |index| first so each rewrite strictly moves toward the basis.
        auto pick = todo.terms().begin();
        for (auto it = todo.terms().begin(); it != todo.terms().end(); ++it)
            if (detail::reducible(it->first) &&
                (!detail::reducible(pick->first) || std::abs(it->first.index) > std::abs(pick->first.index)))
                pick = it;
        const Moment m = pick->first;
        const Laurent c = pick->second;
        todo.add(m, Laurent() - c);
        if (!detail::reducible(m)) {
            if (m.kind == MomentKind::K && m.index == 1) {
                done.add(IStar(), c);
                done.add(K(0), c);
            } else {
                done.add(m, c);
            }
            continue;
        }
        todo += c * detail::rewrite(m);
    }
    return done;
}

/// Reduced form with I_2 eliminated through t I_{-1} = 8 I_2 - 12 I_0.
/// Zero exactly when the integral vanishes identically.
inline MomentExpr d4_canonical(const MomentExpr& e) {
    MomentExpr r = d4_reduce_moments(e);
    const Laurent c2 = r.coeff(I(2));
    if (c2.is_zero()) return r;
    r.add(I(2), Laurent() - c2);
    r.add(I(-1), Laurent::monomial(1, Rational(1, 8)) * c2);
    r.add(I(0), Laurent(Rational(3, 2)) * c2);
    return r;
}

namespace detail {

/// y^b on the oval as y * (Laurent polynomial in x with Laurent-in-t coefficients), b odd.
inline std::map<int, Laurent> odd_y_power(int b, int k_h) {
    // y^2 = x^2 - 6x + 9 + t/x
    std::map<int, Laurent> acc{{0, Laurent::monomial(k_h, 1)}};
    for (int r = 0; r < (b - 1) / 2; ++r) {
        std::map<int, Laurent> nxt;
        for (const auto& [e, c] : acc) {
            nxt[e + 2] += c;
            nxt[e + 1] += Laurent(Rational(-6)) * c;
            nxt[e] += Laurent(Rational(9)) * c;
            nxt[e - 1] += c.shifted(1);
        }
        acc = std::move(nxt);
    }
    return acc;
}

/// \oint [log ? ln(x) : 1] x^a y^b t^k dx.
inline MomentExpr dx_term(int a, int b, int k, const Rational& c, bool log) {
    MomentExpr r;
    if (b < 0) throw ValidationError("negative power of y in an oval integrand");
    if (b % 2 == 0) return r;  // odd under the reflection y -> -y
    for (const auto& [e, cf] : odd_y_power(b, k)) r.add(log ? K(a + e) : I(a + e), Laurent(c) * cf);
    return r;
}

inline MomentExpr oval_integral(const OneForm& w, bool log) {
    MomentExpr r;
    for (const auto& [m, c] : w.a.terms()) r += dx_term(m.i, m.j, m.k, c, log);
    for (const auto& [m, c] : w.b.terms()) {
        // x^i y^j dy = d(x^i y^(j+1)/(j+1)) - i/(j+1) x^(i-1) y^(j+1) dx, with ln x carried along
        const Rational s = c / (m.j + 1);
        if (m.i != 0) r += dx_term(m.i - 1, m.j + 1, m.k, -s * m.i, log);
        if (log) r += dx_term(m.i - 1, m.j + 1, m.k, -s, false);
    }
    return r;
}

}  // namespace detail

/// \oint_{f=t} w for a polynomial form w; the symbol H stands for f and evaluates to t.
inline MomentExpr d4_abelian_integral(const OneForm& w) { return detail::oval_integral(w, false); }

/// \oint_{f=t} ln(x) w.
inline MomentExpr d4_log_integral(const OneForm& w) { return detail::oval_integral(w, true); }

/// The order-three affine symmetry of f permuting the sides of the triangle.
inline std::pair<WeightedPoly, WeightedPoly> d4_symmetry() {
    const auto X = WeightedPoly::x();
    const auto Y = WeightedPoly::y();
    return {make_rational(-1, 2) * X - make_rational(1, 2) * Y + make_rational(3, 2),
            make_rational(3, 2) * X - make_rational(1, 2) * Y - make_rational(3, 2)};
}

/// p(x, y, H) composed with (x, y) -> (ax, ay); H is invariant.
inline WeightedPoly compose(const WeightedPoly& p, const WeightedPoly& ax, const WeightedPoly& ay) {
    WeightedPoly r;
    for (const auto& [m, c] : p.terms())
        r += WeightedPoly(c) * ax.pow(m.i) * ay.pow(m.j) * WeightedPoly::mono(0, 0, m.k);
    return r;
}

inline OneForm pullback(const OneForm& w, const WeightedPoly& ax, const WeightedPoly& ay) {
    const WeightedPoly a = compose(w.a, ax, ay);
    const WeightedPoly b = compose(w.b, ax, ay);
    return {a * ax.dx_formal() + b * ay.dx_formal(), a * ax.dy_formal() + b * ay.dy_formal()};
}

/// \oint_{f=t} L w with L = ln((3 - x - y)/(3 - x + y)).
/// L equals ln(x) o A - ln(x) o A^2 and A preserves the oval with its orientation.
inline MomentExpr d4_L_integral(const OneForm& w) {
    const auto [ax, ay] = d4_symmetry();
    const OneForm w1 = pullback(w, ax, ay);
    const OneForm w2 = pullback(w1, ax, ay);
    return d4_log_integral(w2 - w1);
}

}  // namespace melnikov
