#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "melnikov/errors.hpp"
#include "melnikov/weighted_poly.hpp"

namespace melnikov {

enum class HamiltonianId { EightLoop, DoubleHeteroclinic, GlobalCenter, D4Triangle };

/// Period annuli. DoubleHeteroclinic and GlobalCenter have a single annulus
/// around the origin, which behaves like the eight-loop exterior (symmetric
/// oval, I1 vanishes) and is addressed as Exterior.
enum class Annulus { InteriorRight, InteriorLeft, Exterior, Center };

inline std::string to_string(HamiltonianId id) {
    switch (id) {
        case HamiltonianId::EightLoop: return "eight-loop";
        case HamiltonianId::DoubleHeteroclinic: return "double-heteroclinic";
        case HamiltonianId::GlobalCenter: return "global-center";
        case HamiltonianId::D4Triangle: return "d4";
    }
    return "?";
}

inline std::string to_string(Annulus a) {
    switch (a) {
        case Annulus::InteriorRight: return "interior-right";
        case Annulus::InteriorLeft: return "interior-left";
        case Annulus::Exterior: return "exterior";
        case Annulus::Center: return "center";
    }
    return "?";
}

inline HamiltonianId parse_hamiltonian(std::string_view s) {
    if (s == "eight-loop") return HamiltonianId::EightLoop;
    if (s == "double-heteroclinic") return HamiltonianId::DoubleHeteroclinic;
    if (s == "global-center") return HamiltonianId::GlobalCenter;
    if (s == "d4" || s == "d4-triangle") return HamiltonianId::D4Triangle;
    throw ValidationError("unknown Hamiltonian '" + std::string(s) + "'");
}

inline Annulus parse_annulus(std::string_view s) {
    if (s == "interior-right" || s == "interior") return Annulus::InteriorRight;
    if (s == "interior-left") return Annulus::InteriorLeft;
    if (s == "exterior") return Annulus::Exterior;
    if (s == "center") return Annulus::Center;
    throw ValidationError("unknown annulus '" + std::string(s) + "'");
}

/// A dx + B dy.
struct OneForm {
    WeightedPoly a;
    WeightedPoly b;

    bool is_zero() const { return a.is_zero() && b.is_zero(); }
    int weighted_degree() const { return std::max(a.weighted_degree(), b.weighted_degree()); }
    OneForm& operator+=(const OneForm& o) {
        a += o.a;
        b += o.b;
        return *this;
    }
    OneForm& operator-=(const OneForm& o) {
        a -= o.a;
        b -= o.b;
        return *this;
    }
    friend OneForm operator+(OneForm p, const OneForm& q) { return p += q; }
    friend OneForm operator-(OneForm p, const OneForm& q) { return p -= q; }
    friend OneForm operator*(const WeightedPoly& s, const OneForm& w) { return {s * w.a, s * w.b}; }
    friend bool operator==(const OneForm&, const OneForm&) = default;

    std::string to_string() const { return "(" + a.to_string() + ")*dx + (" + b.to_string() + ")*dy"; }
};

/// sigma_k = x^k y dx.
inline OneForm sigma(int k) { return {WeightedPoly::mono(k, 1), {}}; }

/// One of the four Hamiltonians with the data every reduction needs.
/// The A3 family is written H = y^2/2 + s (x^2 + e)^2 / 4.
struct HamiltonianSpec {
    HamiltonianId id;
    WeightedPoly h;   // H(x, y), no H symbol inside
    WeightedPoly hx;  // dH/dx
    WeightedPoly hy;  // dH/dy
    int s = 0;        // A3 sign of the quartic part
    int e = 0;        // A3 shift inside the square
    Rational sigma_low;
    std::optional<Rational> sigma_high;  // empty means +infinity

    bool is_a3() const { return id != HamiltonianId::D4Triangle; }

    /// x^4 in normal form (A3 only).
    WeightedPoly x4_rule() const {
        if (!is_a3()) throw ValidationError("no normal form for the D4 Hamiltonian");
        // s x^4 = 4H - 2y^2 - 2 e s x^2 - s, with s = +-1
        WeightedPoly r = WeightedPoly::mono(0, 0, 1, 4 * s) - WeightedPoly::mono(0, 2, 0, 2 * s) -
                         WeightedPoly::mono(2, 0, 0, 2 * e) - WeightedPoly(1);
        return r;
    }
    /// G with sigma_1 = dG + H dphi.
    WeightedPoly g_closure() const {
        if (!is_a3()) throw ValidationError("no phi closure for the D4 Hamiltonian");
        return WeightedPoly::mono(2, 1, 0, make_rational(1, 4)) + WeightedPoly::mono(0, 1, 0, make_rational(e, 4));
    }
    /// eta = H dphi = (xy/2) dx - ((x^2 + e)/4) dy.
    OneForm eta_phi() const {
        if (!is_a3()) throw ValidationError("no phi closure for the D4 Hamiltonian");
        return {WeightedPoly::mono(1, 1, 0, make_rational(1, 2)),
                WeightedPoly::mono(2, 0, 0, make_rational(-1, 4)) + WeightedPoly(make_rational(-e, 4))};
    }

    bool annulus_valid(Annulus a) const {
        switch (id) {
            case HamiltonianId::EightLoop: return a != Annulus::Center;
            case HamiltonianId::DoubleHeteroclinic:
            case HamiltonianId::GlobalCenter: return a == Annulus::Exterior || a == Annulus::Center;
            case HamiltonianId::D4Triangle: return a == Annulus::Center;
        }
        return false;
    }
    /// Annuli on which the oval is symmetric under x -> -x, so I1 vanishes.
    bool symmetric_annulus(Annulus a) const { return is_a3() && (a == Annulus::Exterior || a == Annulus::Center); }

    /// Open interval of levels for the given annulus.
    std::pair<Rational, std::optional<Rational>> sigma_interval(Annulus a) const {
        if (id == HamiltonianId::EightLoop) {
            if (a == Annulus::Exterior) return {make_rational(1, 4), std::nullopt};
            return {Rational(0), make_rational(1, 4)};
        }
        return {sigma_low, sigma_high};
    }
};

inline HamiltonianSpec make_spec(HamiltonianId id) {
    HamiltonianSpec sp;
    sp.id = id;
    const auto X = WeightedPoly::x();
    const auto Y = WeightedPoly::y();
    if (id == HamiltonianId::D4Triangle) {
        // f = x [y^2 - (x - 3)^2]
        sp.h = X * (Y * Y - (X - WeightedPoly(3)).pow(2));
        sp.sigma_low = -4;
        sp.sigma_high = Rational(0);
    } else {
        switch (id) {
            case HamiltonianId::EightLoop:
                sp.s = 1, sp.e = -1, sp.sigma_low = 0, sp.sigma_high = std::nullopt;
                break;
            case HamiltonianId::DoubleHeteroclinic:
                sp.s = -1, sp.e = -1, sp.sigma_low = make_rational(-1, 4), sp.sigma_high = Rational(0);
                break;
            default:
                sp.s = 1, sp.e = 1, sp.sigma_low = make_rational(1, 4), sp.sigma_high = std::nullopt;
                break;
        }
        auto sq = X * X + WeightedPoly(sp.e);
        sp.h = make_rational(1, 2) * Y * Y + make_rational(sp.s, 4) * sq * sq;
    }
    sp.hx = sp.h.dx_formal();
    sp.hy = sp.h.dy_formal();
    return sp;
}

/// Replace the symbol H by the Hamiltonian (nonnegative powers only).
inline WeightedPoly expand_H(const WeightedPoly& p, const HamiltonianSpec& sp) {
    WeightedPoly r;
    for (const auto& [m, c] : p.terms()) {
        if (m.k < 0) throw ValidationError("cannot expand a negative power of H");
        r += c * WeightedPoly::mono(m.i, m.j) * sp.h.pow(m.k);
    }
    return r;
}

/// Rewrite every x^i with i >= 4 through the x^4 rule until all x-exponents are <= 3.
inline WeightedPoly normal_form(const WeightedPoly& p, const HamiltonianSpec& sp) {
    const WeightedPoly rule = sp.x4_rule();
    WeightedPoly done;
    WeightedPoly todo = p;
    while (!todo.is_zero()) {
        WeightedPoly next;
        for (const auto& [m, c] : todo.terms()) {
            if (m.i <= 3)
                done.add(m, c);
            else
                next += c * WeightedPoly::mono(m.i - 4, m.j, m.k) * rule;
        }
        todo = std::move(next);
    }
    return done;
}

inline OneForm normal_form(const OneForm& w, const HamiltonianSpec& sp) {
    return {normal_form(w.a, sp), normal_form(w.b, sp)};
}

/// Exterior derivative with H differentiated through the chain rule.
/// A3 results are returned in normal form.
inline OneForm d(const WeightedPoly& g, const HamiltonianSpec& sp) {
    const WeightedPoly gh = g.dH_formal();
    OneForm w{g.dx_formal() + gh * sp.hx, g.dy_formal() + gh * sp.hy};
    return sp.is_a3() ? normal_form(w, sp) : w;
}

/// dH as a one-form.
inline OneForm dH(const HamiltonianSpec& sp) { return {sp.hx, sp.hy}; }

/// Coefficient c with dH ^ w = c dx ^ dy.
inline WeightedPoly wedge_with_dH(const OneForm& w, const HamiltonianSpec& sp) {
    WeightedPoly c = sp.hx * w.b - sp.hy * w.a;
    return sp.is_a3() ? normal_form(c, sp) : c;
}

/// Coefficient of dw = c dx ^ dy, H differentiated through the chain rule.
inline WeightedPoly exterior_d(const OneForm& w, const HamiltonianSpec& sp) {
    OneForm da = d(w.a, sp);
    OneForm db = d(w.b, sp);
    WeightedPoly c = db.a - da.b;
    return sp.is_a3() ? normal_form(c, sp) : c;
}

/// Numerical value at (x, y), the symbol H evaluated as the Hamiltonian.
template <class T>
T eval(const WeightedPoly& p, const HamiltonianSpec& sp, T x, T y) {
    T hv = sp.h.eval(x, y, T(0));
    return p.eval(x, y, hv);
}

}  // namespace melnikov
