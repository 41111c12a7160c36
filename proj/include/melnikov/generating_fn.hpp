#pragma once

#include <string>
#include <vector>

#include "melnikov/hamiltonian.hpp"
#include "melnikov/laurent.hpp"

namespace melnikov {

/// M_k(t) = t^{-p} [alpha(t) I0 + beta(t) I1 + gamma(t) I2] with polynomial
/// alpha, beta, gamma. beta is zero on symmetric annuli.
struct GeneratingFn {
    int k = 0;
    HamiltonianId ham = HamiltonianId::EightLoop;
    Annulus annulus = Annulus::Exterior;
    int n = 0;  // degree of the perturbation
    int pole_order = 0;
    Laurent alpha, beta, gamma;

    bool is_zero() const { return alpha.is_zero() && beta.is_zero() && gamma.is_zero(); }

    /// Value from numerical basis integrals.
    double eval(double t, double i0, double i1, double i2) const {
        return (alpha.eval(t) * i0 + beta.eval(t) * i1 + gamma.eval(t) * i2) / std::pow(t, pole_order);
    }

    friend bool operator==(const GeneratingFn& a, const GeneratingFn& b) {
        return a.k == b.k && a.ham == b.ham && a.annulus == b.annulus && a.pole_order == b.pole_order &&
               a.alpha == b.alpha && a.beta == b.beta && a.gamma == b.gamma;
    }
};

inline int floor_div(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Degree caps (alpha, beta, gamma) and pole order for the first nonvanishing M_k.
struct ShapeBound {
    int pole_order;
    int alpha, beta, gamma;  // INT_MIN-like negative values mean "must vanish"
};

inline ShapeBound shape_bound(const HamiltonianSpec& sp, Annulus a, int n, int k) {
    if (!sp.symmetric_annulus(a)) {
        int m = k * (n - 1);
        return {0, floor_div(m, 2), floor_div(m - 1, 2), floor_div(m - 2, 2)};
    }
    const bool odd = n % 2 != 0;
    if (k == 1) return {0, floor_div(n - 1, 2), -1, floor_div(n - 3, 2)};
    if (k == 2) return {1, odd ? n - 1 : n, -1, n - 1};
    int top = k * (n + 1);  // bounds below are floor(top/2 - c)
    return {k - 2, floor_div(top - (odd ? 6 : 4), 2), -1, floor_div(top - (odd ? 8 : 6), 2)};
}

/// Structural violations of the expected shape, empty when it conforms.
inline std::vector<std::string> shape_violations(const GeneratingFn& gf, const HamiltonianSpec& sp) {
    std::vector<std::string> out;
    ShapeBound b = shape_bound(sp, gf.annulus, gf.n, gf.k);
    if (gf.pole_order != b.pole_order)
        out.push_back("pole order " + std::to_string(gf.pole_order) + " != " + std::to_string(b.pole_order));
    auto check = [&](const Laurent& p, int cap, const char* name) {
        if (p.is_zero()) return;
        if (!p.is_polynomial()) out.push_back(std::string(name) + " has a pole in t");
        if (p.degree() > cap)
            out.push_back(std::string(name) + " degree " + std::to_string(p.degree()) + " > " + std::to_string(cap));
    };
    check(gf.alpha, b.alpha, "alpha");
    check(gf.beta, b.beta, "beta");
    check(gf.gamma, b.gamma, "gamma");
    return out;
}

/// Upper bound N(n, k) on isolated zeros of the first nonvanishing M_k in Sigma.
inline int zero_bound(HamiltonianId id, Annulus a, int n, int k) {
    if (id == HamiltonianId::D4Triangle) throw ValidationError("no zero bound for the D4 family");
    if (id == HamiltonianId::EightLoop && (a == Annulus::InteriorLeft || a == Annulus::InteriorRight))
        return floor_div(3 * k * (n - 1), 2);
    const int drop = id == HamiltonianId::EightLoop ? 0 : 1;
    if (k == 1) return 2 * floor_div(n - 1, 2) + 1 - drop;
    if (k == 2) return 2 * n + 1 - drop;
    return 2 * floor_div(k * (n + 1), 2) - 3 - drop;
}

}  // namespace melnikov
