#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "melnikov/ext_elem.hpp"
#include "melnikov/generating_fn.hpp"

namespace melnikov {

/// w = dG + g dH + alpha(H) sigma0 + beta(H) sigma1 + gamma(H) sigma2.
struct Decomposition {
    WeightedPoly G;
    WeightedPoly g;
    Laurent alpha, beta, gamma;
};

namespace detail {

// (j, i) order used to drive the dx worklist: larger y-power first, then larger x-power.
inline bool dx_before(const Monomial& a, const Monomial& b) { return std::tie(a.j, a.i) > std::tie(b.j, b.i); }

inline Monomial leading_dx(const WeightedPoly& p) {
    Monomial best = p.terms().begin()->first;
    for (const auto& [m, c] : p.terms())
        if (dx_before(m, best)) best = m;
    return best;
}

}  // namespace detail

/// Decompose an A3 one-form whose coefficients are polynomials in x, y and
/// H^(+-1). Terms are eliminated by rewriting, so the three-term recursion
/// in the y-degree is generated on the fly rather than tabulated.
inline Decomposition decompose(const OneForm& w_in, const HamiltonianSpec& sp) {
    if (!sp.is_a3()) throw ValidationError("decompose needs an A3 Hamiltonian");
    Decomposition out;
    OneForm w = normal_form(w_in, sp);
    WeightedPoly pending = w.a;

    // c H^k x^i y^j dy = d(c H^k x^i y^{j+1}/(j+1)) - c k H^{k-1} x^i y^{j+1}/(j+1) dH
    //                    - c i H^k x^{i-1} y^{j+1}/(j+1) dx
    for (const auto& [m, c] : w.b.terms()) {
        Rational f = c / (m.j + 1);
        out.G.add({m.i, m.j + 1, m.k}, f);
        if (m.k != 0) out.g.add({m.i, m.j + 1, m.k - 1}, -f * m.k);
        if (m.i != 0) pending.add({m.i - 1, m.j + 1, m.k}, -f * m.i);
    }
    pending = normal_form(pending, sp);

    // Adds c H^k dF where F is a plain polynomial: d(H^k F) - k H^{k-1} F dH.
    auto add_exact = [&](const WeightedPoly& F, int k, const Rational& c) {
        WeightedPoly cf = WeightedPoly(c) * F;
        out.G += cf.times_H(k);
        if (k != 0) out.g -= WeightedPoly(Rational(k)) * cf.times_H(k - 1);
    };
    const Rational c3 = sp.s;          // H_x = c3 x^3 + c1 x
    const Rational c1 = sp.s * sp.e;

    while (!pending.is_zero()) {
        const Monomial m = detail::leading_dx(pending);
        const Rational c = pending.coeff(m);
        pending.add(m, -c);
        const int i = m.i, j = m.j, k = m.k;
        if (i == 3) {
            // x^3 y^j dx = (1/c3) y^j dH - (1/c3) y^{j+1} dy - (c1/c3) x y^j dx
            out.g.add({0, j, k}, c / c3);
            add_exact(WeightedPoly::mono(0, j + 2), k, -c / c3 / (j + 2));
            pending.add({1, j, k}, -c * c1 / c3);
        } else if (j == 0) {
            add_exact(WeightedPoly::mono(i + 1, 0), k, c / (i + 1));
        } else if (j == 1) {
            Laurent& slot = i == 0 ? out.alpha : i == 1 ? out.beta : out.gamma;
            slot.add(k, c);
        } else {
            // (i+1) x^i y^j dx = d(x^{i+1} y^j) - j x^{i+1} y^{j-2} dH + j x^{i+1} y^{j-2} H_x dx
            WeightedPoly rest = normal_form(WeightedPoly(Rational(j)) * WeightedPoly::mono(i + 1, j - 2) * sp.hx, sp);
            const Rational rho = rest.coeff({i, j, 0});
            rest.add({i, j, 0}, -rho);
            for (const auto& [r, rc] : rest.terms())
                if (r.i == i && r.j == j) throw ShapeViolation("decompose: unexpected self term");
            const Rational f = c / (Rational(i + 1) - rho);
            add_exact(WeightedPoly::mono(i + 1, j), k, f);
            out.g.add({i + 1, j - 2, k}, -f * j);
            pending += (WeightedPoly(f) * rest).times_H(k);
        }
    }
    out.G = normal_form(out.G, sp);
    out.g = normal_form(out.g, sp);
    out.G.add({}, -out.G.constant_term());
    return out;
}

/// dG + g dH + alpha sigma0 + beta sigma1 + gamma sigma2, in normal form.
inline OneForm reconstruct(const Decomposition& dec, const HamiltonianSpec& sp) {
    OneForm w = d(dec.G, sp) + dec.g * dH(sp);
    w.a += WeightedPoly::in_H(dec.alpha) * WeightedPoly::y() + WeightedPoly::in_H(dec.beta) * WeightedPoly::mono(1, 1) +
           WeightedPoly::in_H(dec.gamma) * WeightedPoly::mono(2, 1);
    return normal_form(w, sp);
}

/// Residual coefficients (alpha, beta, gamma) sitting at one power of phi.
using Residual = std::array<Laurent, 3>;

/// Omega = dQ + q dH + sum_j phi^j (alpha_j sigma0 + beta_j sigma1 + gamma_j sigma2).
struct ExtDecomposition {
    ExtElem Q;
    ExtElem q;
    std::map<int, Residual> residual;

    Residual residual_at(int j) const {
        auto it = residual.find(j);
        return it == residual.end() ? Residual{} : it->second;
    }
};

/// d of an ExtElem: d(phi^j P) = phi^j dP + j phi^{j-1} P eta / H.
inline ExtForm ext_d(const ExtElem& e, const HamiltonianSpec& sp) {
    ExtForm out;
    const OneForm eta = sp.eta_phi();
    for (const auto& [j, p] : e.parts()) {
        out[j] += d(p, sp);
        if (j > 0) out[j - 1] += WeightedPoly(Rational(j)) * p.times_H(-1) * eta;
    }
    for (auto& [j, w] : out) w = normal_form(w, sp);
    return out;
}

inline ExtForm operator*(const ExtElem& q, const OneForm& w) {
    ExtForm out;
    for (const auto& [j, p] : q.parts()) out[j] += p * w;
    return out;
}

/// Reduce sum phi^j w_j from the top phi-power down. When fold_beta is set
/// (symmetric annuli) every beta(H) sigma1 is absorbed through
/// sigma1 = dG0 + H dphi, otherwise beta stays in the residual.
inline ExtDecomposition reduce_ext(ExtForm omega, const HamiltonianSpec& sp, bool fold_beta) {
    ExtDecomposition out;
    const OneForm eta = sp.eta_phi();
    const WeightedPoly g0 = sp.g_closure();
    while (!omega.empty()) {
        auto top = std::prev(omega.end());
        const int j = top->first;
        OneForm wj = top->second;
        omega.erase(top);
        if (wj.is_zero()) continue;
        Decomposition dec = decompose(wj, sp);
        out.Q.add(j, dec.G);
        out.q.add(j, dec.g);
        OneForm down;  // contribution to the phi^{j-1} level
        if (j > 0) down -= WeightedPoly(Rational(j)) * dec.G.times_H(-1) * eta;
        if (fold_beta && !dec.beta.is_zero()) {
            const WeightedPoly b = WeightedPoly::in_H(dec.beta);
            const WeightedPoly bH = b.times_H(1);
            const Rational inv = Rational(1, j + 1);
            out.Q.add(j, b * g0);
            out.Q.add(j + 1, WeightedPoly(inv) * bH);
            out.q.add(j, -(b.dH_formal() * g0));
            out.q.add(j + 1, -(WeightedPoly(inv) * bH.dH_formal()));
            if (j > 0) down -= WeightedPoly(Rational(j)) * (b * g0).times_H(-1) * eta;
            dec.beta = Laurent();
        }
        if (!(dec.alpha.is_zero() && dec.beta.is_zero() && dec.gamma.is_zero()))
            out.residual[j] = {dec.alpha, dec.beta, dec.gamma};
        if (!down.is_zero()) omega[j - 1] += down;
    }
    out.Q = out.Q.normalized(sp);
    out.q = out.q.normalized(sp);
    return out;
}

/// Check dQ + q dH + residual == omega exactly.
inline bool reconstructs(const ExtDecomposition& dec, const ExtForm& omega, const HamiltonianSpec& sp) {
    ExtForm lhs = ext_d(dec.Q, sp);
    for (const auto& [j, p] : dec.q.parts()) lhs[j] += p * dH(sp);
    for (const auto& [j, r] : dec.residual) {
        lhs[j].a += WeightedPoly::in_H(r[0]) * WeightedPoly::y() + WeightedPoly::in_H(r[1]) * WeightedPoly::mono(1, 1) +
                    WeightedPoly::in_H(r[2]) * WeightedPoly::mono(2, 1);
    }
    for (const auto& [j, w] : omega) lhs[j] -= w;
    for (const auto& [j, w] : lhs)
        if (!normal_form(w, sp).is_zero()) return false;
    return true;
}

/// Decomposition of a phi-free form on a symmetric annulus with beta folded into phi.
inline ExtDecomposition decompose_ext(const OneForm& w, const HamiltonianSpec& sp) {
    return reduce_ext(ExtForm{{0, w}}, sp, true);
}

/// One step of the recursion: Omega_k with its primitive Q_k and dH-coefficient q_k.
struct ChainStep {
    int k;
    ExtForm omega;
    ExtElem Q;
    ExtElem q;
};

struct ChainResult {
    int k = 0;  // 0 when every M_k up to k_max vanished
    GeneratingFn M;
    std::vector<ChainStep> trace;
    bool all_zero() const { return k == 0; }
};

/// Shape of q_k: phi-degree <= k, the phi^j part has H-pole <= k-j-1 (none at
/// j = k) and weighted degree (phi counted with weight 1) <= k(n-1).
inline std::vector<std::string> q_shape_violations(const ExtElem& q, int k, int n) {
    std::vector<std::string> out;
    for (const auto& [j, p] : q.parts()) {
        const std::string tag = "q_" + std::to_string(k) + " phi^" + std::to_string(j);
        if (j > k) out.push_back(tag + ": phi-degree exceeds " + std::to_string(k));
        const int pole_cap = j == k ? 0 : k - j - 1;
        if (p.pole_order() > pole_cap) out.push_back(tag + ": H-pole " + std::to_string(p.pole_order()));
        if (j + p.weighted_degree() > k * (n - 1)) out.push_back(tag + ": weighted degree too large");
    }
    return out;
}

struct ChainOptions {
    int k_max = 6;
    /// Express every q_k through phi + c (a different additive constant in phi).
    Rational phi_shift = 0;
    /// Verify every reduction by exact reconstruction.
    bool verify = true;
};

/// First nonvanishing generating function of dH - eps w = 0 on the given annulus.
inline ChainResult francoise_chain(const OneForm& w_in, const HamiltonianSpec& sp, Annulus annulus,
                                   const ChainOptions& opt = {}) {
    if (!sp.is_a3()) throw ValidationError("francoise_chain handles the A3 family; use d4_chain for D4");
    if (!sp.annulus_valid(annulus)) throw ValidationError("annulus " + to_string(annulus) + " invalid for " + to_string(sp.id));
    if (opt.k_max < 1 || opt.k_max > 6) throw ValidationError("k_max must be in 1..6");
    for (const auto& p : {w_in.a, w_in.b})
        for (const auto& [m, c] : p.terms())
            if (m.k != 0) throw ValidationError("perturbation must be polynomial in x, y");
    const bool sym = sp.symmetric_annulus(annulus);
    const OneForm w = normal_form(w_in, sp);
    const int n = std::max(w_in.weighted_degree(), 0);

    ChainResult res;
    ExtElem q_prev(WeightedPoly(1));
    for (int k = 1; k <= opt.k_max; ++k) {
        ExtForm omega = q_prev * w;
        for (auto& [j, f] : omega) f = normal_form(f, sp);
        ExtDecomposition dec = reduce_ext(omega, sp, sym);
        if (opt.verify && !reconstructs(dec, omega, sp))
            throw ShapeViolation("reduction of Omega_" + std::to_string(k) + " does not reconstruct");

        // Top-down c-elimination: independence from the constant in phi forces
        // every residual above phi^0 to vanish identically.
        for (auto it = dec.residual.rbegin(); it != dec.residual.rend(); ++it)
            if (it->first > 0)
                throw ShapeViolation("Omega_" + std::to_string(k) + " keeps a non-Abelian residual at phi^" +
                                     std::to_string(it->first));

        ExtElem Q = dec.Q;
        Q.add(0, WeightedPoly(-Q.component(0).constant_term()));
        res.trace.push_back({k, omega, Q, dec.q});

        Residual r0 = dec.residual_at(0);
        if (!(r0[0].is_zero() && r0[1].is_zero() && r0[2].is_zero())) {
            GeneratingFn gf;
            gf.k = k;
            gf.ham = sp.id;
            gf.annulus = annulus;
            gf.n = n;
            gf.pole_order = shape_bound(sp, annulus, n, k).pole_order;
            gf.alpha = r0[0].shifted(gf.pole_order);
            gf.beta = r0[1].shifted(gf.pole_order);
            gf.gamma = r0[2].shifted(gf.pole_order);
            auto bad = shape_violations(gf, sp);
            if (!bad.empty()) throw ShapeViolation("M_" + std::to_string(k) + " shape: " + bad.front());
            res.k = k;
            res.M = gf;
            return res;
        }

        std::vector<std::string> bad;
        if (sym) {
            bad = q_shape_violations(dec.q, k, n);
        } else {
            if (dec.q.phi_degree() > 0 || dec.q.component(0).pole_order() > 0)
                bad.push_back("interior q_" + std::to_string(k) + " is not polynomial");
            else if (!dec.q.is_zero() && dec.q.component(0).weighted_degree() > k * (n - 1))
                bad.push_back("interior q_" + std::to_string(k) + " weighted degree too large");
        }
        if (!bad.empty()) throw ShapeViolation(bad.front());
        q_prev = opt.phi_shift == 0 ? dec.q : dec.q.shift_phi(-opt.phi_shift);
    }
    return res;
}

}  // namespace melnikov
