#pragma once

#include <complex>

#include "json.hpp"
#include "melnikov/form_parser.hpp"
#include "melnikov/monodromy.hpp"
#include "melnikov/reduction.hpp"
#include "melnikov/triangle.hpp"

namespace melnikov {

using nlohmann::json;

inline json to_json(const Rational& r) { return to_string(r); }

/// Laurent polynomial as [[exponent, "num/den"], ...] in increasing exponent.
inline json to_json(const Laurent& p) {
    json a = json::array();
    for (const auto& [e, c] : p.terms()) a.push_back({e, to_string(c)});
    return a;
}

inline Laurent laurent_from_json(const json& j) {
    Laurent p;
    for (const auto& t : j) p.add(t.at(0).get<int>(), parse_rational(t.at(1).get<std::string>()));
    return p;
}

inline json to_json(const WeightedPoly& p, const char* hname = "H") {
    json terms = json::array();
    for (const auto& [m, c] : p.terms()) terms.push_back({{"x", m.i}, {"y", m.j}, {hname, m.k}, {"c", to_string(c)}});
    return {{"text", p.to_string(hname)}, {"terms", terms}};
}

inline json to_json(const OneForm& w, const char* hname = "H") {
    return {{"text", form_to_string(w)}, {"dx", to_json(w.a, hname)}, {"dy", to_json(w.b, hname)}};
}

inline json to_json(const ExtElem& e, const char* gen = "phi", const char* hname = "H") {
    json parts = json::object();
    for (const auto& [j, p] : e.parts()) parts[std::to_string(j)] = to_json(p, hname);
    return {{"text", e.to_string(gen, hname)}, {"powers", parts}};
}

inline json to_json(const Decomposition& d) {
    return {{"G", to_json(d.G)},
            {"g", to_json(d.g)},
            {"alpha", to_json(d.alpha)},
            {"beta", to_json(d.beta)},
            {"gamma", to_json(d.gamma)}};
}

/// Dense coefficient list, constant term first.
inline json dense_json(const Laurent& p) {
    json a = json::array();
    if (p.is_zero()) return a;
    for (int e = 0; e <= p.degree(); ++e) a.push_back(to_string(p.coeff(e)));
    return a;
}

inline json to_json(const GeneratingFn& g) {
    return {{"k", g.k},
            {"hamiltonian", to_string(g.ham)},
            {"annulus", to_string(g.annulus)},
            {"n", g.n},
            {"pole_order", g.pole_order},
            {"alpha", dense_json(g.alpha)},
            {"beta", dense_json(g.beta)},
            {"gamma", dense_json(g.gamma)}};
}

inline json to_json(const ChainResult& r) {
    json trace = json::array();
    for (const auto& s : r.trace) trace.push_back({{"k", s.k}, {"Q", to_json(s.Q)}, {"q", to_json(s.q)}});
    json out = {{"k", r.k}, {"integrable", r.all_zero()}, {"trace", trace}};
    if (!r.all_zero()) out["M"] = to_json(r.M);
    return out;
}

inline json to_json(const MomentExpr& e) {
    json a = json::array();
    for (const auto& [m, c] : e.terms()) a.push_back({{"moment", to_string(m)}, {"coeff", to_json(c)}});
    return a;
}

inline json to_json(const D4GenFn& g) {
    return {{"c_m1", to_json(g.cm1)},   {"c0", to_json(g.c0)},          {"c1", to_json(g.c1)},
            {"c_star", to_json(g.cstar)}, {"alpha", to_json(g.alpha())}, {"beta", to_json(g.beta())},
            {"gamma", to_json(g.gamma())}, {"delta", to_json(g.delta())}};
}

inline json to_json(const FuchsOde& o) {
    json coeffs = json::array();
    for (const auto& c : o.coeffs) {
        json row = json::array();
        if (!c.is_zero())
            for (int e = 0; e <= c.degree(); ++e) row.push_back(to_string(c.coeff(e)));
        coeffs.push_back(row);
    }
    json sing = json::array();
    for (const auto& r : o.singular_points()) sing.push_back(to_string(r));
    sing.push_back("inf");
    return {{"order", o.order}, {"coeffs", coeffs}, {"singular_points", sing}, {"text", o.to_string()}};
}

inline json to_json(const LocalExponents& e) {
    json ex = json::array();
    for (const auto& r : e.exact) ex.push_back(to_string(r));
    return {{"exact", ex}, {"leftover", to_json(e.leftover)}, {"indicial", to_json(e.indicial)}, {"text", e.to_string()}};
}

inline json to_json(const D4Chain& c) {
    return {{"omega", to_json(c.omega, "f")},
            {"Q1", to_json(c.Q1, "L", "f")},
            {"q1", to_json(c.q1, "L", "f")},
            {"q2", to_json(c.q2, "L", "f")},
            {"M3", to_json(c.M3)},
            {"M3_moments", to_json(d4_canonical(c.M3raw))},
            {"integrable", c.integrable}};
}

inline json to_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }

inline json to_json(const PairingReport& r) {
    return {{"value", to_json(r.value)},
            {"residue_check", to_json(r.residue_check)},
            {"log_jump", to_json(r.log_jump)},
            {"well_defined", r.well_defined},
            {"diagnosis", r.diagnosis}};
}

}  // namespace melnikov
