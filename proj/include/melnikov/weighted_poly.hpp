#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>

#include "melnikov/laurent.hpp"
#include "melnikov/rational.hpp"

namespace melnikov {

/// Monomial x^i y^j H^k. The H exponent may be negative (poles in H).
struct Monomial {
    int i = 0;
    int j = 0;
    int k = 0;
    int weight() const { return i + j + 2 * k; }
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Canonical order: (k, i, j) descending, so map iteration prints in order.
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const {
        return std::tie(b.k, b.i, b.j) < std::tie(a.k, a.i, a.j);
    }
};

/// Polynomial in x, y and the formal symbol H (weight 2), exact coefficients.
class WeightedPoly {
public:
    using Terms = std::map<Monomial, Rational, MonomialOrder>;

    WeightedPoly() = default;
    WeightedPoly(const Rational& c) { add({0, 0, 0}, c); }  // NOLINT(implicit)
    WeightedPoly(long c) : WeightedPoly(Rational(c)) {}      // NOLINT(implicit)
    WeightedPoly(int c) : WeightedPoly(Rational(c)) {}       // NOLINT(implicit)
    static WeightedPoly mono(int i, int j, int k = 0, const Rational& c = 1) {
        WeightedPoly p;
        p.add({i, j, k}, c);
        return p;
    }
    static WeightedPoly x() { return mono(1, 0); }
    static WeightedPoly y() { return mono(0, 1); }
    static WeightedPoly H() { return mono(0, 0, 1); }
    /// Embed a univariate polynomial in H.
    static WeightedPoly in_H(const Laurent& a) {
        WeightedPoly p;
        for (const auto& [e, c] : a.terms()) p.add({0, 0, e}, c);
        return p;
    }

    void add(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    bool is_zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    Rational coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    int weighted_degree() const {
        int d = std::numeric_limits<int>::min();
        for (const auto& [m, c] : terms_) d = std::max(d, m.weight());
        return d;
    }
    int max_x() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, m.i);
        return d;
    }
    int max_H() const {
        int d = std::numeric_limits<int>::min();
        for (const auto& [m, c] : terms_) d = std::max(d, m.k);
        return d;
    }
    /// Order of the pole in H (0 when every H exponent is nonnegative).
    int pole_order() const {
        int p = 0;
        for (const auto& [m, c] : terms_) p = std::max(p, -m.k);
        return p;
    }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Monomial{}); }
    Rational constant_term() const { return coeff({}); }
    /// True when only H appears (no x, no y).
    bool is_in_H() const {
        for (const auto& [m, c] : terms_)
            if (m.i != 0 || m.j != 0) return false;
        return true;
    }
    Laurent as_H_laurent() const {
        Laurent a;
        for (const auto& [m, c] : terms_) {
            if (m.i != 0 || m.j != 0) throw ShapeViolation("polynomial depends on x or y");
            a.add(m.k, c);
        }
        return a;
    }

    WeightedPoly times_H(int e) const {
        WeightedPoly r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(Monomial{m.i, m.j, m.k + e}, c);
        return r;
    }
    /// Formal partial derivatives with H held as an independent symbol.
    WeightedPoly dx_formal() const {
        WeightedPoly r;
        for (const auto& [m, c] : terms_)
            if (m.i > 0) r.add({m.i - 1, m.j, m.k}, c * m.i);
        return r;
    }
    WeightedPoly dy_formal() const {
        WeightedPoly r;
        for (const auto& [m, c] : terms_)
            if (m.j > 0) r.add({m.i, m.j - 1, m.k}, c * m.j);
        return r;
    }
    WeightedPoly dH_formal() const {
        WeightedPoly r;
        for (const auto& [m, c] : terms_)
            if (m.k != 0) r.add({m.i, m.j, m.k - 1}, c * m.k);
        return r;
    }

    /// Evaluate with explicit values for x, y and the symbol H.
    template <class T>
    T eval(T xv, T yv, T hv) const {
        T s = 0;
        for (const auto& [m, c] : terms_) {
            T term = static_cast<T>(c.get_d());
            if (m.i) term *= std::pow(xv, m.i);
            if (m.j) term *= std::pow(yv, m.j);
            if (m.k) term *= std::pow(hv, m.k);
            s += term;
        }
        return s;
    }

    WeightedPoly& operator+=(const WeightedPoly& o) {
        for (const auto& [m, c] : o.terms_) add(m, c);
        return *this;
    }
    WeightedPoly& operator-=(const WeightedPoly& o) {
        for (const auto& [m, c] : o.terms_) add(m, -c);
        return *this;
    }
    WeightedPoly& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }
    friend WeightedPoly operator+(WeightedPoly a, const WeightedPoly& b) { return a += b; }
    friend WeightedPoly operator-(WeightedPoly a, const WeightedPoly& b) { return a -= b; }
    friend WeightedPoly operator-(WeightedPoly a) { return a *= Rational(-1); }
    friend WeightedPoly operator*(const WeightedPoly& a, const WeightedPoly& b) {
        if (b.is_constant()) return WeightedPoly(a) *= b.constant_term();
        if (a.is_constant()) return WeightedPoly(b) *= a.constant_term();
        WeightedPoly r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add({ma.i + mb.i, ma.j + mb.j, ma.k + mb.k}, ca * cb);
        return r;
    }
    friend bool operator==(const WeightedPoly& a, const WeightedPoly& b) { return a.terms_ == b.terms_; }

    WeightedPoly pow(int e) const {
        WeightedPoly r(1);
        for (int n = 0; n < e; ++n) r = r * *this;
        return r;
    }

    /// Deterministic text: "3/2*x^2*y*H^-1 - 1/1".
    std::string to_string(const char* hname = "H") const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [m, c] : terms_) {
            if (s.empty())
                s += c < 0 ? "-" : "";
            else
                s += c < 0 ? " - " : " + ";
            s += melnikov::to_string(abs(c));
            auto var = [&](const std::string& v, int e) {
                if (e == 0) return;
                s += "*" + v;
                if (e != 1) s += "^" + std::to_string(e);
            };
            var("x", m.i);
            var("y", m.j);
            var(hname, m.k);
        }
        return s;
    }

private:
    Terms terms_;
};

}  // namespace melnikov
