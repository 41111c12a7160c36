#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "melnikov/errors.hpp"
#include "melnikov/rational.hpp"

namespace melnikov {

/// Laurent polynomial in one variable with exact coefficients.
/// Used for the univariate coefficients alpha(H), beta(H), gamma(H) and
/// for the Q[t, 1/t] coefficients of moment expressions.
class Laurent {
public:
    Laurent() = default;
    Laurent(const Rational& c) { add(0, c); }  // NOLINT(implicit)
    static Laurent monomial(int e, const Rational& c = 1) {
        Laurent l;
        l.add(e, c);
        return l;
    }
    /// Polynomial from coefficients low-to-high.
    static Laurent from_coeffs(const std::vector<Rational>& c) {
        Laurent l;
        for (std::size_t i = 0; i < c.size(); ++i) l.add(static_cast<int>(i), c[i]);
        return l;
    }

    void add(int e, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    bool is_zero() const { return terms_.empty(); }
    const std::map<int, Rational>& terms() const { return terms_; }
    Rational coeff(int e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }
    int degree() const { return terms_.empty() ? std::numeric_limits<int>::min() : terms_.rbegin()->first; }
    int low_degree() const { return terms_.empty() ? std::numeric_limits<int>::max() : terms_.begin()->first; }
    /// Order of the pole at 0 (0 when there is none).
    int pole_order() const { return terms_.empty() ? 0 : std::max(0, -low_degree()); }
    bool is_polynomial() const { return terms_.empty() || low_degree() >= 0; }

    Laurent shifted(int m) const {
        Laurent r;
        for (const auto& [e, c] : terms_) r.terms_.emplace(e + m, c);
        return r;
    }
    Laurent derivative() const {
        Laurent r;
        for (const auto& [e, c] : terms_) r.add(e - 1, c * e);
        return r;
    }
    /// Coefficients low-to-high of a polynomial (throws on negative powers).
    std::vector<Rational> coeffs() const {
        if (!is_polynomial()) throw ShapeViolation("Laurent::coeffs on a polynomial with a pole");
        std::vector<Rational> v;
        if (terms_.empty()) return v;
        v.resize(static_cast<std::size_t>(degree()) + 1);
        for (const auto& [e, c] : terms_) v[static_cast<std::size_t>(e)] = c;
        return v;
    }

    template <class T>
    T eval(T t) const {
        T s = 0;
        for (const auto& [e, c] : terms_) s += static_cast<T>(c.get_d()) * std::pow(t, e);
        return s;
    }
    Rational eval(const Rational& t) const {
        Rational s = 0;
        for (const auto& [e, c] : terms_) {
            Rational p = 1;
            Rational b = e >= 0 ? t : Rational(1) / t;
            for (int i = 0; i < std::abs(e); ++i) p *= b;
            s += c * p;
        }
        return s;
    }

    Laurent& operator+=(const Laurent& o) {
        for (const auto& [e, c] : o.terms_) add(e, c);
        return *this;
    }
    Laurent& operator-=(const Laurent& o) {
        for (const auto& [e, c] : o.terms_) add(e, -c);
        return *this;
    }
    friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
    friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
    friend Laurent operator-(const Laurent& a) { return Laurent() - a; }
    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        Laurent r;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add(ea + eb, ca * cb);
        return r;
    }
    friend bool operator==(const Laurent& a, const Laurent& b) { return a.terms_ == b.terms_; }

    /// "3/2*t^2 - 1/1*t^-1" style, highest power first.
    std::string to_string(const std::string& var = "t") const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            Rational a = abs(c);
            if (s.empty())
                s += c < 0 ? "-" : "";
            else
                s += c < 0 ? " - " : " + ";
            s += melnikov::to_string(a);
            if (e != 0) s += "*" + var + (e == 1 ? "" : "^" + std::to_string(e));
        }
        return s;
    }

private:
    std::map<int, Rational> terms_;
};

}  // namespace melnikov
