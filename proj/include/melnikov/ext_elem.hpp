#pragma once

#include <map>
#include <string>

#include "melnikov/hamiltonian.hpp"

namespace melnikov {

/// Element of the log-extended ring: sum over j of phi^j * P_j, where each
/// P_j is a weighted polynomial whose H-exponents may be negative.
/// The generator phi stands for the multivalued primitive (L for D4).
class ExtElem {
public:
    ExtElem() = default;
    ExtElem(const WeightedPoly& p) { add(0, p); }  // NOLINT(implicit)
    static ExtElem phi_power(int j, const WeightedPoly& p = WeightedPoly(1)) {
        ExtElem r;
        r.add(j, p);
        return r;
    }

    void add(int j, const WeightedPoly& p) {
        if (p.is_zero()) return;
        auto& slot = parts_[j];
        slot += p;
        if (slot.is_zero()) parts_.erase(j);
    }

    bool is_zero() const { return parts_.empty(); }
    const std::map<int, WeightedPoly>& parts() const { return parts_; }
    WeightedPoly component(int j) const {
        auto it = parts_.find(j);
        return it == parts_.end() ? WeightedPoly() : it->second;
    }
    int phi_degree() const { return parts_.empty() ? -1 : parts_.rbegin()->first; }
    /// Pole order in H of the phi^j component.
    int pole_order(int j) const { return component(j).pole_order(); }

    /// Substitute phi -> phi + c.
    ExtElem shift_phi(const Rational& c) const {
        ExtElem r;
        for (const auto& [j, p] : parts_) {
            Rational binom = 1;
            Rational cpow = 1;
            for (int m = 0; m <= j; ++m) {
                // phi^j -> sum_m C(j, m) c^m phi^(j - m)
                r.add(j - m, WeightedPoly(Rational(binom * cpow)) * p);
                binom = binom * (j - m) / (m + 1);
                cpow *= c;
            }
        }
        return r;
    }

    ExtElem normalized(const HamiltonianSpec& sp) const {
        ExtElem r;
        for (const auto& [j, p] : parts_) r.add(j, normal_form(p, sp));
        return r;
    }

    ExtElem& operator+=(const ExtElem& o) {
        for (const auto& [j, p] : o.parts_) add(j, p);
        return *this;
    }
    ExtElem& operator-=(const ExtElem& o) {
        for (const auto& [j, p] : o.parts_) add(j, -p);
        return *this;
    }
    friend ExtElem operator+(ExtElem a, const ExtElem& b) { return a += b; }
    friend ExtElem operator-(ExtElem a, const ExtElem& b) { return a -= b; }
    friend ExtElem operator-(const ExtElem& a) { return ExtElem() - a; }
    friend ExtElem operator*(const ExtElem& a, const ExtElem& b) {
        ExtElem r;
        for (const auto& [ja, pa] : a.parts_)
            for (const auto& [jb, pb] : b.parts_) r.add(ja + jb, pa * pb);
        return r;
    }
    friend bool operator==(const ExtElem& a, const ExtElem& b) { return a.parts_ == b.parts_; }

    std::string to_string(const char* gen = "phi", const char* hname = "H") const {
        if (parts_.empty()) return "0";
        std::string s;
        for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) {
            if (!s.empty()) s += " + ";
            if (it->first == 0)
                s += "(" + it->second.to_string(hname) + ")";
            else
                s += std::string(gen) + (it->first == 1 ? "" : "^" + std::to_string(it->first)) + "*(" +
                     it->second.to_string(hname) + ")";
        }
        return s;
    }

private:
    std::map<int, WeightedPoly> parts_;
};

/// Equality as functions: compare after normal_form.
inline bool equivalent(const ExtElem& a, const ExtElem& b, const HamiltonianSpec& sp) {
    return (a - b).normalized(sp).is_zero();
}

/// A one-form with ExtElem coefficients, kept per phi-power: sum phi^j w_j.
using ExtForm = std::map<int, OneForm>;

}  // namespace melnikov
