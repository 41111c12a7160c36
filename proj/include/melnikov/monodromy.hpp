#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "melnikov/errors.hpp"

namespace melnikov {

// Words in the free group on the loops of a fiber.
// D4 generators: delta (index 0), gamma1..gamma3 (1..3), as loops about z0..z3.
// A3 generators: delta_s, delta_l, delta_r (0..2).

enum class Alphabet { D4, A3 };

inline std::vector<std::string> generator_names(Alphabet a) {
    if (a == Alphabet::D4) return {"d", "g1", "g2", "g3"};
    return {"ds", "dl", "dr"};
}

/// Letter +(g+1) is generator g, -(g+1) its inverse.
class LoopWord {
public:
    LoopWord() = default;
    LoopWord(Alphabet a, std::vector<int> letters) : alphabet_(a), letters_(std::move(letters)) { reduce(); }

    static LoopWord generator(Alphabet a, int g) { return LoopWord(a, {g + 1}); }

    Alphabet alphabet() const { return alphabet_; }
    const std::vector<int>& letters() const { return letters_; }
    bool empty() const { return letters_.empty(); }
    std::size_t size() const { return letters_.size(); }

    LoopWord inverse() const {
        std::vector<int> r(letters_.rbegin(), letters_.rend());
        for (auto& l : r) l = -l;
        return LoopWord(alphabet_, r);
    }
    friend LoopWord operator*(const LoopWord& a, const LoopWord& b) {
        if (!a.empty() && !b.empty() && a.alphabet_ != b.alphabet_) throw ValidationError("mixed alphabets");
        std::vector<int> r = a.letters_;
        r.insert(r.end(), b.letters_.begin(), b.letters_.end());
        return LoopWord(a.empty() ? b.alphabet_ : a.alphabet_, r);
    }
    static LoopWord commutator(const LoopWord& a, const LoopWord& b) { return a * b * a.inverse() * b.inverse(); }

    /// Cyclically reduced representative of the conjugacy class.
    LoopWord cyclic_reduction() const {
        std::vector<int> r = letters_;
        std::size_t i = 0, j = r.size();
        while (j - i >= 2 && r[i] == -r[j - 1]) ++i, --j;
        return LoopWord(alphabet_, std::vector<int>(r.begin() + i, r.begin() + j));
    }
    /// Free homotopy: conjugate in the free group.
    bool freely_homotopic(const LoopWord& o) const {
        const auto a = cyclic_reduction().letters_, b = o.cyclic_reduction().letters_;
        if (a.size() != b.size()) return false;
        if (a.empty()) return true;
        for (std::size_t s = 0; s < a.size(); ++s) {
            bool eq = true;
            for (std::size_t k = 0; k < a.size() && eq; ++k) eq = a[(k + s) % a.size()] == b[k];
            if (eq) return true;
        }
        return false;
    }

    bool operator==(const LoopWord& o) const { return letters_ == o.letters_; }

    std::string to_string() const {
        if (letters_.empty()) return "1";
        const auto names = generator_names(alphabet_);
        std::string s;
        for (int l : letters_) {
            if (!s.empty()) s += " ";
            s += names[std::abs(l) - 1];
            if (l < 0) s += "^-1";
        }
        return s;
    }

private:
    void reduce() {
        std::vector<int> st;
        for (int l : letters_) {
            if (l == 0) throw ValidationError("letter 0 is not a generator");
            if (!st.empty() && st.back() == -l)
                st.pop_back();
            else
                st.push_back(l);
        }
        letters_ = std::move(st);
    }

    Alphabet alphabet_ = Alphabet::D4;
    std::vector<int> letters_;
};

/// Exponent sum per generator.
inline std::vector<int> homology_class(const LoopWord& w) {
    std::vector<int> v(generator_names(w.alphabet()).size(), 0);
    for (int l : w.letters()) v[std::abs(l) - 1] += l > 0 ? 1 : -1;
    return v;
}

namespace detail {

struct WordParser {
    Alphabet a;
    std::string_view s;
    std::size_t pos = 0;

    void skip() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '*' || s[pos] == '.')) ++pos;
    }
    bool at(char c) {
        skip();
        return pos < s.size() && s[pos] == c;
    }
    LoopWord word() {
        LoopWord w(a, {});
        skip();
        while (pos < s.size() && s[pos] != ',' && s[pos] != ']' && s[pos] != ')') w = w * factor();
        return w;
    }
    LoopWord factor() {
        LoopWord base;
        if (at('[')) {
            ++pos;
            LoopWord x = word();
            if (!at(',')) throw ValidationError("expected ',' in commutator");
            ++pos;
            LoopWord y = word();
            if (!at(']')) throw ValidationError("expected ']'");
            ++pos;
            base = LoopWord::commutator(x, y);
        } else if (at('(')) {
            ++pos;
            base = word();
            if (!at(')')) throw ValidationError("expected ')'");
            ++pos;
        } else {
            base = atom();
        }
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            const std::size_t st = pos;
            if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            int e = 0;
            try {
                e = std::stoi(std::string(s.substr(st, pos - st)));
            } catch (...) {
                throw ValidationError("bad exponent in word");
            }
            LoopWord r(a, {});
            for (int i = 0; i < std::abs(e); ++i) r = r * base;
            base = e < 0 ? r.inverse() : r;
        }
        skip();
        return base;
    }
    LoopWord atom() {
        skip();
        const auto names = generator_names(a);
        // longest match first
        int best = -1;
        std::size_t len = 0;
        for (std::size_t g = 0; g < names.size(); ++g) {
            const auto& n = names[g];
            if (s.substr(pos, n.size()) == n && n.size() > len) best = static_cast<int>(g), len = n.size();
        }
        if (a == Alphabet::D4 && s.substr(pos, 5) == "delta") best = 0, len = 5;
        if (best < 0) throw ValidationError("unknown generator at '" + std::string(s.substr(pos)) + "'");
        pos += len;
        return LoopWord::generator(a, best);
    }
};

}  // namespace detail

/// Parse e.g. "[g1,g2]", "d^-1 g1 d", "g1 g2 g3".
inline LoopWord parse_word(std::string_view s, Alphabet a = Alphabet::D4) {
    detail::WordParser p{a, s};
    LoopWord w = p.word();
    p.skip();
    if (p.pos != s.size()) throw ValidationError("trailing characters in word '" + std::string(s) + "'");
    return w;
}

enum class Twist { D4_l0, A3_l0, A3_l14 };

inline Twist parse_twist(std::string_view s) {
    if (s == "d4-l0") return Twist::D4_l0;
    if (s == "a3-l0") return Twist::A3_l0;
    if (s == "a3-l1/4") return Twist::A3_l14;
    throw ValidationError("unknown twist '" + std::string(s) + "'");
}

struct VarEntry {
    LoopWord from, to;
};

/// Stored variation tables.
/// D4 l0: delta -> g1 g2 g3 -> [g1, g2] -> 1.
/// A3: known only in homology (Var_{l0} ds = dr + dl, Var_{l1/4} dl = ds, second
/// variations trivial); the words below are representatives of those classes.
inline std::vector<VarEntry> var_table(Twist tw) {
    using W = LoopWord;
    if (tw == Twist::D4_l0) {
        const Alphabet a = Alphabet::D4;
        const W d = W::generator(a, 0), g1 = W::generator(a, 1), g2 = W::generator(a, 2), g3 = W::generator(a, 3);
        return {{d, g1 * g2 * g3}, {g1 * g2 * g3, W::commutator(g1, g2)}, {W::commutator(g1, g2), W(a, {})}};
    }
    const Alphabet a = Alphabet::A3;
    const W ds = W::generator(a, 0), dl = W::generator(a, 1), dr = W::generator(a, 2);
    if (tw == Twist::A3_l0) return {{ds, dr * dl}, {dr * dl, W(a, {})}};
    return {{dl, ds}, {ds, W(a, {})}};
}

/// Image under (twist - id), looked up up to free homotopy; inverses map to inverses.
inline LoopWord var(const LoopWord& l, Twist tw) {
    if (l.empty()) return l;
    for (const auto& e : var_table(tw)) {
        if (e.from.alphabet() != l.alphabet()) throw ValidationError("word alphabet does not match the twist");
        if (l.freely_homotopic(e.from)) return e.to;
        if (l.freely_homotopic(e.from.inverse())) return e.to.inverse();
    }
    throw ValidationError("word '" + l.to_string() + "' is outside the stored variation table");
}

/// Punctured plane standing in for the D4 fiber: loops about z0..z3 from a common base point,
/// each a straight leg to the bottom of a circle, one positive turn, and back.
struct PuncturedModel {
    std::array<std::complex<double>, 4> z{{{-3, 0}, {-1, 0}, {1, 0}, {3, 0}}};
    std::array<double, 4> radius{{0.5, 0.5, 0.5, 0.5}};
    std::complex<double> base{0, -5};
};

struct PairingReport {
    std::complex<double> value;
    std::complex<double> residue_check;  // \oint (1/(z-z2) - 1/(z-z1)) dz along the word
    std::complex<double> log_jump;       // change of ln((z-z1)/(z-z3)) around the word
    bool well_defined = false;
    std::string diagnosis;
};

namespace detail {

/// Continuous branch of ln(z - c) along a path.
struct LogTracker {
    std::complex<double> c, last_z, value;
    void reset(std::complex<double> z, std::complex<double> c0, double shift) {
        c = c0;
        last_z = z;
        value = std::log(z - c0) + std::complex<double>(0, shift);
    }
    std::complex<double> at(std::complex<double> z) const { return value + std::log((z - c) / (last_z - c)); }
    void advance(std::complex<double> z) {
        value = at(z);
        last_z = z;
    }
};

struct PathPiece {
    bool circle;
    std::complex<double> a, b;  // segment ends, or (center, start point) for circles
    int turns;                  // +1 or -1 for circles
    std::complex<double> point(double s) const {
        if (!circle) return a + (b - a) * s;
        return a + (b - a) * std::exp(std::complex<double>(0, 2 * std::numbers::pi * turns * s));
    }
    std::complex<double> deriv(double s) const {
        if (!circle) return b - a;
        return (point(s) - a) * std::complex<double>(0, 2 * std::numbers::pi * turns);
    }
};

inline std::vector<PathPiece> loop_pieces(const PuncturedModel& m, int letter) {
    const int g = std::abs(letter) - 1;
    const auto c = m.z[g];
    const auto bottom = c - std::complex<double>(0, m.radius[g]);
    std::vector<PathPiece> out{{false, m.base, bottom, 0}, {true, c, bottom, 1}, {false, bottom, m.base, 0}};
    if (letter < 0) {
        out = {{false, m.base, bottom, 0}, {true, c, bottom, -1}, {false, bottom, m.base, 0}};
    }
    return out;
}

}  // namespace detail

/// Integral of ln((z-z1)/(z-z3)) (1/(z-z2) - 1/(z-z1)) dz along the word, the logarithm
/// continued along the path from the branch ln(base - z_k) + i shift.
inline PairingReport pair_with_form(const LoopWord& l, const PuncturedModel& m = {}, double branch_shift = 0,
                                    int subdivisions = 64) {
    if (l.alphabet() != Alphabet::D4) throw ValidationError("pairing is defined for the D4 alphabet");
    using C = std::complex<double>;
    using GL = boost::math::quadrature::gauss<double, 10>;
    const auto& xs = GL::abscissa();
    const auto& ws = GL::weights();
    detail::LogTracker l1, l3;
    l1.reset(m.base, m.z[1], branch_shift);
    l3.reset(m.base, m.z[3], 0);
    const C start = l1.value - l3.value;
    C total = 0, residue = 0;
    auto node = [&](const detail::PathPiece& p, double s0, double s1, double x, double w) {
        const double s = 0.5 * (s0 + s1) + 0.5 * (s1 - s0) * x;
        const C z = p.point(s), dz = p.deriv(s) * (0.5 * (s1 - s0)) * w;
        const C kern = 1.0 / (z - m.z[2]) - 1.0 / (z - m.z[1]);
        total += (l1.at(z) - l3.at(z)) * kern * dz;
        residue += kern * dz;
    };
    for (int letter : l.letters()) {
        for (const auto& p : detail::loop_pieces(m, letter)) {
            for (int k = 0; k < subdivisions; ++k) {
                const double s0 = double(k) / subdivisions, s1 = double(k + 1) / subdivisions;
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    if (xs[i] == 0) {
                        node(p, s0, s1, 0, ws[i]);
                    } else {
                        node(p, s0, s1, xs[i], ws[i]);
                        node(p, s0, s1, -xs[i], ws[i]);
                    }
                }
                // advance through the midpoint so each step turns well under pi/8
                l1.advance(p.point(0.5 * (s0 + s1)));
                l3.advance(p.point(0.5 * (s0 + s1)));
                l1.advance(p.point(s1));
                l3.advance(p.point(s1));
            }
        }
    }
    PairingReport r;
    r.value = total;
    r.residue_check = residue;
    r.log_jump = (l1.value - l3.value) - start;
    const bool res_ok = std::abs(residue) < 1e-8, log_ok = std::abs(r.log_jump) < 1e-8;
    r.well_defined = res_ok && log_ok;
    if (!res_ok) r.diagnosis = "integral of 1/(z-z2) - 1/(z-z1) along the word is nonzero";
    else if (!log_ok) r.diagnosis = "ln((z-z1)/(z-z3)) is not single-valued along the word";
    else r.diagnosis = "well defined";
    return r;
}

/// Pairing value; throws when the word fails a well-definedness condition.
inline std::complex<double> pairing(const LoopWord& l, const PuncturedModel& m = {}) {
    const auto r = pair_with_form(l, m);
    if (!r.well_defined) throw ValidationError("pairing not well defined: " + r.diagnosis);
    return r.value;
}

}  // namespace melnikov
