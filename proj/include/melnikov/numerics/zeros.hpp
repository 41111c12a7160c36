#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "melnikov/generating_fn.hpp"
#include "melnikov/numerics/oval.hpp"
#include "melnikov/triangle.hpp"

namespace melnikov {

struct ZeroCount {
    int count = 0;                                  // certified lower bound: sign changes found
    std::vector<std::pair<double, double>> brackets;
    std::optional<int> bound;                       // N(n, k) where one is known
    bool exceeds_bound() const { return bound && count > *bound; }
    bool saturates_bound() const { return bound && count == *bound; }
};

/// Sampling window inside Sigma that keeps 2% away from each finite endpoint;
/// unbounded levels are truncated at t = 10.
inline std::pair<double, double> sampling_window(const HamiltonianSpec& sp, Annulus a) {
    const auto [lo_r, hi_r] = sp.sigma_interval(a);
    const double lo = to_double(lo_r);
    if (!hi_r) return {lo + 0.02 * std::max(std::abs(lo), 1.0), 10.0};
    const double hi = to_double(*hi_r), w = hi - lo;
    return {lo + 0.02 * w, hi - 0.02 * w};
}

/// Sign changes of f on a uniform grid, each refined by bisection.
inline ZeroCount count_zeros(const std::function<double(double)>& f, double lo, double hi, int samples,
                             double xtol = 1e-10) {
    if (samples < 2 || !(lo < hi)) throw ValidationError("need an interval and at least two samples");
    ZeroCount z;
    double prev_t = lo, prev = f(lo);
    bool nonzero = prev != 0;
    for (int i = 1; i < samples; ++i) {
        const double t = lo + (hi - lo) * i / (samples - 1);
        const double v = f(t);
        nonzero = nonzero || v != 0;
        if ((prev < 0 && v > 0) || (prev > 0 && v < 0)) {
            double a = prev_t, b = t, fa = prev;
            while (b - a > xtol * std::max(1.0, std::abs(a))) {
                const double m = 0.5 * (a + b), fm = f(m);
                if (fm == 0) {
                    a = b = m;
                    break;
                }
                if ((fa < 0) == (fm < 0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            z.brackets.emplace_back(a, b);
        }
        if (v != 0) {
            prev = v;
            prev_t = t;
        }
    }
    if (!nonzero) throw ValidationError("function vanishes at every sample");
    z.count = static_cast<int>(z.brackets.size());
    return z;
}

/// Value of an A3 generating function from quadrature of I0, I1, I2 on the oval at t.
inline double evaluate(const GeneratingFn& gf, double t) {
    const HamiltonianSpec sp = make_spec(gf.ham);
    const Oval ov = trace_oval(sp, t, gf.annulus);
    const double i1 = sp.symmetric_annulus(gf.annulus) ? 0.0 : moment(ov, 1);
    return gf.eval(t, moment(ov, 0), i1, moment(ov, 2));
}

inline double evaluate(const D4GenFn& gf, double t) {
    const Oval ov = trace_oval(d4_spec(), t, Annulus::Center);
    return gf.eval(t, moment(ov, -1), moment(ov, 0), moment_star(ov));
}

inline ZeroCount count_zeros(const GeneratingFn& gf, std::pair<double, double> interval, int samples) {
    if (gf.is_zero()) throw ValidationError("generating function is identically zero");
    const HamiltonianSpec sp = make_spec(gf.ham);
    require_inside_sigma(sp, gf.annulus, interval.first);
    require_inside_sigma(sp, gf.annulus, interval.second);
    ZeroCount z = count_zeros([&](double t) { return evaluate(gf, t); }, interval.first, interval.second, samples);
    z.bound = zero_bound(gf.ham, gf.annulus, gf.n, gf.k);
    return z;
}

inline ZeroCount count_zeros(const D4GenFn& gf, std::pair<double, double> interval, int samples) {
    if (gf.is_zero()) throw ValidationError("generating function is identically zero");
    require_inside_sigma(d4_spec(), Annulus::Center, interval.first);
    require_inside_sigma(d4_spec(), Annulus::Center, interval.second);
    return count_zeros([&](double t) { return evaluate(gf, t); }, interval.first, interval.second, samples);
}

}  // namespace melnikov
