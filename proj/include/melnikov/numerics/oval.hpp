#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "melnikov/hamiltonian.hpp"

namespace melnikov {

/// Concrete double-precision evaluation of H and its gradient.
struct HamEval {
    HamiltonianId id;
    int s = 0, e = 0;

    explicit HamEval(const HamiltonianSpec& sp) : id(sp.id), s(sp.s), e(sp.e) {}

    double h(double x, double y) const {
        if (id == HamiltonianId::D4Triangle) return x * (y * y - (x - 3) * (x - 3));
        double q = x * x + e;
        return 0.5 * y * y + 0.25 * s * q * q;
    }
    double hx(double x, double y) const {
        if (id == HamiltonianId::D4Triangle) return y * y - (x - 3) * (x - 3) - 2 * x * (x - 3);
        return s * x * (x * x + e);
    }
    double hy(double x, double y) const {
        if (id == HamiltonianId::D4Triangle) return 2 * x * y;
        return y;
    }
};

/// +1 for clockwise traversal (the Hamiltonian flow on the A3 ovals),
/// -1 for the counterclockwise D4 ovals.
inline int orientation_sign(HamiltonianId id) { return id == HamiltonianId::D4Triangle ? -1 : 1; }

/// Closed level curve H = t, split into arcs that are graphs over x or over y.
struct Oval {
    struct Arc {
        bool over_x;                    // y = y(x) when true, x = x(y) otherwise
        std::vector<double> xs, ys;     // traced points on H = t, in traversal order
        double u0() const { return over_x ? xs.front() : ys.front(); }
        double u1() const { return over_x ? xs.back() : ys.back(); }
    };

    HamiltonianSpec spec;
    double t = 0;
    Annulus annulus = Annulus::Exterior;
    std::vector<Arc> arcs;
    double arclength = 0;
    double min_x = 0, max_x = 0;

    /// Point of arc `a` at parameter u, projected onto H = t.
    std::pair<double, double> point(const Arc& a, double u) const {
        HamEval he(spec);
        const auto& key = a.over_x ? a.xs : a.ys;
        const auto& other = a.over_x ? a.ys : a.xs;
        const bool inc = key.back() > key.front();
        std::size_t lo = 0, hi = key.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            if ((key[mid] < u) == inc)
                lo = mid;
            else
                hi = mid;
        }
        double w = key[hi] == key[lo] ? 0 : (u - key[lo]) / (key[hi] - key[lo]);
        double v = other[lo] + w * (other[hi] - other[lo]);
        for (int it = 0; it < 60; ++it) {
            double x = a.over_x ? u : v, y = a.over_x ? v : u;
            double g = a.over_x ? he.hy(x, y) : he.hx(x, y);
            double dv = (he.h(x, y) - t) / g;
            v -= dv;
            if (std::abs(dv) <= 1e-16 * std::max(1.0, std::abs(v))) break;
        }
        return a.over_x ? std::pair{u, v} : std::pair{v, u};
    }
};

namespace detail {

/// x-axis crossing used as the starting point (and as the return section).
inline double start_x(const HamiltonianSpec& sp, double t, Annulus a) {
    switch (sp.id) {
        case HamiltonianId::EightLoop:
            return a == Annulus::InteriorLeft ? -std::sqrt(1 + 2 * std::sqrt(t)) : std::sqrt(1 + 2 * std::sqrt(t));
        case HamiltonianId::DoubleHeteroclinic: return std::sqrt(1 - 2 * std::sqrt(-t));
        case HamiltonianId::GlobalCenter: return std::sqrt(2 * std::sqrt(t) - 1);
        case HamiltonianId::D4Triangle: {
            // -x (x - 3)^2 = t on (0, 1), where it decreases from 0 to -4
            auto f = [t](double x) { return -x * (x - 3) * (x - 3) - t; };
            boost::uintmax_t iters = 200;
            auto r = boost::math::tools::bisect(f, 0.0, 1.0, boost::math::tools::eps_tolerance<double>(52), iters);
            double x = 0.5 * (r.first + r.second);
            for (int i = 0; i < 3; ++i) x -= f(x) / (-(x - 3) * (x - 3) - 2 * x * (x - 3));
            return x;
        }
    }
    return 0;
}

}  // namespace detail

/// Checks t against Sigma with a relative margin.
inline void require_inside_sigma(const HamiltonianSpec& sp, Annulus a, double t, double margin = 1e-6) {
    auto [lo, hi] = sp.sigma_interval(a);
    double l = lo.get_d();
    double width = hi ? hi->get_d() - l : std::max(1.0, std::abs(l));
    bool ok = t > l + margin * width && (!hi || t < hi->get_d() - margin * width);
    if (!ok) throw ValidationError("level " + std::to_string(t) + " outside Sigma for " + to_string(sp.id));
}

/// Trace the oval of H = t by predictor-corrector continuation.
inline Oval trace_oval(const HamiltonianSpec& sp, double t, Annulus a) {
    if (!sp.annulus_valid(a)) throw ValidationError("annulus " + to_string(a) + " invalid for " + to_string(sp.id));
    require_inside_sigma(sp, a, t);
    HamEval he(sp);
    const int sgn = orientation_sign(sp.id);
    Oval ov;
    ov.spec = sp;
    ov.t = t;
    ov.annulus = a;

    double x = detail::start_x(sp, t, a), y = 0;
    const double x0 = x;
    std::vector<double> px{x}, py{y};
    double size = std::max(0.2, std::abs(x0));
    double h = size * 1e-3;
    const double hmax = size * 0.02;
    int crossings = 0;
    double prev_y = y;
    for (int step = 0; step < 2000000 && crossings < 2; ++step) {
        double gx = he.hx(x, y), gy = he.hy(x, y);
        double gn = std::hypot(gx, gy);
        if (gn < 1e-14) throw NumericFailure("critical point met while tracing the oval");
        double tx = sgn * gy / gn, ty = -sgn * gx / gn;
        double nx = x + h * tx, ny = y + h * ty;
        for (int it = 0; it < 50; ++it) {
            double fx = he.hx(nx, ny), fy = he.hy(nx, ny);
            double r = (he.h(nx, ny) - t) / (fx * fx + fy * fy);
            nx -= r * fx, ny -= r * fy;
            if (std::abs(r) * std::hypot(fx, fy) < 1e-15) break;
        }
        // curvature control: compare tangents
        double g2x = he.hx(nx, ny), g2y = he.hy(nx, ny);
        double g2n = std::hypot(g2x, g2y);
        double t2x = sgn * g2y / g2n, t2y = -sgn * g2x / g2n;
        double turn = std::acos(std::clamp(tx * t2x + ty * t2y, -1.0, 1.0));
        if (turn > 0.03 && h > 1e-9) {
            h *= 0.5;
            continue;
        }
        if (step > 0 && ((prev_y > 0 && ny <= 0) || (prev_y < 0 && ny >= 0)) && !(prev_y == 0)) ++crossings;
        if (crossings == 2) {
            px.push_back(x0), py.push_back(0.0);
            break;
        }
        ov.arclength += std::hypot(nx - x, ny - y);
        x = nx, y = ny;
        prev_y = y;
        px.push_back(x), py.push_back(y);
        if (turn < 0.01) h = std::min(h * 1.5, hmax);
    }
    if (crossings < 2) throw NumericFailure("oval did not close");

    // split into charts; switch only when the other chart is clearly better
    auto prefers_x = [&](double xx, double yy) { return std::abs(he.hy(xx, yy)) >= std::abs(he.hx(xx, yy)); };
    bool cur = prefers_x(px[0], py[0]);
    Oval::Arc arc{cur, {px[0]}, {py[0]}};
    for (std::size_t i = 1; i < px.size(); ++i) {
        arc.xs.push_back(px[i]);
        arc.ys.push_back(py[i]);
        double ax = std::abs(he.hx(px[i], py[i])), ay = std::abs(he.hy(px[i], py[i]));
        bool switch_now = cur ? (ax > 2 * ay) : (ay > 2 * ax);
        if (switch_now && i + 1 < px.size()) {
            ov.arcs.push_back(arc);
            cur = !cur;
            arc = Oval::Arc{cur, {px[i]}, {py[i]}};
        }
    }
    ov.arcs.push_back(arc);
    ov.min_x = *std::min_element(px.begin(), px.end());
    ov.max_x = *std::max_element(px.begin(), px.end());
    return ov;
}

/// Integrand of a one-form: returns (A, B) for A dx + B dy at (x, y).
using FormFn = std::function<std::pair<double, double>(double, double)>;

struct QuadOptions {
    double tol = 1e-12;  // relative to the L1 norm of the integrand
    unsigned max_depth = 30;
};

namespace detail {

/// One 7-15 Gauss-Kronrod panel on [a, b]: value, error estimate and L1 mass.
template <class F>
double gk15(const F& f, double a, double b, double& err, double& l1) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    const auto& xk = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double f0 = f(c);
    double k = wk[0] * f0, g = wg[0] * f0;
    l1 = wk[0] * std::abs(f0);
    for (std::size_t i = 1; i < xk.size(); ++i) {
        double fp = f(c + h * xk[i]), fm = f(c - h * xk[i]);
        k += wk[i] * (fp + fm);
        l1 += wk[i] * (std::abs(fp) + std::abs(fm));
        if (i % 2 == 0) g += wg[i / 2] * (fp + fm);
    }
    err = std::abs(h * (k - g));
    l1 *= std::abs(h);
    return h * k;
}

template <class F>
double adapt_gk(const F& f, double a, double b, double abs_tol, unsigned depth) {
    double err = 0, l1 = 0;
    double v = gk15(f, a, b, err, l1);
    // below ~100 ulps of the local mass the estimate is roundoff, not truncation
    if (err <= abs_tol || err <= 100 * std::numeric_limits<double>::epsilon() * l1 || depth == 0) return v;
    double m = 0.5 * (a + b);
    return adapt_gk(f, a, m, abs_tol / 2, depth - 1) + adapt_gk(f, m, b, abs_tol / 2, depth - 1);
}

/// Adaptive Gauss-Kronrod with an absolute tolerance scaled by the L1 norm,
/// so integrals that cancel to zero still terminate.
template <class F>
double integrate_gk(const F& f, double a, double b, const QuadOptions& q) {
    double err = 0, l1 = 0;
    gk15(f, a, b, err, l1);
    return adapt_gk(f, a, b, std::max(q.tol * l1, 1e-300), q.max_depth);
}

}  // namespace detail

/// Line integral of A dx + B dy over the oval in its orientation.
inline double integrate(const Oval& ov, const FormFn& form, const QuadOptions& q = {}) {
    HamEval he(ov.spec);
    double total = 0;
    for (const auto& arc : ov.arcs) {
        if (arc.xs.size() < 2) continue;
        auto f = [&](double u) {
            auto [x, y] = ov.point(arc, u);
            auto [A, B] = form(x, y);
            if (arc.over_x) return A + B * (-he.hx(x, y) / he.hy(x, y));
            return A * (-he.hy(x, y) / he.hx(x, y)) + B;
        };
        total += detail::integrate_gk(f, arc.u0(), arc.u1(), q);
    }
    return total;
}

/// Integral of a polynomial one-form (the symbol H evaluated as the Hamiltonian).
inline double integrate(const Oval& ov, const OneForm& w, const QuadOptions& q = {}) {
    const double t = ov.t;
    return integrate(
        ov, [&](double x, double y) { return std::pair{w.a.eval(x, y, t), w.b.eval(x, y, t)}; }, q);
}

/// I_k = integral of x^k y dx; negative k allowed away from x = 0.
inline double moment(const Oval& ov, int k, const QuadOptions& q = {}) {
    if (k < 0 && ov.min_x <= 0) throw ValidationError("x^k with k < 0 needs an oval in x > 0");
    return integrate(ov, [k](double x, double y) { return std::pair{std::pow(x, k) * y, 0.0}; }, q);
}

/// I_* = integral of y (x - 1) ln x dx (D4 ovals lie in x > 0).
inline double moment_star(const Oval& ov, const QuadOptions& q = {}) {
    if (ov.min_x <= 0) throw ValidationError("ln x integrand needs an oval in x > 0");
    return integrate(ov, [](double x, double y) { return std::pair{y * (x - 1) * std::log(x), 0.0}; }, q);
}

}  // namespace melnikov
