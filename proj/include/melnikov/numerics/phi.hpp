#pragma once

#include <cmath>
#include <numbers>

#include "melnikov/numerics/oval.hpp"

namespace melnikov {

/// The single-valued primitive phi with H dphi = (xy/2) dx - ((x^2 + e)/4) dy on the
/// exterior annulus of each A3 variant. Evaluated in long double.
inline long double phi_value(const HamiltonianSpec& sp, long double x, long double y) {
    const long double u = x * x + sp.e;
    const long double r2 = std::sqrt(2.0L);
    if (sp.s > 0) {
        if (y == 0) return 0;
        const long double sgn = y > 0 ? 1 : -1;
        return (std::atan(u / (y * r2)) - std::numbers::pi_v<long double> / 2 * sgn) / r2;
    }
    return std::log(std::abs((r2 * y + u) / (r2 * y - u))) / (2 * r2);
}

struct PhiReport {
    double increment = 0;        // integral of eta / H over the closed oval
    double endpoint = 0;         // max |phi(+-a, 0^{+-})|
    double identity_residual = 0;  // max over samples of |H grad(phi) - eta|
    std::vector<std::pair<double, double>> samples;
    bool ok(double inc_tol = 1e-9, double pt_tol = 1e-10) const {
        return std::abs(increment) < inc_tol && endpoint < pt_tol && identity_residual < pt_tol;
    }
};

/// Numerical confirmation that phi is single-valued along the oval at level t and
/// satisfies H dphi = eta.
inline PhiReport phi_check(const HamiltonianSpec& sp, double t, int n_points = 10) {
    if (!sp.is_a3()) throw ValidationError("phi is defined for the A3 variants only");
    const Annulus a = Annulus::Exterior;
    require_inside_sigma(sp, a, t);
    const Oval ov = trace_oval(sp, t, a);
    const HamEval he(sp);
    PhiReport r;
    r.increment = integrate(ov, [&](double x, double y) {
        const double h = he.h(x, y);
        return std::pair{x * y / 2 / h, -(x * x + sp.e) / 4 / h};
    });
    for (double xa : {ov.max_x, ov.min_x})
        for (long double yy : {1e-13L, -1e-13L})
            r.endpoint = std::max(r.endpoint, static_cast<double>(std::abs(phi_value(sp, xa, yy))));
    // fourth-order central differences in long double
    const long double h = 1e-4L;
    std::vector<std::pair<long double, long double>> pts;
    for (const auto& arc : ov.arcs)
        for (std::size_t i = 0; i < arc.xs.size(); ++i)
            if (std::abs(arc.ys[i]) > 1e-3) pts.emplace_back(arc.xs[i], arc.ys[i]);  // off the sign branch
    for (int m = 0; m < n_points && !pts.empty(); ++m) {
        const auto [x, y] = pts[(m * pts.size()) / n_points];
        auto diff = [&](long double dx, long double dy) {
            auto f = [&](long double s) { return phi_value(sp, x + s * dx, y + s * dy); };
            return (8 * (f(h) - f(-h)) - (f(2 * h) - f(-2 * h))) / (12 * h);
        };
        const long double H = 0.5L * y * y + 0.25L * sp.s * (x * x + sp.e) * (x * x + sp.e);
        const long double rx = H * diff(1, 0) - x * y / 2;
        const long double ry = H * diff(0, 1) + (x * x + sp.e) / 4;
        r.identity_residual = std::max(r.identity_residual, static_cast<double>(std::max(std::abs(rx), std::abs(ry))));
        r.samples.emplace_back(static_cast<double>(x), static_cast<double>(y));
    }
    return r;
}

}  // namespace melnikov
