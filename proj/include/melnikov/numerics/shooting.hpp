#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "melnikov/numerics/oval.hpp"

namespace melnikov {

/// Perturbation A dx + B dy compiled to long double monomial lists.
struct CompiledForm {
    struct Term {
        int i, j, k;
        long double c;
    };
    std::vector<Term> a, b;

    explicit CompiledForm(const OneForm& w) {
        for (const auto& [m, c] : w.a.terms()) a.push_back({m.i, m.j, m.k, to_long_double(c)});
        for (const auto& [m, c] : w.b.terms()) b.push_back({m.i, m.j, m.k, to_long_double(c)});
    }
    static long double eval(const std::vector<Term>& ts, long double x, long double y, long double h) {
        long double s = 0;
        for (const auto& t : ts) {
            long double v = t.c;
            for (int n = 0; n < t.i; ++n) v *= x;
            for (int n = 0; n < t.j; ++n) v *= y;
            if (t.k) v *= std::pow(h, static_cast<long double>(t.k));
            s += v;
        }
        return s;
    }
};

struct HamEvalL {
    HamiltonianId id;
    int s, e;
    explicit HamEvalL(const HamiltonianSpec& sp) : id(sp.id), s(sp.s), e(sp.e) {}
    long double h(long double x, long double y) const {
        if (id == HamiltonianId::D4Triangle) return x * (y * y - (x - 3) * (x - 3));
        long double q = x * x + e;
        return 0.5L * y * y + 0.25L * s * q * q;
    }
    long double hx(long double x, long double y) const {
        if (id == HamiltonianId::D4Triangle) return y * y - (x - 3) * (x - 3) - 2 * x * (x - 3);
        return s * x * (x * x + e);
    }
    long double hy(long double x, long double y) const { return id == HamiltonianId::D4Triangle ? 2 * x * y : y; }
};

struct ShootingOptions {
    long double abs_tol = 1e-17L;
    long double rel_tol = 1e-17L;
    std::size_t max_steps = 2000000;
};

/// P_eps(t) - t for dH - eps w = 0, measured in H on the x-axis section
/// through the oval's starting point. The eps = 0 run is subtracted so the
/// integrator's own drift cancels.
inline long double displacement(const HamiltonianSpec& sp, const OneForm& w, Annulus a, double t, long double eps,
                                const ShootingOptions& opt = {}) {
    namespace ode = boost::numeric::odeint;
    using State = std::array<long double, 2>;
    HamEvalL he(sp);
    CompiledForm cf(w);
    const long double sg = orientation_sign(sp.id);

    auto run = [&](long double ep) -> long double {
        auto rhs = [&](const State& s, State& ds, long double) {
            long double x = s[0], y = s[1], hv = he.h(x, y);
            long double A = CompiledForm::eval(cf.a, x, y, hv), B = CompiledForm::eval(cf.b, x, y, hv);
            ds[0] = sg * (he.hy(x, y) - ep * B);
            ds[1] = sg * (-he.hx(x, y) + ep * A);
        };
        // refine the start onto H = t in long double
        long double x0 = detail::start_x(sp, t, a);
        for (int i = 0; i < 5; ++i) x0 -= (he.h(x0, 0) - t) / he.hx(x0, 0);

        using Stepper = ode::runge_kutta_fehlberg78<State, long double>;
        auto ctrl = ode::make_controlled<Stepper>(opt.abs_tol, opt.rel_tol);
        State s{x0, 0.0L};
        long double time = 0, dt = 1e-3L;
        int crossings = 0;
        for (std::size_t n = 0; n < opt.max_steps; ++n) {
            State prev = s;
            long double prev_time = time;
            while (ctrl.try_step(rhs, s, time, dt) == ode::fail) {
            }
            dt = std::min(dt, 0.05L);
            bool crossed = n > 0 && ((prev[1] > 0 && s[1] <= 0) || (prev[1] < 0 && s[1] >= 0));
            if (!crossed) continue;
            if (++crossings < 2) continue;
            // Henon's trick: integrate (x, t) with y as the independent variable back to y = 0.
            (void)prev_time;
            auto rhs_y = [&](const State& z, State& dz, long double yv) {
                State full{z[0], yv}, d;
                rhs(full, d, 0);
                dz[0] = d[0] / d[1];
                dz[1] = 1 / d[1];
            };
            Stepper st;
            State z{prev[0], 0.0L};
            const int sub = 8;
            long double yv = prev[1], hy = -prev[1] / sub;
            for (int i = 0; i < sub; ++i, yv += hy) st.do_step(rhs_y, z, yv, hy);
            return he.h(z[0], 0.0L) - t;
        }
        throw NumericFailure("no return to the section within the step budget");
    };
    return run(eps) - run(0);
}

/// Shooting estimate at one level: fitted order k and the limit coefficient M_k.
struct ShootingFit {
    double t = 0;
    int k = 0;
    double slope = 0;     // least-squares slope of log|D| against log eps
    double residual = 0;  // rms residual of that log-log fit
    double value = 0;     // extrapolated M_k(t)
    std::vector<double> displacements;
};

/// Least-squares solution of a small dense system via normal equations.
inline std::vector<double> least_squares(const std::vector<std::vector<double>>& A, const std::vector<double>& b) {
    const std::size_t n = A[0].size();
    std::vector<std::vector<long double>> m(n, std::vector<long double>(n + 1, 0));
    for (std::size_t r = 0; r < A.size(); ++r)
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) m[i][j] += static_cast<long double>(A[r][i]) * A[r][j];
            m[i][n] += static_cast<long double>(A[r][i]) * b[r];
        }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
        std::swap(m[p], m[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            long double f = m[r][c] / m[c][c];
            for (std::size_t j = c; j <= n; ++j) m[r][j] -= f * m[c][j];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(m[i][n] / m[i][i]);
    return x;
}

inline ShootingFit fit_displacements(double t, const std::vector<double>& eps, const std::vector<double>& disp) {
    ShootingFit f;
    f.t = t;
    f.displacements = disp;
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        A.push_back({1.0, std::log(eps[i])});
        b.push_back(std::log(std::abs(disp[i]) + 1e-300));
    }
    auto line = least_squares(A, b);
    f.slope = line[1];
    double ss = 0;
    for (std::size_t i = 0; i < eps.size(); ++i) ss += std::pow(line[0] + line[1] * A[i][1] - b[i], 2);
    f.residual = std::sqrt(ss / eps.size());
    f.k = static_cast<int>(std::lround(f.slope));
    if (f.k < 1) f.k = 1;
    // D / eps^k = M_k + c1 eps + c2 eps^2
    std::vector<std::vector<double>> R;
    std::vector<double> rb;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        R.push_back({1.0, eps[i], eps[i] * eps[i]});
        rb.push_back(disp[i] / std::pow(eps[i], f.k));
    }
    f.value = least_squares(R, rb)[0];
    return f;
}

/// Symbolic and shooting columns on one t grid.
struct MelnikovSample {
    std::vector<double> t;
    std::vector<double> symbolic;  // empty when no symbolic evaluator was supplied
    std::vector<double> shooting;
    std::vector<ShootingFit> fits;
};

inline std::vector<double> default_eps_grid() { return {1e-3, 2e-3, 4e-3, 8e-3}; }

inline MelnikovSample shooting_oracle(const HamiltonianSpec& sp, const OneForm& w, Annulus a,
                                      const std::vector<double>& t_grid, const std::vector<double>& eps_grid,
                                      const std::function<double(double)>& symbolic = {}) {
    if (eps_grid.size() < 4) throw ValidationError("eps grid needs at least 4 values");
    for (double e : eps_grid)
        if (!(e > 0 && e <= 1e-2)) throw ValidationError("eps values must lie in (0, 1e-2]");
    MelnikovSample out;
    for (double t : t_grid) {
        require_inside_sigma(sp, a, t);
        std::vector<double> d;
        for (double e : eps_grid) d.push_back(static_cast<double>(displacement(sp, w, a, t, e)));
        auto fit = fit_displacements(t, eps_grid, d);
        out.t.push_back(t);
        out.shooting.push_back(fit.value);
        out.fits.push_back(fit);
        if (symbolic) out.symbolic.push_back(symbolic(t));
    }
    return out;
}

}  // namespace melnikov
