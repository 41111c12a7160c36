#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "melnikov/numerics/asymptotics.hpp"
#include "melnikov/numerics/oval.hpp"
#include "melnikov/numerics/phi.hpp"
#include "melnikov/numerics/shooting.hpp"
#include "melnikov/numerics/zeros.hpp"
#include "melnikov/triangle.hpp"
#include "support.hpp"

using namespace melnikov;

namespace {

const auto X = WeightedPoly::x();
const auto Y = WeightedPoly::y();

struct Family {
    HamiltonianId id;
    Annulus annulus;
};

const Family symmetric_families[] = {{HamiltonianId::EightLoop, Annulus::Exterior},
                                     {HamiltonianId::DoubleHeteroclinic, Annulus::Center},
                                     {HamiltonianId::GlobalCenter, Annulus::Center}};

std::vector<double> grid(std::pair<double, double> w, int n) {
    std::vector<double> out;
    for (int i = 1; i <= n; ++i) out.push_back(w.first + (w.second - w.first) * i / (n + 1));
    return out;
}

QuadOptions with_tol(double tol) {
    QuadOptions q;
    q.tol = tol;
    return q;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

/// Fourth-order central first derivative.
template <class F>
double ddt(F&& f, double t, double h) {
    return (f(t - 2 * h) - 8 * f(t - h) + 8 * f(t + h) - f(t + 2 * h)) / (12 * h);
}

}  // namespace

TEST(Oval, Geometry) {
    const auto eight = make_spec(HamiltonianId::EightLoop);
    auto right = trace_oval(eight, 0.125, Annulus::InteriorRight);
    EXPECT_GT(right.min_x, 0);
    auto left = trace_oval(eight, 0.125, Annulus::InteriorLeft);
    EXPECT_LT(left.max_x, 0);
    auto ext = trace_oval(eight, 1.0, Annulus::Exterior);
    EXPECT_NEAR(ext.min_x, -ext.max_x, 1e-6);  // extremes are traced samples
    auto tri = trace_oval(d4_spec(), -2.0, Annulus::Center);
    EXPECT_GT(tri.min_x, 0);
    EXPECT_LT(tri.max_x, 3);

    for (const auto* ov : {&right, &ext, &tri}) {
        HamEval he(ov->spec);
        for (const auto& arc : ov->arcs)
            for (std::size_t i = 0; i < arc.xs.size(); i += 7) {
                const double u = arc.over_x ? arc.xs[i] : arc.ys[i];
                auto [x, y] = ov->point(arc, u);
                EXPECT_LT(std::abs(he.h(x, y) - ov->t), 1e-12);
            }
    }
}

TEST(Oval, RejectsLevelsOutsideSigma) {
    const auto eight = make_spec(HamiltonianId::EightLoop);
    EXPECT_THROW(trace_oval(eight, 0.2, Annulus::Exterior), ValidationError);
    EXPECT_THROW(trace_oval(eight, 0.25, Annulus::InteriorRight), ValidationError);
    EXPECT_THROW(trace_oval(d4_spec(), 0.5, Annulus::Center), ValidationError);
    EXPECT_THROW(trace_oval(make_spec(HamiltonianId::GlobalCenter), 1.0, Annulus::InteriorLeft), ValidationError);
}

TEST(Quadrature, SymmetryKillsFirstMoment) {
    for (const auto& fam : symmetric_families) {
        const auto sp = make_spec(fam.id);
        for (double t : grid(sampling_window(sp, fam.annulus), 10))
            EXPECT_LT(std::abs(moment(trace_oval(sp, t, fam.annulus), 1)), 1e-10) << to_string(fam.id) << " t=" << t;
    }
}

TEST(Quadrature, StableUnderTolerance) {
    const auto eight = make_spec(HamiltonianId::EightLoop);
    auto ov = trace_oval(eight, 0.9, Annulus::Exterior);
    auto tri = trace_oval(d4_spec(), -1.2, Annulus::Center);
    for (double tol : {1e-10, 1e-11}) {
        for (int k : {0, 2}) {
            const double a = moment(ov, k, with_tol(tol)), b = moment(ov, k, with_tol(tol / 2));
            EXPECT_LT(std::abs(a - b), 10 * tol * std::abs(a));
        }
        const double a = moment_star(tri, with_tol(tol)), b = moment_star(tri, with_tol(tol / 2));
        EXPECT_LT(std::abs(a - b), 10 * tol * std::abs(a));
    }
}

TEST(Quadrature, TriangleMomentRecursion) {
    for (double t : {-3.0, -2.0, -1.0}) {
        auto ov = trace_oval(d4_spec(), t, Annulus::Center);
        std::map<int, double> I;
        for (int k = -1; k <= 3; ++k) I[k] = moment(ov, k, with_tol(1e-14));
        for (int k : {1, 2}) {
            const double lhs = (2 * k + 6) * I[k + 1];
            const double rhs = (12 * k + 18) * I[k] - 18 * k * I[k - 1] - (2 * k - 3) * t * I[k - 2];
            EXPECT_LT(rel(lhs, rhs), 1e-8) << "t=" << t << " k=" << k;
        }
        EXPECT_LT(rel(I[1], I[0]), 1e-10);
    }
}

TEST(Quadrature, LogMomentLimitAtZero) {
    const double near = moment_star(trace_oval(d4_spec(), -1e-4, Annulus::Center));
    EXPECT_NEAR(near, -6.0, 5e-3);
    auto fit = istar_asymptotics();
    EXPECT_NEAR(fit.a, -6.0, 1e-3);
    EXPECT_NEAR(fit.b, -1.0 / 6, 0.05 / 6);
}

// dI0/dt against the Gelfand-Leray form dx/H_y: 1/y for the A3 family, 1/(2xy) for D4.
TEST(Quadrature, DerivativeMatchesLerayForm) {
    const auto eight = make_spec(HamiltonianId::EightLoop);
    for (auto [sp, t, a] : {std::tuple{eight, 0.1, Annulus::InteriorRight}, {eight, 1.5, Annulus::Exterior},
                            {d4_spec(), -2.0, Annulus::Center}}) {
        const bool tri = sp.id == HamiltonianId::D4Triangle;
        auto i0 = [&, sp = sp, a = a](double s) { return moment(trace_oval(sp, s, a), 0, with_tol(1e-14)); };
        const double fd = ddt(i0, t, 1e-3);
        const double leray = integrate(trace_oval(sp, t, a), [tri](double x, double y) {
            return std::pair{tri ? 1 / (2 * x * y) : 1 / y, 0.0};
        });
        EXPECT_LT(rel(fd, leray), 1e-6) << to_string(sp.id) << " t=" << t;
    }
}

// I = A I' for I = (I*, I2, I0), checked row by row.
TEST(Quadrature, TrianglePicardFuchsRows) {
    auto vec = [](double s) {
        auto ov = trace_oval(d4_spec(), s, Annulus::Center);
        return std::array<double, 3>{moment_star(ov, with_tol(1e-14)), moment(ov, 2, with_tol(1e-14)),
                                     moment(ov, 0, with_tol(1e-14))};
    };
    for (double t : {-3.5, -3.0, -2.0, -1.0, -0.5}) {
        const double h = 2e-3;
        auto m2 = vec(t - 2 * h), m1 = vec(t - h), p1 = vec(t + h), p2 = vec(t + 2 * h), v = vec(t);
        std::array<double, 3> dv;
        for (int i = 0; i < 3; ++i) dv[i] = (m2[i] - 8 * m1[i] + 8 * p1[i] - p2[i]) / (12 * h);
        const double A[3][3] = {{t, -2, t + 6}, {0, 0.75 * (t - 6), 1.5 * (t + 9)}, {0, -3, 1.5 * (t + 6)}};
        for (int r = 0; r < 3; ++r) {
            double row = 0, scale = std::abs(v[r]);
            for (int c = 0; c < 3; ++c) {
                row += A[r][c] * dv[c];
                scale = std::max(scale, std::abs(A[r][c] * dv[c]));
            }
            EXPECT_LT(std::abs(row - v[r]) / scale, 1e-6) << "t=" << t << " row " << r;
        }
    }
}

TEST(Phi, SingleValuedWithClosureIdentities) {
    for (const auto& fam : symmetric_families) {
        const auto sp = make_spec(fam.id);
        auto w = sampling_window(sp, fam.annulus);
        const double t = fam.id == HamiltonianId::DoubleHeteroclinic ? 0.5 * (w.first + w.second) : 1.0;
        auto rep = phi_check(sp, t);
        EXPECT_LT(std::abs(rep.increment), 1e-9) << to_string(fam.id);
        EXPECT_LT(rep.endpoint, 1e-10) << to_string(fam.id);
        EXPECT_LT(rep.identity_residual, 1e-10) << to_string(fam.id);
        EXPECT_GE(rep.samples.size(), 10u);
        EXPECT_TRUE(rep.ok());
    }
}

TEST(Shooting, InteriorFirstOrderMatchesArea) {
    const auto eight = make_spec(HamiltonianId::EightLoop);
    const OneForm w{Y, {}};
    auto ts = grid(sampling_window(eight, Annulus::InteriorRight), 5);
    auto s = shooting_oracle(eight, w, Annulus::InteriorRight, ts, default_eps_grid(),
                             [&](double t) { return moment(trace_oval(eight, t, Annulus::InteriorRight), 0); });
    ASSERT_EQ(s.t, ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        EXPECT_EQ(s.fits[i].k, 1);
        EXPECT_LT(rel(s.shooting[i], s.symbolic[i]), 1e-3) << "t=" << ts[i];
    }
}

TEST(Shooting, TriangleThirdOrder) {
    const OneForm w{{}, WeightedPoly(-2) + X - WeightedPoly(make_rational(1, 2)) * X * X};
    const auto g = d4_chain(w).M3;
    std::vector<double> ts{-3.0, -2.0, -1.0};
    auto s = shooting_oracle(d4_spec(), w, Annulus::Center, ts, default_eps_grid(),
                             [&](double t) { return evaluate(g, t); });
    for (std::size_t i = 0; i < ts.size(); ++i) {
        EXPECT_EQ(s.fits[i].k, 3);
        EXPECT_LT(rel(s.shooting[i], s.symbolic[i]), 1e-3) << "t=" << ts[i];
    }
}

TEST(Shooting, ExactPerturbationDoesNotDisplace) {
    const auto eight = make_spec(HamiltonianId::EightLoop);
    const OneForm w = d(X * X * Y - WeightedPoly(2) * Y * Y * Y, eight);
    for (double t : {0.1, 1.0}) {
        Annulus a = t < 0.25 ? Annulus::InteriorRight : Annulus::Exterior;
        EXPECT_LT(std::abs(static_cast<double>(displacement(eight, w, a, t, 1e-3L))), 1e-11);
    }
    EXPECT_LT(std::abs(static_cast<double>(displacement(d4_spec(), d(X * Y * Y, d4_spec()), Annulus::Center, -2, 1e-3L))),
              1e-11);
}

TEST(Shooting, RejectsBadEpsGrid) {
    const auto eight = make_spec(HamiltonianId::EightLoop);
    EXPECT_THROW(shooting_oracle(eight, {Y, {}}, Annulus::Exterior, {1.0}, {1e-3, 2e-3}), ValidationError);
    EXPECT_THROW(shooting_oracle(eight, {Y, {}}, Annulus::Exterior, {1.0}, {1e-3, 2e-3, 4e-3, 0.5}), ValidationError);
}

TEST(Zeros, AreaHasNoZeros) {
    const auto eight = make_spec(HamiltonianId::EightLoop);
    GeneratingFn gf = francoise_chain({Y, {}}, eight, Annulus::InteriorRight).M;
    auto z = count_zeros(gf, sampling_window(eight, Annulus::InteriorRight), 40);
    EXPECT_EQ(z.count, 0);
    ASSERT_TRUE(z.bound.has_value());
    EXPECT_FALSE(z.exceeds_bound());
}

TEST(Zeros, ZeroBoundValues) {
    EXPECT_EQ(zero_bound(HamiltonianId::EightLoop, Annulus::Exterior, 5, 1), 5);
    EXPECT_EQ(zero_bound(HamiltonianId::EightLoop, Annulus::Exterior, 3, 2), 7);
    EXPECT_EQ(zero_bound(HamiltonianId::DoubleHeteroclinic, Annulus::Center, 3, 2), 6);
    EXPECT_EQ(zero_bound(HamiltonianId::EightLoop, Annulus::Exterior, 3, 3), 9);
    EXPECT_THROW(zero_bound(HamiltonianId::D4Triangle, Annulus::Center, 2, 3), ValidationError);
}

TEST(Zeros, RandomFirstOrderRespectsBound) {
    const auto eight = make_spec(HamiltonianId::EightLoop);
    std::mt19937 rng(99);
    for (int trial = 0; trial < 4; ++trial) {
        auto res = francoise_chain(support::random_form(rng, 5), eight, Annulus::Exterior);
        ASSERT_EQ(res.k, 1);
        auto z = count_zeros(res.M, sampling_window(eight, Annulus::Exterior), 60);
        EXPECT_EQ(*z.bound, 5);
        EXPECT_FALSE(z.exceeds_bound()) << z.count;
    }
}

TEST(Zeros, FindsPlantedRootsAndRejectsZero) {
    auto z = count_zeros([](double t) { return (t - 0.3) * (t - 0.7); }, 0, 1, 50);
    ASSERT_EQ(z.count, 2);
    EXPECT_NEAR(z.brackets[0].first, 0.3, 1e-9);
    EXPECT_NEAR(z.brackets[1].second, 0.7, 1e-9);
    EXPECT_THROW(count_zeros(GeneratingFn{}, {0.5, 1.0}, 10), ValidationError);
    EXPECT_THROW(count_zeros(D4GenFn{}, {-3.0, -1.0}, 10), ValidationError);
}

TEST(Zeros, TriangleThirdOrder) {
    D4GenFn g{make_rational(-3, 32), 0, 0, 1};
    auto z = count_zeros(g, sampling_window(d4_spec(), Annulus::Center), 40);
    EXPECT_FALSE(z.bound.has_value());
    EXPECT_EQ(z.count, 0);
}
