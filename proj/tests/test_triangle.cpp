#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "melnikov/json_io.hpp"
#include "melnikov/numerics/oval.hpp"
#include "melnikov/triangle.hpp"

using namespace melnikov;

namespace {

const auto X = WeightedPoly::x();
const auto Y = WeightedPoly::y();
const auto Hs = WeightedPoly::H();

WeightedPoly c(long n, long d = 1) { return WeightedPoly(make_rational(n, d)); }

// -(2 - x + x^2/2) dy
OneForm example_form() { return {{}, c(-2) + X - c(1, 2) * X * X}; }

Laurent poly(std::initializer_list<long> low_to_high) {
    std::vector<Rational> v;
    for (long x : low_to_high) v.emplace_back(x);
    return Laurent::from_coeffs(v);
}

const Laurent T = Laurent::monomial(1, 1);

// The displayed particular equation, lowest derivative first.
std::array<Laurent, 4> displayed_ode() {
    Laurent a3 = T * T * poly({4, 1}) * poly({2048, 704, 39});
    Laurent a2 = T * poly({32768, 18688, 3128, 117});
    Laurent a1 = Laurent(make_rational(8, 9)) * poly({18432, 9728, 1544, 39});
    return {Laurent(), a1, a2, a3};
}

D4GenFn example_gf() { return {make_rational(-3, 32), 0, 0, 1}; }

QuadOptions tight() {
    QuadOptions q;
    q.tol = 1e-14;
    return q;
}

}  // namespace

TEST(D4Chain, WorkedExampleGolden) {
    auto ch = d4_chain(example_form());
    EXPECT_EQ(ch.q1, ExtElem::phi_power(1, c(-1, 6)));
    ExtElem Q1 = ExtElem::phi_power(1, c(1, 6) * Hs) + ExtElem(c(-1, 6) * X * X * Y - c(2) * Y);
    EXPECT_EQ(ch.Q1, Q1);
    ExtElem q2 = ExtElem::phi_power(2, c(1, 72)) +
                 ExtElem((c(1, 36) * (X * X * X - c(3) * X * X + c(12) * X - c(36))).times_H(-1));
    EXPECT_EQ(ch.q2, q2);
    EXPECT_EQ(ch.M3, example_gf());
    EXPECT_FALSE(ch.integrable);
}

TEST(D4Chain, PrimitiveAndClosedness) {
    auto ch = d4_chain(example_form());
    ExtForm lhs = d4_d(ch.Q1);
    for (const auto& [j, p] : ch.q1.parts()) lhs[j] += p * dH(d4_spec());
    lhs[0] -= ch.omega;
    for (const auto& [j, f] : lhs) {
        EXPECT_TRUE(d4_is_zero(f.a)) << j;
        EXPECT_TRUE(d4_is_zero(f.b)) << j;
    }
    EXPECT_TRUE(d4_is_zero(d4_exterior_d(d4_second_step_form(ch))));
}

TEST(D4Chain, IndependentOfLogConstant) {
    const auto base = d4_chain(example_form()).M3;
    for (Rational s : {Rational(1), Rational(-2)}) EXPECT_EQ(d4_chain(example_form(), s).M3, base);
}

TEST(D4Chain, ExactPerturbationIsIntegrable) {
    WeightedPoly F = X * X * Y + c(3) * X * Y * Y - c(5) * Y * Y * Y;
    auto ch = d4_chain(d(F, d4_spec()));
    EXPECT_TRUE(ch.integrable);
    EXPECT_TRUE(ch.M3.is_zero());
}

TEST(D4Chain, RejectsNonvanishingLowerOrders) {
    try {
        d4_chain({Y, {}});
        FAIL() << "expected an error";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("M1 or M2 nonzero"), std::string::npos);
    }
    EXPECT_THROW(d4_chain({Hs, {}}), ValidationError);
}

// f = x (y^2 - (x-3)^2) = -x D with D = (3-x)^2 - y^2, L_x = -2y/D, L_y = -2(3-x)/D.
TEST(D4Identity, FdLSymbolicAndOnOval) {
    const WeightedPoly f = X * (Y * Y - (X - c(3)) * (X - c(3)));
    const WeightedPoly D = (c(3) - X) * (c(3) - X) - Y * Y;
    const OneForm fdl = d4_f_dL();
    EXPECT_EQ(fdl.a * D, f * (c(-2) * Y));
    EXPECT_EQ(fdl.b * D, f * (c(-2) * (c(3) - X)));

    auto ov = trace_oval(d4_spec(), -1.7, Annulus::Center);
    int checked = 0;
    for (const auto& arc : ov.arcs)
        for (std::size_t i = 0; i < arc.xs.size() && checked < 10; i += std::max<std::size_t>(1, arc.xs.size() / 3)) {
            const double x = arc.xs[i], y = arc.ys[i];
            const double fv = x * (y * y - (x - 3) * (x - 3));
            const double lx = -1 / (3 - x - y) + 1 / (3 - x + y);
            const double ly = -1 / (3 - x - y) - 1 / (3 - x + y);
            EXPECT_NEAR(fv * lx, fdl.a.eval(x, y, fv), 1e-12);
            EXPECT_NEAR(fv * ly, fdl.b.eval(x, y, fv), 1e-12);
            ++checked;
        }
    EXPECT_EQ(checked, 10);
}

TEST(D4GenFnMap, BothDirections) {
    auto g = D4GenFn::from_abgd(3, -2, 5, 7);
    EXPECT_EQ(g.alpha(), 3);
    EXPECT_EQ(g.beta(), -2);
    EXPECT_EQ(g.gamma(), 5);
    EXPECT_EQ(g.delta(), 7);
    EXPECT_EQ(D4GenFn::from_abgd(example_gf().alpha(), example_gf().beta(), example_gf().gamma(), example_gf().delta()),
              example_gf());

    // t M3 = (alpha + beta t) I0 + gamma I2 + delta I*, read back through the moment reduction.
    MomentExpr e;
    e.add(I(0), Laurent::monomial(-1, 3) + Laurent(Rational(-2)));
    e.add(I(2), Laurent::monomial(-1, 5));
    e.add(IStar(), Laurent::monomial(-1, 7));
    auto back = d4_genfn_from(e);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, g);

    const double t = -1.3;
    auto ov = trace_oval(d4_spec(), t, Annulus::Center);
    const double i0 = moment(ov, 0), i2 = moment(ov, 2), is = moment_star(ov), im1 = moment(ov, -1);
    EXPECT_NEAR(g.eval(t, im1, i0, is), ((3 - 2 * t) * i0 + 5 * i2 + 7 * is) / t, 1e-10);
}

TEST(D4Moments, ReductionExamples) {
    MomentExpr one;
    one.add(I(1), Laurent(Rational(1)));
    MomentExpr i0;
    i0.add(I(0), Laurent(Rational(1)));
    EXPECT_EQ(d4_reduce_moments(one), i0);
    EXPECT_EQ(d4_reduce_moments(i0), i0);

    MomentExpr i3;
    i3.add(I(3), Laurent(Rational(1)));
    MomentExpr expect;
    expect.add(I(2), Laurent(make_rational(21, 5)));
    expect.add(I(0), Laurent::from_coeffs({make_rational(-18, 5), make_rational(-1, 10)}));
    EXPECT_EQ(d4_reduce_moments(i3), expect);

    for (auto m : {I(-1), I(0), I(2), IStar()}) {
        MomentExpr b;
        b.add(m, Laurent(Rational(1)));
        EXPECT_EQ(d4_reduce_moments(b), b);
    }

    const double t = -2;
    auto ov = trace_oval(d4_spec(), t, Annulus::Center);
    const double lhs = moment(ov, 3, tight());
    const double rhs = 4.2 * moment(ov, 2, tight()) - (3.6 + t / 10) * moment(ov, 0, tight());
    EXPECT_NEAR(lhs, rhs, 1e-8);
}

TEST(D4Fuchs, ParticularEquationMatchesDisplayed) {
    auto ode = d4_fuchs_ode(example_gf());
    auto shown = displayed_ode();
    ASSERT_EQ(ode.order, 3);
    const Rational s = ode.coeffs[3].coeff(5) / shown[3].coeff(5);
    for (int i = 0; i <= 3; ++i) EXPECT_EQ(ode.coeffs[i], Laurent(s) * shown[i]) << "a" << i;
    EXPECT_GT(ode.coeffs[3].coeff(ode.coeffs[3].degree()), 0);
    auto sing = ode.singular_points();
    EXPECT_NE(std::find(sing.begin(), sing.end(), Rational(0)), sing.end());
    EXPECT_NE(std::find(sing.begin(), sing.end(), Rational(-4)), sing.end());
    auto j = to_json(ode);
    EXPECT_EQ(j.at("order"), 3);
    EXPECT_EQ(j.at("coeffs").size(), 4u);
}

// Independent route: I = A I' for I = (I*, I2, I0). Rows r_k with M^(k) = r_k . I are kept
// as N_k / (t+4)^k, using A^{-1} = adj(A) / ((9/8) t^2 (t+4)).
TEST(D4Fuchs, AgreesWithFuchsianSystem) {
    using Row = std::array<Laurent, 3>;
    const Laurent E = poly({4, 1});
    const Rational h34 = make_rational(3, 4), h32 = make_rational(3, 2);
    std::array<std::array<Laurent, 3>, 3> A = {{
        {T, Laurent(Rational(-2)), poly({6, 1})},
        {Laurent(), Laurent(h34) * poly({-6, 1}), Laurent(h32) * poly({9, 1})},
        {Laurent(), Laurent(Rational(-3)), Laurent(h32) * poly({6, 1})},
    }};
    auto minor = [&](int r, int c) {
        int rs[2], cs[2];
        for (int i = 0, k = 0; i < 3; ++i)
            if (i != r) rs[k++] = i;
        for (int i = 0, k = 0; i < 3; ++i)
            if (i != c) cs[k++] = i;
        return A[rs[0]][cs[0]] * A[rs[1]][cs[1]] - A[rs[0]][cs[1]] * A[rs[1]][cs[0]];
    };
    Laurent det = A[0][0] * minor(0, 0) - A[0][1] * minor(0, 1) + A[0][2] * minor(0, 2);
    ASSERT_EQ(det, Laurent(make_rational(9, 8)) * T * T * E);
    std::array<std::array<Laurent, 3>, 3> adj;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) adj[i][j] = Laurent(Rational((i + j) % 2 ? -1 : 1)) * minor(j, i);
    const Laurent inv_scale = Laurent::monomial(-2, make_rational(8, 9));

    for (auto g : {example_gf(), D4GenFn::from_abgd(1, 2, -3, 0), D4GenFn::from_abgd(0, 0, 0, 1),
                   D4GenFn::from_abgd(2, -1, 4, 3)}) {
        std::vector<Row> N(4);
        const Laurent inv_t = Laurent::monomial(-1, 1);
        N[0] = {inv_t * Laurent(g.delta()), inv_t * Laurent(g.gamma()), inv_t * Laurent(g.alpha()) + Laurent(g.beta())};
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) {
                Laurent acc = N[k][j].derivative() * E - Laurent(Rational(k)) * N[k][j];
                for (int i = 0; i < 3; ++i) acc += inv_scale * N[k][i] * adj[i][j];
                N[k + 1][j] = acc;
            }
        auto ode = d4_fuchs_ode(g);
        for (int j = 0; j < 3; ++j) {
            Laurent sum;
            for (int i = 0; i <= 3; ++i) {
                Laurent pw(Rational(1));
                for (int m = i; m < 3; ++m) pw = pw * E;
                sum += ode.coeffs[i] * N[i][j] * pw;
            }
            EXPECT_TRUE(sum.is_zero()) << "component " << j << " for delta=" << to_string(g.delta());
        }
    }
}

namespace {

// Residual of the ODE at t with fourth-order central differences, relative to the largest term.
double plug_in_residual(const FuchsOde& ode, const std::function<double(double)>& M, double t, double h) {
    double f[7];
    for (int i = -3; i <= 3; ++i) f[i + 3] = M(t + i * h);
    const double d1 = (f[1] - 8 * f[2] + 8 * f[4] - f[5]) / (12 * h);
    const double d2 = (-f[1] + 16 * f[2] - 30 * f[3] + 16 * f[4] - f[5]) / (12 * h * h);
    const double d3 = (f[0] - 8 * f[1] + 13 * f[2] - 13 * f[4] + 8 * f[5] - f[6]) / (8 * h * h * h);
    const double terms[4] = {ode.coeffs[0].eval(t) * f[3], ode.coeffs[1].eval(t) * d1, ode.coeffs[2].eval(t) * d2,
                             ode.coeffs[3].eval(t) * d3};
    double sum = 0, big = 0;
    for (double x : terms) {
        sum += x;
        big = std::max(big, std::abs(x));
    }
    return std::abs(sum) / big;
}

}  // namespace

TEST(D4Fuchs, NumericPlugIn) {
    auto value = [](const D4GenFn& g) {
        return [g](double t) {
            auto ov = trace_oval(d4_spec(), t, Annulus::Center);
            return ((to_double(g.alpha()) + to_double(g.beta()) * t) * moment(ov, 0, tight()) +
                    to_double(g.gamma()) * moment(ov, 2, tight()) + to_double(g.delta()) * moment_star(ov, tight())) /
                   t;
        };
    };
    for (auto g : {D4GenFn::from_abgd(1, 2, -3, 0), D4GenFn::from_abgd(0, 0, 0, 1)}) {
        auto ode = d4_fuchs_ode(g);
        for (double t : {-2.5, -2.0, -1.5}) EXPECT_LT(plug_in_residual(ode, value(g), t, 0.025), 1e-5) << "t=" << t;
    }
}

TEST(D4Fuchs, DegenerateInputRejected) { EXPECT_THROW(d4_fuchs_ode(D4GenFn{}), ValidationError); }

TEST(D4Exponents, AtZeroMinusFourAndInfinity) {
    auto ode = d4_fuchs_ode(example_gf());
    auto at0 = d4_local_exponents(ode, Rational(0));
    EXPECT_EQ(at0.exact, (std::vector<Rational>{-1, 0, 0}));

    // Frobenius by hand at t = -4 with tau = t + 4: a3 ~ -2304 tau, a2 -> -2304, a1 -> 1536.
    // Only a3 and a2 reach the lowest order, so the indicial polynomial is
    // -2304 r(r-1)(r-2) - 2304 r(r-1) = -2304 r (r-1)^2.
    auto shown = displayed_ode();
    EXPECT_EQ(shown[3].derivative().eval(Rational(-4)), -2304);
    EXPECT_EQ(shown[2].eval(Rational(-4)), -2304);
    EXPECT_EQ(shown[1].eval(Rational(-4)), 1536);
    auto at4 = d4_local_exponents(ode, Rational(-4));
    EXPECT_EQ(at4.exact, (std::vector<Rational>{0, 1, 1}));

    // At infinity: 39 l(l-1)(l-2) + 117 l(l-1) + (104/3) l = l (39 l^2 - 13/3).
    auto inf = d4_local_exponents(ode, std::nullopt);
    EXPECT_EQ(inf.exact, (std::vector<Rational>{make_rational(-1, 3), 0, make_rational(1, 3)}));

    EXPECT_THROW(d4_local_exponents(ode, Rational(1)), ValidationError);
}
