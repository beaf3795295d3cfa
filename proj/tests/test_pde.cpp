#include <gtest/gtest.h>

#include "test_util.hpp"
#include "wak/errors.hpp"
#include "wak/parse.hpp"

using namespace wak;
using namespace wak::testing;

TEST(Parse, ArithmeticAndLevelConstants) {
    EXPECT_EQ(parse_poly("(x1 + 2*t3)^2"), (x(1) + t(3).scaled(2)) * (x(1) + t(3).scaled(2)));
    EXPECT_EQ(parse_poly("cp - cm"), SparsePoly::constant(LevelScalar::k() + LevelScalar(1)));
    EXPECT_EQ(parse_poly("x1/2"), x(1).scaled(LevelScalar::rational(1, 2)));
    EXPECT_EQ(parse_poly("-k*y2"), y(2).scaled(-LevelScalar::k()));
}

TEST(Parse, RoundTripsPrintedPolynomials) {
    std::mt19937 rng(12);
    const std::vector<VarId> vars{var(Family::X, 1), var(Family::T, 2), var(Family::U, 1), var(Family::W, 3),
                                  var(Family::DX, 2), var(Family::XBAR, 1)};
    for (int i = 0; i < 30; ++i) {
        const SparsePoly p = random_poly(rng, vars, 5, 4).scaled(LevelScalar::k() - LevelScalar::rational(1, 3));
        EXPECT_EQ(parse_poly(p.to_string()), p) << p.to_string();
    }
}

TEST(Parse, MalformedInputThrows) {
    EXPECT_THROW(parse_poly("x1 +"), ConfigError);
    EXPECT_THROW(parse_poly("(x1"), ConfigError);
    EXPECT_THROW(parse_poly("x1/x2"), ConfigError);
    EXPECT_THROW(parse_poly("q7"), ConfigError);
}

TEST(Pde, JetOrders) {
    const auto o = jet_orders(jet(1, 2, 3));
    EXPECT_EQ(o[0], 1);
    EXPECT_EQ(o[1], 2);
    EXPECT_EQ(o[2], 3);
}

TEST(Pde, RelabelCollisionThrows) {
    PdeRelabel r;
    r.y = r.x;
    EXPECT_THROW(r.validate(), NoncommutingSubstitution);
}

TEST(Pde, HeatEquationFromHirotaForm) {
    // (τ²)_t − D_x² τ·τ = 2τ²(u_t − u_xx)
    HirotaEquation eq;
    eq.single_tau = true;
    eq.add(0, 0, parse_poly("Dx2 - dw1^2"));
    const PdeForm pde = pde_from_equation(eq);
    ParseOptions po;
    po.pde = true;
    EXPECT_EQ(pde.rhs, parse_poly("u_xx", po));
}

TEST(Pde, CriticalIsGeneralAtMinusTwo) {
    TwistedWakimoto wak(Level::symbolic());
    EXPECT_EQ(pde_forms(wak, PdeVariant::Critical).rhs, pde_forms(wak, PdeVariant::General).rhs.specialize(-2));
}

TEST(Pde, UyZeroHasNoYDependence) {
    TwistedWakimoto wak(Level::symbolic());
    for (const auto& t : pde_forms(wak, PdeVariant::UyZero).rhs) {
        for (const auto& vp : t.mono.vars()) {
            const VarId v = vp.id();
            if (v.family == Family::JET) EXPECT_EQ(jet_orders(v)[2], 0) << t.mono.to_string();
            else EXPECT_FALSE(v == PdeRelabel{}.y) << t.mono.to_string();
        }
    }
}

TEST(Pde, ResidualVanishesOnSeries) {
    TwistedWakimoto wak(Level::symbolic());
    const auto eq = twisted_extract_equation(wak, Monomial(), twisted_reduced_window(true));
    const SparsePoly& P = eq.blocks.begin()->second;
    const SparsePoly tau = parse_poly("1 + 2*x1 + x2*t1 - 3*t1^2 + x1*x2^2 + t1^3*x1");
    EXPECT_TRUE(pde_residual_check(P, PdeRelabel{}, tau, 6).is_zero());
    EXPECT_TRUE(pde_residual_check(P, PdeRelabel{}, one(), 6).is_zero());
}

TEST(Pde, ResidualNeedsNonzeroConstantTerm) {
    EXPECT_THROW(pde_residual_check(parse_poly("dw1^2"), PdeRelabel{}, x(1), 4), Error);
}
