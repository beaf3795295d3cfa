#include <gtest/gtest.h>

#include "test_util.hpp"
#include "wak/hirota.hpp"
#include "wak/parse.hpp"

using namespace wak;
using namespace wak::testing;

namespace {

const std::vector<VarId> kCoords{var(Family::X, 1), var(Family::X, 2), var(Family::Y, 1), var(Family::Y, 3),
                                 var(Family::T, 1), var(Family::T, 2)};
const std::vector<VarId> kSymbols{var(Family::U, 1), var(Family::U, 2), var(Family::V, 1), var(Family::W, 1),
                                  var(Family::W, 3)};

SparsePoly single_block(const HirotaEquation& eq) {
    EXPECT_EQ(eq.blocks.size(), 1u);
    return eq.blocks.begin()->second;
}

}  // namespace

TEST(Hirota, SquareOfFirstSymbol) {
    // f''g − 2f'g' + fg'' with f = g = x1².
    const SparsePoly U1 = SparsePoly::variable(var(Family::U, 1));
    EXPECT_EQ(hirota_apply(U1 * U1, x(1) * x(1), x(1) * x(1)), (x(1) * x(1)).scaled(-4));
}

TEST(Hirota, BarCoordinatesRoundTrip) {
    std::mt19937 rng(2);
    const std::vector<VarId> slots{var(Family::XP, 1), var(Family::XPP, 1), var(Family::YP, 2), var(Family::TPP, 1)};
    for (int i = 0; i < 20; ++i) {
        const SparsePoly p = random_poly(rng, slots, 4, 4);
        EXPECT_EQ(from_bar_coordinates(to_bar_coordinates(p)), p);
    }
}

TEST(Hirota, ConversionRuleOnRandomPairs) {
    std::mt19937 rng(7);
    for (int c = 0; c < 100; ++c) {
        const SparsePoly f = random_poly(rng, kCoords, 4, 5);
        const SparsePoly P = random_poly(rng, kSymbols, 3, 5);
        EXPECT_TRUE(hbo_identity_residual(P, f).is_zero()) << "case " << c;
    }
}

TEST(Hirota, OddOperatorsVanishOnSquares) {
    std::mt19937 rng(9);
    for (int c = 0; c < 30; ++c) {
        SparsePoly P = random_poly(rng, kSymbols, 3, 4);
        P = P - sign_flip(P);  // odd part, doubled
        ASSERT_TRUE(odd_operator_vanishes(P));
        const SparsePoly f = random_poly(rng, kCoords, 3, 4);
        EXPECT_TRUE(hirota_apply(P, f, f).is_zero());
    }
}

TEST(Hirota, SignFlipSwapsFactors) {
    std::mt19937 rng(4);
    for (int c = 0; c < 30; ++c) {
        const SparsePoly P = random_poly(rng, kSymbols, 3, 4);
        const SparsePoly f = random_poly(rng, kCoords, 3, 4), g = random_poly(rng, kCoords, 3, 4);
        EXPECT_EQ(hirota_apply(P, f, g), hirota_apply(sign_flip(P), g, f));
    }
}

TEST(Hirota, CoefficientOfOneDisplay) {
    Wakimoto wak(Level::symbolic());
    const auto eq = extract_sector_equation(wak, 0, 0, Monomial(), ExtractionWindow::reduced()).normalized();
    ASSERT_EQ(eq.blocks.count({-1, 1}), 1u);
    EXPECT_EQ(single_block(eq), parse_poly("x1*y1*du1 - x1*y1*dv1 + x1 + y1"));
    EXPECT_EQ(eq.to_latex(),
              "\\left[x_{1} y_{1} \\partial_{u_{1}} - x_{1} y_{1} \\partial_{v_{1}} + x_{1} + y_{1}\\right] "
              "\\tau_{-1}\\cdot\\tau_{1} = 0");
}

TEST(Hirota, CoefficientOfXbarSquaredDisplay) {
    Wakimoto wak(Level::symbolic());
    const Monomial bar = bar_monomial({{Family::XBAR, 1, 2}});
    const auto eq = extract_sector_equation(wak, 0, 0, bar, ExtractionWindow::reduced());
    EXPECT_EQ(single_block(eq.normalized()),
              parse_poly("x1*y1*du1^3 - x1*y1*du1^2*dv1 + x1*du1^2 + 3*y1*du1^2 - 2*y1*du1*dv1 + 2*du1"));
    // the raw coefficient is the same equation up to sign
    EXPECT_EQ(single_block(eq.scaled(-1)), single_block(eq.normalized()));
}

TEST(Hirota, EquationsHoldOnTauOrbit) {
    Wakimoto wak(Level::symbolic());
    const auto win = ExtractionWindow::reduced();
    std::vector<HirotaEquation> eqs;
    for (const Monomial& bar : {Monomial(), bar_monomial({{Family::XBAR, 1, 2}}),
                                bar_monomial({{Family::XBAR, 1, 1}, {Family::YBAR, 1, 1}})})
        eqs.push_back(extract_sector_equation(wak, 0, 0, bar, win));
    EXPECT_TRUE(verify_equation_on_tau(eqs, tau_orbit(wak, default_tau_word(), 3), &win).pass());
}

TEST(Hirota, SentinelTauFailsDisplayOne) {
    Wakimoto wak(Level::symbolic());
    const auto win = ExtractionWindow::reduced();
    const auto eq = extract_sector_equation(wak, 0, 0, Monomial(), win);
    TauFamily bad;
    bad.set_component(-1, with_charge(one(), -1));
    bad.set_component(1, with_charge(x(1), 1));
    EXPECT_FALSE(verify_equation_on_tau({eq}, bad, &win).pass());
}

TEST(Hirota, DualRouteOnRandomTau) {
    Wakimoto wak(Level::symbolic());
    Casimir cas(wak);
    std::mt19937 rng(1);
    const std::vector<VarId> vars{var(Family::X, 1), var(Family::X, 2), var(Family::Y, 1), var(Family::Y, 2),
                                  var(Family::T, 1), var(Family::T, 2)};
    std::map<int, SparsePoly> tau;
    for (int a = -2; a <= 2; ++a) tau[a] = random_poly(rng, vars, 4, 3);
    for (const auto& win : {ExtractionWindow::reduced(), ExtractionWindow::window(2)})
        for (const Monomial& bar : {Monomial(), bar_monomial({{Family::XBAR, 1, 2}}), bar_monomial({{Family::TBAR, 1, 1}})}) {
            const auto eq = extract_sector_equation(wak, 0, 0, bar, win);
            EXPECT_EQ(restrict_to_point(equation_residual(eq, tau), win),
                      direct_sector_coefficient(cas, tau, 0, 0, bar, win));
        }
}
