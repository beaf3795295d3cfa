#include <gtest/gtest.h>

#include "test_util.hpp"
#include "wak/errors.hpp"
#include "wak/wakimoto.hpp"

using namespace wak;
using namespace wak::testing;

TEST(BigRational, LowestTermsAndSign) {
    BigRational a(6, -4);
    EXPECT_EQ(a, BigRational(-3, 2));
    EXPECT_EQ(a.to_string(), "-3/2");
    EXPECT_EQ(a.sign(), -1);
    EXPECT_TRUE((BigRational(4, 2)).is_integer());
}

TEST(BigRational, PromotesAndDemotes) {
    BigRational big(1);
    for (int i = 0; i < 80; ++i) big *= 2;
    EXPECT_FALSE(big.is_small());
    EXPECT_EQ(big.to_string(), "1208925819614629174706176");
    BigRational back = big / big;
    EXPECT_TRUE(back.is_small());
    EXPECT_TRUE(back.is_one());
    EXPECT_EQ(BigRational::parse("1208925819614629174706176/2417851639229258349412352"), BigRational(1, 2));
}

TEST(BigRational, DivisionByZeroThrows) {
    EXPECT_THROW(BigRational(1) / BigRational(0), DivisionByZero);
    EXPECT_THROW(BigRational(0).inverse(), DivisionByZero);
}

TEST(BigRational, FieldAxiomsOnRandomValues) {
    std::mt19937 rng(11);
    auto r = [&] {
        long long d = static_cast<long long>(rng() % 97) + 1;
        return BigRational(static_cast<long long>(rng() % 2001) - 1000, d);
    };
    for (int i = 0; i < 500; ++i) {
        BigRational a = r(), b = r(), c = r();
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a - a, BigRational(0));
        if (!a.is_zero()) EXPECT_TRUE((a * a.inverse()).is_one());
    }
}

TEST(LevelScalar, RationalFunctionsCancel) {
    const LevelScalar k = LevelScalar::k();
    const LevelScalar kp2 = k + LevelScalar(2);
    EXPECT_TRUE((kp2 / kp2).is_one());
    EXPECT_EQ((k * k - LevelScalar(4)) / kp2, k - LevelScalar(2));
    EXPECT_EQ((LevelScalar(1) / kp2).specialize(BigRational(1)), BigRational(1, 3));
}

TEST(LevelScalar, PoleAtSpecializationThrows) {
    const LevelScalar inv = LevelScalar(1) / (LevelScalar::k() + LevelScalar(2));
    EXPECT_THROW(inv.specialize(BigRational(-2)), PoleAtSpecialization);
}

TEST(LevelScalar, SpecializationIsARingMap) {
    std::mt19937 rng(3);
    const LevelScalar k = LevelScalar::k();
    auto r = [&] {
        return LevelScalar(static_cast<long long>(rng() % 7) - 3) * k * k + LevelScalar(static_cast<long long>(rng() % 5)) * k +
               LevelScalar(static_cast<long long>(rng() % 9) - 4);
    };
    for (int i = 0; i < 100; ++i) {
        const LevelScalar a = r(), b = r();
        for (int k0 : {0, 1, -1, 3}) {
            EXPECT_EQ((a * b).specialize(k0), a.specialize(k0) * b.specialize(k0));
            EXPECT_EQ((a + b).specialize(k0), a.specialize(k0) + b.specialize(k0));
        }
    }
}

TEST(SparsePoly, RingLawsOnRandomPolys) {
    std::mt19937 rng(5);
    const std::vector<VarId> vars{var(Family::X, 1), var(Family::Y, 2), var(Family::T, 1), var(Family::T, 3)};
    for (int i = 0; i < 50; ++i) {
        SparsePoly a = random_poly(rng, vars, 4, 4), b = random_poly(rng, vars, 4, 4), c = random_poly(rng, vars, 3, 3);
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * b, b * a);
        EXPECT_TRUE((a - a).is_zero());
    }
}

TEST(SparsePoly, DerivativeIsLeibniz) {
    std::mt19937 rng(8);
    const std::vector<VarId> vars{var(Family::X, 1), var(Family::X, 2), var(Family::T, 1)};
    const VarId v = var(Family::X, 1);
    for (int i = 0; i < 50; ++i) {
        SparsePoly a = random_poly(rng, vars, 4, 4), b = random_poly(rng, vars, 4, 4);
        EXPECT_EQ((a * b).derive(v), a.derive(v) * b + a * b.derive(v));
    }
}

TEST(SparsePoly, ArityMismatchThrows) {
    SparsePoly a = SparsePoly::constant(1, 1);
    SparsePoly b = SparsePoly::constant(1, 0);
    EXPECT_THROW(a + b, ArityMismatch);
}

TEST(SparsePoly, SpecializeMatchesCoefficientwise) {
    SparsePoly p = x(1).scaled(LevelScalar::k()) + t(2).scaled(LevelScalar::k() * LevelScalar::k());
    EXPECT_EQ(p.specialize(3), x(1).scaled(3) + t(2).scaled(9));
}

TEST(Gram, MatrixAndDeterminant) {
    const Level sym = Level::symbolic();
    const GramMatrix g = gram_from_level(sym);
    const LevelScalar k = LevelScalar::k();
    const LevelScalar expected[3][3] = {{0, 1, -1}, {1, 1, k + LevelScalar(1)}, {-1, k + LevelScalar(1), 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_EQ(g(i, j), expected[i][j]) << i << "," << j;
    EXPECT_TRUE(g.symmetric());
    EXPECT_EQ(g.determinant(), LevelScalar(-2) * k - LevelScalar(4));
    for (const auto& r : classification_residuals(g, sym)) EXPECT_TRUE(r.is_zero());
}

TEST(Gram, DegenerateAtCriticalLevel) {
    const GramMatrix g = gram_from_level(Level::at(-2));
    EXPECT_TRUE(g.determinant().is_zero());
}

TEST(Gram, PerturbedCandidateFailsClassification) {
    const Level sym = Level::symbolic();
    GramMatrix g = gram_from_level(sym);
    g(kAlpha, kGamma) = g(kAlpha, kGamma) + LevelScalar(1);
    g(kGamma, kAlpha) = g(kAlpha, kGamma);
    bool any = false;
    for (const auto& r : classification_residuals(g, sym)) any = any || !r.is_zero();
    EXPECT_TRUE(any);
}
