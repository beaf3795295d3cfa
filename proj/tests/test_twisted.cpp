#include <gtest/gtest.h>

#include "test_util.hpp"
#include "wak/errors.hpp"
#include "wak/parse.hpp"
#include "wak/twisted.hpp"

using namespace wak;
using namespace wak::testing;

namespace {

TwistedOptions small(int mode, int weight, ExecPolicy policy = ExecPolicy::Parallel) {
    TwistedOptions o;
    o.max_doubled_mode = mode;
    o.max_weight = weight;
    o.policy = policy;
    return o;
}

std::string note(const VerificationReport& r, const std::string& key) {
    for (const auto& [k, v] : r.notes)
        if (k == key) return v;
    return "<missing>";
}

SparsePoly vacuum() { return tensor_product(one(), one(), kTwistedLayout); }

}  // namespace

TEST(Twisted, VacuumValues) {
    TwistedWakimoto wak(Level::symbolic());
    EXPECT_EQ(wak.field_mode(AffineGen::E, 0, one()), SparsePoly::constant(LevelScalar::rational(-1, 2)));
    EXPECT_EQ(wak.field_mode(AffineGen::F, 0, one()), SparsePoly::constant(LevelScalar::rational(-1, 2)));
    EXPECT_EQ(wak.virasoro_mode(0, one()), SparsePoly::constant(LevelScalar::rational(1, 8)));
}

TEST(Twisted, HeisenbergRelations) {
    TwistedFock fock(Level::symbolic());
    EXPECT_TRUE(verify_twisted_heisenberg(fock, small(3, 3)).pass());
}

TEST(Twisted, AffineRelations) {
    TwistedWakimoto wak(Level::symbolic());
    const auto r = verify_twisted_affine(wak, small(3, 3));
    EXPECT_TRUE(r.pass()) << (r.failures.empty() ? "" : r.failures[0].lhs);
}

TEST(Twisted, AffineSerialAndParallelAgree) {
    TwistedWakimoto wak(Level::symbolic());
    const auto a = verify_twisted_affine(wak, small(2, 2, ExecPolicy::Serial));
    const auto b = verify_twisted_affine(wak, small(2, 2, ExecPolicy::Parallel));
    EXPECT_EQ(a.total_checks, b.total_checks);
    EXPECT_EQ(a.failed_checks, b.failed_checks);
}

TEST(Twisted, VirasoroMeasuresCentralChargeThree) {
    TwistedWakimoto wak(Level::symbolic());
    const auto r = verify_twisted_virasoro(wak, small(3, 3));
    EXPECT_TRUE(r.pass());
    EXPECT_EQ(note(r, "central_charge"), "3");
}

TEST(Twisted, DroppingEighthBreaksVirasoro) {
    TwistedWakimoto wak(Level::symbolic());
    EXPECT_FALSE(verify_twisted_virasoro(wak, small(3, 3), false).pass());
}

TEST(Twisted, Equivariance) {
    TwistedWakimoto wak(Level::symbolic());
    EXPECT_TRUE(verify_twisted_equivariance(wak, small(3, 3)).pass());
}

TEST(Twisted, CartanVanishesAtIntegralModes) {
    TwistedWakimoto wak(Level::symbolic());
    for (const auto& m : twisted_graded_basis(2)) {
        const SparsePoly v = SparsePoly::from_monomial(m);
        for (int J = -4; J <= 4; J += 2) EXPECT_TRUE(wak.field_mode(AffineGen::H, J, v).is_zero()) << J;
    }
}

TEST(Twisted, CasimirOnVacuum) {
    TwistedWakimoto wak(Level::symbolic());
    TwistedCasimir cas(wak);
    for (int n = 2; n <= 4; ++n) EXPECT_TRUE(cas.casimir_mode(n, vacuum()).is_zero()) << n;
    const LevelScalar k = LevelScalar::k();
    EXPECT_EQ(cas.casimir_mode(1, vacuum()), vacuum().scaled(LevelScalar::rational(1, 2) - k / LevelScalar(4)));
}

TEST(Twisted, AssembliesAgree) {
    TwistedWakimoto wak(Level::symbolic());
    TwistedCasimir cas(wak);
    const auto vecs = twisted_orbit_vectors(cas, 2, default_twisted_generators());
    EXPECT_TRUE(verify_twisted_assemblies(cas, 0, 3, vecs).pass());
}

TEST(Twisted, CovarianceIdentity) {
    TwistedWakimoto wak(Level::symbolic());
    TwistedCasimir cas(wak);
    EXPECT_TRUE(verify_twisted_covariance(cas, small(2, 2), 0, 3).pass());
}

TEST(Twisted, HierarchyBreaksAtDepthOne) {
    // Ω^M_(2) is only covariant, so the (e+f)_(−1) orbit vector is not annihilated.
    TwistedWakimoto wak(Level::symbolic());
    TwistedCasimir cas(wak);
    EXPECT_TRUE(verify_twisted_hierarchy(cas, 0).pass());
    const Sl2Element epf = Sl2Element::of(AffineGen::E) + Sl2Element::of(AffineGen::F);
    const SparsePoly w = cas.diag_mode(epf, -2, vacuum());
    EXPECT_EQ(cas.casimir_mode(2, w), vacuum().scaled(LevelScalar(-4) * LevelScalar::k()));
    EXPECT_FALSE(verify_twisted_hierarchy(cas, 2).pass());
}

TEST(Twisted, DualRouteWithAndWithoutIndependence) {
    TwistedWakimoto wak(Level::symbolic());
    TwistedCasimir cas(wak);
    std::mt19937 rng(5);
    const std::vector<VarId> all{var(Family::X, 1), var(Family::X, 2), var(Family::X, 3), var(Family::X, 4),
                                 var(Family::T, 1), var(Family::T, 3), var(Family::T, 5)};
    const std::vector<VarId> reduced{var(Family::X, 1), var(Family::X, 2), var(Family::T, 1)};
    for (bool ind : {false, true}) {
        const auto win = twisted_reduced_window(ind);
        const auto eq = twisted_extract_equation(wak, Monomial(), win);
        for (int trial = 0; trial < 4; ++trial) {
            const SparsePoly tau = random_poly(rng, ind ? reduced : all, 5, 4);
            EXPECT_EQ(twisted_direct_coefficient(cas, tau, Monomial(), win),
                      restrict_to_point(hirota_apply(eq.blocks.begin()->second, tau, tau), win));
        }
    }
}

TEST(Twisted, RotatedAssemblyGivesSameEquation) {
    TwistedWakimoto wak(Level::symbolic());
    const auto win = twisted_reduced_window(true);
    for (TwistedPart p : {TwistedPart::First, TwistedPart::Others, TwistedPart::All})
        EXPECT_EQ(twisted_extract_equation(wak, Monomial(), win, p, TwistedAssembly::Rotated),
                  twisted_extract_equation(wak, Monomial(), win, p));
}

TEST(Twisted, PartsSumToWhole) {
    TwistedWakimoto wak(Level::symbolic());
    const auto win = twisted_reduced_window(true);
    auto block = [&](TwistedPart p) { return twisted_extract_equation(wak, Monomial(), win, p).blocks.begin()->second; };
    EXPECT_EQ(block(TwistedPart::First) + block(TwistedPart::Others), block(TwistedPart::All));
}

TEST(Twisted, DerivedCoefficientOfOne) {
    TwistedWakimoto wak(Level::symbolic());
    const auto eq = twisted_extract_equation(wak, Monomial(), twisted_reduced_window(true));
    EXPECT_TRUE(eq.single_tau);
    const SparsePoly expected = parse_poly(
        "8/45*cp^2*x2^2*dw1^6 - 1/3*((t1+cm*x1)^2+4*cp*x2)*dw1^4 - 8/3*cp*x2*du1*dw1^3"
        " + 4*cp*x2*Dx2*dw1^2 - 2*(t1+cm*x1)*Dx1*dw1^2 + 2*(t1+cm*x1)*du2*dw1"
        " + (1-k^2/4)*dw1^2 + (2-k)*du1*dw1 - Dx2");
    EXPECT_EQ(eq.blocks.begin()->second, expected);
}
