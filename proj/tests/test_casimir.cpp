#include <gtest/gtest.h>

#include "test_util.hpp"
#include "wak/casimir.hpp"
#include "wak/errors.hpp"

using namespace wak;
using namespace wak::testing;

namespace {

SparsePoly vacuum() { return tensor_product(SparsePoly::constant(1, 1), SparsePoly::constant(1, 1)); }

}  // namespace

TEST(Casimir, AnnihilatesVacuumAtModesZeroAndOne) {
    Wakimoto wak(Level::symbolic());
    Casimir cas(wak);
    EXPECT_TRUE(cas.casimir_mode(0, vacuum()).is_zero());
    EXPECT_TRUE(cas.casimir_mode(1, vacuum()).is_zero());
}

TEST(Casimir, BatchModesMatchSingle) {
    Wakimoto wak(Level::symbolic());
    Casimir cas(wak);
    const SparsePoly w = cas.diag_mode(AffineGen::E, -1, vacuum());
    const auto all = cas.casimir_modes(-1, 2, w);
    for (int n = -1; n <= 2; ++n) EXPECT_EQ(all[n + 1], cas.casimir_mode(n, w));
}

TEST(Casimir, ClosedResidueEqualsDirect) {
    Wakimoto wak(Level::symbolic());
    Casimir cas(wak);
    CampaignOptions o;
    o.max_weight = 2;
    for (const auto& b : tensor_basis_vectors(o)) EXPECT_EQ(cas.ef_residue_closed(b), cas.ef_residue_direct(b));
}

TEST(Casimir, CovarianceIdentityHolds) {
    Wakimoto wak(Level::symbolic());
    Casimir cas(wak);
    CampaignOptions o;
    o.max_mode = 2;
    o.max_weight = 2;
    const auto r = verify_casimir_covariance(cas, o);
    EXPECT_TRUE(r.pass());
    EXPECT_GT(r.total_checks, 0u);
}

TEST(Casimir, PlainCommutationHasCounterexample) {
    // With the lattice L_1 in Ω the higher modes are only covariant.
    Wakimoto wak(Level::symbolic());
    Casimir cas(wak);
    CampaignOptions o;
    o.max_mode = 2;
    o.max_weight = 1;
    o.fail_fast = true;
    const auto r = verify_casimir_commutes(cas, o);
    EXPECT_FALSE(r.pass());
}

TEST(Casimir, HierarchyToDepthTwo) {
    Wakimoto wak(Level::symbolic());
    Casimir cas(wak);
    EXPECT_TRUE(verify_untwisted_hierarchy(cas, 2).pass());
}

TEST(Casimir, HierarchySentinelWrongHhCoefficient) {
    Wakimoto wak(Level::symbolic());
    Casimir cas(wak);
    EXPECT_FALSE(verify_untwisted_hierarchy(cas, 1, LevelScalar(1)).pass());
}

TEST(Casimir, HierarchySerialAndParallelAgree) {
    Wakimoto wak(Level::symbolic());
    Casimir cas(wak);
    const auto a = verify_untwisted_hierarchy(cas, 2, LevelScalar::rational(1, 2), ExecPolicy::Serial);
    const auto b = verify_untwisted_hierarchy(cas, 2, LevelScalar::rational(1, 2), ExecPolicy::Parallel);
    EXPECT_EQ(a.total_checks, b.total_checks);
    EXPECT_EQ(a.failed_checks, b.failed_checks);
}

TEST(Casimir, OrbitDepthCap) {
    Wakimoto wak(Level::symbolic());
    Casimir cas(wak);
    EXPECT_THROW(orbit_vectors(cas, 5, default_orbit_generators(), 4), CapExceeded);
}

TEST(TauOrbit, ChargeWindow) {
    Wakimoto wak(Level::symbolic());
    const TauFamily tau = tau_orbit(wak, default_tau_word(), 2);
    EXPECT_LE(tau.lo(), -1);
    EXPECT_GE(tau.hi(), 1);
    EXPECT_THROW(tau.component(tau.hi() + 1), WindowTooSmall);
}
