#include <gtest/gtest.h>

#include <algorithm>

#include "test_util.hpp"
#include "wak/wakimoto.hpp"

using namespace wak;
using namespace wak::testing;

namespace {

std::string note(const VerificationReport& r, const std::string& key) {
    for (const auto& [k, v] : r.notes)
        if (k == key) return v;
    return "<missing>";
}

CampaignOptions small(int mode, int weight, ExecPolicy policy = ExecPolicy::Parallel) {
    CampaignOptions o;
    o.max_mode = mode;
    o.max_weight = weight;
    o.policy = policy;
    return o;
}

void expect_same(const VerificationReport& a, const VerificationReport& b) {
    EXPECT_EQ(a.campaign, b.campaign);
    EXPECT_EQ(a.total_checks, b.total_checks);
    EXPECT_EQ(a.failed_checks, b.failed_checks);
    EXPECT_EQ(a.notes, b.notes);
    ASSERT_EQ(a.failures.size(), b.failures.size());
    for (std::size_t i = 0; i < a.failures.size(); ++i) {
        EXPECT_EQ(a.failures[i].lhs, b.failures[i].lhs);
        EXPECT_EQ(a.failures[i].difference, b.failures[i].difference);
    }
}

}  // namespace

TEST(Schur, LowOrders) {
    EXPECT_EQ(schur(0), one());
    EXPECT_EQ(schur(1), t(1));
    EXPECT_EQ(schur(2), t(1) * t(1).scaled(LevelScalar::rational(1, 2)) + t(2));
    EXPECT_EQ(reduced_schur(2), (t(1) * t(1)).scaled(LevelScalar::rational(1, 2)));
    EXPECT_TRUE(schur(-1).is_zero());
}

TEST(Schur, GeneratingFunctionRecursion) {
    // m S_m = Σ j t_j S_{m−j}
    for (int m = 1; m <= 6; ++m) {
        SparsePoly rhs;
        for (int j = 1; j <= m; ++j) rhs += (t(j) * schur(m - j)).scaled(j);
        EXPECT_EQ(schur(m).scaled(m), rhs) << m;
    }
}

TEST(GradedBasis, CountsAreStable) {
    // weight-w monomials in x, y, t (partitions coloured three ways) per charge.
    const std::size_t per_charge[] = {1, 3, 9, 22};
    for (int w = 0; w <= 3; ++w) EXPECT_EQ(graded_basis(w, 0, 0).size(), per_charge[w]) << w;
    EXPECT_EQ(graded_basis(2, -1, 1).size(), 3 * per_charge[2]);
}

TEST(Heisenberg, CommutatorsOnSlices) {
    FockSpace fock(Level::symbolic());
    const auto r = verify_heisenberg(fock, small(3, 3));
    EXPECT_TRUE(r.pass());
    EXPECT_GT(r.total_checks, 0u);
}

TEST(Heisenberg, SerialAndParallelAgree) {
    FockSpace fock(Level::symbolic());
    expect_same(verify_heisenberg(fock, small(2, 3, ExecPolicy::Serial)),
                verify_heisenberg(fock, small(2, 3, ExecPolicy::Parallel)));
}

TEST(Wakimoto, AffineRelationsSymbolic) {
    Wakimoto wak(Level::symbolic());
    const auto r = verify_affine_relations(wak, small(2, 3));
    EXPECT_TRUE(r.pass()) << (r.failures.empty() ? "" : r.failures[0].lhs);
}

TEST(Wakimoto, AffineRelationsSpecialized) {
    for (int k0 : {0, 1, -1, 3, -2}) {
        Wakimoto wak(Level::at(k0));
        EXPECT_TRUE(verify_affine_relations(wak, small(2, 2)).pass()) << k0;
    }
}

TEST(Wakimoto, AffineSerialAndParallelAgree) {
    Wakimoto wak(Level::symbolic());
    expect_same(verify_affine_relations(wak, small(2, 2, ExecPolicy::Serial)),
                verify_affine_relations(wak, small(2, 2, ExecPolicy::Parallel)));
}

TEST(Wakimoto, LatticeVirasoroCentralChargeThree) {
    Wakimoto wak(Level::symbolic());
    const auto r = verify_virasoro_relations(wak, VirasoroKind::Lattice, small(2, 3));
    EXPECT_TRUE(r.pass());
    EXPECT_EQ(note(r, "central_charge"), "3");
}

TEST(Wakimoto, LatticeFieldsAreNotStrictlyPrimary) {
    // e and f pick up the extra e^{±δ} term under the lattice operators.
    Wakimoto wak(Level::symbolic());
    const auto r = verify_virasoro_relations(wak, VirasoroKind::Lattice, small(2, 2), true);
    EXPECT_FALSE(r.pass());
}

TEST(Wakimoto, SugawaraCentralCharge) {
    Wakimoto wak(Level::symbolic());
    const auto r = verify_virasoro_relations(wak, VirasoroKind::Sugawara, small(2, 2));
    EXPECT_TRUE(r.pass());
    const LevelScalar k = LevelScalar::k();
    EXPECT_EQ(note(r, "central_charge"), (LevelScalar(3) * k / (k + LevelScalar(2))).to_string());
}

TEST(Wakimoto, CriticalLatticeAtMinusTwo) {
    Wakimoto wak(Level::at(-2));
    const auto r = verify_virasoro_relations(wak, VirasoroKind::LatticeCritical, small(2, 3));
    EXPECT_TRUE(r.pass());
    EXPECT_EQ(note(r, "central_charge"), "2");
}

TEST(Wakimoto, SugawaraClosedFormMatches) {
    Wakimoto wak(Level::symbolic());
    for (int w = 0; w <= 2; ++w)
        for (const auto& m : graded_basis(w, -1, 1)) {
            const SparsePoly v = SparsePoly::from_monomial(m);
            for (int n = -2; n <= 2; ++n) EXPECT_EQ(wak.sugawara_mode(n, v), wak.sugawara_closed_form(n, v));
        }
}

TEST(Wakimoto, FieldModesBatchMatchesSingle) {
    Wakimoto wak(Level::symbolic());
    const SparsePoly v = SparsePoly::from_monomial(graded_basis(2, 1, 1).front());
    for (AffineGen g : {AffineGen::E, AffineGen::F, AffineGen::H}) {
        const auto batch = wak.field_modes(g, -3, 3, v);
        for (int n = -3; n <= 3; ++n) EXPECT_EQ(batch[n + 3], wak.field_mode(g, n, v));
    }
}
