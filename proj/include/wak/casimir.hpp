#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wak/wakimoto.hpp"

namespace wak {

enum class Slot { Primed, DoublePrimed };

/// Layout of a tensor square: the per-slot families and charge arity.
///
/// The untwisted space B⊗B uses arity 1 per slot (so 2 in the tensor); the
/// twisted M⊗M has no charges.
struct TensorLayout {
    int slot_arity = 1;

    int tensor_arity() const noexcept { return 2 * slot_arity; }
};

inline constexpr TensorLayout kUntwistedLayout{1};
inline constexpr TensorLayout kTwistedLayout{0};

/// a⊗b with the slot families renamed (X → XP / XPP and so on).
SparsePoly tensor_product(const SparsePoly& a, const SparsePoly& b, TensorLayout layout = kUntwistedLayout);

/// Groups w as Σ u ⊗ P over the distinct monomials u of the major slot.
/// Formal parameters stay with the major slot.
std::vector<std::pair<SparsePoly, SparsePoly>> split_tensor(const SparsePoly& w, Slot major,
                                                            TensorLayout layout = kUntwistedLayout);

/// Batched slot operator: v ↦ (T_lo v, ..., T_hi v).
using SlotFamily = std::function<std::vector<SparsePoly>(const SparsePoly&)>;

/// Applies every member of a slot family to the chosen tensor factor.
std::vector<SparsePoly> lift_family(const SlotFamily& op, int count, Slot s, const SparsePoly& w,
                                    TensorLayout layout = kUntwistedLayout);

/// Tensor vectors of total weight 0..max_weight, slot charges in the option range.
std::vector<SparsePoly> tensor_basis_vectors(const CampaignOptions& opt);

/// Operators on B⊗B built from the realization in each slot.
class Casimir {
public:
    explicit Casimir(const Wakimoto& wak) : wak_(wak) {}

    const Wakimoto& realization() const noexcept { return wak_; }

    SparsePoly lift_mode(AffineGen g, int n, Slot s, const SparsePoly& w) const;
    SparsePoly lift_mode(HeisGen g, int n, Slot s, const SparsePoly& w) const;
    /// L_n in one slot.
    SparsePoly lift_virasoro(int n, Slot s, const SparsePoly& w) const;

    SparsePoly diag_mode(AffineGen g, int n, const SparsePoly& w) const;
    std::vector<SparsePoly> diag_modes(AffineGen g, int lo, int hi, const SparsePoly& w) const;

    /// Ω_(n) w. hh_coeff replaces the ½ in front of h⊗h.
    SparsePoly casimir_mode(int n, const SparsePoly& w, const LevelScalar& hh_coeff = LevelScalar::rational(1, 2)) const;
    /// casimir_mode(n, w) for n = lo..hi, sharing the slot expansions.
    std::vector<SparsePoly> casimir_modes(int lo, int hi, const SparsePoly& w,
                                          const LevelScalar& hh_coeff = LevelScalar::rational(1, 2)) const;

    /// Res_z e(z)⊗f(z) computed from the closed vertex-operator form
    /// q′/q″ Σ S_l(t′−t″) α′_(i) γ″_(j) S_{l−i−j−1}(∂̃y′−∂̃x′−∂̃y″+∂̃x″).
    SparsePoly ef_residue_closed(const SparsePoly& w) const;
    /// Res_z e(z)⊗f(z) by slotwise field application.
    SparsePoly ef_residue_direct(const SparsePoly& w) const;

private:
    const Wakimoto& wak_;
};

/// [Ω_(n), Δa_(m)] w = 0 for a ∈ {e, f, h}, |m|, |n| ≤ max_mode.
VerificationReport verify_casimir_commutes(const Casimir& cas, const CampaignOptions& opt);

/// The identity that does hold with the lattice Virasoro operators:
/// [Ω_(n), Δa_(m)] = −(k/2)·n(n−1)·Δ(L_1 a)_(m+n−2) with L_1 e = e^δ,
/// L_1 f = e^{−δ}, L_1 h = 0.
VerificationReport verify_casimir_covariance(const Casimir& cas, const CampaignOptions& opt);

struct OrbitGenerator {
    AffineGen g;
    int n;
};

/// The default orbit generators (e,−1), (f,−1), (h,−1), (e,0), (f,0).
std::vector<OrbitGenerator> default_orbit_generators();

/// All nonzero Δg_1(n_1)⋯Δg_r(n_r)(1⊗1) for words of length r ≤ depth.
/// Throws CapExceeded when depth exceeds cap.
std::vector<SparsePoly> orbit_vectors(const Casimir& cas, int depth, const std::vector<OrbitGenerator>& gens,
                                      int cap = 4);

/// Ω_(0) w = 0 on every orbit vector up to depth.
VerificationReport verify_untwisted_hierarchy(const Casimir& cas, int depth,
                                              const LevelScalar& hh_coeff = LevelScalar::rational(1, 2),
                                              ExecPolicy policy = ExecPolicy::Parallel);

/// One factor exp(a·g_(n)) of an orbit word; a is PARAM variable `param`.
struct ExpFactor {
    AffineGen g;
    int n;
    int param;
};

/// τ = Π exp(a_i g_i(n_i)) 1 split by q-charge, exact modulo total
/// parameter degree > max_param_degree.
class TauFamily {
public:
    TauFamily() = default;
    TauFamily(std::map<int, SparsePoly> parts, int lo, int hi, int max_param_degree)
        : parts_(std::move(parts)), lo_(lo), hi_(hi), degree_(max_param_degree) {}

    /// τ_m; throws WindowTooSmall outside the charges the word can reach.
    const SparsePoly& component(int m) const;
    /// Sets τ_m explicitly (used for hand-built families).
    void set_component(int m, SparsePoly p);
    int lo() const noexcept { return lo_; }
    int hi() const noexcept { return hi_; }
    int max_param_degree() const noexcept { return degree_; }
    const std::map<int, SparsePoly>& parts() const noexcept { return parts_; }

private:
    std::map<int, SparsePoly> parts_;
    SparsePoly zero_{1};
    int lo_ = 0, hi_ = 0;
    int degree_ = -1;
};

/// exp(a e_(−1)) exp(b f_(−1)) with a = PARAM_1, b = PARAM_2.
std::vector<ExpFactor> default_tau_word();

TauFamily tau_orbit(const Wakimoto& wak, const std::vector<ExpFactor>& word, int max_param_degree);

/// Drops terms whose total PARAM degree exceeds d.
SparsePoly truncate_params(const SparsePoly& p, int d);

}  // namespace wak
