#pragma once

#include <array>
#include <string>
#include <vector>

#include "wak/fock.hpp"
#include "wak/report.hpp"

namespace wak {

enum class AffineGen { E, F, H };

const char* affine_name(AffineGen g);

/// Pairing matrix over the ordered basis (δ, α, γ).
struct GramMatrix {
    std::array<std::array<LevelScalar, 3>, 3> entries;

    const LevelScalar& operator()(int i, int j) const { return entries[i][j]; }
    LevelScalar& operator()(int i, int j) { return entries[i][j]; }
    LevelScalar determinant() const;
    bool symmetric() const;
};

inline constexpr int kDelta = 0, kAlpha = 1, kGamma = 2;

GramMatrix gram_from_level(const Level& level);

/// Residuals of (δ|α)(δ|γ)+1, (α|γ)−(k+1), (α|α)−(δ|α)², (γ|γ)−(δ|γ)², |δ|².
std::vector<LevelScalar> classification_residuals(const GramMatrix& g, const Level& level);

/// The realization of affine sl2 at level k on B together with the lattice
/// and Sugawara Virasoro operators.
class Wakimoto {
public:
    explicit Wakimoto(Level level);

    const Level& level() const noexcept { return fock_.level(); }
    const FockSpace& fock() const noexcept { return fock_; }

    /// Mode N of the vertex operator e^{sδ}(z), s = ±1.
    SparsePoly vertex_mode(int s, int N, const SparsePoly& v) const;
    SparsePoly field_mode(AffineGen g, int n, const SparsePoly& v) const;
    /// field_mode(g, n, v) for n = lo..hi, sharing the vertex-operator expansion.
    std::vector<SparsePoly> field_modes(AffineGen g, int lo, int hi, const SparsePoly& v) const;

    SparsePoly virasoro_mode(int n, const SparsePoly& v, bool critical = false) const;
    SparsePoly sugawara_mode(int n, const SparsePoly& v) const;
    /// 2(k+2)·L^sug_n v, free of the 1/(k+2) denominator.
    SparsePoly sugawara_raw(int n, const SparsePoly& v) const;
    /// L^lat_n v − (n+1)·μ_(n) v with μ = (α+γ)/(2(k+2)); agrees with sugawara_mode.
    SparsePoly sugawara_closed_form(int n, const SparsePoly& v) const;
    /// sugawara_raw(n, v) for n = lo..hi.
    std::vector<SparsePoly> sugawara_raw_modes(int lo, int hi, const SparsePoly& v) const;

    struct ModeItem {
        int n;
        const SparsePoly* x;
        LevelScalar coeff;
    };
    /// Σ coeff·g_(n) x over the items, sharing the Schur products.
    SparsePoly field_apply_sum(AffineGen g, const std::vector<ModeItem>& items) const;

    /// Σ_m :a_(m) b_(n−m): v with Heisenberg normal ordering.
    SparsePoly heis_quadratic(const HeisVec& a, const HeisVec& b, int n, const SparsePoly& v) const;

private:
    struct Expansion;
    struct ExpansionItem {
        int n;
        const Expansion* ex;
        LevelScalar coeff;
    };
    Expansion expand(AffineGen g, const SparsePoly& v) const;
    SparsePoly assemble(AffineGen g, const std::vector<ExpansionItem>& items, int arity) const;
    /// Q_r = Σ_{p=1..r} p·x_p S_{r−p}(±t) (y_p for f).
    const SparsePoly& creation(AffineGen g, int r) const;

    FockSpace fock_;
    mutable std::mutex creation_mu_;
    mutable std::array<std::deque<SparsePoly>, 2> creation_;
};

struct CampaignOptions {
    int max_mode = 3;
    int max_weight = 6;
    int charge_lo = -1;
    int charge_hi = 1;
    int cap = 8;
    ExecPolicy policy = ExecPolicy::Parallel;
    /// Stop at the first failing basis vector.
    bool fail_fast = false;
};

/// Basis monomials of B of weight 0..max_weight in the configured charge range.
std::vector<SparsePoly> basis_vectors(const CampaignOptions& opt);

enum class VirasoroKind { Lattice, LatticeCritical, Sugawara };

const char* virasoro_name(VirasoroKind kind);

/// [a_(m), b_(n)] = m δ_{m,−n} (a|b) on graded slices, a, b ∈ {α, γ, δ}.
VerificationReport verify_heisenberg(const FockSpace& fock, const CampaignOptions& opt);

/// [a_(m), b_(n)] = [a,b]_(m+n) + m δ_{m,−n} tr(ab) k for a, b ∈ {e, f, h}.
VerificationReport verify_affine_relations(const Wakimoto& wak, const CampaignOptions& opt);

/// At k = −2, α+γ pairs to zero with h, its annihilation and zero modes vanish and
/// its creation modes multiply by n(x_n + y_n). The quotient by that ideal is
/// y_n → −x_n, where γ = −α holds.
SparsePoly critical_quotient(const SparsePoly& p);

/// Virasoro bracket with the expected central charge (3, 2 or 3k/(k+2)) and the
/// transformation law of e, f, h. For the lattice operators e and f are not
/// primary: [L_m, φ_(n)] = −n φ_(m+n) + C(m+1,2) (e^{±δ})_(m+n−1). With
/// strict_primary the plain law is checked instead. LatticeCritical compares both
/// sides in critical_quotient.
VerificationReport verify_virasoro_relations(const Wakimoto& wak, VirasoroKind kind, const CampaignOptions& opt,
                                             bool strict_primary = false);

}  // namespace wak
