#pragma once

#include <array>
#include <string>
#include <vector>

#include "wak/hirota.hpp"

namespace wak {

// Half-integer modes are stored doubled: J = 2j. M = C[x_1, x_2, ...; t_1, t_3, ...]
// with x_n and t_n of doubled weight n.

/// Element of h written on δ, A₋ = (α−γ)/2 and A₊ = (α+γ)/2. The δ and A₋
/// parts have half-integer modes only, A₊ integer modes only.
struct TwHeisVec {
    LevelScalar delta, aminus, aplus;

    static TwHeisVec alpha() { return {0, 1, 1}; }
    static TwHeisVec gamma() { return {0, -1, 1}; }
    static TwHeisVec delta_vec() { return {1, 0, 0}; }
    TwHeisVec operator+(const TwHeisVec& o) const { return {delta + o.delta, aminus + o.aminus, aplus + o.aplus}; }
    TwHeisVec scaled(const LevelScalar& s) const { return {delta * s, aminus * s, aplus * s}; }
};

/// x ∈ sl2 as x_e·e + x_f·f + x_h·h.
struct Sl2Element {
    LevelScalar e, f, h;

    static Sl2Element of(AffineGen g);
    Sl2Element operator+(const Sl2Element& o) const { return {e + o.e, f + o.f, h + o.h}; }
    Sl2Element scaled(const LevelScalar& s) const { return {e * s, f * s, h * s}; }
    bool is_zero() const { return e.is_zero() && f.is_zero() && h.is_zero(); }
    std::string name() const;
};

Sl2Element sl2_bracket(const Sl2Element& a, const Sl2Element& b);
/// tr(ab) in the defining representation.
LevelScalar sl2_trace(const Sl2Element& a, const Sl2Element& b);

/// The twisted Fock space with its σ-twisted Heisenberg action.
class TwistedFock {
public:
    explicit TwistedFock(Level level);

    const Level& level() const noexcept { return level_; }

    /// a_(J/2) v.
    SparsePoly heis_apply(const TwHeisVec& a, int J, const SparsePoly& v) const;
    LevelScalar pairing(const TwHeisVec& a, const TwHeisVec& b) const;
    /// R_l(s·x), s = ±1.
    const SparsePoly& reduced_schur_x(int l, int s) const { return s > 0 ? rplus_.get(l) : rminus_.get(l); }

private:
    Level level_;
    SchurTable rplus_, rminus_;
};

/// Monomials of M of the given doubled weight.
std::vector<Monomial> twisted_graded_basis(int doubled_weight, int cap = 8);

/// The sl2-hat action on M and the twisted Virasoro operators.
class TwistedWakimoto {
public:
    explicit TwistedWakimoto(Level level) : fock_(std::move(level)) {}

    const Level& level() const noexcept { return fock_.level(); }
    const TwistedFock& fock() const noexcept { return fock_; }

    /// Mode J/2 of Y^M(e^{sδ}, z).
    SparsePoly vertex_mode(int s, int J, const SparsePoly& v) const;
    /// g^M_(J/2) v; f is built from γ and e^{−δ}, not from e.
    SparsePoly field_mode(AffineGen g, int J, const SparsePoly& v) const;
    std::vector<SparsePoly> field_modes(AffineGen g, int Jlo, int Jhi, const SparsePoly& v) const;
    /// Σ coefficients of field_modes for an sl2 element.
    std::vector<SparsePoly> element_modes(const Sl2Element& x, int Jlo, int Jhi, const SparsePoly& v) const;

    /// Σ_J :a_(J/2) b_((N−J)/2): v over J ≡ parity (mod 2), creation modes on the left.
    SparsePoly heis_quadratic(const TwHeisVec& a, const TwHeisVec& b, int N, int parity, const SparsePoly& v) const;
    /// L^M_n v; with_eighth = false drops the constant ⅛ in L^M_0.
    SparsePoly virasoro_mode(int n, const SparsePoly& v, bool with_eighth = true) const;

private:
    TwistedFock fock_;
};

struct TwistedOptions {
    int max_doubled_mode = 5;
    int max_weight = 5;
    int cap = 8;
    ExecPolicy policy = ExecPolicy::Parallel;
    bool fail_fast = false;
};

/// Basis vectors of M of doubled weight 0..max_weight.
std::vector<SparsePoly> twisted_basis_vectors(const TwistedOptions& opt);

/// [a_(J/2), b_(K/2)] = (J/2) δ_{J,−K} (a|b) for a, b ∈ {δ, A₋, A₊}.
VerificationReport verify_twisted_heisenberg(const TwistedFock& fock, const TwistedOptions& opt);

/// [a_(m), b_(n)] = [a,b]_(m+n) + m δ_{m,−n} tr(ab) k for a ∈ {h, e+f, e−f} with
/// m ∈ ½+Z for h, e−f and m ∈ Z for e+f, b ∈ {e, f, h}, n ∈ ½Z.
VerificationReport verify_twisted_affine(const TwistedWakimoto& wak, const TwistedOptions& opt);

/// Virasoro bracket of L^M; the central charge is measured and reported in a note.
VerificationReport verify_twisted_virasoro(const TwistedWakimoto& wak, const TwistedOptions& opt,
                                           bool with_eighth = true);

/// f^M_(j) = (−1)^{2j} e^M_(j) and γ^M_(j) = (−1)^{2j} α^M_(j); e^M vanishes nowhere by parity
/// but h^M_(j) = 0 for integral j.
VerificationReport verify_twisted_equivariance(const TwistedWakimoto& wak, const TwistedOptions& opt);

enum class TwistedAssembly { Direct, Rotated };

/// Ω^M on M⊗M.
class TwistedCasimir {
public:
    explicit TwistedCasimir(const TwistedWakimoto& wak) : wak_(wak) {}

    const TwistedWakimoto& realization() const noexcept { return wak_; }

    /// x^M_(J/2)⊗1 + 1⊗x^M_(J/2).
    SparsePoly diag_mode(const Sl2Element& x, int J, const SparsePoly& w) const;

    /// Res_z z^n Ω^M(z) w. Direct uses e⊗f + f⊗e; Rotated uses 2 e⊗e(e^{2πi}z).
    SparsePoly casimir_mode(int n, const SparsePoly& w, TwistedAssembly assembly = TwistedAssembly::Direct,
                            bool with_eighth = true) const;

private:
    const TwistedWakimoto& wak_;
};

struct TwistedOrbitGenerator {
    Sl2Element x;
    int J;
};

/// h_(−1/2), (e+f)_(−1), (e−f)_(−1/2).
std::vector<TwistedOrbitGenerator> default_twisted_generators();

std::vector<SparsePoly> twisted_orbit_vectors(const TwistedCasimir& cas, int depth,
                                              const std::vector<TwistedOrbitGenerator>& gens, int cap = 4);

/// Ω^M_(2) w = 0 on every orbit vector up to depth.
VerificationReport verify_twisted_hierarchy(const TwistedCasimir& cas, int depth, bool with_eighth = true,
                                            ExecPolicy policy = ExecPolicy::Parallel);

/// Tensor vectors u⊗p of total doubled weight ≤ max_weight.
std::vector<SparsePoly> twisted_tensor_vectors(const TwistedOptions& opt);

/// [Ω^M_(n), Δx_(J/2)] = −(k/2)·n(n−1)·Δ(L_1 x)^M_((J+2n−4)/2) with L_1 e = e^δ,
/// L_1 f = e^{−δ}, L_1 h = 0, for x ∈ {e, f, h}, n in [n_lo, n_hi], |J| ≤ max_doubled_mode.
VerificationReport verify_twisted_covariance(const TwistedCasimir& cas, const TwistedOptions& opt, int n_lo = 0,
                                             int n_hi = 3);

/// Direct and rotated assemblies agree for n in [lo, hi] on the vectors.
VerificationReport verify_twisted_assemblies(const TwistedCasimir& cas, int lo, int hi,
                                             const std::vector<SparsePoly>& vectors,
                                             ExecPolicy policy = ExecPolicy::Parallel);

/// Which part of Ω^M_(2) to convert.
enum class TwistedPart {
    First,   ///< the α′α″ terms of e⊗f + f⊗e (no zero-mode factor −½)
    Others,  ///< the zero-mode terms, ½ h⊗h and −k(L_1⊗1 + 1⊗L_1)
    All,
};

/// x̄_i = t̄_i = 0, x_i = 0 for i ≥ 3, t_i = 0 for i ≥ 3; with independence,
/// τ is also taken independent of x_3, x_4, t_3, t_5.
ExtractionWindow twisted_reduced_window(bool independence);

/// Ω^M_(n) in bar coordinates acting on τ⊗τ, before bar extraction.
SparsePoly twisted_bar_operator(const TwistedWakimoto& wak, int n, TwistedPart part, int creation_max,
                                int xbar_weight, TwistedAssembly assembly = TwistedAssembly::Direct);

/// Coefficient of the bar monomial in Ω^M_(2)(τ⊗τ) as a Hirota equation for τ.
HirotaEquation twisted_extract_equation(const TwistedWakimoto& wak, const Monomial& bar, const ExtractionWindow& win,
                                        TwistedPart part = TwistedPart::All,
                                        TwistedAssembly assembly = TwistedAssembly::Direct);

/// Coefficient of the bar monomial of Ω^M_(2)(τ⊗τ) computed on M⊗M directly.
SparsePoly twisted_direct_coefficient(const TwistedCasimir& cas, const SparsePoly& tau, const Monomial& bar,
                                      const ExtractionWindow& win);

// ---------------------------------------------------------------- PDE forms

/// Jet variable u with the given derivative orders along (t, x, y).
VarId jet(int nt, int nx, int ny);
std::array<int, 3> jet_orders(VarId v);

/// Renaming of the reduced coordinates: x_2 → t, t_1 → x, x_1 → y.
struct PdeRelabel {
    VarId t{Family::X, 2};
    VarId x{Family::T, 1};
    VarId y{Family::X, 1};

    /// Direction 0, 1, 2 for t, x, y; throws for any other coordinate.
    int direction(VarId coordinate) const;
    void validate() const;
};

/// u_t = rhs, with rhs a polynomial in the jets of u and the prefactor
/// coordinates (kept in their original names and printed through the relabel).
struct PdeForm {
    SparsePoly rhs;
    PdeRelabel relabel;

    std::string to_latex() const;
    std::string to_string() const;
    /// (coefficient, monomial) in display order, monomials in relabelled plain text.
    std::vector<std::pair<LevelScalar, std::string>> terms() const;
    friend bool operator==(const PdeForm& a, const PdeForm& b) { return a.rhs == b.rhs; }
};

enum class PdeVariant { General, Critical, UyZero };

const char* pde_variant_name(PdeVariant v);

/// R with P τ·τ = τ²·R under u = log τ, for an equation in the relabelled coordinates.
SparsePoly hirota_to_jets(const HirotaOperator& P, const PdeRelabel& relabel);

/// Solves the jet form of the equation for u_t.
PdeForm pde_from_equation(const HirotaEquation& eq, const PdeRelabel& relabel = {});

/// The evolutionary PDE of the coefficient of 1 in the fully reduced setting.
PdeForm pde_forms(const TwistedWakimoto& wak, PdeVariant which);

/// Checks P τ·τ = τ²·R(u), u = log τ, as power series through total degree
/// `order` for a τ with nonzero constant term.
SparsePoly pde_residual_check(const HirotaOperator& P, const PdeRelabel& relabel, const SparsePoly& tau, int order);

}  // namespace wak
