#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wak/casimir.hpp"

namespace wak {

/// Hirota operators are SparsePolys of arity 0: a prefactor in X, Y, T,
/// Hirota symbols U, V, W (∂_u, ∂_v, ∂_w paired with x, y, t) and ordinary
/// derivative symbols DX, DY, DT acting on the product after the Hirota step.
using HirotaOperator = SparsePoly;

/// Family of the Hirota symbol paired with a coordinate family (X → U, XBAR → U, ...).
Family hirota_symbol(Family coordinate);
/// Coordinate family a Hirota or ordinary derivative symbol acts on.
Family coordinate_of(Family symbol);
bool is_hirota_symbol(Family f);

/// Total degree in U, V, W.
int hirota_degree(const Monomial& m);

/// x′ = x + x̄, x″ = x − x̄ on every term; charges are kept.
SparsePoly to_bar_coordinates(const SparsePoly& w);
/// x = ½(x′ + x″), x̄ = ½(x′ − x″).
SparsePoly from_bar_coordinates(const SparsePoly& w);

/// The same polynomial with its q-charges dropped.
SparsePoly uncharged(const SparsePoly& p);

/// The polynomial with every term given the single charge q.
SparsePoly with_charge(const SparsePoly& p, int q);

/// P f·g = P(∂_u)(f(x+u) g(x−u))|_{u=0}, then ordinary derivatives, then the prefactor.
SparsePoly hirota_apply(const HirotaOperator& P, const SparsePoly& f, const SparsePoly& g);

/// Q = P · Π ∂_u^a / a! over the factors x̄^a of the bar monomial.
HirotaOperator hbo_convert(const HirotaOperator& P, const Monomial& bar);

/// P(−∂) with all Hirota symbols negated.
HirotaOperator sign_flip(const HirotaOperator& P);
/// True iff P(−∂) = −P.
bool odd_operator_vanishes(const HirotaOperator& P);

/// f(x + s·x̄) for s = ±1, over the families present in f.
SparsePoly shifted(const SparsePoly& f, int s);

/// P(∂_x̄)[f(x+x̄) f(x−x̄)] minus Σ_γ x̄^γ · hbo_convert(P, x̄^γ) f·f over every
/// bar monomial γ that can occur; zero when the conversion rule holds.
SparsePoly hbo_identity_residual(const HirotaOperator& P, const SparsePoly& f);

/// LaTeX for a monomial: prefactor, then derivative symbols.
std::string monomial_latex(const Monomial& m);
/// Σ c_i m_i with the monomials already rendered; signs are folded into the joins.
std::string combination_latex(const std::vector<std::pair<LevelScalar, std::string>>& terms);
/// LaTeX for an operator; terms of higher Hirota degree come first.
std::string operator_latex(const SparsePoly& P);

/// A set of bilinear terms Σ P_ab τ_a·τ_b = 0, stored with a ≤ b.
struct HirotaEquation {
    std::map<std::pair<int, int>, HirotaOperator> blocks;
    /// A single τ (twisted case): the only block is (0, 0) and prints as τ·τ.
    bool single_tau = false;

    bool is_zero() const;
    /// Adds P τ_a·τ_b, moving it to a ≤ b by the sign flip; odd parts of
    /// diagonal blocks are dropped.
    void add(int a, int b, const HirotaOperator& P);
    HirotaEquation scaled(const LevelScalar& c) const;
    /// Scaled so the leading term has coefficient 1 (leading: largest Hirota
    /// degree, then largest exponent of the earliest Hirota symbol).
    HirotaEquation normalized() const;
    HirotaEquation specialize(const BigRational& k0) const;

    std::string to_latex() const;
    std::string to_string() const;

    friend bool operator==(const HirotaEquation& a, const HirotaEquation& b);
};

/// Which variables survive at the point where an equation is read off.
///
/// Prefactor coordinates with index above mult_max and bar coordinates above
/// bar_max / tbar_max are set to zero.
struct ExtractionWindow {
    int mult_max = 3;
    int bar_max = 3;
    int tbar_max = 3;
    /// Limit for t prefactors; negative means mult_max.
    int tmult_max = -1;
    /// Coordinates τ is independent of; terms differentiating them are dropped.
    std::vector<VarId> independent;

    int t_limit() const noexcept { return tmult_max < 0 ? mult_max : tmult_max; }
    /// Largest creation index that can survive at the point.
    int creation_max() const noexcept;
    /// x_i = y_i = t_i = x̄_i = ȳ_i = 0 for i ≥ 2; t̄_1 is kept.
    static ExtractionWindow reduced() { return {1, 1, 1, -1, {}}; }
    static ExtractionWindow window(int n) { return {n, n, n, -1, {}}; }

    bool admits_bar(const Monomial& bar) const;
    bool admits_prefactor(const Monomial& m) const;
};

/// Coefficient of the bar monomial in the bar-coordinate operator `op`,
/// read off at the window point: bar factors of op are matched against the
/// bar monomial and the remainder becomes Hirota symbols through the E series.
HirotaOperator extract_at(const SparsePoly& op, const Monomial& bar, const ExtractionWindow& win);

/// Ω_(0) in Hirota form, coefficient of (q′)^m (q″)^n and of the bar monomial.
/// hh_coeff replaces the ½ in front of h⊗h.
HirotaEquation extract_sector_equation(const Wakimoto& wak, int m, int n, const Monomial& bar,
                                       const ExtractionWindow& win,
                                       const LevelScalar& hh_coeff = LevelScalar::rational(1, 2));

/// The four Ω_(0) blocks of the sector before bar extraction, as operators in
/// bar coordinates (keys are the (τ_a, τ_b) pairs they act on, unordered).
std::map<std::pair<int, int>, SparsePoly> sector_blocks(const Wakimoto& wak, int m, int n, int creation_max,
                                                        int tbar_degree,
                                                        const LevelScalar& hh_coeff = LevelScalar::rational(1, 2));

/// Σ P_ab τ_a·τ_b for the family, with the q-charges dropped.
SparsePoly equation_residual(const HirotaEquation& eq, const std::map<int, SparsePoly>& tau);

/// Evaluates each equation on the family, at the window point if given, modulo
/// formal parameter degree above the family's truncation.
VerificationReport verify_equation_on_tau(const std::vector<HirotaEquation>& eqs, const TauFamily& tau,
                                          const ExtractionWindow* point = nullptr);

/// Sets every X, Y, T variable of index above mult_max to zero.
SparsePoly restrict_to_point(const SparsePoly& p, const ExtractionWindow& win);

/// Coefficient of (q′)^m(q″)^n x̄^bar of Ω_(0)(Σ τ_a⊗τ_b), computed from the
/// tensor action directly and read off at the window point.
SparsePoly direct_sector_coefficient(const Casimir& cas, const std::map<int, SparsePoly>& tau, int m, int n,
                                     const Monomial& bar, const ExtractionWindow& win);

/// Monomial in the bar families, e.g. bar_monomial({{Family::XBAR, 1, 2}}) = x̄_1².
struct BarFactor {
    Family family;
    int index;
    unsigned exp;
};
Monomial bar_monomial(std::initializer_list<BarFactor> factors);

}  // namespace wak
