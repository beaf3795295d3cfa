#pragma once

#include <deque>
#include <mutex>
#include <vector>

#include "wak/level.hpp"
#include "wak/sparse_poly.hpp"

namespace wak {

enum class HeisGen { ALPHA, GAMMA, DELTA };

const char* heis_name(HeisGen g);

/// Linear combination alpha·α + gamma·γ + delta·δ of the Heisenberg generators.
struct HeisVec {
    LevelScalar alpha, gamma, delta;

    static HeisVec of(HeisGen g);
    HeisVec operator+(const HeisVec& o) const { return {alpha + o.alpha, gamma + o.gamma, delta + o.delta}; }
    HeisVec operator-(const HeisVec& o) const { return {alpha - o.alpha, gamma - o.gamma, delta - o.delta}; }
    HeisVec scaled(const LevelScalar& s) const { return {alpha * s, gamma * s, delta * s}; }
};

/// Table of S_m(scale·t) (or of the reduced R_m, with even variables set to
/// zero), grown on demand from m·S_m = Σ_j j·t_j·S_{m−j}.
class SchurTable {
public:
    SchurTable(Family family, LevelScalar scale, int arity, bool odd_only = false);

    /// S_m; zero for m < 0.
    const SparsePoly& get(int m) const;

private:
    Family family_;
    LevelScalar scale_;
    int arity_;
    bool odd_only_;
    SparsePoly zero_;
    mutable std::mutex mu_;
    mutable std::deque<SparsePoly> table_;
};

/// S_m in the variables family_1, ..., family_m.
SparsePoly schur(int m, Family family = Family::T, int arity = 0);
/// R_m = S_m(t_1, 0, t_3, 0, ...).
SparsePoly reduced_schur(int m, Family family = Family::T, int arity = 0);

/// The untwisted Fock space B = C[x, y, t; q, 1/q] with its Heisenberg action.
class FockSpace {
public:
    explicit FockSpace(Level level);

    const Level& level() const noexcept { return level_; }

    SparsePoly heis_mode(HeisGen g, int n, const SparsePoly& v) const;
    SparsePoly heis_apply(const HeisVec& a, int n, const SparsePoly& v) const;

    LevelScalar pairing(HeisGen a, HeisGen b) const;
    LevelScalar pairing(const HeisVec& a, const HeisVec& b) const;

    /// S_m(s·t) in the T family with a single q-charge; s = ±1.
    const SparsePoly& schur_t(int m, int s) const { return s > 0 ? schur_plus_.get(m) : schur_minus_.get(m); }

private:
    Level level_;
    SchurTable schur_plus_;
    SchurTable schur_minus_;
};

/// Monomials of exactly the given weight in B with charge in [qlo, qhi],
/// charges outermost, then parts (index, family) in lexicographic order.
std::vector<Monomial> graded_basis(int weight, int qlo, int qhi, int cap = 8);

/// Same enumeration for an arbitrary list of families; odd_only families use
/// only odd indices. Charges are attached with the given arity.
std::vector<Monomial> enumerate_monomials(int weight, const std::vector<std::pair<Family, bool>>& families,
                                          int arity, std::array<int, 2> charges);

}  // namespace wak
