#pragma once

#include <functional>
#include <string>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "wak/level_scalar.hpp"
#include "wak/monomial.hpp"

namespace wak {

struct Term {
    Monomial mono;
    LevelScalar coeff;
};

/// Sparse polynomial with LevelScalar coefficients.
///
/// Terms are kept sorted by monomial with no zero coefficients, so equality
/// is structural. Every term carries the same q-charge arity; the zero
/// polynomial is compatible with any arity.
class SparsePoly {
public:
    SparsePoly() = default;
    explicit SparsePoly(int arity) : arity_(arity) {}

    static SparsePoly constant(const LevelScalar& c, int arity = 0);
    static SparsePoly from_monomial(Monomial m, LevelScalar c = LevelScalar(1));
    static SparsePoly variable(VarId v, int arity = 0);
    /// Sorts, merges equal monomials and drops zeros.
    static SparsePoly from_terms(std::vector<Term> terms, int arity);
    /// Caller guarantees the terms are already sorted, unique and nonzero.
    static SparsePoly from_canonical(std::vector<Term> terms, int arity);

    int arity() const noexcept { return arity_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }
    const std::vector<Term>& terms() const noexcept { return terms_; }
    auto begin() const noexcept { return terms_.begin(); }
    auto end() const noexcept { return terms_.end(); }

    LevelScalar coefficient(const Monomial& m) const;
    int max_weight() const noexcept;
    int max_degree_in(Family f) const noexcept;

    SparsePoly operator-() const;
    SparsePoly& operator+=(const SparsePoly& b);
    SparsePoly& operator-=(const SparsePoly& b);
    friend SparsePoly operator+(const SparsePoly& a, const SparsePoly& b);
    friend SparsePoly operator-(const SparsePoly& a, const SparsePoly& b);
    friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b);
    friend SparsePoly operator*(const LevelScalar& c, const SparsePoly& p) { return p.scaled(c); }
    friend bool operator==(const SparsePoly& a, const SparsePoly& b);

    SparsePoly scaled(const LevelScalar& c) const;
    /// Formal partial derivative.
    SparsePoly derive(VarId v) const;
    /// Multiplies by c·v.
    SparsePoly times_var(VarId v, const LevelScalar& c = LevelScalar(1)) const;
    SparsePoly times_monomial(const Monomial& m, const LevelScalar& c = LevelScalar(1)) const;
    /// Adds delta to the q-charge in the given slot of every term.
    SparsePoly shift_charge(int slot, int delta) const;
    /// Multiplies each term by the integer-valued function of its monomial.
    SparsePoly scale_by(const std::function<LevelScalar(const Monomial&)>& f) const;
    /// Keeps terms for which pred holds.
    SparsePoly filter(const std::function<bool(const Monomial&)>& pred) const;
    /// Applies f to every coefficient (e.g. specialization of k); zeros are dropped.
    SparsePoly map_coeffs(const std::function<LevelScalar(const LevelScalar&)>& f) const;
    /// Specializes the level to k0.
    SparsePoly specialize(const BigRational& k0) const;

    std::string to_string() const;

private:
    friend class PolyBuilder;
    std::vector<Term> terms_;
    int arity_ = 0;
};

/// Accumulates terms and produces a canonical SparsePoly.
///
/// Equal monomials are merged on insertion, so heavy cancellation never
/// materializes; only the surviving terms are sorted by build().
class PolyBuilder {
public:
    explicit PolyBuilder(int arity = 0) : arity_(arity) {}

    void add(Monomial m, LevelScalar c);
    void add(const SparsePoly& p);
    void add(const SparsePoly& p, const LevelScalar& c);
    void add_product(const SparsePoly& p, const Monomial& m, const LevelScalar& c);
    bool empty() const noexcept { return acc_.empty(); }
    SparsePoly build();

private:
    absl::flat_hash_map<Monomial, LevelScalar, MonomialHash> acc_;
    int arity_;
};

/// Raised when two polynomials of different slot counts are combined.
void check_arity(const SparsePoly& a, const SparsePoly& b);

}  // namespace wak
