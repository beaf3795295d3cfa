#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>

#include <boost/container/small_vector.hpp>

namespace wak {

/// Variable families. The declaration order is the canonical key order.
///
/// X, Y, T are the Fock coordinates; U, V, W are Hirota derivative symbols
/// paired with them; XBAR.. are the antisymmetric bar coordinates; DX.. are
/// ordinary derivative symbols in a Hirota operator; XP.. and XPP.. are the
/// primed and double-primed tensor slots; PARAM holds formal orbit parameters
/// and JET the derivatives of u in PDE forms.
enum class Family : std::uint8_t {
    X, Y, T,
    U, V, W,
    XBAR, YBAR, TBAR,
    DX, DY, DT,
    XP, YP, TP,
    XPP, YPP, TPP,
    PARAM,
    JET,
};

inline constexpr int kFamilyCount = 20;

const char* family_name(Family f);

struct VarId {
    Family family = Family::X;
    int index = 1;

    std::uint32_t code() const { return (std::uint32_t(family) << 16) | std::uint32_t(index); }
    static VarId from_code(std::uint32_t code) {
        return VarId{static_cast<Family>(code >> 16), static_cast<int>(code & 0xffffu)};
    }
    friend bool operator==(const VarId&, const VarId&) = default;
    friend auto operator<=>(const VarId& a, const VarId& b) { return a.code() <=> b.code(); }
};

inline VarId var(Family f, int index) { return VarId{f, index}; }

struct VarPower {
    std::uint32_t code;
    std::uint32_t exp;

    VarId id() const { return VarId::from_code(code); }
    std::uint64_t key() const { return (std::uint64_t(code) << 32) | exp; }
};

/// Power product of variables together with up to two q-charges.
class Monomial {
public:
    using Vars = boost::container::small_vector<VarPower, 4>;

    Monomial() = default;
    explicit Monomial(int arity) : arity_(static_cast<std::uint8_t>(arity)) {}

    static Monomial of(VarId v, unsigned exp = 1, int arity = 0);
    static Monomial charged(int arity, int q0, int q1 = 0);

    int arity() const noexcept { return arity_; }
    int charge(int slot) const noexcept { return charges_[slot]; }
    const std::array<int, 2>& charges() const noexcept { return charges_; }
    void set_charge(int slot, int q) noexcept { charges_[slot] = q; }
    /// Reinterprets the charge list length; the charges themselves are kept.
    void set_arity(int arity) noexcept { arity_ = static_cast<std::uint8_t>(arity); }

    const Vars& vars() const noexcept { return vars_; }
    bool has_vars() const noexcept { return !vars_.empty(); }
    unsigned exponent(VarId v) const noexcept;
    /// Sum of index times multiplicity over all variables except PARAM and JET.
    int weight() const noexcept;
    int degree() const noexcept;
    int degree_in(Family f) const noexcept;

    /// Multiplies in v^exp (exp may be zero).
    void multiply_var(VarId v, unsigned exp = 1);
    /// Lowers the exponent of v by one; returns the old exponent (0 if absent, then unchanged).
    unsigned lower(VarId v);
    /// Drops v entirely and returns its exponent.
    unsigned remove(VarId v);

    friend Monomial operator*(const Monomial& a, const Monomial& b);

    friend bool operator==(const Monomial& a, const Monomial& b) noexcept;
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) noexcept;

    std::size_t hash() const noexcept;
    std::string to_string() const;

    /// Builds a monomial directly from sorted, zero-free var powers.
    static Monomial from_sorted(Vars vars, int arity, std::array<int, 2> charges);

private:
    Vars vars_;
    std::array<int, 2> charges_{0, 0};
    std::uint8_t arity_ = 0;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

std::string var_name(VarId v);

}  // namespace wak
