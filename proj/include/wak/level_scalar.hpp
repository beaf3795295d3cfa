#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include <boost/container/small_vector.hpp>

#include "wak/big_rational.hpp"

namespace wak {

/// Element of Q(k): a reduced quotient of polynomials in the level k.
///
/// Canonical form: numerator and denominator coprime, denominator monic.
/// A denominator of degree zero is folded into the numerator, so polynomial
/// values carry an empty denominator and take the fast arithmetic paths.
class LevelScalar {
public:
    using Coeffs = boost::container::small_vector<BigRational, 3>;

    LevelScalar() = default;
    LevelScalar(const BigRational& c) : c_(c) {}                   // NOLINT(implicit)
    LevelScalar(BigRational&& c) noexcept : c_(std::move(c)) {}    // NOLINT(implicit)
    LevelScalar(long long c) : c_(c) {}                            // NOLINT(implicit)
    LevelScalar(int c) : c_(c) {}                                  // NOLINT(implicit)

    /// The level parameter k itself.
    static LevelScalar k();
    /// Coefficients are listed from the constant term upward.
    static LevelScalar from_coeffs(Coeffs num, Coeffs den = {});
    static LevelScalar rational(long long n, long long d) { return LevelScalar(BigRational(n, d)); }

    bool is_zero() const noexcept { return !rep_ && c_.is_zero(); }
    bool is_one() const noexcept { return !rep_ && c_.is_one(); }
    bool is_constant() const noexcept { return !rep_; }
    /// Valid only when is_constant().
    const BigRational& constant_value() const noexcept { return c_; }
    bool has_denominator() const noexcept { return rep_ && !rep_->den.empty(); }

    Coeffs numerator() const;
    /// Empty means the denominator is 1.
    Coeffs denominator() const;

    LevelScalar operator-() const;
    LevelScalar inverse() const;
    LevelScalar& operator+=(const LevelScalar& b);
    LevelScalar& operator-=(const LevelScalar& b);
    LevelScalar& operator*=(const LevelScalar& b);
    LevelScalar& operator/=(const LevelScalar& b);

    friend LevelScalar operator+(const LevelScalar& a, const LevelScalar& b);
    friend LevelScalar operator-(const LevelScalar& a, const LevelScalar& b);
    friend LevelScalar operator*(const LevelScalar& a, const LevelScalar& b);
    friend LevelScalar operator/(const LevelScalar& a, const LevelScalar& b);
    friend bool operator==(const LevelScalar& a, const LevelScalar& b);

    /// Exact value at k = k0; throws PoleAtSpecialization if the denominator vanishes there.
    BigRational specialize(const BigRational& k0) const;

    std::string to_string() const;
    std::string to_latex() const;
    std::size_t hash() const noexcept;

private:
    // Nonconstant values: numerator of degree >= 1 or a monic denominator of degree >= 1.
    struct Rep {
        Coeffs num;
        Coeffs den;
    };

    static LevelScalar normalized(Coeffs num, Coeffs den);

    BigRational c_;
    std::shared_ptr<const Rep> rep_;
};

}  // namespace wak
