#pragma once

#include <optional>
#include <string>

#include "wak/level_scalar.hpp"

namespace wak {

/// The level k: either the symbol itself or a fixed rational value.
///
/// Every realization takes its scalars (k, c = k+1, c_± = (1±c)/2, 1/(k+2))
/// from here, so the same code runs symbolically or at a specialization.
class Level {
public:
    static Level symbolic();
    static Level at(const BigRational& k0);

    bool is_symbolic() const noexcept { return !value_.has_value(); }
    const std::optional<BigRational>& value() const noexcept { return value_; }

    const LevelScalar& k() const noexcept { return k_; }
    const LevelScalar& c() const noexcept { return c_; }
    const LevelScalar& c_plus() const noexcept { return c_plus_; }
    const LevelScalar& c_minus() const noexcept { return c_minus_; }
    /// 1/(k+2); throws PoleAtSpecialization at k = -2.
    LevelScalar inv_k_plus_2() const;

    /// Evaluates a symbolic expression at this level (identity when symbolic).
    LevelScalar lift(const LevelScalar& expr) const;

    /// "symbolic" or "k=<value>".
    std::string label() const;

private:
    explicit Level(std::optional<BigRational> v);

    std::optional<BigRational> value_;
    LevelScalar k_, c_, c_plus_, c_minus_;
};

}  // namespace wak
