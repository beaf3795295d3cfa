#include "wak/level.hpp"

#include "wak/errors.hpp"

namespace wak {

Level::Level(std::optional<BigRational> v) : value_(std::move(v)) {
    k_ = value_ ? LevelScalar(*value_) : LevelScalar::k();
    c_ = k_ + LevelScalar(1);
    c_plus_ = (LevelScalar(1) + c_) * LevelScalar::rational(1, 2);
    c_minus_ = (LevelScalar(1) - c_) * LevelScalar::rational(1, 2);
}

Level Level::symbolic() { return Level(std::nullopt); }

Level Level::at(const BigRational& k0) { return Level(k0); }

LevelScalar Level::inv_k_plus_2() const {
    LevelScalar d = k_ + LevelScalar(2);
    if (d.is_zero()) throw PoleAtSpecialization("1/(k+2) has a pole at k = -2");
    return d.inverse();
}

LevelScalar Level::lift(const LevelScalar& expr) const {
    if (!value_) return expr;
    return LevelScalar(expr.specialize(*value_));
}

std::string Level::label() const { return value_ ? "k=" + value_->to_string() : "symbolic"; }

}  // namespace wak
