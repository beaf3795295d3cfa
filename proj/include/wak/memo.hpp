#pragma once

#include <functional>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "wak/sparse_poly.hpp"

namespace wak {

/// Memoizes a family of linear operators T_lo..T_hi on monomials.
///
/// The generator maps a single monomial (coefficient 1) to its images under
/// all operators of the family at once, so batch implementations that share
/// work across modes stay efficient. Images are then reused across every
/// polynomial the family is applied to. Thread-safe.
class ModeMemo {
public:
    using Images = std::vector<SparsePoly>;
    using Generator = std::function<Images(const SparsePoly&)>;

    ModeMemo(int lo, int hi, Generator gen) : lo_(lo), hi_(hi), gen_(std::move(gen)) {}

    int lo() const noexcept { return lo_; }
    int hi() const noexcept { return hi_; }

    /// T_n v.
    SparsePoly apply(int n, const SparsePoly& v) const;
    /// T_n v for n = lo..hi.
    Images apply_all(const SparsePoly& v) const;

    std::size_t cached() const;

private:
    std::shared_ptr<const Images> images(const Monomial& m) const;

    int lo_, hi_;
    Generator gen_;
    mutable std::shared_mutex mu_;
    mutable std::unordered_map<Monomial, std::shared_ptr<const Images>, MonomialHash> cache_;
};

}  // namespace wak
