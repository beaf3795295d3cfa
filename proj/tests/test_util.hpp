#pragma once

#include <random>
#include <vector>

#include "wak/sparse_poly.hpp"

namespace wak::testing {

// Random polynomial with `terms` terms in the given variables, total degree < max_deg,
// integer coefficients in [-4, 4].
inline SparsePoly random_poly(std::mt19937& rng, const std::vector<VarId>& vars, int terms, int max_deg,
                              int arity = 0) {
    PolyBuilder pb(arity);
    for (int i = 0; i < terms; ++i) {
        Monomial m(arity);
        const int d = static_cast<int>(rng() % static_cast<unsigned>(max_deg));
        for (int j = 0; j < d; ++j) m.multiply_var(vars[rng() % vars.size()]);
        pb.add(m, LevelScalar(static_cast<long long>(rng() % 9) - 4));
    }
    return pb.build();
}

inline SparsePoly x(int i) { return SparsePoly::variable(var(Family::X, i)); }
inline SparsePoly y(int i) { return SparsePoly::variable(var(Family::Y, i)); }
inline SparsePoly t(int i) { return SparsePoly::variable(var(Family::T, i)); }
inline SparsePoly one() { return SparsePoly::constant(1); }

}  // namespace wak::testing
