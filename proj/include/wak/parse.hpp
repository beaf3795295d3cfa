#pragma once

#include <string_view>

#include "wak/twisted.hpp"

namespace wak {

struct ParseOptions {
    /// Bare t, x, y name the relabelled coordinates and u, u_t, u_xxy ... name jets.
    bool pde = false;
    PdeRelabel relabel;
};

/// Parses a polynomial written with + − * / ^ and parentheses.
///
/// Identifiers: k, c = k+1, cp = (k+2)/2, cm = −k/2, and variables as printed by
/// var_name (x1, t3, du1, dw1, Dx2, xbar1, tbar1, ...). Division is allowed only
/// by expressions free of variables. Throws ConfigError on malformed input.
SparsePoly parse_poly(std::string_view text, const ParseOptions& opt = {});

}  // namespace wak
