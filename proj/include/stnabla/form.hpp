// Bilinear pairing on W-invariant virtual characters under which the Weyl
// characters are orthonormal, plus coefficient extraction in that basis.

#pragma once

#include "stnabla/character.hpp"

namespace stnabla {

// [[a, b]] = sum_w sign(w) (a * b^-)(w rho - rho), evaluated lazily: the
// convolution is only sampled at the |W| shifted points, never materialized.
Int bracket(const Character& a, const Character& b);

// Orthonormality makes the pairing of chi-basis vectors a plain dot product.
Int bracket(const NablaExpansion& a, const NablaExpansion& b);

// Coefficient of chi(la) in a; equals [[a, chi(la)]] for dominant la.
Int nabla_coefficient(const RootSystem& rs, const Character& a, const Weight& la);

}  // namespace stnabla
