#pragma once

#include <functional>

#include "prepot/jet.hpp"

namespace prepot {

using ScalarField = std::function<cplx(const Point&)>;

/// Central-difference estimate of d^m f at `point`, independent of the jet
/// engine. Each axis uses the second-order central stencil for its exponent
/// (tensor product across axes). Steps shrink geometrically from `h` and a
/// Richardson tableau in h^2 extrapolates to zero step (Ridders' method); the
/// entry with the smallest estimated error is returned. If `f` throws
/// DomainError at the initial stencil, `h` is halved until it does not.
cplx finite_difference_oracle(const ScalarField& f, const Point& point, const MultiIndex& m,
                              double h);

/// Initial step for finite_difference_oracle: 0.02 at every degree.
double default_oracle_step(int degree);

/// Comparison metric for jet vs oracle: |a - b| / max(|b|, 1).
double oracle_relative_error(cplx jet_value, cplx oracle_value);

}  // namespace prepot
