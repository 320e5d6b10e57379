#pragma once

#include "qweber/core.hpp"

namespace qweber {

// Independent brute-force minimizer: nested grid refinement over the
// bounding box of the data points (11 samples per axis, box shrink 0.3),
// refined until the box side is below `precision`, then compared against the
// cost at every data point. Shares no Weiszfeld machinery with the solver.
// Only for dimension <= 4.
Point oracle_minimize(const WeberInstance& instance, double precision);

// Central differences per coordinate, (cost(y + h e_j) - cost(y - h e_j)) / 2h.
// Refuses points within 10h of a data point.
Point finite_difference_gradient(const WeberInstance& instance, const Point& y,
                                 double h);

}  // namespace qweber
