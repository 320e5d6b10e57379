#pragma once

#include <vector>

#include "qweber/core.hpp"
#include "qweber/solver.hpp"

namespace qweber {

// Tail ratio ||y_(o-1) - y_(o)|| / ||y_(o-2) - y_(o)|| over the iterate
// trace, with y_(o) the final record. Returns 0 when the numerator is 0;
// throws on fewer than 3 records or a degenerate zero denominator.
double rate_estimate(const std::vector<IterationRecord>& records);

// The full ratio sequence ||y_(p+1) - y_(o)|| / ||y_(p) - y_(o)|| against
// the final iterate, truncated at the first zero denominator.
std::vector<double> rate_sequence(const std::vector<IterationRecord>& records);

// Theorem-level rate when the minimum is the data point x_k:
// ||grad D_1(x_k)|| / eta_k for q = 1, and 0 (superlinear) for 1 < q < 2.
// Requires the optimality certificate at k to hold.
double theoretical_rate_at_data_point(const WeberInstance& instance, int k,
                                      double grad_eps = 1e-9);

// Index of the first record whose cost rose above its predecessor by more
// than rel_tol * max(1, |cost|) (floating-point summation noise), or -1 if
// the trace descends monotonically.
int descent_violation_index(const std::vector<IterationRecord>& records,
                            double rel_tol = 1e-13);

}  // namespace qweber
