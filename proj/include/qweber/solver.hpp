#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "qweber/core.hpp"

namespace qweber {

// Thrown when the escape backtracking loop exceeds its cap; the solve loop
// then re-certifies with a relaxed tolerance before giving up.
struct BacktrackCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StartCentroid {};
// start: centroid (default), an explicit point, or a data-point index.
using StartRule = std::variant<StartCentroid, Point, int>;

struct SolverConfig {
    double tol = 1e-9;
    double rho = 0.1;  // backtracking reduction factor, in (0, 1)
    int max_iters = 10000;
    int max_backtracks = 200;
    double coincidence_eps = 1e-12;
    double grad_eps = 1e-9;
    StartRule start = StartCentroid{};

    void validate() const;
};

enum class Event { T1, Escape, L1Coincidence, CertifiedMinimum, Stopped };

struct IterationRecord {
    Point iterate;
    double cost_value = 0.0;
    Event event = Event::T1;
    int backtracks = 0;       // escape events: cost evaluations used
    double lambda_star = 0.0; // escape events: accepted step length
    std::optional<int> coincident_index;
};

enum class Status { Converged, CertifiedAtDataPoint, StuckAtDataPoint, IterationCap };

struct SolveResult {
    Point minimizer;
    double cost_at_min = 0.0;
    Status status = Status::Converged;
    int iterations = 0;
    int escape_events = 0;
    std::vector<IterationRecord> records;
};

const char* to_string(Status status);
const char* to_string(Event event);

// One Weiszfeld step: the weight-normalized convex combination
// sum_i w_i x_i / sum_i w_i with w_i = xi_i ||y - x_i||^{q-2}. Weights are
// rescaled by their maximum before the quotient, so a tiny distance cannot
// overflow the sum. Throws SingularEvaluationError on a coincident y, q < 2.
Point t1_step(const WeberInstance& instance, const Point& y);

struct EscapeResult {
    Point point;
    double lambda_star = 0.0;
    int trials = 0;  // cost evaluations, accepted trial included
};

// Displace off the non-optimal singular point x_k (1 < q < 2) along
// -grad D_q(x_k), backtracking lambda from lambda_0 by rho until the cost
// strictly decreases. Throws BacktrackCapError past config.max_backtracks.
EscapeResult t2_escape(const WeberInstance& instance, int k,
                       const SolverConfig& config);

// q = 1 coincidence update: blend of the de-singularity Weiszfeld transform
// and x_k with lambda = min{1, xi_k / ||grad D_1(x_k)||}. Only valid when
// the certificate at k failed.
Point l1_coincidence_step(const WeberInstance& instance, int k);

// The full update map: T1 off data points; certify / escape / blend on them.
SolveResult solve_qpwaws(const WeberInstance& instance,
                         const SolverConfig& config = {});

// Plain Weiszfeld baseline: stops with StuckAtDataPoint when an iterate
// lands on a data point (q < 2).
SolveResult solve_qpwa(const WeberInstance& instance,
                       const SolverConfig& config = {});

}  // namespace qweber
