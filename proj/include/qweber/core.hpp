#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qweber {

// A point in R^d, d >= 1. All coordinates must be finite.
using Point = std::vector<double>;

// Thrown when a gradient or T1 step is evaluated at a data point with q < 2.
struct SingularEvaluationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when two data points both fall within the coincidence threshold of
// an iterate; indicates merge_eps / coincidence_eps misconfiguration.
struct AmbiguousCoincidenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double squared_distance(const Point& a, const Point& b);
double distance(const Point& a, const Point& b);
double norm(const Point& v);

// The q-th power location problem: m pairwise-distinct points x_i with
// positive multiplicities xi_i and power q in [1, 2]. Immutable after
// construction; build through merge_duplicates() so duplicates are folded
// into multiplicities.
class WeberInstance {
public:
    WeberInstance(std::vector<Point> points, std::vector<double> multiplicities,
                  double power);

    int size() const { return static_cast<int>(points_.size()); }
    int dimension() const { return static_cast<int>(points_[0].size()); }
    double power() const { return power_; }
    // Diameter of the point set; 1 when m == 1.
    double scale() const { return scale_; }

    const Point& point(int k) const { return points_.at(k); }
    double multiplicity(int k) const { return multiplicities_.at(k); }
    // eta_k = xi_k^{1/q}
    double eta(int k) const;

    const std::vector<Point>& points() const { return points_; }
    const std::vector<double>& multiplicities() const { return multiplicities_; }

    double total_multiplicity() const;
    Point weighted_centroid() const;

private:
    std::vector<Point> points_;
    std::vector<double> multiplicities_;
    double power_;
    double scale_;
};

// Fold together raw points whose pairwise distance is <= merge_eps * diameter
// (transitive closure). The representative is the multiplicity-weighted mean
// and multiplicities are summed, so total multiplicity is conserved.
WeberInstance merge_duplicates(const std::vector<Point>& raw_points,
                               const std::vector<double>& raw_multiplicities,
                               double power, double merge_eps = 1e-12);
WeberInstance merge_duplicates(const std::vector<Point>& raw_points,
                               double power, double merge_eps = 1e-12);

// C_q(y) = sum_i xi_i ||y - x_i||^q
double cost(const WeberInstance& instance, const Point& y);

// grad C_q(y) = sum_i q xi_i ||y - x_i||^{q-2} (y - x_i).
// Throws SingularEvaluationError when y coincides with a data point and
// q < 2; the caller must branch to the subgradient machinery.
Point gradient(const WeberInstance& instance, const Point& y,
               double coincidence_eps = 1e-12);

// Index (0-based) of the unique data point with ||y - x_k|| <= eps * scale,
// or nullopt. Throws AmbiguousCoincidenceError if two points match.
std::optional<int> coincidence_index(const WeberInstance& instance,
                                     const Point& y,
                                     double coincidence_eps = 1e-12);

// grad D_q(x_k) = sum_{i != k} q xi_i ||x_k - x_i||^{q-2} (x_k - x_i):
// the gradient sum with the singular k-th term removed. Zero when m == 1.
Point desingularity_subgradient(const WeberInstance& instance, int k);

// Bound on subgradient magnitude, q * sum(xi) * diameter^{q-1}; used to make
// the certificate tolerance dimensionally consistent.
double certificate_scale(const WeberInstance& instance);

// Optimality verdict at the data point x_k.
struct MinimumCertificate {
    int coincident_index = -1;
    bool is_minimum = false;
    Point subgradient;  // grad D_q(x_k)
    // q = 1: max(0, ||grad D_1|| - eta_k); 1 < q <= 2: ||grad D_q||.
    double residual = 0.0;
};

// x_k is the minimum iff 0 is a subgradient of C_q there: for q = 1 that is
// ||grad D_1(x_k)|| <= eta_k, for 1 < q <= 2 it is grad D_q(x_k) = 0, both
// tested up to grad_eps * certificate_scale.
MinimumCertificate subgradient_certificate(const WeberInstance& instance,
                                           int k, double grad_eps = 1e-9);

}  // namespace qweber
