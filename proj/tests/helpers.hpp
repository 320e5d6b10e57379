#pragma once

#include <random>
#include <vector>

#include "qweber/core.hpp"

namespace qweber::testing {

// Six-point instance with the classic bad start (1.68645, 0): one T1 step
// lands on the data point (1, 0) while the true minimum is (0, 0).
inline WeberInstance table1_instance(double q = 1.1) {
    return merge_duplicates(
        {{-2, 0}, {-1, 0}, {1, 0}, {2, 0}, {0, 1}, {0, -1}}, q);
}
inline const Point table1_start{1.68645, 0.0};
constexpr int kTable1StuckIndex = 2;  // the data point (1, 0)

// Symmetric star with its center included; the center is the minimum for
// any q in [1, 2) (zero de-singularity subgradient by symmetry).
inline WeberInstance star_instance(double q, double center_multiplicity = 1.0) {
    return WeberInstance(
        {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {0, 0}},
        {1, 1, 1, 1, center_multiplicity}, q);
}
constexpr int kStarCenterIndex = 4;

// Price-relative-style random instance: m points near (1, ..., 1).
inline WeberInstance random_instance(std::mt19937_64& rng, int dimension, int m,
                                     double q, bool mixed_multiplicities = true) {
    std::normal_distribution<double> growth(0.0, 0.02);
    std::uniform_real_distribution<double> weight(0.5, 3.0);
    std::vector<Point> points(m, Point(dimension));
    std::vector<double> multiplicities(m, 1.0);
    for (int i = 0; i < m; ++i) {
        for (double& v : points[i]) v = std::exp(growth(rng));
        if (mixed_multiplicities) multiplicities[i] = weight(rng);
    }
    return merge_duplicates(points, multiplicities, q);
}

inline Point random_point_off_data(std::mt19937_64& rng,
                                   const WeberInstance& instance,
                                   double min_gap_rel = 1e-3) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    while (true) {
        Point candidate = instance.weighted_centroid();
        for (double& v : candidate) v += 0.5 * instance.scale() * unit(rng);
        bool clear = true;
        for (const Point& p : instance.points())
            clear = clear && distance(candidate, p) > min_gap_rel * instance.scale();
        if (clear) return candidate;
    }
}

}  // namespace qweber::testing
