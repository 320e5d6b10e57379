#include "qweber/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qweber {

namespace {
constexpr int kGridPerAxis = 11;
constexpr double kShrink = 0.3;
}  // namespace

Point oracle_minimize(const WeberInstance& instance, double precision) {
    const int d = instance.dimension();
    if (d > 4)
        throw std::invalid_argument("grid oracle supports dimension <= 4, got " +
                                    std::to_string(d));
    if (!(precision > 0.0)) throw std::invalid_argument("precision must be positive");

    Point lo(d, std::numeric_limits<double>::infinity());
    Point hi(d, -std::numeric_limits<double>::infinity());
    for (const Point& p : instance.points())
        for (int j = 0; j < d; ++j) {
            lo[j] = std::min(lo[j], p[j]);
            hi[j] = std::max(hi[j], p[j]);
        }
    const Point box_lo = lo, box_hi = hi;

    Point best = instance.point(0);
    double best_cost = cost(instance, best);

    auto side = [](const Point& a, const Point& b) {
        double s = 0.0;
        for (size_t j = 0; j < a.size(); ++j) s = std::max(s, b[j] - a[j]);
        return s;
    };

    while (side(lo, hi) >= precision) {
        // evaluate the full 11^d grid of the current box
        std::vector<int> idx(d, 0);
        Point candidate(d);
        Point level_best = best;
        double level_best_cost = std::numeric_limits<double>::infinity();
        while (true) {
            for (int j = 0; j < d; ++j) {
                const double t = static_cast<double>(idx[j]) / (kGridPerAxis - 1);
                candidate[j] = lo[j] + t * (hi[j] - lo[j]);
            }
            const double c = cost(instance, candidate);
            if (c < level_best_cost) {
                level_best_cost = c;
                level_best = candidate;
            }
            int j = 0;
            for (; j < d; ++j) {
                if (++idx[j] < kGridPerAxis) break;
                idx[j] = 0;
            }
            if (j == d) break;
        }
        if (level_best_cost < best_cost) {
            best_cost = level_best_cost;
            best = level_best;
        }
        // recenter a 0.3x box on the best point, clipped to the original box
        for (int j = 0; j < d; ++j) {
            const double half = 0.5 * kShrink * (hi[j] - lo[j]);
            lo[j] = std::max(box_lo[j], best[j] - half);
            hi[j] = std::min(box_hi[j], best[j] + half);
        }
    }

    // data-point pass: grid points rarely land exactly on singular minima
    for (int i = 0; i < instance.size(); ++i) {
        const double c = cost(instance, instance.point(i));
        if (c < best_cost) {
            best_cost = c;
            best = instance.point(i);
        }
    }
    return best;
}

Point finite_difference_gradient(const WeberInstance& instance, const Point& y,
                                 double h) {
    if (!(h > 0.0)) throw std::invalid_argument("step h must be positive");
    if (static_cast<int>(y.size()) != instance.dimension())
        throw std::invalid_argument("point dimension mismatch");
    for (const Point& p : instance.points())
        if (distance(y, p) < 10.0 * h)
            throw std::invalid_argument(
                "point is too close to a data point for finite differences");
    Point g(y.size(), 0.0);
    for (size_t j = 0; j < y.size(); ++j) {
        Point plus = y, minus = y;
        plus[j] += h;
        minus[j] -= h;
        g[j] = (cost(instance, plus) - cost(instance, minus)) / (2.0 * h);
    }
    return g;
}

}  // namespace qweber
