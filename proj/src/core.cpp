#include "qweber/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qweber {

double squared_distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

double distance(const Point& a, const Point& b) {
    return std::sqrt(squared_distance(a, b));
}

double norm(const Point& v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

namespace {

double diameter(const std::vector<Point>& points) {
    double best = 0.0;
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            best = std::max(best, distance(points[i], points[j]));
    return best;
}

void check_dimension(const WeberInstance& instance, const Point& y) {
    if (static_cast<int>(y.size()) != instance.dimension())
        throw std::invalid_argument("point dimension " + std::to_string(y.size()) +
                                    " does not match instance dimension " +
                                    std::to_string(instance.dimension()));
}

}  // namespace

WeberInstance::WeberInstance(std::vector<Point> points,
                             std::vector<double> multiplicities, double power)
    : points_(std::move(points)),
      multiplicities_(std::move(multiplicities)),
      power_(power) {
    if (points_.empty()) throw std::invalid_argument("empty point set");
    if (multiplicities_.size() != points_.size())
        throw std::invalid_argument("multiplicity count does not match point count");
    if (!(power_ >= 1.0 && power_ <= 2.0))
        throw std::invalid_argument("power q must lie in [1, 2], got " +
                                    std::to_string(power_));
    const size_t d = points_[0].size();
    if (d == 0) throw std::invalid_argument("points must have dimension >= 1");
    for (const Point& p : points_) {
        if (p.size() != d) throw std::invalid_argument("mixed point dimensions");
        for (double c : p)
            if (!std::isfinite(c))
                throw std::invalid_argument("non-finite coordinate in data point");
    }
    for (double xi : multiplicities_)
        if (!(xi > 0.0) || !std::isfinite(xi))
            throw std::invalid_argument("multiplicities must be strictly positive");
    for (size_t i = 0; i < points_.size(); ++i)
        for (size_t j = i + 1; j < points_.size(); ++j)
            if (squared_distance(points_[i], points_[j]) == 0.0)
                throw std::invalid_argument(
                    "data points must be pairwise distinct; merge duplicates first");
    scale_ = points_.size() == 1 ? 1.0 : diameter(points_);
}

double WeberInstance::eta(int k) const {
    return std::pow(multiplicities_.at(k), 1.0 / power_);
}

double WeberInstance::total_multiplicity() const {
    return std::accumulate(multiplicities_.begin(), multiplicities_.end(), 0.0);
}

Point WeberInstance::weighted_centroid() const {
    Point c(dimension(), 0.0);
    double total = 0.0;
    for (int i = 0; i < size(); ++i) {
        for (int j = 0; j < dimension(); ++j) c[j] += multiplicities_[i] * points_[i][j];
        total += multiplicities_[i];
    }
    for (double& v : c) v /= total;
    return c;
}

WeberInstance merge_duplicates(const std::vector<Point>& raw_points,
                               const std::vector<double>& raw_multiplicities,
                               double power, double merge_eps) {
    if (raw_points.empty()) throw std::invalid_argument("empty point set");
    if (raw_multiplicities.size() != raw_points.size())
        throw std::invalid_argument("multiplicity count does not match point count");
    if (merge_eps < 0.0) throw std::invalid_argument("merge_eps must be nonnegative");
    const size_t n = raw_points.size();
    const size_t d = raw_points[0].size();
    for (const Point& p : raw_points)
        if (p.size() != d) throw std::invalid_argument("mixed point dimensions");
    for (double xi : raw_multiplicities)
        if (!(xi > 0.0)) throw std::invalid_argument("multiplicities must be strictly positive");

    const double threshold = merge_eps * diameter(raw_points);

    // Union-find over the transitive closure of "distance <= threshold".
    std::vector<size_t> parent(n);
    std::iota(parent.begin(), parent.end(), size_t{0});
    auto find = [&](size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (distance(raw_points[i], raw_points[j]) <= threshold)
                parent[find(i)] = find(j);

    std::vector<Point> merged;
    std::vector<double> weights;
    std::vector<int> slot(n, -1);
    for (size_t i = 0; i < n; ++i) {
        const size_t root = find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<int>(merged.size());
            merged.emplace_back(d, 0.0);
            weights.push_back(0.0);
        }
        const int s = slot[root];
        for (size_t j = 0; j < d; ++j)
            merged[s][j] += raw_multiplicities[i] * raw_points[i][j];
        weights[s] += raw_multiplicities[i];
    }
    for (size_t s = 0; s < merged.size(); ++s)
        for (double& c : merged[s]) c /= weights[s];

    return WeberInstance(std::move(merged), std::move(weights), power);
}

WeberInstance merge_duplicates(const std::vector<Point>& raw_points, double power,
                               double merge_eps) {
    return merge_duplicates(raw_points, std::vector<double>(raw_points.size(), 1.0),
                            power, merge_eps);
}

double cost(const WeberInstance& instance, const Point& y) {
    check_dimension(instance, y);
    const double q = instance.power();
    double total = 0.0;
    for (int i = 0; i < instance.size(); ++i)
        total += instance.multiplicity(i) * std::pow(distance(y, instance.point(i)), q);
    return total;
}

Point gradient(const WeberInstance& instance, const Point& y,
               double coincidence_eps) {
    check_dimension(instance, y);
    const double q = instance.power();
    if (q < 2.0) {
        if (auto k = coincidence_index(instance, y, coincidence_eps))
            throw SingularEvaluationError(
                "gradient is undefined at data point index " + std::to_string(*k) +
                " for q < 2");
    }
    Point g(instance.dimension(), 0.0);
    for (int i = 0; i < instance.size(); ++i) {
        const double dist = distance(y, instance.point(i));
        if (dist == 0.0) continue;  // q == 2: the coincident term vanishes
        const double w = q * instance.multiplicity(i) * std::pow(dist, q - 2.0);
        for (int j = 0; j < instance.dimension(); ++j)
            g[j] += w * (y[j] - instance.point(i)[j]);
    }
    return g;
}

std::optional<int> coincidence_index(const WeberInstance& instance, const Point& y,
                                     double coincidence_eps) {
    check_dimension(instance, y);
    const double threshold = coincidence_eps * instance.scale();
    std::optional<int> hit;
    for (int i = 0; i < instance.size(); ++i) {
        if (distance(y, instance.point(i)) <= threshold) {
            if (hit)
                throw AmbiguousCoincidenceError(
                    "points " + std::to_string(*hit) + " and " + std::to_string(i) +
                    " both within the coincidence threshold");
            hit = i;
        }
    }
    return hit;
}

Point desingularity_subgradient(const WeberInstance& instance, int k) {
    if (k < 0 || k >= instance.size())
        throw std::out_of_range("data point index out of range");
    const double q = instance.power();
    const Point& xk = instance.point(k);
    Point g(instance.dimension(), 0.0);
    for (int i = 0; i < instance.size(); ++i) {
        if (i == k) continue;
        const double dist = distance(xk, instance.point(i));
        const double w = q * instance.multiplicity(i) * std::pow(dist, q - 2.0);
        for (int j = 0; j < instance.dimension(); ++j)
            g[j] += w * (xk[j] - instance.point(i)[j]);
    }
    return g;
}

double certificate_scale(const WeberInstance& instance) {
    return instance.power() * instance.total_multiplicity() *
           std::pow(instance.scale(), instance.power() - 1.0);
}

MinimumCertificate subgradient_certificate(const WeberInstance& instance, int k,
                                           double grad_eps) {
    MinimumCertificate cert;
    cert.coincident_index = k;
    cert.subgradient = desingularity_subgradient(instance, k);
    const double gnorm = norm(cert.subgradient);
    const double tolerance = grad_eps * certificate_scale(instance);
    if (instance.power() == 1.0) {
        // eta_k = xi_k when q = 1
        cert.residual = std::max(0.0, gnorm - instance.eta(k));
        cert.is_minimum = gnorm <= instance.eta(k) + tolerance;
    } else {
        cert.residual = gnorm;
        cert.is_minimum = gnorm <= tolerance;
    }
    return cert;
}

}  // namespace qweber
