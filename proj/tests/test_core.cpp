#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qweber/core.hpp"
#include "qweber/oracle.hpp"

using namespace qweber;
using namespace qweber::testing;

TEST_CASE("merge_duplicates folds exact copies into multiplicity") {
    const WeberInstance instance =
        merge_duplicates({{1, 2}, {1, 2}, {1, 2}}, 1.5, 0.0);
    CHECK(instance.size() == 1);
    CHECK(instance.point(0) == Point{1, 2});
    CHECK(instance.multiplicity(0) == doctest::Approx(3.0));
}

TEST_CASE("merge_duplicates leaves distinct points untouched") {
    const WeberInstance instance = merge_duplicates({{0, 0}, {1, 0}}, 1.0, 0.0);
    CHECK(instance.size() == 2);
    CHECK(instance.multiplicity(0) == 1.0);
    CHECK(instance.multiplicity(1) == 1.0);
}

TEST_CASE("merge_duplicates applies the relative threshold") {
    const WeberInstance instance =
        merge_duplicates({{0, 0}, {1e-13, 0}, {5, 0}}, 1.3, 1e-9);
    REQUIRE(instance.size() == 2);
    CHECK(instance.multiplicity(0) == doctest::Approx(2.0));
    CHECK(instance.multiplicity(1) == doctest::Approx(1.0));
}

TEST_CASE("merge_duplicates validation") {
    CHECK_THROWS_AS(merge_duplicates({}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(merge_duplicates({{0, 0}, {1}}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(merge_duplicates({{0, 0}}, {0.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(merge_duplicates({{0, 0}}, 2.5), std::invalid_argument);
}

TEST_CASE("merge_duplicates conserves total multiplicity and cost") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    std::uniform_int_distribution<int> pick(0, 4);
    std::vector<Point> base(5, Point(2));
    for (Point& p : base)
        for (double& v : p) v = coord(rng);
    std::vector<Point> raw = base;
    for (int extra = 0; extra < 4; ++extra) raw.push_back(base[pick(rng)]);

    const WeberInstance merged = merge_duplicates(raw, 1.4, 0.0);
    CHECK(merged.size() <= static_cast<int>(raw.size()));
    CHECK(merged.total_multiplicity() == doctest::Approx(raw.size()));

    // cost over the raw multiset equals cost over the merged instance
    for (int trial = 0; trial < 10; ++trial) {
        const Point y{coord(rng), coord(rng)};
        double raw_cost = 0.0;
        for (const Point& p : raw) raw_cost += std::pow(distance(y, p), 1.4);
        CHECK(cost(merged, y) == doctest::Approx(raw_cost).epsilon(1e-12));
    }
}

TEST_CASE("cost matches the worked six-point example") {
    const WeberInstance instance = table1_instance();
    CHECK(std::fabs(cost(instance, {0, 0}) - 8.2871) < 5e-4);
    CHECK(std::fabs(cost(instance, {1, 0}) - 9.4201) < 5e-4);
}

TEST_CASE("cost vanishes only at a lone data point") {
    const WeberInstance single({{3, 4}}, {2.0}, 1.5);
    CHECK(cost(single, {3, 4}) == 0.0);
    CHECK(cost(single, {3, 5}) > 0.0);
    CHECK_THROWS_AS(cost(single, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("cost is convex along segments") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    for (double q : {1.0, 1.3, 1.7, 2.0}) {
        const WeberInstance instance = random_instance(rng, 3, 8, q);
        for (int trial = 0; trial < 20; ++trial) {
            const Point y = random_point_off_data(rng, instance, 0.0);
            const Point z = random_point_off_data(rng, instance, 0.0);
            const double theta = unit(rng);
            Point blend(y.size());
            for (size_t j = 0; j < y.size(); ++j)
                blend[j] = theta * y[j] + (1.0 - theta) * z[j];
            const double bound = theta * cost(instance, y) +
                                 (1.0 - theta) * cost(instance, z) +
                                 1e-12 * std::pow(instance.scale(), q);
            CHECK(cost(instance, blend) <= bound);
        }
    }
}

TEST_CASE("gradient cancels by symmetry and handles a single point") {
    const WeberInstance pair = merge_duplicates({{-1, 0}, {1, 0}}, 1.5);
    const Point g = gradient(pair, {0, 0});
    CHECK(g[0] == doctest::Approx(0.0));
    CHECK(g[1] == doctest::Approx(0.0));

    const WeberInstance single({{0, 0}}, {1.0}, 1.0);
    const Point unit_direction = gradient(single, {2, 0});
    CHECK(unit_direction[0] == doctest::Approx(1.0));
    CHECK(unit_direction[1] == doctest::Approx(0.0));
}

TEST_CASE("gradient refuses coincident points for q < 2") {
    const WeberInstance instance = table1_instance();
    CHECK_THROWS_AS(gradient(instance, {1, 0}), SingularEvaluationError);
    const WeberInstance quadratic = merge_duplicates({{0, 0}, {2, 0}}, 2.0);
    CHECK_NOTHROW(gradient(quadratic, {0, 0}));
}

TEST_CASE("gradient matches central finite differences") {
    std::mt19937_64 rng(23);
    for (double q : {1.0, 1.3, 1.7, 1.9, 2.0}) {
        const WeberInstance instance = random_instance(rng, 3, 10, q);
        const double h = 1e-6 * instance.scale();
        for (int trial = 0; trial < 100; ++trial) {
            const Point y = random_point_off_data(rng, instance);
            const Point analytic = gradient(instance, y);
            const Point numeric = finite_difference_gradient(instance, y, h);
            Point diff(y.size());
            for (size_t j = 0; j < y.size(); ++j) diff[j] = analytic[j] - numeric[j];
            CHECK(norm(diff) < 1e-6 * norm(analytic));
        }
    }
}

TEST_CASE("coincidence_index finds the unique nearby data point") {
    const WeberInstance instance = table1_instance();
    CHECK(coincidence_index(instance, {1, 0}) == kTable1StuckIndex);
    CHECK(!coincidence_index(instance, {0.5, 0.5}));
    CHECK(coincidence_index(instance, {1 + 1e-15, 0}, 1e-12) == kTable1StuckIndex);
}

TEST_CASE("coincidence_index rejects ambiguous hits") {
    const WeberInstance tight = merge_duplicates({{0, 0}, {1e-6, 0}, {1, 0}}, 1.5, 0.0);
    CHECK_THROWS_AS(coincidence_index(tight, {5e-7, 0}, 1e-2),
                    AmbiguousCoincidenceError);
}

TEST_CASE("desingularity subgradient at the stuck point") {
    const WeberInstance instance = table1_instance();
    const Point g = desingularity_subgradient(instance, kTable1StuckIndex);
    CHECK(std::fabs(g[0] - 2.9172) < 5e-4);
    CHECK(g[1] == 0.0);  // exact cancellation by symmetry
    CHECK_THROWS_AS(desingularity_subgradient(instance, 6), std::out_of_range);
}

TEST_CASE("desingularity subgradient vanishes by symmetry and for m = 1") {
    for (double q : {1.0, 1.5, 1.9}) {
        const WeberInstance star = star_instance(q);
        CHECK(norm(desingularity_subgradient(star, kStarCenterIndex)) ==
              doctest::Approx(0.0));
    }
    const WeberInstance single({{2, 3}}, {1.0}, 1.5);
    CHECK(norm(desingularity_subgradient(single, 0)) == 0.0);
}

TEST_CASE("desingularity subgradient is the limit of the gradient minus its k-th term") {
    const WeberInstance instance = table1_instance(1.4);
    const int k = kTable1StuckIndex;
    const Point reference = desingularity_subgradient(instance, k);
    const Point direction{0.6, 0.8};  // fixed unit vector
    const double q = instance.power();
    double previous = 1e300;
    for (double t : {1e-4, 1e-6}) {
        Point y = instance.point(k);
        for (size_t j = 0; j < y.size(); ++j) y[j] += t * direction[j];
        const Point g = gradient(instance, y);
        Point residue(y.size());
        const double singular_term = q * instance.multiplicity(k) * std::pow(t, q - 1.0);
        for (size_t j = 0; j < y.size(); ++j)
            residue[j] = g[j] - reference[j] - singular_term * direction[j];
        const double discrepancy = norm(residue);
        CHECK(discrepancy < previous);
        previous = discrepancy;
    }
    CHECK(previous < 1e-5);
}

TEST_CASE("certificate accepts the q = 1 borderline minimum") {
    const WeberInstance instance =
        merge_duplicates({{-1, 0}, {1, 0}, {0, 1}, {0, 0}}, 1.0);
    const MinimumCertificate cert = subgradient_certificate(instance, 3);
    CHECK(cert.is_minimum);
    CHECK(cert.residual == doctest::Approx(0.0));
    CHECK(cert.subgradient[0] == doctest::Approx(0.0));
    CHECK(cert.subgradient[1] == doctest::Approx(-1.0));
}

TEST_CASE("certificate rejects the stuck point of the worked example") {
    const WeberInstance instance = table1_instance();
    const MinimumCertificate cert = subgradient_certificate(instance, kTable1StuckIndex);
    CHECK(!cert.is_minimum);
    CHECK(std::fabs(cert.residual - 2.9172) < 5e-4);
}

TEST_CASE("certificate accepts the star center for every q") {
    for (double q : {1.0, 1.2, 1.5, 1.9}) {
        const MinimumCertificate cert =
            subgradient_certificate(star_instance(q), kStarCenterIndex);
        CHECK(cert.is_minimum);
    }
}

TEST_CASE("certificate agrees with the grid oracle at data-point minima") {
    std::mt19937_64 rng(31);
    int hits = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double q = (trial % 2) ? 1.0 : 1.3;
        const WeberInstance instance = random_instance(rng, 2, 5, q);
        const double precision = 1e-7 * instance.scale();
        const Point minimum = oracle_minimize(instance, precision);
        for (int k = 0; k < instance.size(); ++k) {
            if (distance(minimum, instance.point(k)) <= precision) {
                CHECK(subgradient_certificate(instance, k).is_minimum);
                ++hits;
            }
        }
    }
    CHECK(hits > 0);  // q = 1 pushes minima onto data points regularly
}
