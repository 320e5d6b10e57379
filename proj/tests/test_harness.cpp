#include <doctest.h>

#include <cmath>
#include <string>

#include <json.hpp>

#include "helpers.hpp"
#include "qweber/harness.hpp"

using namespace qweber;
using namespace qweber::testing;

TEST_CASE("csv parsing with and without a header line") {
    const SeriesMatrix plain = parse_series_csv("1.0,2.0\n0.5,1.5\n3,4\n", "test");
    CHECK(plain.days() == 3);
    CHECK(plain.dimension() == 2);
    CHECK(plain.rows[1] == Point{0.5, 1.5});

    const SeriesMatrix headed =
        parse_series_csv("asset_a,asset_b\r\n1.0,2.0\r\n0.5,1.5\r\n", "test");
    CHECK(headed.days() == 2);
    CHECK(headed.rows[0] == Point{1.0, 2.0});
}

TEST_CASE("csv errors name the offending cell") {
    CHECK_THROWS_WITH_AS(parse_series_csv("1.0,oops\n", "test"),
                         "test: parse failure at row 1, column 2",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_series_csv("1.0,2.0\n1.0,-3.0\n", "test"),
                         "test: nonpositive value at row 2, column 2",
                         std::invalid_argument);
    CHECK_THROWS_AS(parse_series_csv("1.0,2.0\n1.0\n", "test"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_series_csv("", "test"), std::invalid_argument);
}

TEST_CASE("rolling windows slide one day at a time") {
    const SeriesMatrix series = synth_generate(7, 10, 3);
    CHECK(rolling_windows(series, 5, 1.5).size() == 6);
    CHECK(rolling_windows(series, 10, 1.5).size() == 1);
    CHECK_THROWS_AS(rolling_windows(series, 11, 1.5), std::invalid_argument);
}

TEST_CASE("rolling windows merge repeated rows inside a window") {
    SeriesMatrix series;
    series.rows = {{1, 1}, {1, 1}, {2, 2}};
    const auto windows = rolling_windows(series, 3, 1.3);
    REQUIRE(windows.size() == 1);
    CHECK(windows[0].size() == 2);
    CHECK(windows[0].multiplicity(0) == doctest::Approx(2.0));
    CHECK(windows[0].total_multiplicity() == doctest::Approx(3.0));
}

TEST_CASE("synthetic series are deterministic in the seed") {
    const SeriesMatrix a = synth_generate(99, 534, 47);
    const SeriesMatrix b = synth_generate(99, 534, 47);
    const SeriesMatrix c = synth_generate(100, 534, 47);
    CHECK(a.days() == 534);
    CHECK(a.dimension() == 47);
    CHECK(a.rows == b.rows);
    CHECK(a.rows != c.rows);
    for (const Point& row : a.rows)
        for (double v : row) CHECK(v > 0.0);
}

TEST_CASE("zero volatility yields the all-ones series") {
    const SeriesMatrix flat = synth_generate(5, 4, 3, 0.0);
    for (const Point& row : flat.rows)
        for (double v : row) CHECK(v == 1.0);
}

TEST_CASE("a small sweep reproduces the protocol invariants") {
    const SeriesMatrix series = synth_generate(2024, 60, 5);
    SolverConfig config;
    const SweepReport report = run_sweep(series, {1.1, 1.5}, {5}, config);
    REQUIRE(report.cells.size() == 2);
    for (const SweepCell& cell : report.cells) {
        CHECK(cell.m == 5);
        CHECK(cell.windows_run == 56);
        // starting on a data point forces one escape per window
        CHECK(cell.escape_iters_mean >= 1.0);
        CHECK(cell.escape_iters_mean <= 4.0);
        CHECK(cell.solve_iters_mean > 0.0);
        CHECK(cell.max_rel_diff_vs_qpwa < 1e-7);
        CHECK(cell.rate_mean >= 0.0);
        CHECK(cell.rate_mean < 1.0);
    }
}

TEST_CASE("sweep reports serialize to parseable json") {
    const SeriesMatrix series = synth_generate(3, 12, 2);
    const SweepReport report = run_sweep(series, {1.3}, {4, 6}, SolverConfig{});
    const nlohmann::json parsed = nlohmann::json::parse(sweep_report_to_json(report));
    REQUIRE(parsed.at("cells").size() == 2);
    CHECK(parsed["cells"][0]["q"] == doctest::Approx(1.3));
    CHECK(parsed["cells"][0]["m"] == 4);
    CHECK(parsed["cells"][1]["m"] == 6);
    CHECK(parsed["cells"][0]["windows_run"] == 9);
    CHECK(parsed["cells"][0].contains("escape_iters_mean"));
    CHECK(parsed["cells"][0].contains("time_mean_seconds"));
}

TEST_CASE("an empty q list gives an empty report") {
    const SeriesMatrix series = synth_generate(1, 6, 2);
    const SweepReport report = run_sweep(series, {}, {3}, SolverConfig{});
    CHECK(report.cells.empty());
    CHECK(nlohmann::json::parse(sweep_report_to_json(report))["cells"].empty());
}
