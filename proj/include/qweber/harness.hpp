#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qweber/core.hpp"
#include "qweber/solver.hpp"

namespace qweber {

// T daily rows of d strictly positive asset price relatives.
struct SeriesMatrix {
    std::vector<Point> rows;

    int days() const { return static_cast<int>(rows.size()); }
    int dimension() const { return rows.empty() ? 0 : static_cast<int>(rows[0].size()); }
};

// Comma-separated reals, one row per line, LF or CRLF; a single leading
// header line is skipped when its first field is not numeric. Positivity is
// enforced for price-relative series; point files may hold any finite reals.
SeriesMatrix load_series_csv(const std::string& path, bool require_positive = true);
SeriesMatrix parse_series_csv(const std::string& text, const std::string& origin,
                              bool require_positive = true);

// Deterministic synthetic price relatives exp(g), g ~ N(0, volatility^2).
SeriesMatrix synth_generate(std::uint64_t seed, int days, int dimension,
                            double volatility = 0.02);

// Window t = 1..T-m+1 holds rows t..t+m-1 as data points, duplicates merged.
std::vector<WeberInstance> rolling_windows(const SeriesMatrix& series, int window,
                                           double power, double merge_eps = 1e-12);

// One (q, m) cell of the rolling-window protocol.
struct SweepCell {
    double q = 0.0;
    int m = 0;
    double escape_iters_mean = 0.0;
    double escape_iters_std = 0.0;
    double solve_iters_mean = 0.0;
    double solve_iters_std = 0.0;
    double rate_mean = 0.0;
    double rate_std = 0.0;
    double time_mean_seconds = 0.0;
    double max_rel_diff_vs_qpwa = 0.0;
    int windows_run = 0;
};

struct SweepReport {
    std::vector<SweepCell> cells;
};

// Over every window: qPWAWS from the configured start (default x_1, so the
// first iterate exercises the coincidence machinery) and the qPWA baseline
// from the centroid. Aggregates escape trials, total iterations (escape
// trials counted in), tail convergence rates, wall time, and the maximum
// relative minimizer difference over windows where qPWA converged.
SweepReport run_sweep(const SeriesMatrix& series, const std::vector<double>& q_values,
                      const std::vector<int>& m_values, const SolverConfig& config,
                      const StartRule& qpwaws_start = 0);

std::string sweep_report_to_json(const SweepReport& report);

}  // namespace qweber
