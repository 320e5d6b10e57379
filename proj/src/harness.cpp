#include "qweber/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qweber/diagnostics.hpp"

namespace qweber {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

bool parse_double(const std::string& text, double& out) {
    try {
        size_t consumed = 0;
        out = std::stod(text, &consumed);
        while (consumed < text.size() && std::isspace(static_cast<unsigned char>(text[consumed])))
            ++consumed;
        return consumed == text.size();
    } catch (const std::exception&) {
        return false;
    }
}

struct Stats {
    double mean = 0.0;
    double std_dev = 0.0;
};

Stats mean_std(const std::vector<double>& values) {
    Stats s;
    if (values.empty()) return s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - s.mean) * (v - s.mean);
    s.std_dev = std::sqrt(var / static_cast<double>(values.size()));
    return s;
}

}  // namespace

SeriesMatrix parse_series_csv(const std::string& text, const std::string& origin,
                              bool require_positive) {
    SeriesMatrix series;
    std::stringstream ss(text);
    std::string line;
    int line_number = 0;
    int data_row = 0;
    size_t width = 0;
    while (std::getline(ss, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        double value = 0.0;
        if (line_number == 1 && !parse_double(fields[0], value)) {
            continue;  // single header line
        }
        ++data_row;
        Point row;
        row.reserve(fields.size());
        for (size_t c = 0; c < fields.size(); ++c) {
            if (!parse_double(fields[c], value))
                throw std::invalid_argument(origin + ": parse failure at row " +
                                            std::to_string(data_row) + ", column " +
                                            std::to_string(c + 1));
            if (require_positive && !(value > 0.0))
                throw std::invalid_argument(origin + ": nonpositive value at row " +
                                            std::to_string(data_row) + ", column " +
                                            std::to_string(c + 1));
            row.push_back(value);
        }
        if (width == 0) {
            width = row.size();
        } else if (row.size() != width) {
            throw std::invalid_argument(origin + ": ragged row " +
                                        std::to_string(data_row) + " (expected " +
                                        std::to_string(width) + " columns, got " +
                                        std::to_string(row.size()) + ")");
        }
        series.rows.push_back(std::move(row));
    }
    if (series.rows.empty())
        throw std::invalid_argument(origin + ": no data rows");
    return series;
}

SeriesMatrix load_series_csv(const std::string& path, bool require_positive) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open series file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_series_csv(buffer.str(), path, require_positive);
}

SeriesMatrix synth_generate(std::uint64_t seed, int days, int dimension,
                            double volatility) {
    if (days < 1) throw std::invalid_argument("days must be >= 1");
    if (dimension < 1) throw std::invalid_argument("dimension must be >= 1");
    if (volatility < 0.0) throw std::invalid_argument("volatility must be nonnegative");
    SeriesMatrix series;
    series.rows.assign(days, Point(dimension, 1.0));
    if (volatility == 0.0) return series;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> growth(0.0, volatility);
    for (Point& row : series.rows)
        for (double& v : row) v = std::exp(growth(rng));
    return series;
}

std::vector<WeberInstance> rolling_windows(const SeriesMatrix& series, int window,
                                           double power, double merge_eps) {
    if (window < 1) throw std::invalid_argument("window size must be >= 1");
    if (window > series.days())
        throw std::invalid_argument("window size " + std::to_string(window) +
                                    " exceeds series length " +
                                    std::to_string(series.days()));
    std::vector<WeberInstance> windows;
    windows.reserve(series.days() - window + 1);
    for (int t = 0; t + window <= series.days(); ++t) {
        std::vector<Point> points(series.rows.begin() + t,
                                  series.rows.begin() + t + window);
        windows.push_back(merge_duplicates(points, power, merge_eps));
    }
    return windows;
}

SweepReport run_sweep(const SeriesMatrix& series, const std::vector<double>& q_values,
                      const std::vector<int>& m_values, const SolverConfig& config,
                      const StartRule& qpwaws_start) {
    SweepReport report;
    for (double q : q_values) {
        for (int m : m_values) {
            SweepCell cell;
            cell.q = q;
            cell.m = m;
            std::vector<double> escape_trials;
            std::vector<double> solve_iters;
            std::vector<double> rates;
            double total_time = 0.0;
            double max_rel_diff = 0.0;

            const std::vector<WeberInstance> windows =
                rolling_windows(series, m, q, config.coincidence_eps);
            int window_index = 0;
            for (const WeberInstance& instance : windows) {
                ++window_index;
                try {
                    SolverConfig waws_config = config;
                    waws_config.start = qpwaws_start;
                    const auto begin = std::chrono::steady_clock::now();
                    const SolveResult waws = solve_qpwaws(instance, waws_config);
                    const auto end = std::chrono::steady_clock::now();
                    total_time += std::chrono::duration<double>(end - begin).count();

                    if (descent_violation_index(waws.records) >= 0)
                        throw std::logic_error("non-descending trace");

                    int trials = 0;
                    for (const IterationRecord& rec : waws.records)
                        if (rec.event == Event::Escape) {
                            escape_trials.push_back(rec.backtracks);
                            trials += rec.backtracks;
                        }
                    // each escape trial counted as an iterate
                    solve_iters.push_back(waws.iterations + trials -
                                          waws.escape_events);
                    if (waws.records.size() >= 3)
                        rates.push_back(rate_estimate(waws.records));

                    SolverConfig wa_config = config;
                    wa_config.start = StartCentroid{};
                    const SolveResult wa = solve_qpwa(instance, wa_config);
                    if (wa.status == Status::Converged) {
                        const double denom = norm(wa.minimizer);
                        const double diff = distance(waws.minimizer, wa.minimizer);
                        if (denom > 0.0)
                            max_rel_diff = std::max(max_rel_diff, diff / denom);
                    }
                } catch (const std::exception& e) {
                    throw std::runtime_error("window " + std::to_string(window_index) +
                                             " (q=" + std::to_string(q) +
                                             ", m=" + std::to_string(m) +
                                             "): " + e.what());
                }
            }

            const Stats esc = mean_std(escape_trials);
            const Stats iters = mean_std(solve_iters);
            const Stats rate = mean_std(rates);
            cell.escape_iters_mean = esc.mean;
            cell.escape_iters_std = esc.std_dev;
            cell.solve_iters_mean = iters.mean;
            cell.solve_iters_std = iters.std_dev;
            cell.rate_mean = rate.mean;
            cell.rate_std = rate.std_dev;
            cell.windows_run = static_cast<int>(windows.size());
            cell.time_mean_seconds =
                windows.empty() ? 0.0 : total_time / static_cast<double>(windows.size());
            cell.max_rel_diff_vs_qpwa = max_rel_diff;
            report.cells.push_back(cell);
        }
    }
    return report;
}

std::string sweep_report_to_json(const SweepReport& report) {
    nlohmann::json cells = nlohmann::json::array();
    for (const SweepCell& c : report.cells) {
        cells.push_back({{"q", c.q},
                         {"m", c.m},
                         {"escape_iters_mean", c.escape_iters_mean},
                         {"escape_iters_std", c.escape_iters_std},
                         {"solve_iters_mean", c.solve_iters_mean},
                         {"solve_iters_std", c.solve_iters_std},
                         {"rate_mean", c.rate_mean},
                         {"rate_std", c.rate_std},
                         {"time_mean_seconds", c.time_mean_seconds},
                         {"max_rel_diff_vs_qpwa", c.max_rel_diff_vs_qpwa},
                         {"windows_run", c.windows_run}});
    }
    return nlohmann::json{{"cells", cells}}.dump(2);
}

}  // namespace qweber
