#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qweber/diagnostics.hpp"
#include "qweber/harness.hpp"
#include "qweber/oracle.hpp"
#include "qweber/solver.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitStuck = 2;
constexpr int kExitIterationCap = 3;
constexpr int kExitOracleDisagreement = 4;

std::vector<double> parse_double_list(const std::string& text, const char* flag) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            values.push_back(std::stod(field));
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(flag) + ": cannot parse '" +
                                        field + "' as a real number");
        }
    }
    if (values.empty())
        throw std::invalid_argument(std::string(flag) + ": empty list");
    return values;
}

qweber::StartRule parse_start(const std::string& text) {
    if (text == "centroid") return qweber::StartCentroid{};
    if (text.size() >= 2 && text[0] == 'x') {
        bool digits = true;
        for (size_t i = 1; i < text.size(); ++i)
            digits = digits && std::isdigit(static_cast<unsigned char>(text[i]));
        if (digits) return std::stoi(text.substr(1)) - 1;  // x1 is index 0
    }
    return qweber::Point(parse_double_list(text, "--start"));
}

void emit(const json& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("--out: cannot open " + out_path);
        out << payload.dump(2) << "\n";
    }
}

json solve_payload(const qweber::SolveResult& result, bool trace) {
    json payload{{"minimizer", result.minimizer},
                 {"cost", result.cost_at_min},
                 {"status", qweber::to_string(result.status)},
                 {"iterations", result.iterations},
                 {"escape_events", result.escape_events}};
    if (result.records.size() >= 3) {
        payload["rate_estimate"] = qweber::rate_estimate(result.records);
    } else {
        payload["rate_estimate"] = nullptr;
    }
    if (trace) {
        json records = json::array();
        for (const qweber::IterationRecord& rec : result.records) {
            json entry{{"iterate", rec.iterate},
                       {"cost", rec.cost_value},
                       {"event", qweber::to_string(rec.event)}};
            if (rec.event == qweber::Event::Escape) {
                entry["backtracks"] = rec.backtracks;
                entry["lambda_star"] = rec.lambda_star;
            }
            if (rec.coincident_index) entry["coincident_index"] = *rec.coincident_index + 1;
            records.push_back(std::move(entry));
        }
        payload["records"] = std::move(records);
        if (result.records.size() >= 3)
            payload["rate_sequence"] = qweber::rate_sequence(result.records);
    }
    return payload;
}

struct SolveArgs {
    std::string points_path;
    std::string multiplicities_path;
    double q = 1.0;
    std::string start = "centroid";
    std::string algorithm = "qpwaws";
    std::string out_path;
    bool trace = false;
    qweber::SolverConfig config;
};

int run_solve(const SolveArgs& args) {
    const qweber::SeriesMatrix points =
        qweber::load_series_csv(args.points_path, /*require_positive=*/false);
    std::vector<double> multiplicities(points.rows.size(), 1.0);
    if (!args.multiplicities_path.empty()) {
        const qweber::SeriesMatrix raw =
            qweber::load_series_csv(args.multiplicities_path);
        multiplicities.clear();
        for (const qweber::Point& row : raw.rows)
            multiplicities.insert(multiplicities.end(), row.begin(), row.end());
        if (multiplicities.size() != points.rows.size())
            throw std::invalid_argument(
                "--multiplicities: count does not match point count");
    }
    const qweber::WeberInstance instance =
        qweber::merge_duplicates(points.rows, multiplicities, args.q);

    qweber::SolverConfig config = args.config;
    config.start = parse_start(args.start);
    const qweber::SolveResult result = args.algorithm == "qpwa"
                                           ? qweber::solve_qpwa(instance, config)
                                           : qweber::solve_qpwaws(instance, config);
    emit(solve_payload(result, args.trace), args.out_path);
    switch (result.status) {
        case qweber::Status::StuckAtDataPoint: return kExitStuck;
        case qweber::Status::IterationCap: return kExitIterationCap;
        default: return kExitOk;
    }
}

struct SweepArgs {
    std::string series_path;
    std::string synth_spec;
    std::string q_list;
    std::string m_list;
    std::string start = "x1";
    std::string out_path;
    qweber::SolverConfig config;
};

int run_sweep_cmd(const SweepArgs& args) {
    qweber::SeriesMatrix series;
    if (!args.series_path.empty()) {
        series = qweber::load_series_csv(args.series_path);
    } else if (!args.synth_spec.empty()) {
        const std::vector<double> spec = parse_double_list(args.synth_spec, "--synth");
        if (spec.size() < 3 || spec.size() > 4)
            throw std::invalid_argument("--synth: expected seed,T,d[,vol]");
        const double vol = spec.size() == 4 ? spec[3] : 0.02;
        series = qweber::synth_generate(static_cast<std::uint64_t>(spec[0]),
                                        static_cast<int>(spec[1]),
                                        static_cast<int>(spec[2]), vol);
    } else {
        throw std::invalid_argument("either --series or --synth is required");
    }
    const std::vector<double> q_values = parse_double_list(args.q_list, "--q-list");
    std::vector<int> m_values;
    for (double m : parse_double_list(args.m_list, "--m-list"))
        m_values.push_back(static_cast<int>(m));

    const qweber::SweepReport report = qweber::run_sweep(
        series, q_values, m_values, args.config, parse_start(args.start));
    if (args.out_path.empty()) {
        std::cout << qweber::sweep_report_to_json(report) << "\n";
    } else {
        std::ofstream out(args.out_path);
        if (!out) throw std::invalid_argument("--out: cannot open " + args.out_path);
        out << qweber::sweep_report_to_json(report) << "\n";
    }
    return kExitOk;
}

struct OracleArgs {
    std::uint64_t seed = 7;
    int cases = 100;
    int dims = 2;
    std::string q_list = "1,1.3,1.7,1.9";
    double precision = 1e-6;
};

std::string instance_as_csv(const qweber::WeberInstance& instance) {
    std::stringstream ss;
    for (int i = 0; i < instance.size(); ++i) {
        for (int j = 0; j < instance.dimension(); ++j) {
            if (j) ss << ",";
            ss << instance.point(i)[j];
        }
        ss << "\n";
    }
    return ss.str();
}

int run_oracle_check(const OracleArgs& args) {
    if (args.dims < 1 || args.dims > 4)
        throw std::invalid_argument("--dims: grid oracle supports dimensions 1..4");
    const std::vector<double> q_values = parse_double_list(args.q_list, "--q-list");
    if (args.cases == 0) {
        std::cout << "0 cases requested: vacuous pass\n";
        return kExitOk;
    }
    std::mt19937_64 rng(args.seed);
    std::uniform_real_distribution<double> coord(0.5, 1.5);
    std::uniform_real_distribution<double> weight(0.5, 3.0);
    std::uniform_int_distribution<int> count(3, 20);
    double max_discrepancy = 0.0;
    for (int c = 0; c < args.cases; ++c) {
        const double q = q_values[c % q_values.size()];
        const int m = count(rng);
        std::vector<qweber::Point> points(m, qweber::Point(args.dims));
        std::vector<double> multiplicities(m);
        for (int i = 0; i < m; ++i) {
            for (double& v : points[i]) v = coord(rng);
            multiplicities[i] = weight(rng);
        }
        const qweber::WeberInstance instance =
            qweber::merge_duplicates(points, multiplicities, q);
        qweber::SolverConfig config;
        config.tol = 1e-12;  // push well below the 1e-9 cost slack of the check
        const qweber::SolveResult result = qweber::solve_qpwaws(instance, config);
        const qweber::Point reference =
            qweber::oracle_minimize(instance, args.precision * instance.scale());
        const double discrepancy =
            qweber::distance(result.minimizer, reference) / instance.scale();
        max_discrepancy = std::max(max_discrepancy, discrepancy);
        const double cost_slack =
            1e-9 * std::pow(instance.scale(), instance.power());
        if (discrepancy > 1e-4 ||
            result.cost_at_min > qweber::cost(instance, reference) + cost_slack) {
            std::cerr << "oracle disagreement on case " << c << " (q=" << q
                      << "), discrepancy " << discrepancy << "\n"
                      << instance_as_csv(instance);
            return kExitOracleDisagreement;
        }
    }
    std::cout << "max scale-normalized discrepancy over " << args.cases
              << " cases: " << max_discrepancy << "\n";
    return kExitOk;
}

void add_solver_flags(CLI::App* cmd, qweber::SolverConfig& config) {
    cmd->add_option("--tol", config.tol, "stopping tolerance");
    cmd->add_option("--rho", config.rho, "backtracking reduction factor in (0,1)");
    cmd->add_option("--max-iters", config.max_iters, "iteration cap");
    cmd->add_option("--max-backtracks", config.max_backtracks, "escape trial cap");
    cmd->add_option("--coincidence-eps", config.coincidence_eps,
                    "data-point coincidence threshold, relative to the diameter");
    cmd->add_option("--grad-eps", config.grad_eps, "certificate tolerance");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-th power Weber location solver with singularity handling"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "solve one instance");
    solve->add_option("--points", solve_args.points_path, "CSV of points, one per row")
        ->required();
    solve->add_option("--q", solve_args.q, "power q in [1, 2]")->required();
    solve->add_option("--multiplicities", solve_args.multiplicities_path,
                      "CSV of point multiplicities");
    solve->add_option("--start", solve_args.start, "x1 | centroid | \"v1,v2,...\"");
    solve->add_option("--algorithm", solve_args.algorithm, "qpwaws | qpwa")
        ->check(CLI::IsMember({"qpwaws", "qpwa"}));
    solve->add_option("--out", solve_args.out_path, "write JSON here instead of stdout");
    solve->add_flag("--trace", solve_args.trace, "include per-iteration records");
    add_solver_flags(solve, solve_args.config);

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep", "rolling-window protocol");
    sweep->add_option("--series", sweep_args.series_path, "CSV of daily rows");
    sweep->add_option("--synth", sweep_args.synth_spec, "seed,T,d[,vol]");
    sweep->add_option("--q-list", sweep_args.q_list, "comma-separated q values")
        ->required();
    sweep->add_option("--m-list", sweep_args.m_list, "comma-separated window sizes")
        ->required();
    sweep->add_option("--start", sweep_args.start, "qPWAWS start rule (x1 | centroid)");
    sweep->add_option("--out", sweep_args.out_path, "write JSON report here");
    add_solver_flags(sweep, sweep_args.config);

    OracleArgs oracle_args;
    CLI::App* oracle = app.add_subcommand("oracle-check",
                                          "cross-check the solver against the grid oracle");
    oracle->add_option("--seed", oracle_args.seed, "RNG seed");
    oracle->add_option("--cases", oracle_args.cases, "number of random instances");
    oracle->add_option("--dims", oracle_args.dims, "point dimension (<= 4)");
    oracle->add_option("--q-list", oracle_args.q_list, "comma-separated q values");
    oracle->add_option("--precision", oracle_args.precision,
                       "oracle grid precision, relative to the diameter");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (solve->parsed()) return run_solve(solve_args);
        if (sweep->parsed()) return run_sweep_cmd(sweep_args);
        return run_oracle_check(oracle_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
