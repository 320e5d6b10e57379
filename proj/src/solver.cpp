#include "qweber/solver.hpp"

#include <algorithm>
#include <cmath>

namespace qweber {

void SolverConfig::validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("rho must lie in (0, 1)");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
    if (max_backtracks < 1) throw std::invalid_argument("max_backtracks must be >= 1");
    if (!(coincidence_eps > 0.0))
        throw std::invalid_argument("coincidence_eps must be positive");
    if (!(grad_eps > 0.0)) throw std::invalid_argument("grad_eps must be positive");
}

const char* to_string(Status status) {
    switch (status) {
        case Status::Converged: return "converged";
        case Status::CertifiedAtDataPoint: return "certified_at_data_point";
        case Status::StuckAtDataPoint: return "stuck_at_data_point";
        case Status::IterationCap: return "iteration_cap";
    }
    return "unknown";
}

const char* to_string(Event event) {
    switch (event) {
        case Event::T1: return "t1";
        case Event::Escape: return "escape";
        case Event::L1Coincidence: return "l1_coincidence";
        case Event::CertifiedMinimum: return "certified_minimum";
        case Event::Stopped: return "stopped";
    }
    return "unknown";
}

Point t1_step(const WeberInstance& instance, const Point& y) {
    const double q = instance.power();
    const int m = instance.size();
    const int d = instance.dimension();
    std::vector<double> weights(m);
    for (int i = 0; i < m; ++i) {
        const double dist = distance(y, instance.point(i));
        if (dist == 0.0) {
            if (q < 2.0)
                throw SingularEvaluationError(
                    "T1 step evaluated at data point index " + std::to_string(i));
            weights[i] = instance.multiplicity(i);  // q == 2: all weights xi_i
        } else {
            weights[i] = instance.multiplicity(i) * std::pow(dist, q - 2.0);
        }
    }
    // T1 is invariant to common weight scaling; normalize by the maximum so a
    // near-coincident point cannot overflow the sums.
    const double wmax = *std::max_element(weights.begin(), weights.end());
    Point next(d, 0.0);
    double wsum = 0.0;
    for (int i = 0; i < m; ++i) {
        const double w = weights[i] / wmax;
        for (int j = 0; j < d; ++j) next[j] += w * instance.point(i)[j];
        wsum += w;
    }
    for (double& c : next) c /= wsum;
    return next;
}

EscapeResult t2_escape(const WeberInstance& instance, int k,
                       const SolverConfig& config) {
    const double q = instance.power();
    if (!(q > 1.0 && q < 2.0))
        throw std::invalid_argument("t2_escape requires 1 < q < 2");
    const Point g = desingularity_subgradient(instance, k);
    const double gnorm = norm(g);
    if (gnorm == 0.0)
        throw std::logic_error("t2_escape called with a zero subgradient");
    const double xi = instance.multiplicity(k);
    double lambda = std::min(
        (1.0 / q) * std::pow(xi, -1.0 / (q - 1.0)) *
            std::pow(gnorm, (2.0 - q) / (q - 1.0)),
        1.0);
    const Point& xk = instance.point(k);
    const double reference = cost(instance, xk);
    for (int trials = 1; trials <= config.max_backtracks; ++trials) {
        Point candidate(xk);
        for (size_t j = 0; j < candidate.size(); ++j) candidate[j] -= lambda * g[j];
        if (cost(instance, candidate) < reference)
            return EscapeResult{std::move(candidate), lambda, trials};
        lambda *= config.rho;
    }
    throw BacktrackCapError("no cost-reducing step length within " +
                            std::to_string(config.max_backtracks) + " trials");
}

Point l1_coincidence_step(const WeberInstance& instance, int k) {
    if (instance.power() != 1.0)
        throw std::invalid_argument("l1_coincidence_step requires q = 1");
    const Point g = desingularity_subgradient(instance, k);
    const double gnorm = norm(g);
    const double xi = instance.multiplicity(k);
    if (gnorm <= xi)
        throw std::logic_error(
            "l1_coincidence_step called where the certificate holds");
    const Point& xk = instance.point(k);
    const int d = instance.dimension();
    Point transform(d, 0.0);
    double wsum = 0.0;
    for (int i = 0; i < instance.size(); ++i) {
        if (i == k) continue;
        const double w = instance.multiplicity(i) / distance(xk, instance.point(i));
        for (int j = 0; j < d; ++j) transform[j] += w * instance.point(i)[j];
        wsum += w;
    }
    const double lambda = std::min(1.0, xi / gnorm);
    Point next(d, 0.0);
    for (int j = 0; j < d; ++j)
        next[j] = (1.0 - lambda) * transform[j] / wsum + lambda * xk[j];
    return next;
}

namespace {

Point resolve_start(const WeberInstance& instance, const StartRule& start) {
    if (std::holds_alternative<StartCentroid>(start))
        return instance.weighted_centroid();
    if (const Point* p = std::get_if<Point>(&start)) {
        if (static_cast<int>(p->size()) != instance.dimension())
            throw std::invalid_argument("start point dimension mismatch");
        for (double c : *p)
            if (!std::isfinite(c))
                throw std::invalid_argument("non-finite start coordinate");
        return *p;
    }
    const int k = std::get<int>(start);
    if (k < 0 || k >= instance.size())
        throw std::invalid_argument("start data-point index out of range");
    return instance.point(k);
}

SolveResult run_weiszfeld(const WeberInstance& instance, const SolverConfig& config,
                          bool handle_singularity) {
    config.validate();
    const double q = instance.power();
    Point y = resolve_start(instance, config.start);
    SolveResult result;
    std::vector<char> visited(instance.size(), 0);

    auto record = [&result](Point iterate, double cost_value, Event event,
                            std::optional<int> k = std::nullopt, int backtracks = 0,
                            double lambda_star = 0.0) {
        result.records.push_back(IterationRecord{std::move(iterate), cost_value,
                                                 event, backtracks, lambda_star, k});
    };

    while (true) {
        if (q < 2.0) {
            if (auto hit = coincidence_index(instance, y, config.coincidence_eps)) {
                const int k = *hit;
                y = instance.point(k);  // snap to the clean singular point
                if (!handle_singularity) {
                    result.status = Status::StuckAtDataPoint;
                    record(y, cost(instance, y), Event::Stopped, k);
                    break;
                }
                MinimumCertificate cert =
                    subgradient_certificate(instance, k, config.grad_eps);
                if (cert.is_minimum) {
                    result.status = Status::CertifiedAtDataPoint;
                    record(y, cost(instance, y), Event::CertifiedMinimum, k);
                    break;
                }
                if (visited[k])
                    throw std::logic_error("revisited non-optimal data point " +
                                           std::to_string(k));
                visited[k] = 1;
                if (result.iterations >= config.max_iters) {
                    result.status = Status::IterationCap;
                    break;
                }
                if (q == 1.0) {
                    y = l1_coincidence_step(instance, k);
                    ++result.iterations;
                    record(y, cost(instance, y), Event::L1Coincidence, k);
                } else {
                    EscapeResult escape;
                    try {
                        escape = t2_escape(instance, k, config);
                    } catch (const BacktrackCapError&) {
                        // A subgradient norm barely above tolerance can make the
                        // theoretical step underflow; re-certify relaxed.
                        MinimumCertificate relaxed = subgradient_certificate(
                            instance, k, config.grad_eps * 1e3);
                        if (relaxed.is_minimum) {
                            result.status = Status::CertifiedAtDataPoint;
                            record(y, cost(instance, y), Event::CertifiedMinimum, k);
                            break;
                        }
                        throw;
                    }
                    y = escape.point;
                    ++result.iterations;
                    ++result.escape_events;
                    record(y, cost(instance, y), Event::Escape, k, escape.trials,
                           escape.lambda_star);
                }
                // A coincidence step only certifies non-optimality; the stop
                // test applies to the following T1 steps.
                continue;
            }
        }
        if (result.iterations >= config.max_iters) {
            result.status = Status::IterationCap;
            break;
        }
        Point next = t1_step(instance, y);
        ++result.iterations;
        record(next, cost(instance, next), Event::T1);
        const double step = distance(next, y);
        const double reference = std::max(1.0, norm(y));
        y = std::move(next);
        if (step <= config.tol * reference) {
            result.status = Status::Converged;
            break;
        }
    }

    result.minimizer = y;
    result.cost_at_min = cost(instance, y);
    return result;
}

}  // namespace

SolveResult solve_qpwaws(const WeberInstance& instance, const SolverConfig& config) {
    return run_weiszfeld(instance, config, true);
}

SolveResult solve_qpwa(const WeberInstance& instance, const SolverConfig& config) {
    return run_weiszfeld(instance, config, false);
}

}  // namespace qweber
