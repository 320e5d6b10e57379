#include "qweber/diagnostics.hpp"

#include <cmath>

namespace qweber {

double rate_estimate(const std::vector<IterationRecord>& records) {
    const size_t n = records.size();
    if (n < 3) throw std::invalid_argument("rate_estimate needs at least 3 records");
    const Point& last = records[n - 1].iterate;
    const double numerator = distance(records[n - 2].iterate, last);
    if (numerator == 0.0) return 0.0;
    const double denominator = distance(records[n - 3].iterate, last);
    if (denominator == 0.0)
        throw std::invalid_argument("degenerate trace: zero denominator");
    return numerator / denominator;
}

std::vector<double> rate_sequence(const std::vector<IterationRecord>& records) {
    const size_t n = records.size();
    if (n < 3) throw std::invalid_argument("rate_sequence needs at least 3 records");
    const Point& last = records[n - 1].iterate;
    std::vector<double> ratios;
    ratios.reserve(n - 2);
    for (size_t p = 0; p + 2 < n; ++p) {
        const double denominator = distance(records[p].iterate, last);
        if (denominator == 0.0) break;
        ratios.push_back(distance(records[p + 1].iterate, last) / denominator);
    }
    return ratios;
}

double theoretical_rate_at_data_point(const WeberInstance& instance, int k,
                                      double grad_eps) {
    const MinimumCertificate cert = subgradient_certificate(instance, k, grad_eps);
    if (!cert.is_minimum)
        throw std::invalid_argument(
            "rate formula applies only when the minimum is the data point");
    if (instance.power() == 1.0) return norm(cert.subgradient) / instance.eta(k);
    return 0.0;  // superlinear for 1 < q < 2
}

int descent_violation_index(const std::vector<IterationRecord>& records,
                            double rel_tol) {
    for (size_t p = 1; p < records.size(); ++p) {
        const double prev = records[p - 1].cost_value;
        const double slack = rel_tol * std::max(1.0, std::fabs(prev));
        if (records[p].cost_value > prev + slack) return static_cast<int>(p);
    }
    return -1;
}

}  // namespace qweber
