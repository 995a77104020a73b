#include "qmcqoi/criteria.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qmcqoi {

void ErrorMetric::validate() const {
    if (kind == MetricKind::Custom) {
        if (!custom) throw std::invalid_argument("metric: custom evaluator missing");
        return;
    }
    if (eps_abs < 0.0) throw std::invalid_argument("metric: eps_abs must be >= 0");
    if (eps_rel < 0.0 || eps_rel >= 1.0)
        throw std::invalid_argument(
            "metric: eps_rel must lie in [0,1); larger values break the metric-map "
            "(Lipschitz <= 1) requirement");
    if (eps_abs == 0.0 && eps_rel == 0.0)
        throw std::invalid_argument("metric: eps_abs and eps_rel cannot both be 0");
}

ErrorMetric abs_or_rel(double eps_abs, double eps_rel) {
    ErrorMetric m{MetricKind::AbsOrRel, eps_abs, eps_rel, {}};
    m.validate();
    return m;
}

ErrorMetric abs_and_rel(double eps_abs, double eps_rel) {
    ErrorMetric m{MetricKind::AbsAndRel, eps_abs, eps_rel, {}};
    m.validate();
    return m;
}

double h_eval(const ErrorMetric& metric, double s) {
    switch (metric.kind) {
    case MetricKind::AbsOrRel:
        return std::max(metric.eps_abs, std::fabs(s) * metric.eps_rel);
    case MetricKind::AbsAndRel:
        return std::min(metric.eps_abs, std::fabs(s) * metric.eps_rel);
    case MetricKind::Custom:
        return metric.custom(s);
    }
    return 0.0;
}

bool check_metric_map(const ErrorMetric& metric, double a, double b,
                      unsigned grid_size) {
    if (!(a < b)) throw std::invalid_argument("check_metric_map: need a < b");
    if (grid_size < 2) throw std::invalid_argument("check_metric_map: grid_size >= 2");
    std::vector<double> s(grid_size), h(grid_size);
    for (unsigned i = 0; i < grid_size; ++i) {
        s[i] = a + (b - a) * double(i) / double(grid_size - 1);
        h[i] = h_eval(metric, s[i]);
        if (!std::isfinite(h[i]))
            throw std::runtime_error("metric evaluated to a non-finite value");
    }
    for (unsigned i = 0; i < grid_size; ++i)
        for (unsigned j = i + 1; j < grid_size; ++j)
            if (std::fabs(h[i] - h[j]) > std::fabs(s[i] - s[j]) * (1.0 + 1e-12))
                return false;
    return true;
}

bool stopping_met(double s_lo, double s_hi, const ErrorMetric& metric) {
    if (std::isnan(s_lo) || std::isnan(s_hi) || s_lo > s_hi)
        throw std::invalid_argument("stopping_met: invalid bounds");
    if (std::isinf(s_lo) || std::isinf(s_hi)) return false;
    return s_hi - s_lo <= h_eval(metric, s_lo) + h_eval(metric, s_hi);
}

double optimal_estimate(double s_lo, double s_hi, const ErrorMetric& metric) {
    if (!(std::isfinite(s_lo) && std::isfinite(s_hi)) || s_lo > s_hi)
        throw std::runtime_error("optimal_estimate: requires finite bounds");
    return 0.5 * (s_lo + s_hi + h_eval(metric, s_lo) - h_eval(metric, s_hi));
}

} // namespace qmcqoi
