#pragma once

#include <functional>

namespace qmcqoi {

enum class MetricKind { AbsOrRel, AbsAndRel, Custom };

// Error metric h(s): the per-QOI tolerance as a function of the QOI value.
// Built-in kinds are metric maps (Lipschitz constant <= 1) by construction
// when eps_rel < 1; custom evaluators must pass check_metric_map before use.
struct ErrorMetric {
    MetricKind kind = MetricKind::AbsOrRel;
    double eps_abs = 0.0;
    double eps_rel = 0.0;
    std::function<double(double)> custom;

    void validate() const;
};

ErrorMetric abs_or_rel(double eps_abs, double eps_rel = 0.0);
ErrorMetric abs_and_rel(double eps_abs, double eps_rel);

// abs-or-rel: max(eps_abs, |s| eps_rel); abs-and-rel: min(eps_abs, |s| eps_rel).
double h_eval(const ErrorMetric& metric, double s);

// True iff |h(s1)-h(s2)| <= |s1-s2| (1 + 1e-12) over all grid pairs on [a,b].
bool check_metric_map(const ErrorMetric& metric, double a, double b,
                      unsigned grid_size);

// True iff s_hi - s_lo <= h(s_lo) + h(s_hi); infinite endpoints never satisfy.
bool stopping_met(double s_lo, double s_hi, const ErrorMetric& metric);

// (s_lo + s_hi + h(s_lo) - h(s_hi)) / 2; requires finite endpoints.
double optimal_estimate(double s_lo, double s_hi, const ErrorMetric& metric);

} // namespace qmcqoi
