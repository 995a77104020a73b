#pragma once

#include "qmcqoi/driver.hpp"

#include <atomic>
#include <memory>

namespace qmcqoi {

// ---------------------------------------------------------------------------
// Mean vectors / batch expected improvement
// ---------------------------------------------------------------------------

// One candidate batch: posterior mean m (length d) and a covariance factor A
// (d x d, row-major) with Sigma = A A^T.
struct QeiBatch {
    std::vector<double> mean;
    std::vector<double> cov_factor;
};

struct QeiSpec {
    std::vector<QeiBatch> batches;
    double incumbent_best = 0.0;
    unsigned dim = 1; // batch size d = sampling dimension

    void validate() const;
};

// Output i = max over batch rows of (A_i Phi^-1(x) + m_i - y*)_+ .
Integrand make_qei_integrand(const QeiSpec& spec);

// Wraps any integrand as a problem with identity bound and dependency
// functions (the QOI array is the mean array itself).
ProblemSpec make_mean_vector_problem(Integrand f, unsigned dim, Shape d_mu,
                                     std::vector<ErrorMetric> metrics,
                                     std::vector<double> alpha_s);

ProblemSpec make_qei_problem(const QeiSpec& spec, std::vector<ErrorMetric> metrics,
                             std::vector<double> alpha_s);

// d=1 fixture: A=1, m=0, y*=0, with mean E[max(Z,0)] = 1/sqrt(2 pi).
QeiSpec qei_halfnormal_preset();

// ---------------------------------------------------------------------------
// Bayesian posterior mean (ratio of expectations)
// ---------------------------------------------------------------------------

struct PosteriorSpec {
    // maps a point in (0,1)^dim to a prior draw theta in R^{n_params}
    std::function<std::vector<double>(std::span<const double>)> prior_inverse_cdf;
    // likelihood density rho(y | theta), nonnegative and finite
    std::function<double(double, std::span<const double>)> likelihood;
    std::vector<double> observations;
    unsigned dim = 1;
    unsigned n_params = 1;

    void validate() const;
};

// Mean shape (2, n_params): row 1 holds theta_k * L(theta), row 2 holds the
// likelihood product L(theta) duplicated per k; QOI k = row1_k / row2_k via
// interval division.
ProblemSpec make_posterior_mean_problem(const PosteriorSpec& spec,
                                        std::vector<ErrorMetric> metrics,
                                        std::vector<double> alpha_s);

// Prior N(0,1), likelihood N(theta,1), observations {1,1}; posterior mean 2/3.
PosteriorSpec conjugate_gaussian_preset();

// ---------------------------------------------------------------------------
// Closed/total sensitivity indices
// ---------------------------------------------------------------------------

struct SensitivitySpec {
    std::function<double(std::span<const double>)> objective; // (0,1)^nu -> R
    unsigned nu = 1;
    std::vector<std::vector<unsigned>> subsets; // 0-based input indices

    void validate() const;
};

// A sensitivity problem plus the objective-call counter used by cost_tally.
struct SensitivityProblem {
    ProblemSpec problem;
    unsigned n_subsets = 0;
    std::shared_ptr<std::atomic<std::uint64_t>> objective_calls;
};

// Mean shape (2, 3, c): slot 1 holds the closed/total Sobol' numerator
// samples, slots 2 and 3 the first and second moments of the objective at the
// x-half of each node, duplicated per (row, subset) for ownership. The node
// dimension is 2 nu. QOI shape (2, c) with values clipped into [0,1].
SensitivityProblem make_sensitivity_problem(const SensitivitySpec& spec,
                                            std::vector<ErrorMetric> metrics,
                                            std::vector<double> alpha_s);

// (1 + b t3^4) sin(t1) + a sin^2(t2) on (-pi, pi)^3.
double ishigami(double t1, double t2, double t3, double a, double b);

// Objective over (0,1)^3 with the affine map onto (-pi, pi)^3 applied.
std::function<double(std::span<const double>)> ishigami_objective(double a,
                                                                  double b);

// Singleton subsets {1}, {2}, {3} with a=7, b=0.1.
SensitivitySpec ishigami_singletons_preset();

// All 7 nonempty subsets of {1,2,3} with a=7, b=0.1.
SensitivitySpec ishigami_all_subsets_preset();

// ---------------------------------------------------------------------------
// Cost accounting
// ---------------------------------------------------------------------------

struct CostTally {
    std::uint64_t expected_objective_calls = 0;
    std::uint64_t actual_objective_calls = 0;
    // per iteration: objective calls charged to each fully shared node
    std::vector<std::uint64_t> calls_per_node;
};

// Recomputes the objective-call count implied by the run trace (2+c calls per
// fully evaluated node, fewer under masking) and checks it against the
// recorded counter; throws on mismatch.
CostTally cost_tally(const SensitivityProblem& sp, const RunReport& report);

} // namespace qmcqoi
