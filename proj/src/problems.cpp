#include "qmcqoi/problems.hpp"
#include "qmcqoi/stats.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qmcqoi {

namespace {

constexpr double kPi = std::numbers::pi;

MultiArray copy_of(const MultiArray& a) { return a; }

} // namespace

// ---------------------------------------------------------------------------
// Mean vectors / qEI
// ---------------------------------------------------------------------------

void QeiSpec::validate() const {
    if (dim == 0) throw std::invalid_argument("qei: dim must be >= 1");
    if (batches.empty()) throw std::invalid_argument("qei: no candidate batches");
    for (const auto& b : batches) {
        if (b.mean.size() != dim || b.cov_factor.size() != std::size_t(dim) * dim)
            throw std::invalid_argument("qei: batch mean/covariance shape mismatch");
        for (double v : b.cov_factor)
            if (!std::isfinite(v))
                throw std::invalid_argument("qei: non-finite covariance factor");
    }
}

Integrand make_qei_integrand(const QeiSpec& spec) {
    spec.validate();
    return [spec](std::span<const double> x, const FlagArray& skip, MultiArray& out) {
        const unsigned d = spec.dim;
        std::vector<double> z(d);
        for (unsigned j = 0; j < d; ++j) z[j] = normal_quantile(x[j]);
        for (std::size_t i = 0; i < spec.batches.size(); ++i) {
            if (skip.get(i)) continue;
            const auto& b = spec.batches[i];
            double best = 0.0;
            for (unsigned r = 0; r < d; ++r) {
                double y = b.mean[r];
                const double* row = b.cov_factor.data() + std::size_t(r) * d;
                for (unsigned j = 0; j < d; ++j) y += row[j] * z[j];
                best = std::max(best, y - spec.incumbent_best);
            }
            out[i] = best;
        }
    };
}

ProblemSpec make_mean_vector_problem(Integrand f, unsigned dim, Shape d_mu,
                                     std::vector<ErrorMetric> metrics,
                                     std::vector<double> alpha_s) {
    ProblemSpec p;
    p.f = std::move(f);
    p.dim = dim;
    p.d_s = d_mu;
    p.d_mu = std::move(d_mu);
    p.c_minus = [](const MultiArray& lo, const MultiArray&) { return copy_of(lo); };
    p.c_plus = [](const MultiArray&, const MultiArray& hi) { return copy_of(hi); };
    p.dependency = [](const FlagArray& b) { return b; };
    p.metrics = std::move(metrics);
    p.alpha_s = std::move(alpha_s);
    p.validate();
    return p;
}

ProblemSpec make_qei_problem(const QeiSpec& spec, std::vector<ErrorMetric> metrics,
                             std::vector<double> alpha_s) {
    return make_mean_vector_problem(make_qei_integrand(spec), spec.dim,
                                    {spec.batches.size()}, std::move(metrics),
                                    std::move(alpha_s));
}

QeiSpec qei_halfnormal_preset() {
    QeiSpec spec;
    spec.dim = 1;
    spec.incumbent_best = 0.0;
    spec.batches = {{{0.0}, {1.0}}};
    return spec;
}

// ---------------------------------------------------------------------------
// Bayesian posterior mean
// ---------------------------------------------------------------------------

void PosteriorSpec::validate() const {
    if (!prior_inverse_cdf) throw std::invalid_argument("posterior: prior sampler missing");
    if (!likelihood) throw std::invalid_argument("posterior: likelihood missing");
    if (dim == 0 || n_params == 0)
        throw std::invalid_argument("posterior: dim and n_params must be >= 1");
}

ProblemSpec make_posterior_mean_problem(const PosteriorSpec& spec,
                                        std::vector<ErrorMetric> metrics,
                                        std::vector<double> alpha_s) {
    spec.validate();
    const unsigned np = spec.n_params;
    ProblemSpec p;
    p.dim = spec.dim;
    p.d_mu = {2, np};
    p.d_s = {np};
    p.f = [spec, np](std::span<const double> x, const FlagArray& skip,
                     MultiArray& out) {
        if (skip.all()) return;
        const std::vector<double> theta = spec.prior_inverse_cdf(x);
        if (theta.size() != np)
            throw std::runtime_error("posterior: prior sampler returned wrong size");
        double like = 1.0;
        for (double y : spec.observations) {
            const double v = spec.likelihood(y, theta);
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::runtime_error("posterior: likelihood must be finite and >= 0");
            like *= v;
        }
        for (unsigned k = 0; k < np; ++k) {
            if (!skip.get(k)) out[k] = theta[k] * like;
            if (!skip.get(np + k)) out[np + k] = like;
        }
    };
    p.c_minus = [np](const MultiArray& lo, const MultiArray& hi) {
        MultiArray out(Shape{np});
        for (unsigned k = 0; k < np; ++k)
            out[k] = iv_div({lo[k], hi[k]}, {lo[np + k], hi[np + k]}).lo;
        return out;
    };
    p.c_plus = [np](const MultiArray& lo, const MultiArray& hi) {
        MultiArray out(Shape{np});
        for (unsigned k = 0; k < np; ++k)
            out[k] = iv_div({lo[k], hi[k]}, {lo[np + k], hi[np + k]}).hi;
        return out;
    };
    p.dependency = [np](const FlagArray& b) {
        FlagArray out(Shape{2, np});
        for (unsigned k = 0; k < np; ++k) {
            out.set(k, b.get(k));
            out.set(np + k, b.get(k));
        }
        return out;
    };
    p.metrics = std::move(metrics);
    p.alpha_s = std::move(alpha_s);
    p.validate();
    return p;
}

PosteriorSpec conjugate_gaussian_preset() {
    PosteriorSpec spec;
    spec.dim = 1;
    spec.n_params = 1;
    spec.observations = {1.0, 1.0};
    spec.prior_inverse_cdf = [](std::span<const double> x) {
        return std::vector<double>{normal_quantile(x[0])};
    };
    spec.likelihood = [](double y, std::span<const double> theta) {
        const double r = y - theta[0];
        return std::exp(-0.5 * r * r) / std::sqrt(2.0 * kPi);
    };
    return spec;
}

// ---------------------------------------------------------------------------
// Sensitivity indices
// ---------------------------------------------------------------------------

void SensitivitySpec::validate() const {
    if (!objective) throw std::invalid_argument("sensitivity: objective missing");
    if (nu == 0) throw std::invalid_argument("sensitivity: nu must be >= 1");
    if (subsets.empty()) throw std::invalid_argument("sensitivity: no subsets");
    for (const auto& u : subsets) {
        if (u.empty()) throw std::invalid_argument("sensitivity: empty subset");
        for (unsigned j : u)
            if (j >= nu)
                throw std::invalid_argument("sensitivity: subset index out of range");
    }
}

namespace {

// Which objective evaluations a node needs under the given mean mask.
// Mean layout (2, 3, c): flat index i*3c + t*c + j with row i (closed/total),
// slot t (0 numerator, 1 first moment, 2 second moment), subset j.
struct SensitivityNeeds {
    bool x = false;
    bool z = false;
    std::vector<char> mix; // per subset

    SensitivityNeeds(const FlagArray& skip, unsigned c) : mix(c, 0) {
        for (unsigned j = 0; j < c; ++j) {
            const bool closed = !skip.get(0 * 3 * c + 0 * c + j);
            const bool total = !skip.get(1 * 3 * c + 0 * c + j);
            if (closed || total) {
                mix[j] = 1;
                z = true;
            }
            if (closed) x = true;
            for (unsigned i = 0; i < 2; ++i)
                for (unsigned t = 1; t <= 2; ++t)
                    if (!skip.get(i * 3 * c + t * c + j)) x = true;
        }
    }

    std::uint64_t calls() const {
        std::uint64_t n = (x ? 1 : 0) + (z ? 1 : 0);
        for (char m : mix) n += m;
        return n;
    }
};

} // namespace

SensitivityProblem make_sensitivity_problem(const SensitivitySpec& spec,
                                            std::vector<ErrorMetric> metrics,
                                            std::vector<double> alpha_s) {
    spec.validate();
    const unsigned nu = spec.nu;
    const unsigned c = unsigned(spec.subsets.size());
    auto calls = std::make_shared<std::atomic<std::uint64_t>>(0);

    ProblemSpec p;
    p.dim = 2 * nu;
    p.d_mu = {2, 3, c};
    p.d_s = {2, c};

    const auto objective = spec.objective;
    const auto subsets = spec.subsets;
    p.f = [objective, subsets, nu, c, calls](std::span<const double> node,
                                             const FlagArray& skip, MultiArray& out) {
        const SensitivityNeeds need(skip, c);
        const std::span<const double> x = node.subspan(0, nu);
        const std::span<const double> z = node.subspan(nu, nu);
        auto call = [&](std::span<const double> t) {
            calls->fetch_add(1, std::memory_order_relaxed);
            return objective(t);
        };
        const double phi_x = need.x ? call(x) : 0.0;
        const double phi_z = need.z ? call(z) : 0.0;
        std::vector<double> mixed(nu);
        for (unsigned j = 0; j < c; ++j) {
            double phi_mix = 0.0;
            if (need.mix[j]) {
                for (unsigned v = 0; v < nu; ++v) mixed[v] = z[v];
                for (unsigned v : subsets[j]) mixed[v] = x[v];
                phi_mix = call(mixed);
            }
            const std::size_t closed = 0 * 3 * c + 0 * c + j;
            const std::size_t total = 1 * 3 * c + 0 * c + j;
            if (!skip.get(closed)) out[closed] = phi_x * (phi_mix - phi_z);
            if (!skip.get(total)) out[total] = 0.5 * (phi_z - phi_mix) * (phi_z - phi_mix);
            for (unsigned i = 0; i < 2; ++i) {
                const std::size_t first = i * 3 * c + 1 * c + j;
                const std::size_t second = i * 3 * c + 2 * c + j;
                if (!skip.get(first)) out[first] = phi_x;
                if (!skip.get(second)) out[second] = phi_x * phi_x;
            }
        }
    };

    auto propagate = [c](const MultiArray& lo, const MultiArray& hi, bool upper) {
        MultiArray out(Shape{2, c});
        for (unsigned i = 0; i < 2; ++i) {
            for (unsigned j = 0; j < c; ++j) {
                const std::size_t num = std::size_t(i) * 3 * c + 0 * c + j;
                const std::size_t m1 = std::size_t(i) * 3 * c + 1 * c + j;
                const std::size_t m2 = std::size_t(i) * 3 * c + 2 * c + j;
                const Interval variance =
                    iv_sub({lo[m2], hi[m2]}, iv_square({lo[m1], hi[m1]}));
                Interval s;
                if (variance.lo > 0.0)
                    s = iv_clip(iv_div({lo[num], hi[num]}, variance), 0.0, 1.0);
                else
                    s = {0.0, 1.0}; // variance not yet resolved away from 0
                out[std::size_t(i) * c + j] = upper ? s.hi : s.lo;
            }
        }
        return out;
    };
    p.c_minus = [propagate](const MultiArray& lo, const MultiArray& hi) {
        return propagate(lo, hi, false);
    };
    p.c_plus = [propagate](const MultiArray& lo, const MultiArray& hi) {
        return propagate(lo, hi, true);
    };
    p.dependency = [c](const FlagArray& b) {
        FlagArray out(Shape{2, 3, c});
        for (unsigned i = 0; i < 2; ++i)
            for (unsigned t = 0; t < 3; ++t)
                for (unsigned j = 0; j < c; ++j)
                    out.set(std::size_t(i) * 3 * c + std::size_t(t) * c + j,
                            b.get(std::size_t(i) * c + j));
        return out;
    };
    p.metrics = std::move(metrics);
    p.alpha_s = std::move(alpha_s);
    p.validate();
    return {std::move(p), c, calls};
}

double ishigami(double t1, double t2, double t3, double a, double b) {
    const double s2 = std::sin(t2);
    return (1.0 + b * t3 * t3 * t3 * t3) * std::sin(t1) + a * s2 * s2;
}

std::function<double(std::span<const double>)> ishigami_objective(double a,
                                                                  double b) {
    return [a, b](std::span<const double> x) {
        return ishigami(-kPi + 2.0 * kPi * x[0], -kPi + 2.0 * kPi * x[1],
                        -kPi + 2.0 * kPi * x[2], a, b);
    };
}

SensitivitySpec ishigami_singletons_preset() {
    SensitivitySpec spec;
    spec.nu = 3;
    spec.objective = ishigami_objective(7.0, 0.1);
    spec.subsets = {{0}, {1}, {2}};
    return spec;
}

SensitivitySpec ishigami_all_subsets_preset() {
    SensitivitySpec spec;
    spec.nu = 3;
    spec.objective = ishigami_objective(7.0, 0.1);
    spec.subsets = {{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
    return spec;
}

// ---------------------------------------------------------------------------
// Cost accounting
// ---------------------------------------------------------------------------

CostTally cost_tally(const SensitivityProblem& sp, const RunReport& report) {
    CostTally tally;
    tally.actual_objective_calls = sp.objective_calls->load();
    for (const auto& rec : report.trace) {
        const SensitivityNeeds need(rec.mu_mask, sp.n_subsets);
        const std::uint64_t per_node = need.calls();
        const std::uint64_t nodes =
            (rec.n_end - rec.n_start + 1) * report.sequences_used;
        tally.calls_per_node.push_back(per_node);
        tally.expected_objective_calls += per_node * nodes;
    }
    if (tally.expected_objective_calls != tally.actual_objective_calls)
        throw std::runtime_error(
            "cost tally mismatch: expected " +
            std::to_string(tally.expected_objective_calls) + " objective calls, " +
            "recorded " + std::to_string(tally.actual_objective_calls));
    return tally;
}

} // namespace qmcqoi
