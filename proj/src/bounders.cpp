#include "qmcqoi/bounders.hpp"
#include "qmcqoi/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qmcqoi {

namespace {

void check_eval(double x, std::uint64_t offset) {
    if (!std::isfinite(x))
        throw std::runtime_error("integrand evaluation " + std::to_string(offset) +
                                 " is not finite");
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("bounds: alpha must lie in (0,1)");
}

void check_inflation(double c) {
    if (!(c >= 1.0)) throw std::domain_error("bounds: inflation must be >= 1");
}

} // namespace

void BounderConfig::validate() const {
    check_inflation(inflation);
    if (kind == BounderKind::Replications && replications < 2)
        throw std::invalid_argument("bounder: replications requires R >= 2");
}

void CltState::update(std::span<const double> evals) {
    for (std::size_t i = 0; i < evals.size(); ++i) {
        check_eval(evals[i], i);
        sum.add(evals[i]);
        sum_sq.add(evals[i] * evals[i]);
    }
    n += evals.size();
}

void CltState::update(double eval) { update(std::span<const double>(&eval, 1)); }

double CltState::mean() const {
    if (n == 0) throw std::runtime_error("CltState: no samples");
    return sum.value() / double(n);
}

double CltState::stddev() const {
    if (n < 2) throw std::runtime_error("CltState: need n >= 2 for a deviation");
    const double m = mean();
    const double var = (sum_sq.value() - double(n) * m * m) / double(n - 1);
    return std::sqrt(std::max(0.0, var));
}

void RepState::update(unsigned r, std::span<const double> evals) {
    if (r >= sums.size()) throw std::out_of_range("RepState: replicate index");
    for (std::size_t i = 0; i < evals.size(); ++i) {
        check_eval(evals[i], i);
        sums[r].add(evals[i]);
    }
    if (r == sums.size() - 1) n_per_replicate += evals.size();
}

std::vector<double> RepState::replicate_means() const {
    std::vector<double> means(sums.size());
    for (std::size_t r = 0; r < sums.size(); ++r)
        means[r] = sums[r].value() / double(n_per_replicate);
    return means;
}

Interval clt_bounds(const CltState& state, double alpha, double inflation) {
    check_alpha(alpha);
    check_inflation(inflation);
    if (state.n < 2)
        throw std::runtime_error("clt_bounds: insufficient data (n < 2)");
    const double m = state.mean();
    const double z = normal_quantile(1.0 - 0.5 * alpha);
    const double half = inflation * z * state.stddev() / std::sqrt(double(state.n));
    return {m - half, m + half};
}

Interval rep_bounds(const RepState& state, double alpha, double inflation) {
    check_alpha(alpha);
    check_inflation(inflation);
    const unsigned R = state.replications();
    if (R < 2)
        throw std::runtime_error("rep_bounds: insufficient replicates (R < 2)");
    if (state.n_per_replicate == 0)
        throw std::runtime_error("rep_bounds: no samples");
    const auto means = state.replicate_means();
    double m = 0.0;
    for (double v : means) m += v;
    m /= double(R);
    double ss = 0.0;
    for (double v : means) ss += (v - m) * (v - m);
    const double sd = std::sqrt(std::max(0.0, ss / double(R - 1)));
    const double t = t_quantile(1.0 - 0.5 * alpha, R - 1);
    const double half = inflation * t * sd / std::sqrt(double(R));
    return {m - half, m + half};
}

} // namespace qmcqoi
