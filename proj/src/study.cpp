#include "qmcqoi/study.hpp"
#include "qmcqoi/hash.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qmcqoi {

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

std::string StudyResult::slope_str() const {
    return slope_defined ? std::to_string(slope) : "undefined";
}

std::vector<StudyResult> convergence_study(
    const std::function<double(std::span<const double>)>& integrand, unsigned dim,
    double true_mean, const StudyConfig& config) {
    if (config.m_min > config.m_max || config.seeds == 0)
        throw std::invalid_argument("convergence_study: bad configuration");

    std::vector<StudyResult> results;
    for (SequenceKind kind : config.kinds) {
        StudyResult res;
        res.kind = kind;
        for (unsigned m = config.m_min; m <= config.m_max; ++m) {
            const std::uint64_t n = std::uint64_t(1) << m;
            std::vector<double> errors;
            errors.reserve(config.seeds);
            for (unsigned s = 0; s < config.seeds; ++s) {
                SequenceSpec spec;
                spec.kind = kind;
                spec.dimension = dim;
                spec.seed = splitmix64(config.base_seed + 1000003ull * s +
                                       7ull * unsigned(kind));
                spec.randomization = kind == SequenceKind::Iid
                                         ? Randomization::None
                                         : Randomization::Shift;
                const PointBlock pts = gen(spec, 1, n);
                double sum = 0.0;
                for (std::uint64_t i = 0; i < n; ++i)
                    sum += integrand(std::span<const double>(pts.row(i), dim));
                errors.push_back(std::fabs(sum / double(n) - true_mean));
            }
            res.rows.push_back({n, median(errors)});
        }
        // least squares of log(err) against log(n); zero errors leave the
        // slope undefined
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        unsigned cnt = 0;
        for (const auto& row : res.rows) {
            if (row.median_abs_error <= 0.0) continue;
            const double x = std::log2(double(row.n));
            const double y = std::log2(row.median_abs_error);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++cnt;
        }
        if (cnt >= 2) {
            res.slope = (double(cnt) * sxy - sx * sy) / (double(cnt) * sxx - sx * sx);
            res.slope_defined = true;
        }
        results.push_back(std::move(res));
    }
    return results;
}

} // namespace qmcqoi
