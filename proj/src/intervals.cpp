#include "qmcqoi/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qmcqoi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// inf * 0 := 0 so products of zero-width-at-zero intervals stay tight
double prod(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    return a * b;
}

} // namespace

Interval::Interval(double l, double h) : lo(l), hi(h) {
    if (std::isnan(l) || std::isnan(h))
        throw std::invalid_argument("interval: NaN endpoint");
    if (l > h)
        throw std::invalid_argument("interval: lo > hi");
}

Interval iv_add(const Interval& a, const Interval& b) {
    return {a.lo + b.lo, a.hi + b.hi};
}

Interval iv_sub(const Interval& a, const Interval& b) {
    return {a.lo - b.hi, a.hi - b.lo};
}

Interval iv_min(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Interval iv_max(const Interval& a, const Interval& b) {
    return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

Interval iv_mul(const Interval& a, const Interval& b) {
    const double c[4] = {prod(a.lo, b.lo), prod(a.lo, b.hi),
                         prod(a.hi, b.lo), prod(a.hi, b.hi)};
    return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

Interval iv_div(const Interval& a, const Interval& b) {
    if (b.lo <= 0.0 && 0.0 <= b.hi) return {-kInf, kInf};
    // multiply by the reciprocal interval; avoids inf/inf corner cases
    const Interval inv{std::isinf(b.hi) ? 0.0 : 1.0 / b.hi,
                       std::isinf(b.lo) ? 0.0 : 1.0 / b.lo};
    return iv_mul(a, inv);
}

Interval iv_clip(const Interval& a, double lo, double hi) {
    if (lo > hi) throw std::invalid_argument("iv_clip: lo > hi");
    return {std::clamp(a.lo, lo, hi), std::clamp(a.hi, lo, hi)};
}

Interval iv_square(const Interval& a) {
    const double l2 = prod(a.lo, a.lo), h2 = prod(a.hi, a.hi);
    if (a.lo <= 0.0 && 0.0 <= a.hi) return {0.0, std::max(l2, h2)};
    return {std::min(l2, h2), std::max(l2, h2)};
}

BoundsArray apply_bound_pair(const BoundFn& c_minus, const BoundFn& c_plus,
                             const BoundsArray& mu_bounds, const Shape& d_s) {
    MultiArray lo = c_minus(mu_bounds.lo(), mu_bounds.hi());
    MultiArray hi = c_plus(mu_bounds.lo(), mu_bounds.hi());
    if (lo.shape() != d_s || hi.shape() != d_s)
        throw std::runtime_error("bound propagation: output shape " +
                                 shape_str(lo.shape()) + "/" + shape_str(hi.shape()) +
                                 " does not match QOI shape " + shape_str(d_s));
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (std::isnan(lo[i]) || std::isnan(hi[i]))
            throw std::runtime_error("bound propagation: NaN at QOI index " +
                                     index_str(d_s, i));
        if (lo[i] > hi[i])
            throw std::runtime_error("bound propagation: lower bound exceeds upper "
                                     "bound at QOI index " + index_str(d_s, i));
    }
    return BoundsArray(std::move(lo), std::move(hi));
}

} // namespace qmcqoi
