#pragma once

#include "qmcqoi/array.hpp"

#include <functional>

namespace qmcqoi {

// Closed interval; endpoints may be infinite, NaN is rejected.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double l, double h);

    bool contains(double x) const { return lo <= x && x <= hi; }
    double width() const { return hi - lo; }
    bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

Interval iv_add(const Interval& a, const Interval& b);
Interval iv_sub(const Interval& a, const Interval& b);
Interval iv_min(const Interval& a, const Interval& b);
Interval iv_max(const Interval& a, const Interval& b);

// Corner products with the convention inf * 0 := 0.
Interval iv_mul(const Interval& a, const Interval& b);

// (-inf, +inf) when 0 lies in b, corner quotients otherwise.
Interval iv_div(const Interval& a, const Interval& b);

// Both endpoints clamped to [lo, hi].
Interval iv_clip(const Interval& a, double lo, double hi);

// Tightest interval containing x^2 for x in a.
Interval iv_square(const Interval& a);

// Lower/upper propagation functions: (mu_lo, mu_hi) of shape d_mu -> array of
// shape d_s.
using BoundFn = std::function<MultiArray(const MultiArray&, const MultiArray&)>;

// Evaluates [Cminus(lo,hi), Cplus(lo,hi)] and validates shape and ordering of
// the result, naming the offending QOI index on failure.
BoundsArray apply_bound_pair(const BoundFn& c_minus, const BoundFn& c_plus,
                             const BoundsArray& mu_bounds, const Shape& d_s);

} // namespace qmcqoi
