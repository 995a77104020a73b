#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmcqoi/hash.hpp"
#include "qmcqoi/intervals.hpp"

#include <cmath>
#include <limits>

using namespace qmcqoi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// deterministic stream of test intervals, occasionally infinite or degenerate
Interval random_interval(std::uint64_t& ctr) {
    auto draw = [&] { return to_unit_open(splitmix64(ctr++)) * 20.0 - 10.0; };
    double a = draw(), b = draw();
    if (a > b) std::swap(a, b);
    const std::uint64_t tag = splitmix64(ctr++) % 10;
    if (tag == 0) a = -kInf;
    if (tag == 1) b = kInf;
    if (tag == 2) b = a; // point interval
    if (tag == 3) { a = 0.0; b = std::max(b, 0.0); }
    return {a, b};
}

double sample_in(const Interval& iv, double t) {
    const double lo = std::isinf(iv.lo) ? -1e3 : iv.lo;
    const double hi = std::isinf(iv.hi) ? 1e3 : iv.hi;
    return lo + (hi - lo) * t;
}

} // namespace

TEST_CASE("elementary operations") {
    CHECK(iv_add({1, 2}, {3, 4}) == Interval{4, 6});
    CHECK(iv_sub({0, 1}, {0, 1}) == Interval{-1, 1});
    CHECK(iv_min({1, 3}, {2, 2}) == Interval{1, 2});
    CHECK(iv_max({1, 3}, {2, 2}) == Interval{2, 3});
    CHECK_THROWS_AS(Interval(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(Interval(std::nan(""), 1), std::invalid_argument);
}

TEST_CASE("multiplication corner products") {
    CHECK(iv_mul({1, 2}, {-1, 3}) == Interval{-2, 6});
    CHECK(iv_mul({-1, 1}, {-1, 1}) == Interval{-1, 1});
    // inf * 0 := 0 keeps zero-width-at-zero products tight
    CHECK(iv_mul({0, 0}, {-kInf, kInf}) == Interval{0, 0});
}

TEST_CASE("division") {
    CHECK(iv_div({1, 2}, {-1, 1}) == Interval{-kInf, kInf});
    CHECK(iv_div({1, 2}, {2, 4}) == Interval{0.25, 1});
    CHECK(iv_div({0, 0}, {1, 2}) == Interval{0, 0});
    // zero at an endpoint also widens fully
    CHECK(iv_div({1, 1}, {0, 2}) == Interval{-kInf, kInf});
}

TEST_CASE("clip") {
    CHECK(iv_clip({-0.2, 1.4}, 0, 1) == Interval{0, 1});
    CHECK(iv_clip({0.3, 0.6}, 0, 1) == Interval{0.3, 0.6});
    CHECK(iv_clip({-kInf, kInf}, 0, 1) == Interval{0, 1});
    CHECK_THROWS_AS(iv_clip({0, 1}, 2, 1), std::invalid_argument);
}

TEST_CASE("square") {
    CHECK(iv_square({-2, 1}) == Interval{0, 4});
    CHECK(iv_square({1, 3}) == Interval{1, 9});
    CHECK(iv_square({-3, -2}) == Interval{4, 9});
}

TEST_CASE("inclusion: sampled operands land inside the result interval") {
    std::uint64_t ctr = 1;
    const double tol = 1e-9;
    for (int rep = 0; rep < 500; ++rep) {
        const Interval a = random_interval(ctr);
        const Interval b = random_interval(ctr);
        for (int i = 0; i < 20; ++i) {
            const double x = sample_in(a, (i + 0.5) / 20);
            for (int j = 0; j < 20; ++j) {
                const double y = sample_in(b, (j + 0.5) / 20);
                CHECK(iv_add(a, b).contains(x + y));
                CHECK(iv_sub(a, b).contains(x - y));
                CHECK(iv_min(a, b).contains(std::min(x, y)));
                CHECK(iv_max(a, b).contains(std::max(x, y)));
                const Interval m = iv_mul(a, b);
                CHECK(x * y >= m.lo - tol * (1 + std::fabs(x * y)));
                CHECK(x * y <= m.hi + tol * (1 + std::fabs(x * y)));
                if (y != 0.0) {
                    const Interval q = iv_div(a, b);
                    const double v = x / y;
                    CHECK(v >= q.lo - tol * (1 + std::fabs(v)));
                    CHECK(v <= q.hi + tol * (1 + std::fabs(v)));
                }
            }
        }
    }
}

TEST_CASE("monotonicity: shrinking inputs never widens outputs") {
    std::uint64_t ctr = 99;
    for (int rep = 0; rep < 300; ++rep) {
        const Interval a = random_interval(ctr);
        const Interval b = random_interval(ctr);
        // shrink toward the middle third
        auto shrink = [](const Interval& iv) {
            const double lo = std::isinf(iv.lo) ? -1e3 : iv.lo;
            const double hi = std::isinf(iv.hi) ? 1e3 : iv.hi;
            return Interval{lo + (hi - lo) / 3, hi - (hi - lo) / 3};
        };
        const Interval sa = shrink(a), sb = shrink(b);
        auto inside = [](const Interval& inner, const Interval& outer) {
            return inner.lo >= outer.lo - 1e-12 && inner.hi <= outer.hi + 1e-12;
        };
        CHECK(inside(iv_add(sa, sb), iv_add(a, b)));
        CHECK(inside(iv_sub(sa, sb), iv_sub(a, b)));
        CHECK(inside(iv_mul(sa, sb), iv_mul(a, b)));
        CHECK(inside(iv_div(sa, sb), iv_div(a, b)));
        CHECK(inside(iv_min(sa, sb), iv_min(a, b)));
        CHECK(inside(iv_max(sa, sb), iv_max(a, b)));
    }
}

TEST_CASE("point intervals reduce to the real operation") {
    const Interval a{0.7, 0.7}, b{-1.2, -1.2};
    CHECK(iv_add(a, b).lo == doctest::Approx(-0.5));
    CHECK(iv_add(a, b).width() == 0.0);
    CHECK(iv_mul(a, b).lo == doctest::Approx(-0.84));
    CHECK(iv_div(a, b).lo == doctest::Approx(0.7 / -1.2));
    CHECK(iv_div(a, {0, 0}) == Interval{-kInf, kInf});
}

TEST_CASE("apply_bound_pair") {
    MultiArray lo(Shape{2}), hi(Shape{2});
    lo[0] = 1; hi[0] = 2;
    lo[1] = 2; hi[1] = 4;
    BoundsArray mu(lo, hi);

    SUBCASE("identity") {
        auto id_lo = [](const MultiArray& l, const MultiArray&) { return l; };
        auto id_hi = [](const MultiArray&, const MultiArray& h) { return h; };
        const BoundsArray out = apply_bound_pair(id_lo, id_hi, mu, Shape{2});
        CHECK(out.lo()[0] == 1);
        CHECK(out.hi()[1] == 4);
    }
    SUBCASE("ratio of the two means") {
        auto ratio = [](bool upper) {
            return [upper](const MultiArray& l, const MultiArray& h) {
                MultiArray out(Shape{1});
                const Interval q = iv_div({l[0], h[0]}, {l[1], h[1]});
                out[0] = upper ? q.hi : q.lo;
                return out;
            };
        };
        const BoundsArray out = apply_bound_pair(ratio(false), ratio(true), mu, Shape{1});
        CHECK(out.lo()[0] == doctest::Approx(0.25));
        CHECK(out.hi()[0] == doctest::Approx(1.0));
    }
    SUBCASE("degenerate point bounds propagate to point bounds") {
        BoundsArray pt(lo, lo);
        auto sum = [](const MultiArray& l, const MultiArray&) {
            MultiArray out(Shape{1});
            out[0] = l[0] + l[1];
            return out;
        };
        const BoundsArray out = apply_bound_pair(sum, sum, pt, Shape{1});
        CHECK(out.lo()[0] == out.hi()[0]);
    }
    SUBCASE("invalid outputs are rejected with the QOI index named") {
        auto bad_lo = [](const MultiArray&, const MultiArray&) {
            MultiArray out(Shape{1});
            out[0] = 5;
            return out;
        };
        auto bad_hi = [](const MultiArray&, const MultiArray&) {
            MultiArray out(Shape{1});
            out[0] = 1;
            return out;
        };
        CHECK_THROWS_WITH_AS(apply_bound_pair(bad_lo, bad_hi, mu, Shape{1}),
                             doctest::Contains("(1)"), std::runtime_error);
        auto wrong_shape = [](const MultiArray& l, const MultiArray&) { return l; };
        CHECK_THROWS_AS(apply_bound_pair(wrong_shape, wrong_shape, mu, Shape{3}),
                        std::runtime_error);
    }
}
