#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmcqoi/criteria.hpp"
#include "qmcqoi/hash.hpp"

#include <cmath>
#include <limits>

using namespace qmcqoi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Grid check of the raw criterion: |s - s_hat| <= h(s) for all s in [lo, hi].
bool raw_criterion_grid(double lo, double hi, double s_hat,
                        const ErrorMetric& metric, unsigned grid = 2000) {
    for (unsigned i = 0; i <= grid; ++i) {
        const double s = lo + (hi - lo) * double(i) / double(grid);
        if (std::fabs(s - s_hat) > h_eval(metric, s) + 1e-12) return false;
    }
    return true;
}

} // namespace

TEST_CASE("metric construction guards") {
    CHECK_THROWS_AS(abs_or_rel(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(abs_or_rel(0.1, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(abs_or_rel(-0.1, 0.0), std::invalid_argument);
    CHECK_NOTHROW(abs_or_rel(0.0, 0.5));
}

TEST_CASE("h_eval") {
    const auto or_m = abs_or_rel(0.01, 0.1);
    const auto and_m = abs_and_rel(0.01, 0.1);
    CHECK(h_eval(or_m, 1.0) == doctest::Approx(0.1));
    CHECK(h_eval(and_m, 1.0) == doctest::Approx(0.01));
    CHECK(h_eval(or_m, 0.0) == doctest::Approx(0.01));
    CHECK(h_eval(and_m, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("check_metric_map") {
    CHECK(check_metric_map(abs_or_rel(0.01, 0.1), -10, 10, 200));
    ErrorMetric doubling{MetricKind::Custom, 0, 0,
                         [](double s) { return 2.0 * std::fabs(s); }};
    CHECK_FALSE(check_metric_map(doubling, -10, 10, 200));
    ErrorMetric constant{MetricKind::Custom, 0, 0, [](double) { return 0.3; }};
    CHECK(check_metric_map(constant, -10, 10, 200));
    ErrorMetric broken{MetricKind::Custom, 0, 0,
                       [](double s) { return s == 0.0 ? kInf : 1.0; }};
    CHECK_THROWS_AS(check_metric_map(broken, -1, 1, 11), std::runtime_error);
    // both built-in kinds are metric maps for all eps_rel in [0,1)
    for (double r : {0.0, 0.3, 0.7, 0.99}) {
        if (r > 0.0) {
            CHECK(check_metric_map(abs_or_rel(0.01, r), -50, 50, 101));
            CHECK(check_metric_map(abs_and_rel(0.01, r), -50, 50, 101));
        }
    }
}

TEST_CASE("stopping_met") {
    const auto eps = abs_or_rel(0.25, 0.0);
    CHECK(stopping_met(1.0, 1.0, eps));
    CHECK(stopping_met(1.0, 1.5, eps));  // width 0.5 = 2 eps
    CHECK_FALSE(stopping_met(1.0, 1.6, eps));
    CHECK_FALSE(stopping_met(-kInf, 1.0, eps));
    CHECK_FALSE(stopping_met(-kInf, kInf, eps));
    // relative metric example: h(1)+h(2) = 0.4+0.8 >= 1
    CHECK(stopping_met(1.0, 2.0, abs_or_rel(0.0, 0.4)));
}

TEST_CASE("optimal_estimate") {
    const auto eps = abs_or_rel(0.3, 0.0);
    CHECK(optimal_estimate(1.0, 2.0, eps) == doctest::Approx(1.5)); // constant h
    CHECK(optimal_estimate(0.7, 0.7, eps) == doctest::Approx(0.7));
    ErrorMetric rel{MetricKind::Custom, 0, 0,
                    [](double s) { return 0.1 * std::fabs(s); }};
    CHECK(optimal_estimate(1.0, 2.0, rel) == doctest::Approx(1.45));
    CHECK_THROWS_AS(optimal_estimate(-kInf, 1.0, eps), std::runtime_error);
}

TEST_CASE("stopping test is equivalent to the raw grid criterion") {
    std::uint64_t ctr = 7;
    int agreements = 0;
    for (int rep = 0; rep < 300; ++rep) {
        const double lo = to_unit_open(splitmix64(ctr++)) * 8.0 - 4.0;
        const double hi = lo + to_unit_open(splitmix64(ctr++)) * 2.0;
        const double ea = 0.001 + to_unit_open(splitmix64(ctr++)) * 0.5;
        const double er = to_unit_open(splitmix64(ctr++)) * 0.9;
        const auto metric = abs_or_rel(ea, er);
        const double s_hat = optimal_estimate(lo, hi, metric);
        CHECK(s_hat >= lo - 1e-12);
        CHECK(s_hat <= hi + 1e-12);
        const bool stop = stopping_met(lo, hi, metric);
        const bool raw = raw_criterion_grid(lo, hi, s_hat, metric);
        if (stop == raw) ++agreements;
    }
    CHECK(agreements == 300);
}

TEST_CASE("no candidate estimate beats the optimal one") {
    std::uint64_t ctr = 42;
    for (int rep = 0; rep < 100; ++rep) {
        const double lo = to_unit_open(splitmix64(ctr++)) * 6.0 - 3.0;
        const double hi = lo + 0.01 + to_unit_open(splitmix64(ctr++)) * 3.0;
        const auto metric = abs_or_rel(0.01 + to_unit_open(splitmix64(ctr++)) * 0.3,
                                       to_unit_open(splitmix64(ctr++)) * 0.9);
        const double s_star = optimal_estimate(lo, hi, metric);
        auto worst = [&](double cand) {
            double w = -kInf;
            for (int i = 0; i <= 1000; ++i) {
                const double s = lo + (hi - lo) * double(i) / 1000.0;
                w = std::max(w, std::fabs(s - cand) - h_eval(metric, s));
            }
            return w;
        };
        const double w_star = worst(s_star);
        const double grid_res = (hi - lo) / 1000.0;
        for (int i = 0; i <= 100; ++i) {
            const double cand = lo + (hi - lo) * double(i) / 100.0;
            CHECK(worst(cand) >= w_star - 2.0 * grid_res - 1e-12);
        }
    }
}
