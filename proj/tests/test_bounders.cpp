#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmcqoi/bounders.hpp"
#include "qmcqoi/sequences.hpp"
#include "qmcqoi/stats.hpp"

#include <cmath>
#include <limits>
#include <vector>

using namespace qmcqoi;

TEST_CASE("update accumulates counts and sums") {
    CltState s;
    std::vector<double> evals{1, 2, 3};
    s.update(evals);
    CHECK(s.n == 3);
    CHECK(s.mean() == doctest::Approx(2.0));

    // associativity over block concatenation
    CltState a, b;
    a.update(std::vector<double>{1, 2});
    a.update(std::vector<double>{3});
    b.update(std::vector<double>{1, 2, 3});
    CHECK(a.n == b.n);
    CHECK(a.sum.value() == b.sum.value());
    CHECK(a.sum_sq.value() == b.sum_sq.value());

    CltState c;
    std::vector<double> bad{1.0, std::nan("")};
    CHECK_THROWS_AS(c.update(bad), std::runtime_error);
    std::vector<double> inf{std::numeric_limits<double>::infinity()};
    CHECK_THROWS_AS(c.update(inf), std::runtime_error);
}

TEST_CASE("clt bounds") {
    SUBCASE("constant evaluations collapse the interval") {
        CltState s;
        s.update(std::vector<double>{4.2, 4.2, 4.2});
        const Interval iv = clt_bounds(s, 0.05, 1.0);
        CHECK(iv.lo == doctest::Approx(4.2));
        CHECK(iv.hi == doctest::Approx(4.2));
    }
    SUBCASE("alternating 0/1 closed form") {
        CltState s;
        for (int i = 0; i < 100; ++i) s.update(double(i % 2));
        CHECK(s.mean() == doctest::Approx(0.5));
        CHECK(s.stddev() == doctest::Approx(0.502519).epsilon(1e-5));
        const Interval iv = clt_bounds(s, 0.05, 1.0);
        // half width = z_{0.975} sigma / 10, with the quantile from the stats
        // module checked against its own oracle elsewhere
        CHECK(0.5 * iv.width() == doctest::Approx(0.098492).epsilon(1e-4));
        CHECK(iv.lo == doctest::Approx(0.5 - 0.098492).epsilon(1e-4));
    }
    SUBCASE("doubling the inflation doubles the half width") {
        CltState s;
        for (int i = 0; i < 50; ++i) s.update(double(i));
        const Interval a = clt_bounds(s, 0.05, 1.0);
        const Interval b = clt_bounds(s, 0.05, 2.0);
        CHECK(b.width() == doctest::Approx(2.0 * a.width()));
        CHECK(a.lo + 0.5 * a.width() == doctest::Approx(b.lo + 0.5 * b.width()));
    }
    SUBCASE("insufficient data") {
        CltState s;
        s.update(1.0);
        CHECK_THROWS_AS(clt_bounds(s, 0.05, 1.0), std::runtime_error);
    }
}

TEST_CASE("replication bounds") {
    SUBCASE("equal replicate means give a zero-width interval") {
        RepState s(3);
        for (unsigned r = 0; r < 3; ++r) s.update(r, std::vector<double>{2.0, 2.0});
        const Interval iv = rep_bounds(s, 0.05, 1.0);
        CHECK(iv.lo == doctest::Approx(2.0));
        CHECK(iv.width() == doctest::Approx(0.0));
    }
    SUBCASE("R=2 closed form with the Cauchy quantile") {
        RepState s(2);
        s.update(0, std::vector<double>{0.0});
        s.update(1, std::vector<double>{1.0});
        const Interval iv = rep_bounds(s, 0.05, 1.0);
        CHECK(iv.lo + 0.5 * iv.width() == doctest::Approx(0.5));
        // 12.706205 * sqrt(0.5) / sqrt(2) = 6.3531
        CHECK(0.5 * iv.width() == doctest::Approx(6.3531).epsilon(1e-4));
    }
    SUBCASE("larger alpha shrinks the interval") {
        RepState s(4);
        for (unsigned r = 0; r < 4; ++r)
            s.update(r, std::vector<double>{double(r)});
        CHECK(rep_bounds(s, 0.2, 1.0).width() < rep_bounds(s, 0.05, 1.0).width());
    }
    SUBCASE("fewer than two replicates") {
        RepState s(1);
        s.update(0, std::vector<double>{1.0});
        CHECK_THROWS_AS(rep_bounds(s, 0.05, 1.0), std::runtime_error);
    }
}

TEST_CASE("interval contains the point estimate; width behaves in alpha and C") {
    CltState s;
    for (int i = 0; i < 64; ++i) s.update(std::sin(double(i)));
    const double mean = s.mean();
    for (double alpha : {0.01, 0.05, 0.2, 0.5}) {
        const Interval iv = clt_bounds(s, alpha, 1.3);
        CHECK(iv.contains(mean));
    }
    CHECK(clt_bounds(s, 0.2, 1.0).width() <= clt_bounds(s, 0.1, 1.0).width());
    CHECK(clt_bounds(s, 0.1, 1.5).width() >= clt_bounds(s, 0.1, 1.0).width());
}

TEST_CASE("clt coverage for the first coordinate mean under IID sampling") {
    int covered = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SequenceSpec spec{SequenceKind::Iid, 1, seed, Randomization::None};
        const PointBlock pts = gen(spec, 1, 1u << 10);
        CltState s;
        s.update(pts.values);
        if (clt_bounds(s, 0.05, 1.0).contains(0.5)) ++covered;
    }
    CHECK(covered >= 93);
}

TEST_CASE("replicated-QMC width shrinks as n grows") {
    auto width_at = [](std::uint64_t n) {
        std::vector<double> widths;
        for (std::uint64_t seed = 0; seed < 11; ++seed) {
            SequenceSpec spec{SequenceKind::Lattice, 2, seed, Randomization::Shift};
            RepState st(8);
            const auto reps = replicate(spec, 8);
            for (unsigned r = 0; r < 8; ++r) {
                const PointBlock pts = gen(reps[r], 1, n);
                std::vector<double> evals(pts.rows());
                for (std::uint64_t i = 0; i < pts.rows(); ++i)
                    evals[i] = std::exp(pts.row(i)[0]) * pts.row(i)[1];
                st.update(r, evals);
            }
            widths.push_back(rep_bounds(st, 0.05, 1.0).width());
        }
        std::sort(widths.begin(), widths.end());
        return widths[widths.size() / 2];
    };
    CHECK(width_at(1u << 12) < 0.5 * width_at(1u << 10));
}
