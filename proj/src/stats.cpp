#include "qmcqoi/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qmcqoi {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

void check_p(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("quantile: p must lie strictly in (0,1)");
}

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Lentz continued fraction for the incomplete beta (Numerical Recipes betacf).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

} // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lnbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
    const double front = std::exp(lnbeta + a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_quantile(double p) {
    check_p(p);
    if (p == 0.5) return 0.0;
    // crude tail-matched initial guess, then Newton on the CDF
    const double q = p < 0.5 ? p : 1.0 - p;
    double x = std::sqrt(-2.0 * std::log(q));
    x -= (2.515517 + 0.802853 * x + 0.010328 * x * x) /
         (1.0 + 1.432788 * x + 0.189269 * x * x + 0.001308 * x * x * x);
    if (p < 0.5) x = -x;
    for (int it = 0; it < 50; ++it) {
        const double err = normal_cdf(x) - p;
        const double step = err / normal_pdf(x);
        x -= step;
        if (std::fabs(step) < 1e-13 * (1.0 + std::fabs(x))) break;
    }
    return x;
}

double t_cdf(double x, unsigned df) {
    if (df == 0) throw std::domain_error("t_cdf: df must be >= 1");
    const double v = double(df);
    const double ib = incomplete_beta(0.5 * v, 0.5, v / (v + x * x));
    return x >= 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
}

double t_quantile(double p, unsigned df) {
    check_p(p);
    if (df == 0) throw std::domain_error("t_quantile: df must be >= 1");
    if (p == 0.5) return 0.0;
    if (df == 1) return std::tan(M_PI * (p - 0.5)); // Cauchy
    const double v = double(df);
    // start from the normal quantile with a Cornish-Fisher correction
    const double z = normal_quantile(p);
    double x = z + (z * z * z + z) / (4.0 * v);
    // Newton with bisection fallback on the t CDF
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 100; ++it) {
        const double err = t_cdf(x, df) - p;
        if (err > 0) hi = x; else lo = x;
        const double pdf = std::exp(std::lgamma(0.5 * (v + 1.0)) - std::lgamma(0.5 * v)) /
                           std::sqrt(v * M_PI) *
                           std::pow(1.0 + x * x / v, -0.5 * (v + 1.0));
        double next = x - err / pdf;
        if (!(next > lo && next < hi) || !std::isfinite(next))
            next = std::isfinite(lo) && std::isfinite(hi) ? 0.5 * (lo + hi)
                                                          : x - (err > 0 ? 1.0 : -1.0);
        if (std::fabs(next - x) < 1e-12 * (1.0 + std::fabs(x))) { x = next; break; }
        x = next;
    }
    return x;
}

} // namespace qmcqoi
