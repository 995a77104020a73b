#include "qmcqoi/driver.hpp"
#include "qmcqoi/hash.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace qmcqoi {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kSlabPoints = 1u << 15; // evaluation buffer cap

FlagArray one_hot(const Shape& shape, std::size_t l) {
    FlagArray f(shape);
    f.set(l, true);
    return f;
}

void check_flags_shape(const FlagArray& f, const Shape& want, const char* what) {
    if (f.shape() != want)
        throw std::runtime_error(std::string("dependency function returned shape ") +
                                 shape_str(f.shape()) + " for " + what +
                                 ", expected " + shape_str(want));
}

} // namespace

void ProblemSpec::validate() const {
    if (!f) throw std::invalid_argument("problem: integrand missing");
    if (dim == 0) throw std::invalid_argument("problem: dim must be >= 1");
    if (!c_minus || !c_plus)
        throw std::invalid_argument("problem: bound functions missing");
    if (!dependency) throw std::invalid_argument("problem: dependency function missing");
    const std::size_t ns = shape_size(d_s);
    if (alpha_s.size() != ns)
        throw std::invalid_argument("problem: alpha_s size does not match QOI shape");
    for (double a : alpha_s)
        if (!(a > 0.0 && a < 1.0))
            throw std::invalid_argument("problem: alpha entries must lie in (0,1)");
    if (metrics.size() != ns)
        throw std::invalid_argument("problem: metrics size does not match QOI shape");
    for (const auto& m : metrics) m.validate();
}

DependencyMatrix validate_dependency(const DependencyFn& dependency,
                                     const Shape& d_s, const Shape& d_mu) {
    const std::size_t ns = shape_size(d_s);
    const std::size_t nm = shape_size(d_mu);
    DependencyMatrix out;
    out.d_s = d_s;
    out.d_mu = d_mu;
    out.depends.assign(ns * nm, 0);
    out.owner.assign(nm, std::size_t(-1));
    out.fanout.assign(ns, 0);

    const FlagArray all_false = dependency(FlagArray(d_s, false));
    check_flags_shape(all_false, d_mu, "all-False flags");
    if (all_false.any())
        throw std::runtime_error(
            "dependency function freezes means under all-False QOI flags");
    const FlagArray all_true = dependency(FlagArray(d_s, true));
    check_flags_shape(all_true, d_mu, "all-True flags");
    if (!all_true.all())
        throw std::runtime_error(
            "dependency function leaves means active under all-True QOI flags");

    for (std::size_t l = 0; l < ns; ++l) {
        const FlagArray probe = dependency(one_hot(d_s, l));
        check_flags_shape(probe, d_mu, "one-hot flags");
        for (std::size_t k = 0; k < nm; ++k) {
            if (!probe.get(k)) continue;
            out.depends[l * nm + k] = 1;
            if (out.owner[k] != std::size_t(-1))
                throw std::runtime_error(
                    "mean index " + index_str(d_mu, k) +
                    " is a dependency of more than one QOI index; duplicate the "
                    "shared integrand output into its own mean slot so every mean "
                    "feeds exactly one QOI");
            out.owner[k] = l;
        }
    }
    for (std::size_t k = 0; k < nm; ++k) {
        if (out.owner[k] == std::size_t(-1))
            throw std::runtime_error(
                "mean index " + index_str(d_mu, k) +
                " is a dependency of no QOI index; every mean must feed exactly "
                "one QOI");
        ++out.fanout[out.owner[k]];
    }

    // D must act as the ownership broadcast on arbitrary flag sets; probe a
    // deterministic sample of subsets (all of them when the QOI array is small).
    const std::size_t n_probe = ns <= 5 ? (std::size_t(1) << ns) : 32;
    for (std::size_t t = 0; t < n_probe; ++t) {
        FlagArray subset(d_s);
        for (std::size_t l = 0; l < ns; ++l) {
            const bool bit = ns <= 5 ? ((t >> l) & 1) != 0
                                     : (splitmix64(t * 0x51ed2701u + l) & 1) != 0;
            subset.set(l, bit);
        }
        const FlagArray got = dependency(subset);
        check_flags_shape(got, d_mu, "subset flags");
        for (std::size_t k = 0; k < nm; ++k)
            if (got.get(k) != subset.get(out.owner[k]))
                throw std::runtime_error(
                    "dependency function is not the broadcast of its ownership "
                    "structure at mean index " + index_str(d_mu, k));
    }
    return out;
}

std::vector<double> allocate_alpha(const DependencyMatrix& dep,
                                   std::span<const double> alpha_s) {
    if (alpha_s.size() != shape_size(dep.d_s))
        throw std::invalid_argument("allocate_alpha: alpha_s size mismatch");
    std::vector<double> alpha_mu(dep.owner.size());
    for (std::size_t k = 0; k < dep.owner.size(); ++k) {
        const std::size_t l = dep.owner[k];
        alpha_mu[k] = alpha_s[l] / double(dep.fanout[l]);
    }
    return alpha_mu;
}

MaskedEvaluation evaluate_masked(const Integrand& f, const PointBlock& points,
                                 const FlagArray& mask, unsigned workers) {
    const std::uint64_t rows = points.rows();
    const std::size_t nm = mask.size();
    MaskedEvaluation out;
    out.values.assign(rows * nm, kNaN);
    const std::size_t active = nm - mask.count();
    out.evaluations = rows * active;
    if (active == 0) return out;

    workers = std::max(1u, workers);
    const unsigned n_threads =
        unsigned(std::min<std::uint64_t>(workers, rows));
    std::exception_ptr error;
    std::mutex error_mutex;

    auto work = [&](std::uint64_t r0, std::uint64_t r1) {
        MultiArray buf(mask.shape());
        try {
            for (std::uint64_t r = r0; r < r1; ++r) {
                std::span<const double> x(points.row(r), points.dimension);
                std::fill(buf.data().begin(), buf.data().end(), kNaN);
                f(x, mask, buf);
                double* dst = out.values.data() + r * nm;
                for (std::size_t k = 0; k < nm; ++k)
                    if (!mask.get(k)) dst[k] = buf[k];
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };

    if (n_threads == 1) {
        work(0, rows);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (rows + n_threads - 1) / n_threads;
        for (unsigned t = 0; t < n_threads; ++t) {
            const std::uint64_t r0 = t * chunk;
            const std::uint64_t r1 = std::min<std::uint64_t>(rows, r0 + chunk);
            if (r0 < r1) pool.emplace_back(work, r0, r1);
        }
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
    return out;
}

namespace {

struct MeanStates {
    BounderKind kind;
    std::vector<CltState> clt;
    std::vector<RepState> rep;

    void accumulate(std::size_t k, unsigned r, std::span<const double> evals,
                    const Shape& d_mu, std::uint64_t point_base) {
        try {
            if (kind == BounderKind::CltIid)
                clt[k].update(evals);
            else
                rep[k].update(r, evals);
        } catch (const std::exception& e) {
            throw std::runtime_error("integrand output at mean index " +
                                     index_str(d_mu, k) + ", node block starting at " +
                                     std::to_string(point_base) + ": " + e.what());
        }
    }

    Interval bounds(std::size_t k, double alpha, double inflation) const {
        return kind == BounderKind::CltIid ? clt_bounds(clt[k], alpha, inflation)
                                           : rep_bounds(rep[k], alpha, inflation);
    }
};

} // namespace

RunReport run(const ProblemSpec& problem, const SequenceSpec& seq,
              const BounderConfig& bounder, unsigned m1,
              std::uint64_t max_samples, unsigned workers) {
    const auto t_begin = std::chrono::steady_clock::now();
    problem.validate();
    bounder.validate();
    if (m1 < 1) throw std::invalid_argument("run: m1 must be >= 1");
    if ((std::uint64_t(1) << m1) > max_samples)
        throw std::invalid_argument("run: 2^m1 exceeds max_samples");
    if (seq.dimension != problem.dim)
        throw std::invalid_argument("run: sequence dimension does not match problem");
    const bool iid = seq.kind == SequenceKind::Iid;
    if (bounder.kind == BounderKind::CltIid && !iid)
        throw std::invalid_argument("run: the clt-iid bounder requires an iid sequence");
    if (bounder.kind == BounderKind::Replications && iid)
        throw std::invalid_argument(
            "run: the replications bounder requires a low-discrepancy sequence");

    const std::size_t nm = shape_size(problem.d_mu);
    const std::size_t ns = shape_size(problem.d_s);
    const DependencyMatrix dep =
        validate_dependency(problem.dependency, problem.d_s, problem.d_mu);
    const std::vector<double> alpha_mu = allocate_alpha(dep, problem.alpha_s);

    std::vector<SequenceSpec> streams;
    MeanStates states;
    states.kind = bounder.kind;
    if (bounder.kind == BounderKind::CltIid) {
        streams = {seq};
        states.clt.resize(nm);
    } else {
        streams = replicate(seq, bounder.replications);
        states.rep.assign(nm, RepState(bounder.replications));
    }

    RunReport report;
    report.sequences_used = unsigned(streams.size());
    report.eval_counts.assign(nm, 0);
    report.converged = FlagArray(problem.d_s, false);
    report.mu_bounds = BoundsArray(problem.d_mu);
    report.s_bounds = BoundsArray(problem.d_s);

    FlagArray b_mu(problem.d_mu, false);
    FlagArray b_s(problem.d_s, false);
    std::uint64_t n_start = 1;
    std::uint64_t n_end = std::uint64_t(1) << m1;
    std::vector<double> eval_col; // per-mean staging buffer

    while (!b_s.all()) {
        if (n_end > max_samples) {
            report.budget_exhausted = true;
            break;
        }
        report.trace.push_back({n_start, n_end, b_mu});

        // evaluate in slabs to bound the buffer, reducing in point order
        for (std::uint64_t s0 = n_start; s0 <= n_end; s0 += kSlabPoints) {
            const std::uint64_t s1 = std::min(n_end, s0 + kSlabPoints - 1);
            for (unsigned r = 0; r < streams.size(); ++r) {
                const PointBlock pts = gen(streams[r], s0, s1);
                const MaskedEvaluation ev =
                    evaluate_masked(problem.f, pts, b_mu, workers);
                const std::uint64_t rows = pts.rows();
                for (std::size_t k = 0; k < nm; ++k) {
                    if (b_mu.get(k)) continue;
                    report.eval_counts[k] += rows;
                    eval_col.resize(rows);
                    for (std::uint64_t i = 0; i < rows; ++i)
                        eval_col[i] = ev.values[i * nm + k];
                    states.accumulate(k, r, eval_col, problem.d_mu, s0);
                }
            }
        }
        report.n_total = n_end;
        ++report.iterations;

        for (std::size_t k = 0; k < nm; ++k) {
            if (b_mu.get(k)) continue; // frozen indices keep their last bounds
            const Interval iv = states.bounds(k, alpha_mu[k], bounder.inflation);
            report.mu_bounds.lo()[k] = iv.lo;
            report.mu_bounds.hi()[k] = iv.hi;
        }

        report.s_bounds = apply_bound_pair(problem.c_minus, problem.c_plus,
                                           report.mu_bounds, problem.d_s);
        for (std::size_t l = 0; l < ns; ++l)
            b_s.set(l, stopping_met(report.s_bounds.lo()[l], report.s_bounds.hi()[l],
                                    problem.metrics[l]));
        b_mu = problem.dependency(b_s);

        n_start = n_end + 1;
        n_end = iid ? 2 * n_start : 2 * (n_start - 1);
    }

    report.converged = b_s;
    report.s_hat = MultiArray(problem.d_s, kNaN);
    for (std::size_t l = 0; l < ns; ++l) {
        const double lo = report.s_bounds.lo()[l];
        const double hi = report.s_bounds.hi()[l];
        if (std::isfinite(lo) && std::isfinite(hi))
            report.s_hat[l] = optimal_estimate(lo, hi, problem.metrics[l]);
    }
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin)
            .count();
    return report;
}

} // namespace qmcqoi
