#pragma once

#include "qmcqoi/array.hpp"
#include "qmcqoi/bounders.hpp"
#include "qmcqoi/criteria.hpp"
#include "qmcqoi/intervals.hpp"
#include "qmcqoi/sequences.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qmcqoi {

// Integrand: writes outputs of shape d_mu for a single point x in (0,1)^d.
// Entries where skip is True must not be computed (their slots are ignored).
using Integrand =
    std::function<void(std::span<const double>, const FlagArray&, MultiArray&)>;

// Maps QOI stopping flags to mean stopping flags (True = stop sampling).
using DependencyFn = std::function<FlagArray(const FlagArray&)>;

struct ProblemSpec {
    Integrand f;
    unsigned dim = 1; // sampling dimension of the node sequence
    Shape d_mu;
    Shape d_s;
    BoundFn c_minus;
    BoundFn c_plus;
    DependencyFn dependency;
    std::vector<double> alpha_s;       // flat over d_s, entries in (0,1)
    std::vector<ErrorMetric> metrics;  // flat over d_s

    void validate() const;
};

// Ownership structure probed from a dependency function: owner[k] is the flat
// QOI index whose stopping flag controls mean index k.
struct DependencyMatrix {
    Shape d_s, d_mu;
    std::vector<char> depends;      // |d_s| x |d_mu|, row-major
    std::vector<std::size_t> owner; // flat d_mu -> flat d_s
    std::vector<std::size_t> fanout; // per QOI: number of owned means

    bool dep(std::size_t l, std::size_t k) const {
        return depends[l * shape_size(d_mu) + k] != 0;
    }
};

// Probes D with one-hot flag arrays and verifies each mean index is owned by
// exactly one QOI index; also checks D(all-True) = all-True, D(all-False) =
// all-False, and that D acts as the ownership broadcast on sampled subsets.
DependencyMatrix validate_dependency(const DependencyFn& dependency,
                                     const Shape& d_s, const Shape& d_mu);

// alpha_mu[k] = alpha_s[owner(k)] / fanout(owner(k)) (union-bound split).
std::vector<double> allocate_alpha(const DependencyMatrix& dep,
                                   std::span<const double> alpha_s);

struct IterationRecord {
    std::uint64_t n_start = 0;
    std::uint64_t n_end = 0;
    FlagArray mu_mask; // flags at evaluation time; True entries were skipped
};

struct RunReport {
    MultiArray s_hat;       // NaN where bounds stayed infinite
    BoundsArray s_bounds;
    BoundsArray mu_bounds;
    std::uint64_t n_total = 0;        // nodes consumed per sequence
    unsigned sequences_used = 1;      // 1, or R for the replications bounder
    std::vector<std::uint64_t> eval_counts; // per mean index, output evaluations
    FlagArray converged;
    unsigned iterations = 0;
    bool budget_exhausted = false;
    std::vector<IterationRecord> trace;
    double wall_time = 0.0; // seconds; excluded from determinism guarantees
};

// Partial evaluation of f over a point block: entries where mask is True are
// never requested. Results are identical for any worker count.
struct MaskedEvaluation {
    std::vector<double> values; // rows x |d_mu|, NaN in masked columns
    std::uint64_t evaluations = 0;
};
MaskedEvaluation evaluate_masked(const Integrand& f, const PointBlock& points,
                                 const FlagArray& mask, unsigned workers);

// The adaptive doubling loop: allocate uncertainty via the dependency
// function, sample in doubling blocks, bound means elementwise, propagate to
// QOI bounds, and stop once every QOI satisfies its error metric or the
// sample budget is exhausted (a soft outcome, reported via the flags).
RunReport run(const ProblemSpec& problem, const SequenceSpec& seq,
              const BounderConfig& bounder, unsigned m1,
              std::uint64_t max_samples, unsigned workers = 1);

} // namespace qmcqoi
