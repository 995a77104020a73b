#pragma once

#include "qmcqoi/intervals.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qmcqoi {

enum class BounderKind { CltIid, Replications };

struct BounderConfig {
    BounderKind kind = BounderKind::Replications;
    double inflation = 1.2; // C >= 1, conservative widening of sigma-hat
    unsigned replications = 16;

    void validate() const;
};

// Kahan-compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// Running statistics for one scalar mean under IID sampling.
struct CltState {
    std::uint64_t n = 0;
    CompensatedSum sum;
    CompensatedSum sum_sq;

    void update(std::span<const double> evals);
    void update(double eval);
    double mean() const;
    double stddev() const; // unbiased, guarded at 0
};

// Per-replicate running sums for one scalar mean (replicates share n).
struct RepState {
    std::uint64_t n_per_replicate = 0;
    std::vector<CompensatedSum> sums;

    explicit RepState(unsigned R = 0) : sums(R) {}
    unsigned replications() const { return static_cast<unsigned>(sums.size()); }
    void update(unsigned r, std::span<const double> evals);
    std::vector<double> replicate_means() const;
};

// [mu- , mu+] = mu-hat -+ C z_{alpha/2} sigma-hat / sqrt(n).
Interval clt_bounds(const CltState& state, double alpha, double inflation);

// [mu-, mu+] = mu-hat -+ C t_{alpha/2, R-1} sigma_R / sqrt(R) over replicate means.
Interval rep_bounds(const RepState& state, double alpha, double inflation);

} // namespace qmcqoi
