#pragma once

#include "qmcqoi/sequences.hpp"

#include <functional>
#include <span>
#include <vector>

namespace qmcqoi {

struct StudyRow {
    std::uint64_t n = 0;
    double median_abs_error = 0.0;
};

struct StudyResult {
    SequenceKind kind;
    std::vector<StudyRow> rows;
    double slope = 0.0; // d log(error) / d log(n), least-squares fit
    bool slope_defined = false;

    std::string slope_str() const;
};

struct StudyConfig {
    std::vector<SequenceKind> kinds = {SequenceKind::Iid, SequenceKind::Lattice,
                                       SequenceKind::DigitalNetB2};
    unsigned m_min = 8;
    unsigned m_max = 14;
    unsigned seeds = 20; // randomization seeds per sample size
    std::uint64_t base_seed = 1;
};

// Fixed-n median absolute errors of the sample average against a known mean,
// with a log-log slope fit per sequence kind.
std::vector<StudyResult> convergence_study(
    const std::function<double(std::span<const double>)>& integrand, unsigned dim,
    double true_mean, const StudyConfig& config);

} // namespace qmcqoi
