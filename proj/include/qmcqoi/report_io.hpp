#pragma once

#include "qmcqoi/driver.hpp"

#include <iosfwd>
#include <string>

namespace qmcqoi {

enum class ReportFormat { Json, Csv };

// JSON: one document with shapes, estimates, bounds, flags, and diagnostics
// (wall_time last; it is excluded from determinism guarantees).
// CSV: one row per QOI index with columns index, s_hat, s_lo, s_hi, converged.
void write_report(std::ostream& out, const RunReport& report, ReportFormat format);

// Writes to path ("-" = stdout). Throws std::runtime_error on I/O failure.
void emit_report(const std::string& path, const RunReport& report,
                 ReportFormat format);

// Exit code for a completed run: 0 if all QOI converged, 2 on budget exhaustion.
int report_exit_code(const RunReport& report);

} // namespace qmcqoi
