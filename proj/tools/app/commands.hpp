#pragma once

#include <iosfwd>

#include "report.hpp"

namespace heatfield::app {

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kUsageError = 2, kNumericalFailure = 3 };

ReportDocument run_covariance(const RunConfig& c);
ReportDocument run_sample(const RunConfig& c);
ReportDocument run_estimate(const RunConfig& c);
/// Partial report flagged incomplete on a stage error.
ReportDocument run_verify(const RunConfig& c);
ReportDocument run_report(const RunConfig& c);
ReportDocument run_task(const RunConfig& c);

/// Full command line: `heatfield <subcommand> [--config FILE] [--section.key VALUE ...]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace heatfield::app
