#pragma once

#include "report.hpp"

namespace heatfield::app {

/// Runs the analytic and statistical verification battery for the configured
/// model at the configured scale and appends one result per check. Throws on
/// numerical failure; results added before the failure stay in `doc`.
void run_battery(const RunConfig& c, ReportDocument& doc);

}  // namespace heatfield::app
