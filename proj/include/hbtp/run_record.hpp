#pragma once

#include <string>

#include "hbtp/planner.hpp"

namespace hbtp {

// Single-run record: outcome, metrics, and the expansion trace
// (condition, action, h) for debugging and benchmark ingestion.
// include_timing=false zeroes wall-clock fields for reproducible output.
std::string run_record_json(const PlanResult& result, const Domain& domain,
                            bool include_timing = true, bool include_trace = true);

}  // namespace hbtp
