#pragma once

#include "amortize/checker.hpp"

#include <string>
#include <vector>

namespace amortize {

std::string format_counterexample(const Counterexample& cx);

// Human-readable report, ending with a newline.
std::string format_report(const Report& r);

inline constexpr const char* kCsvHeader = "case,mode,states,squares,verdict,slack_max";

// One CSV row (no newline). Omits timing so that output is reproducible.
std::string csv_row(const Report& r);

// Header plus one row per report, sorted by case name.
std::string format_csv(std::vector<Report> reports);

}  // namespace amortize
