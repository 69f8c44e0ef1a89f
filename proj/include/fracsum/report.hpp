#pragma once

#include <span>
#include <string>

#include "fracsum/verify.hpp"

namespace fracsum::report {

/// Shortest text that reparses to exactly the same double ("%.17g").
std::string fmt17g(double v);

/// fail dominates inconclusive dominates pass.
Verdict overall_verdict(std::span<const TestReport> reports);

/// Machine-readable suite report (JSON document, stable key order).
std::string to_json(std::span<const TestReport> reports);

/// Human-readable fixed-width rendering of the same content.
std::string to_text(std::span<const TestReport> reports);

/// CSV with header n,var_R_exact,normalizer,sigma2,ratio at full precision.
std::string var_ratio_csv(std::span<const VarRatioRow> rows);

/// Write `content` to `path`, throwing Error if the file cannot be written.
void write_file(const std::string& path, const std::string& content);

}  // namespace fracsum::report
