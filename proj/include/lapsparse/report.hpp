#pragma once

#include <iosfwd>
#include <span>

#include <json.hpp>

#include "lapsparse/metrics.hpp"
#include "lapsparse/sparsifiers.hpp"

namespace lapsparse {

/// Ordered removals with their diagnostics. Wall times are left out unless
/// `include_timing`, so the output is reproducible byte for byte.
nlohmann::json trace_to_json(const SparsificationTrace& trace, bool include_timing = false);

/// One row per (graph, level, method) cell:
/// graph,method,level,edges_kept,removed,lambda2,apsp_total,connected,filtering_error,wall_seconds
/// wall_seconds is left empty unless `include_timing`.
void write_comparison_csv(std::ostream& out, const ComparisonReport& report, bool include_timing = false);

/// Ensemble statistics per (method, level), overlap matrices per level and
/// the bound-bracketing summary.
nlohmann::json comparison_to_json(const ComparisonReport& report, bool include_timing = false);

/// n,m,budget,exact_seconds,fast_seconds,ratio
void write_timing_csv(std::ostream& out, std::span<const TimingRow> rows);
nlohmann::json timing_to_json(std::span<const TimingRow> rows);

/// Finite values as numbers; infinities as the strings "inf" / "-inf".
nlohmann::json json_number(double value);

}  // namespace lapsparse
