#pragma once

#include <iosfwd>
#include <string>

#include "pathqv/experiments.hpp"
#include "pathqv/qv.hpp"

namespace pathqv {

enum class PlotKind { Trend, Matrix, Trace };

PlotKind parse_plot_kind(const std::string& name);

/// Long-format rows x,series,value,ci_lo,ci_hi.
///
/// trend: one series per (a, threshold), x = n. The value follows the report's
/// convergence mode: probability with its Wilson interval, the tail fraction,
/// or the sample mean with its normal half width.
/// matrix: double-limit reports only, first threshold, one series per a.
/// trace: rejected here; use the QVTrace overload.
void emit_plot_data(std::ostream& os, const ExperimentReport& report, PlotKind kind);
void emit_plot_data(std::ostream& os, const ExperimentReport& report, const std::string& kind);

/// One row per point of the trace, series "S_k".
void emit_plot_data(std::ostream& os, const QVTrace& trace);

}  // namespace pathqv
