#include "pathqv/plot_data.hpp"

#include <cmath>
#include <ostream>

#include "pathqv/error.hpp"
#include "pathqv/path_io.hpp"

namespace pathqv {

namespace {

void header(std::ostream& os) { os << "x,series,value,ci_lo,ci_hi\n"; }

void row(std::ostream& os, double x, const std::string& series, double v, double lo, double hi) {
  os << format_double(x) << ',' << series << ',' << format_double(v) << ',' << format_double(lo)
     << ',' << format_double(hi) << '\n';
}

void mode_value(const ExperimentReport& r, const ReportCell& c, double& v, double& lo, double& hi) {
  switch (r.mode) {
    case ConvergenceMode::Probability:
      v = c.probability.estimate;
      lo = c.probability.lo;
      hi = c.probability.hi;
      return;
    case ConvergenceMode::AlmostSure: {
      const auto hits = static_cast<std::size_t>(std::llround(c.as_tail_fraction * static_cast<double>(r.replicas)));
      const auto ci = wilson_interval(hits, r.replicas);
      v = c.as_tail_fraction;
      lo = ci.lo;
      hi = ci.hi;
      return;
    }
    case ConvergenceMode::Lp:
      v = c.mean;
      lo = c.mean - c.mean_half_width;
      hi = c.mean + c.mean_half_width;
      return;
  }
}

}  // namespace

PlotKind parse_plot_kind(const std::string& name) {
  if (name == "trend") return PlotKind::Trend;
  if (name == "matrix") return PlotKind::Matrix;
  if (name == "trace") return PlotKind::Trace;
  throw ConfigError("unknown plot kind '" + name + "'");
}

void emit_plot_data(std::ostream& os, const ExperimentReport& report, PlotKind kind) {
  const std::size_t na = std::max<std::size_t>(1, report.a_grid.size());
  const std::size_t nn = report.n_grid.size();
  const bool has_a = !report.a_grid.empty();
  switch (kind) {
    case PlotKind::Trend:
      header(os);
      for (std::size_t ai = 0; ai < na; ++ai) {
        for (std::size_t ci = 0; ci < report.thresholds.size(); ++ci) {
          std::string series = "c=" + format_double(report.thresholds[ci]);
          if (has_a) series = "a=" + format_double(report.a_grid[ai]) + ";" + series;
          for (std::size_t j = 0; j < nn; ++j) {
            const auto& c = report.cell(ai, j, ci);
            double v = 0, lo = 0, hi = 0;
            mode_value(report, c, v, lo, hi);
            row(os, c.n, series, v, lo, hi);
          }
        }
      }
      return;
    case PlotKind::Matrix:
      if (!has_a) throw ConfigError("matrix plot data needs a double-limit report");
      header(os);
      for (std::size_t ai = 0; ai < na; ++ai) {
        const std::string series = "a=" + format_double(report.a_grid[ai]);
        for (std::size_t j = 0; j < nn; ++j) {
          const auto& c = report.cell(ai, j);
          row(os, c.n, series, c.probability.estimate, c.probability.lo, c.probability.hi);
        }
      }
      return;
    case PlotKind::Trace:
      throw ConfigError("trace plot data comes from a QV trace, not an experiment report");
  }
}

void emit_plot_data(std::ostream& os, const ExperimentReport& report, const std::string& kind) {
  emit_plot_data(os, report, parse_plot_kind(kind));
}

void emit_plot_data(std::ostream& os, const QVTrace& trace) {
  header(os);
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    row(os, trace.times[i], "S_k", trace.values[i], trace.values[i], trace.values[i]);
  }
}

}  // namespace pathqv
