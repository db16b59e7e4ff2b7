#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "driftml/lifelong.hpp"

namespace driftml {

// Files written per strategy into a run directory:
//   <strategy>.report.txt   line-oriented summary, embeds the normalized config
//   <strategy>.batches.tsv  batch, metric, drift, drift_offset, adapted
//   <strategy>.timing.tsv   wall-clock per phase (not reproducible)
// plus comparison.tsv (strategy, mean, rank) for the whole run. Everything
// except the timing files is byte-identical across reruns of the same config.

std::string format_metric(double v);

std::string render_report(const RunReport& report, const std::string& normalized_config);
std::string render_batches_table(const RunReport& report);
std::string render_timing_table(const RunReport& report);

/// Midranks of the means, best (highest) = 1. Undefined means rank last.
std::vector<double> rank_means(const std::vector<double>& means);
std::string render_comparison(const std::vector<RunReport>& reports);

void write_run_reports(const std::filesystem::path& dir, const std::vector<RunReport>& reports,
                       const std::string& normalized_config);

struct BatchSeries {
  Strategy strategy;
  std::vector<std::size_t> batches;
  std::vector<double> metrics;
};

/// Reads every <strategy>.batches.tsv in dir, in canonical strategy order.
std::vector<BatchSeries> read_batch_series(const std::filesystem::path& dir);

/// Per-batch metric minus Base's, one column per strategy (Base included).
/// Throws std::runtime_error when the Base series is missing or lengths differ.
std::string render_delta_table(const std::vector<BatchSeries>& series);

}  // namespace driftml
