#include "driftml/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace driftml {

namespace {

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, '\t')) out.push_back(cell);
  return out;
}

}  // namespace

std::string format_metric(double v) { return fixed(v, 6); }

std::string render_report(const RunReport& r, const std::string& normalized_config) {
  std::ostringstream os;
  os << "strategy: " << strategy_name(r.strategy) << '\n';
  os << "metric: " << metric_name(r.metric) << '\n';
  os << "batches: " << r.batches.size() << '\n';
  os << "mean: " << format_metric(r.mean_metric) << '\n';
  os << "excluded_batches: " << r.excluded_batches << '\n';
  os << "drift_events: " << r.drift_events.size() << '\n';
  for (const auto& e : r.drift_events) os << "drift: batch " << e.batch << " offset " << e.offset << '\n';
  for (const auto& n : r.notes) os << "note: " << n << '\n';
  std::istringstream cfg(normalized_config);
  std::string line;
  while (std::getline(cfg, line)) os << "config: " << line << '\n';
  return os.str();
}

std::string render_batches_table(const RunReport& r) {
  std::ostringstream os;
  os << "batch\tmetric\tdrift\tdrift_offset\tadapted\n";
  for (const auto& b : r.batches) {
    os << b.batch << '\t' << format_metric(b.metric) << '\t' << (b.drift ? 1 : 0) << '\t';
    if (b.drift) os << b.drift_offset;
    else os << '-';
    os << '\t' << (b.adapted ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string render_timing_table(const RunReport& r) {
  std::ostringstream os;
  os << "phase\tbatch\tms\n";
  os << "initial_search\t-\t" << fixed(r.initial_search_ms, 3) << '\n';
  for (const auto& b : r.batches) {
    os << "predict\t" << b.batch << '\t' << fixed(b.predict_ms, 3) << '\n';
    if (b.adapted) os << "adapt\t" << b.batch << '\t' << fixed(b.adapt_ms, 3) << '\n';
  }
  return os.str();
}

std::vector<double> rank_means(const std::vector<double>& means) {
  std::vector<std::size_t> order(means.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key = [&](std::size_t i) { return std::isnan(means[i]) ? -INFINITY : means[i]; };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) > key(b); });
  std::vector<double> ranks(means.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && key(order[j + 1]) == key(order[i])) ++j;
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
    i = j + 1;
  }
  return ranks;
}

std::string render_comparison(const std::vector<RunReport>& reports) {
  std::vector<double> means;
  for (const auto& r : reports) means.push_back(r.mean_metric);
  // Ranks use the printed precision so equal-looking means tie.
  std::vector<double> rounded;
  for (double m : means) rounded.push_back(std::isnan(m) ? m : std::stod(format_metric(m)));
  const auto ranks = rank_means(rounded);
  std::ostringstream os;
  os << "strategy\tmean\trank\n";
  for (std::size_t i = 0; i < reports.size(); ++i)
    os << strategy_name(reports[i].strategy) << '\t' << format_metric(means[i]) << '\t' << fixed(ranks[i], 1) << '\n';
  return os.str();
}

void write_run_reports(const std::filesystem::path& dir, const std::vector<RunReport>& reports,
                       const std::string& normalized_config) {
  std::filesystem::create_directories(dir);
  for (const auto& r : reports) {
    const std::string stem(strategy_name(r.strategy));
    write_file(dir / (stem + ".report.txt"), render_report(r, normalized_config));
    write_file(dir / (stem + ".batches.tsv"), render_batches_table(r));
    write_file(dir / (stem + ".timing.tsv"), render_timing_table(r));
  }
  write_file(dir / "comparison.tsv", render_comparison(reports));
}

std::vector<BatchSeries> read_batch_series(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("report directory " + dir.string() + " not found");
  std::vector<BatchSeries> out;
  for (auto s : kAllStrategies) {
    const auto path = dir / (std::string(strategy_name(s)) + ".batches.tsv");
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path);
    std::string line;
    if (!std::getline(in, line) || split_tabs(line).at(0) != "batch")
      throw std::runtime_error(path.string() + ": missing header");
    BatchSeries series{s, {}, {}};
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto cells = split_tabs(line);
      if (cells.size() < 2) throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": too few columns");
      try {
        series.batches.push_back(std::stoull(cells[0]));
        series.metrics.push_back(cells[1] == "nan" ? kUndefinedScore : std::stod(cells[1]));
      } catch (const std::logic_error&) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": malformed row");
      }
    }
    out.push_back(std::move(series));
  }
  return out;
}

std::string render_delta_table(const std::vector<BatchSeries>& series) {
  const auto base = std::find_if(series.begin(), series.end(), [](const BatchSeries& s) { return s.strategy == Strategy::Base; });
  if (base == series.end()) throw std::runtime_error("no Base report found; deltas are relative to the base strategy");
  for (const auto& s : series)
    if (s.batches != base->batches)
      throw std::runtime_error("strategy " + std::string(strategy_name(s.strategy)) +
                               " covers different batches than base");
  std::ostringstream os;
  os << "batch";
  for (const auto& s : series) os << '\t' << strategy_name(s.strategy);
  os << '\n';
  for (std::size_t i = 0; i < base->batches.size(); ++i) {
    os << base->batches[i];
    for (const auto& s : series) os << '\t' << format_metric(s.metrics[i] - base->metrics[i]);
    os << '\n';
  }
  return os.str();
}

}  // namespace driftml
