#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "driftml/fhddm.hpp"
#include "driftml/lifelong.hpp"
#include "driftml/metrics.hpp"
#include "driftml/search.hpp"
#include "driftml/stagger.hpp"

namespace driftml {

inline constexpr std::size_t kDefaultStaggerBatchSize = 1000;
inline constexpr std::size_t kDefaultCsvBatchSize = 1500;

struct DatasetSource {
  enum class Kind { Stagger, Csv };
  Kind kind = Kind::Stagger;
  std::string path;
  std::string label_column = "class";
  StaggerConfig stagger = default_stagger_config();

  bool operator==(const DatasetSource&) const = default;
};

/// One experiment: a dataset, how to batch it, and which strategies to compare.
///
/// Text form (sections and keys; `#` starts a comment):
///
///     [dataset]     source = stagger | csv, path, label_column,
///                   n_instances, drift_points = [..], concepts = ["c1", "c1-inverted", ..],
///                   noise, seed
///     [experiment]  batch_size, strategies = [..], metric
///     [budget]      max_candidates, max_seconds, validation_fraction, seed
///     [detector]    window, delta
///     [ensemble]    rounds
///     [adaptation]  add_new_candidates, validation_cap
///     [portfolio]   configs = ["<pipeline config text>", ..]
struct ExperimentConfig {
  DatasetSource dataset;
  std::size_t batch_size = kDefaultStaggerBatchSize;
  std::vector<Strategy> strategies{std::begin(kAllStrategies), std::end(kAllStrategies)};
  Metric metric = Metric::Accuracy;
  SearchBudget budget;
  DetectorConfig detector;
  std::size_t ensemble_rounds = kDefaultEnsembleRounds;
  std::size_t add_new_candidates = kDefaultAddNewCandidates;
  std::size_t validation_cap = kDefaultValidationCap;
  std::vector<PipelineConfig> portfolio = default_config_portfolio();

  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ConfigError prefixed with the offending line number.
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Normalized text form: every key, fixed order, defaults filled in. Parsing
/// the output yields an equal config.
std::string to_text(const ExperimentConfig& config);

LifelongOptions options_for(const ExperimentConfig& config, Strategy strategy);

/// Loads or generates the dataset and splits it into ordered batches.
std::vector<Batch> load_stream(const ExperimentConfig& config);

struct ExperimentResult {
  std::vector<RunReport> reports;  // in config strategy order
};

/// Runs every configured strategy on the same stream and writes reports into out_dir.
ExperimentResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace driftml
