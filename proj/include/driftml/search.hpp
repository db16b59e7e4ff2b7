#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "driftml/data.hpp"
#include "driftml/matrix.hpp"
#include "driftml/metrics.hpp"
#include "driftml/pipeline.hpp"
#include "driftml/pipeline_config.hpp"

namespace driftml {

class SearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SearchBudget {
  std::size_t max_candidates = 16;
  std::optional<double> max_seconds;  // wall-clock; results are only deterministic when unset
  double validation_fraction = 0.33;
  std::uint64_t seed = 1;
  Metric metric = Metric::Accuracy;

  void validate() const;
  bool operator==(const SearchBudget&) const = default;
};

struct LibraryMember {
  PipelinePtr model;
  Matrix validation_proba;
  double validation_score = 0.0;
};

/// Every successfully fitted candidate of a search, with its predictions on
/// the shared validation set.
struct ModelLibrary {
  std::vector<LibraryMember> members;
  Batch validation_set;
  std::vector<int> validation_labels;
  Batch train_set;
  Metric metric = Metric::Accuracy;

  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
  /// Highest validation score, lowest index on ties. Requires a non-empty library.
  std::size_t best_index() const;
};

struct HoldoutSplit {
  Batch fit;
  Batch validation;
};

/// Seeded per-class split; each part keeps the original relative order.
HoldoutSplit stratified_holdout(const Batch& data, double validation_fraction, std::uint64_t seed);

/// Seeded stratified sample of at most `cap` instances, original order kept.
/// Returns the whole batch when it already fits.
Batch stratified_sample(const Batch& data, std::size_t cap, std::uint64_t seed);

/// Mixes a stream id into a base seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Uniform family choice, then per-hyperparameter draws within HyperparameterSpace.
PipelineConfig sample_config(std::mt19937_64& rng);

/// Fits the portfolio first, then random samples, until max_candidates or the
/// time limit is reached. Failed fits are logged and skipped.
ModelLibrary run_search(const Batch& train, const SearchBudget& budget, std::span<const PipelineConfig> portfolio);

/// Predicts and scores one model on a labeled validation batch.
LibraryMember evaluate_member(PipelinePtr model, const Batch& validation, std::span<const int> labels, Metric metric);

/// Replaces the validation set and recomputes every member's predictions and
/// score against it. Fitted models are shared, not retrained.
ModelLibrary rescore_library(const ModelLibrary& lib, const Batch& new_validation);

/// Text summary: one line per member with its score and config.
std::string library_manifest(const ModelLibrary& lib);

}  // namespace driftml
