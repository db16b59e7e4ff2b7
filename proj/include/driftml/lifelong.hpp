#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "driftml/data.hpp"
#include "driftml/ensemble.hpp"
#include "driftml/fhddm.hpp"
#include "driftml/metrics.hpp"
#include "driftml/pipeline_config.hpp"
#include "driftml/search.hpp"

namespace driftml {

class LifelongError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Strategy { Base, Replacement, WUAll, WULatest, AddNew };
inline constexpr Strategy kAllStrategies[] = {Strategy::Base, Strategy::Replacement, Strategy::WUAll,
                                              Strategy::WULatest, Strategy::AddNew};

std::string_view strategy_name(Strategy s);
/// Accepts the names produced by strategy_name; "wu-batch" is an alias of "wu-latest".
Strategy parse_strategy(std::string_view name);

inline constexpr std::size_t kDefaultValidationCap = 10000;
inline constexpr std::size_t kDefaultAddNewCandidates = 8;

struct LifelongOptions {
  Strategy strategy = Strategy::Base;
  Metric metric = Metric::Accuracy;
  SearchBudget budget;  // budget.metric is overridden by `metric`
  DetectorConfig detector;
  std::size_t ensemble_rounds = kDefaultEnsembleRounds;
  std::size_t add_new_candidates = kDefaultAddNewCandidates;
  std::size_t validation_cap = kDefaultValidationCap;
  std::vector<PipelineConfig> portfolio = default_config_portfolio();
};

struct DriftEvent {
  std::size_t batch = 0;
  std::size_t offset = 0;

  bool operator==(const DriftEvent&) const = default;
};

struct RunState {
  ModelLibrary library;
  EnsembleModel ensemble;
  FhddmState detector;
  std::vector<Batch> stored_data;  // every labeled batch seen so far, training batch first
  std::vector<double> metrics_per_batch;
  std::vector<DriftEvent> drift_events;
  std::vector<std::string> notes;
};

struct BatchRecord {
  std::size_t batch = 0;
  double metric = 0.0;
  bool drift = false;
  std::size_t drift_offset = 0;
  bool adapted = false;
  double predict_ms = 0.0;
  double adapt_ms = 0.0;
};

struct RunReport {
  Strategy strategy = Strategy::Base;
  Metric metric = Metric::Accuracy;
  std::vector<BatchRecord> batches;
  double mean_metric = kUndefinedScore;  // over batches with a defined score
  std::size_t excluded_batches = 0;
  std::vector<DriftEvent> drift_events;
  std::vector<std::string> notes;
  double initial_search_ms = 0.0;
  double total_predict_ms = 0.0;
  double total_adapt_ms = 0.0;

  std::vector<double> metrics() const;
};

/// Hooks into run_lifelong's phases, in call order per batch.
class RunObserver {
 public:
  virtual ~RunObserver() = default;
  /// `model_input` is exactly what the ensemble saw.
  virtual void on_predicted(std::size_t /*batch*/, const Batch& /*model_input*/, std::span<const int> /*predictions*/) {}
  virtual void on_scored(std::size_t /*batch*/, double /*metric*/) {}
  virtual void on_labels_revealed(std::size_t /*batch*/) {}
  virtual void on_adapted(std::size_t /*batch*/, const RunState& /*state*/) {}
};

/// Adaptation inputs shared by the strategies.
struct AdaptContext {
  const LifelongOptions& options;
  std::size_t batch_index;
};

enum class WeightScope { All, Latest };

RunState initial_state(const Batch& train, const LifelongOptions& options);

/// New search on all stored data plus the current batch; replaces library and ensemble.
RunState adapt_replacement(RunState state, const Batch& current, const AdaptContext& ctx);

/// Rescores the existing library on new validation data and reselects the
/// ensemble. No member is retrained.
RunState adapt_weight_update(RunState state, const Batch& current, WeightScope scope, const AdaptContext& ctx);

/// Fits a few portfolio configs on all data, appends them to the library,
/// rescores everything on a fresh sample and reselects.
RunState adapt_add_new(RunState state, const Batch& current, const AdaptContext& ctx);

/// Predict, score, reveal labels, feed the detector, adapt on drift, store.
/// The base arm neither adapts nor resets its detector.
RunReport run_lifelong(const Batch& train, std::span<const Batch> test_batches, const LifelongOptions& options,
                       RunObserver* observer = nullptr);

}  // namespace driftml
