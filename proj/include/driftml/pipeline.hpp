#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "driftml/classifiers.hpp"
#include "driftml/data.hpp"
#include "driftml/matrix.hpp"
#include "driftml/pipeline_config.hpp"
#include "driftml/preprocess.hpp"

namespace driftml {

class LearnerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fitted full model. Immutable once constructed; safe to share across threads.
class TrainedPipeline {
 public:
  TrainedPipeline(PipelineConfig config, SchemaPtr schema, Encoder encoder, std::vector<std::size_t> selected,
                  FittedClassifier classifier, std::uint64_t train_fingerprint, std::uint64_t seed);

  const PipelineConfig& config() const { return config_; }
  const SchemaPtr& schema() const { return schema_; }
  const Encoder& encoder() const { return encoder_; }
  const std::vector<std::size_t>& selected_columns() const { return selected_; }
  const FittedClassifier& classifier() const { return classifier_; }
  std::uint64_t train_fingerprint() const { return train_fingerprint_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t class_count() const { return schema_->class_count(); }

  bool operator==(const TrainedPipeline& other) const;

 private:
  PipelineConfig config_;
  SchemaPtr schema_;
  Encoder encoder_;
  std::vector<std::size_t> selected_;
  FittedClassifier classifier_;
  std::uint64_t train_fingerprint_;
  std::uint64_t seed_;
};

using PipelinePtr = std::shared_ptr<const TrainedPipeline>;

/// Deterministic in (config, train, seed). Every instance must be labeled.
TrainedPipeline fit(const PipelineConfig& config, const Batch& train, std::uint64_t seed);

/// Rows follow batch order and sum to 1. Labels in the batch are ignored.
Matrix predict_proba(const TrainedPipeline& model, const Batch& batch);

/// Argmax of predict_proba, lowest class index on ties.
std::vector<int> predict(const TrainedPipeline& model, const Batch& batch);

/// Re-expresses categorical values of `batch` against `target`'s level lists
/// (by level name). Throws DataError when the schemas are incompatible.
Batch conform_to(const Batch& batch, const Schema& target);

}  // namespace driftml
