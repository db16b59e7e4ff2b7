#include "driftml/pipeline.hpp"

namespace driftml {

TrainedPipeline::TrainedPipeline(PipelineConfig config, SchemaPtr schema, Encoder encoder,
                                 std::vector<std::size_t> selected, FittedClassifier classifier,
                                 std::uint64_t train_fingerprint, std::uint64_t seed)
    : config_(std::move(config)),
      schema_(std::move(schema)),
      encoder_(std::move(encoder)),
      selected_(std::move(selected)),
      classifier_(std::move(classifier)),
      train_fingerprint_(train_fingerprint),
      seed_(seed) {}

bool TrainedPipeline::operator==(const TrainedPipeline& other) const {
  return config_ == other.config_ && *schema_ == *other.schema_ && encoder_ == other.encoder_ &&
         selected_ == other.selected_ && classifier_ == other.classifier_ &&
         train_fingerprint_ == other.train_fingerprint_ && seed_ == other.seed_;
}

TrainedPipeline fit(const PipelineConfig& config, const Batch& train, std::uint64_t seed) {
  validate(config);
  if (!train.schema) throw LearnerError("training batch has no schema");
  if (train.empty()) throw LearnerError("cannot fit on an empty batch");
  std::vector<int> labels;
  try {
    labels = train.labels();
  } catch (const DataError& e) {
    throw LearnerError(std::string("training data must be labeled: ") + e.what());
  }
  const std::size_t n_classes = train.schema->class_count();

  Encoder encoder = Encoder::fit(train, config);
  Matrix encoded = encoder.transform(train);
  std::vector<std::size_t> selected = select_columns(config.selector, encoded, encoder.columns(), labels, n_classes);
  Matrix x = take_columns(encoded, selected);
  std::vector<ColumnInfo> columns;
  columns.reserve(selected.size());
  for (auto c : selected) columns.push_back(encoder.columns()[c]);

  FittedClassifier classifier = fit_classifier(TrainingSet{x, labels, columns, n_classes}, config.classifier, seed);
  return TrainedPipeline(config, train.schema, std::move(encoder), std::move(selected), std::move(classifier),
                         fingerprint(train), seed);
}

Batch conform_to(const Batch& batch, const Schema& target) {
  if (!batch.schema) throw DataError("batch has no schema");
  const Schema& source = *batch.schema;
  if (!source.compatible_with(target))
    throw DataError("schema mismatch: batch features or classes differ from the model's");
  for (const auto& inst : batch.instances)
    if (inst.values.size() != target.feature_count()) throw DataError("schema mismatch: instance arity differs");
  if (&source == &target || source.features() == target.features()) return batch;

  std::vector<std::vector<double>> remap(source.feature_count());
  for (std::size_t f = 0; f < source.feature_count(); ++f) {
    if (source.feature(f).kind != FeatureKind::Categorical) continue;
    for (const auto& level : source.feature(f).levels) {
      auto idx = target.level_index(f, level);
      remap[f].push_back(idx ? static_cast<double>(*idx) : kUnseenLevel);
    }
  }
  Batch out = batch;
  for (auto& inst : out.instances)
    for (std::size_t f = 0; f < source.feature_count(); ++f) {
      double& v = inst.values[f];
      if (remap[f].empty() || is_missing(v) || is_unseen(v)) continue;
      const auto i = static_cast<std::size_t>(v);
      v = i < remap[f].size() ? remap[f][i] : kUnseenLevel;
    }
  return out;
}

Matrix predict_proba(const TrainedPipeline& model, const Batch& batch) {
  const Schema& target = *model.schema();
  const bool direct = batch.schema && (batch.schema.get() == &target || batch.schema->features() == target.features());
  if (direct) {
    if (!batch.schema->compatible_with(target)) throw DataError("schema mismatch: class set differs from the model's");
    for (const auto& inst : batch.instances)
      if (inst.values.size() != target.feature_count()) throw DataError("schema mismatch: instance arity differs");
  }
  Matrix encoded = direct ? model.encoder().transform(batch) : model.encoder().transform(conform_to(batch, target));
  Matrix x = take_columns(encoded, model.selected_columns());
  return predict_proba(model.classifier(), x);
}

std::vector<int> predict(const TrainedPipeline& model, const Batch& batch) {
  return argmax_rows(predict_proba(model, batch));
}

}  // namespace driftml
