#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "driftml/data.hpp"
#include "driftml/matrix.hpp"
#include "driftml/pipeline_config.hpp"

namespace driftml {

/// Shape of one encoded column as seen by the classifiers. Discrete columns
/// hold integer codes in [0, cardinality).
struct ColumnInfo {
  bool discrete = false;
  std::size_t cardinality = 0;

  bool operator==(const ColumnInfo&) const = default;
};

inline constexpr std::size_t kMaxOneHotLevels = 64;

/// Per-source-feature encoding learned from training data.
struct FeatureEncoding {
  FeatureKind kind = FeatureKind::Numeric;
  double fill = 0.0;    // imputed value (numeric value or level index)
  double center = 0.0;  // standardization, numeric only
  double scale = 1.0;
  bool one_hot = false;
  std::size_t first_column = 0;
  std::size_t width = 1;
  // One-hot only: column offset for each level, or -1 to route to the "other" column.
  std::vector<int> level_slot;
  int other_slot = -1;

  bool operator==(const FeatureEncoding&) const = default;
};

/// Imputation, standardization and categorical encoding, in that order.
class Encoder {
 public:
  Encoder() = default;
  Encoder(std::vector<FeatureEncoding> features, std::vector<ColumnInfo> columns)
      : features_(std::move(features)), columns_(std::move(columns)) {}

  static Encoder fit(const Batch& train, const PipelineConfig& config);

  Matrix transform(const Batch& batch) const;

  const std::vector<ColumnInfo>& columns() const { return columns_; }
  const std::vector<FeatureEncoding>& features() const { return features_; }

  bool operator==(const Encoder&) const = default;

 private:
  std::vector<FeatureEncoding> features_;
  std::vector<ColumnInfo> columns_;
};

/// Columns kept by the feature-selection stage, ascending. Never empty when the
/// input has at least one column.
std::vector<std::size_t> select_columns(const SelectorConfig& selector, const Matrix& x,
                                        std::span<const ColumnInfo> columns, std::span<const int> labels,
                                        std::size_t n_classes);

/// Mutual information (nats) between one encoded column and the label.
/// Continuous columns are discretized into equal-frequency bins.
double mutual_information(const Matrix& x, std::size_t column, const ColumnInfo& info, std::span<const int> labels,
                          std::size_t n_classes);

Matrix take_columns(const Matrix& x, std::span<const std::size_t> columns);

}  // namespace driftml
