#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace driftml {

/// Raised for malformed input data: bad CSV, schema mismatches, labels outside the class set.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class FeatureKind { Numeric, Categorical };

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::Numeric;
  std::vector<std::string> levels;  // categorical only

  bool operator==(const FeatureSpec&) const = default;
};

struct LabelSpec {
  std::string name;
  std::vector<std::string> classes;

  bool operator==(const LabelSpec&) const = default;
};

/// Column layout of a tabular dataset. Validated on construction.
class Schema {
 public:
  Schema(std::vector<FeatureSpec> features, LabelSpec label);

  const std::vector<FeatureSpec>& features() const { return features_; }
  const FeatureSpec& feature(std::size_t i) const { return features_[i]; }
  std::size_t feature_count() const { return features_.size(); }
  const LabelSpec& label() const { return label_; }
  std::size_t class_count() const { return label_.classes.size(); }

  std::optional<std::size_t> level_index(std::size_t feature, std::string_view level) const;
  std::optional<std::size_t> class_index(std::string_view name) const;

  /// Same feature count and kinds, and the same class set. Level lists may differ.
  bool compatible_with(const Schema& other) const;

  bool operator==(const Schema&) const = default;

 private:
  std::vector<FeatureSpec> features_;
  LabelSpec label_;
};

using SchemaPtr = std::shared_ptr<const Schema>;

// Cell encoding: numeric features hold the value; categorical features hold the
// level index as a double. Missing cells are NaN; categorical levels not in the
// schema hold kUnseenLevel.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline constexpr double kUnseenLevel = -1.0;

inline bool is_missing(double v) { return std::isnan(v); }
inline bool is_unseen(double v) { return v == kUnseenLevel; }

struct Instance {
  std::vector<double> values;
  std::optional<int> label;
};

struct Batch {
  SchemaPtr schema;
  std::vector<Instance> instances;
  std::size_t index = 0;

  std::size_t size() const { return instances.size(); }
  bool empty() const { return instances.empty(); }

  /// Class labels in order; throws DataError if any instance is unlabeled.
  std::vector<int> labels() const;
  /// Copy with every label removed.
  Batch without_labels() const;
  /// Copy holding only the given instances, in the given order.
  Batch subset(std::span<const std::size_t> rows) const;
  /// Checks value arity, categorical ranges and label range against the schema.
  void validate() const;
};

struct CsvTable {
  Schema schema;
  Batch batch;
};

/// Reads a headered, comma-separated file. `?` or an empty cell is missing.
/// Without a schema hint, a column is numeric when every non-missing cell parses
/// as a number, otherwise categorical with levels in order of first appearance.
CsvTable load_csv(const std::string& path, const std::optional<Schema>& schema_hint,
                  const std::string& label_column);
CsvTable read_csv(std::istream& in, const std::optional<Schema>& schema_hint,
                  const std::string& label_column);

/// Writes the batch as CSV (features then label); missing cells as `?`.
void write_csv(std::ostream& out, const Batch& batch);

std::vector<Batch> split_stream(const Batch& data, std::size_t batch_size);

/// Concatenates batches sharing a compatible schema; the first batch's schema and index are kept.
Batch concatenate(std::span<const Batch> parts);

/// Order-sensitive FNV-1a hash over values and labels.
std::uint64_t fingerprint(const Batch& batch);

}  // namespace driftml
