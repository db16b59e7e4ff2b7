#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace driftml {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scaling { None, Standardize };
enum class Imputation { Mean, Mode };

struct NoSelection {
  bool operator==(const NoSelection&) const = default;
};
/// Keeps encoded columns whose training variance exceeds the threshold.
struct VarianceThreshold {
  double threshold = 0.0;
  bool operator==(const VarianceThreshold&) const = default;
};
/// Keeps the k encoded columns with the highest mutual information with the label.
struct TopKMutualInfo {
  std::size_t k = 8;
  bool operator==(const TopKMutualInfo&) const = default;
};
using SelectorConfig = std::variant<NoSelection, VarianceThreshold, TopKMutualInfo>;

enum class SplitCriterion { Gini, Entropy };

struct DecisionTreeConfig {
  int max_depth = 8;
  std::size_t min_leaf = 1;
  SplitCriterion criterion = SplitCriterion::Gini;
  bool operator==(const DecisionTreeConfig&) const = default;
};

struct NaiveBayesConfig {
  double laplace_alpha = 1.0;
  bool operator==(const NaiveBayesConfig&) const = default;
};

struct LogisticSgdConfig {
  double learning_rate = 0.1;
  double l2 = 1e-4;
  std::size_t epochs = 20;
  bool operator==(const LogisticSgdConfig&) const = default;
};

struct KnnConfig {
  std::size_t k = 5;
  std::size_t max_reference_points = 2000;
  bool operator==(const KnnConfig&) const = default;
};

using ClassifierConfig = std::variant<DecisionTreeConfig, NaiveBayesConfig, LogisticSgdConfig, KnnConfig>;

enum class ClassifierFamily { DecisionTree, NaiveBayes, LogisticSgd, Knn };
inline constexpr std::size_t kClassifierFamilyCount = 4;

inline ClassifierFamily family_of(const ClassifierConfig& c) {
  return static_cast<ClassifierFamily>(c.index());
}
std::string_view family_name(ClassifierFamily f);

/// A full model: imputation, optional scaling, categorical encoding, feature
/// selection and a classifier.
struct PipelineConfig {
  Scaling scaling = Scaling::Standardize;
  Imputation imputation = Imputation::Mean;
  bool one_hot = true;
  SelectorConfig selector = NoSelection{};
  ClassifierConfig classifier = DecisionTreeConfig{};

  bool operator==(const PipelineConfig&) const = default;
};

/// Declared hyperparameter bounds. Validation and random sampling both use these.
struct HyperparameterSpace {
  static constexpr int kMinDepth = 1;
  static constexpr int kMaxDepth = 32;
  static constexpr std::size_t kMaxMinLeaf = 64;
  static constexpr double kMinAlpha = 1e-3;
  static constexpr double kMaxAlpha = 10.0;
  static constexpr double kMinLearningRate = 1e-3;
  static constexpr double kMaxLearningRate = 1.0;
  static constexpr double kMinL2 = 1e-6;
  static constexpr double kMaxL2 = 1e-1;
  static constexpr std::size_t kMinEpochs = 5;
  static constexpr std::size_t kMaxEpochs = 50;
  static constexpr std::size_t kMaxK = 31;
  static constexpr std::size_t kMinReferencePoints = 256;
  static constexpr std::size_t kMaxReferencePoints = 4096;
  static constexpr double kMaxVarianceThreshold = 0.25;
  static constexpr std::size_t kMaxTopK = 32;
};

/// Throws ConfigError when any hyperparameter is outside its declared bounds.
void validate(const PipelineConfig& config);

/// One-line `key=value` form, e.g.
/// `scaling=standardize imputation=mean one_hot=true selector=none classifier=decision_tree max_depth=8 min_leaf=1 criterion=gini`.
std::string to_text(const PipelineConfig& config);
PipelineConfig parse_pipeline_config(std::string_view text);

/// Fixed starting configurations evaluated before any random sampling.
std::vector<PipelineConfig> default_config_portfolio();

}  // namespace driftml
