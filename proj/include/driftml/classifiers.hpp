#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "driftml/matrix.hpp"
#include "driftml/pipeline_config.hpp"
#include "driftml/preprocess.hpp"

namespace driftml {

/// Training view handed to every classifier: encoded features, labels in
/// [0, n_classes), and the kind of each column.
struct TrainingSet {
  const Matrix& x;
  std::span<const int> y;
  std::span<const ColumnInfo> columns;
  std::size_t n_classes;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::size_t dist_offset = 0;  // leaf class distribution in DecisionTreeModel::leaf_dist

  bool operator==(const TreeNode&) const = default;
};

/// CART tree. Samples with x <= threshold go left.
struct DecisionTreeModel {
  std::size_t n_classes = 0;
  std::vector<TreeNode> nodes;
  std::vector<double> leaf_dist;

  static DecisionTreeModel fit(const TrainingSet& data, const DecisionTreeConfig& config);
  void predict_proba(const Matrix& x, Matrix& out) const;
  std::size_t depth() const;
  bool operator==(const DecisionTreeModel&) const = default;
};

/// Hybrid naive Bayes: Laplace-smoothed categorical likelihoods for discrete
/// columns, Gaussian likelihoods for continuous ones, empirical class priors.
struct NaiveBayesModel {
  std::size_t n_classes = 0;
  std::vector<double> class_count;
  std::vector<ColumnInfo> columns;
  // Discrete columns: log P(value | class), laid out [column][class][value] via offsets.
  std::vector<std::size_t> table_offset;
  std::vector<double> log_likelihood;
  // Continuous columns: per [column][class].
  std::vector<double> mean;
  std::vector<double> variance;

  static NaiveBayesModel fit(const TrainingSet& data, const NaiveBayesConfig& config);
  void predict_proba(const Matrix& x, Matrix& out) const;
  bool operator==(const NaiveBayesModel&) const = default;
};

/// Multinomial logistic regression trained with shuffled per-sample SGD.
struct LogisticModel {
  std::size_t n_classes = 0;
  std::size_t n_features = 0;
  std::vector<double> weights;  // [class][feature + 1], bias last
  std::vector<double> loss_history;  // regularized mean log-loss after each epoch

  static LogisticModel fit(const TrainingSet& data, const LogisticSgdConfig& config, std::uint64_t seed);
  void predict_proba(const Matrix& x, Matrix& out) const;
  double loss(const TrainingSet& data, double l2) const;
  bool operator==(const LogisticModel&) const = default;
};

/// k-nearest-neighbour vote over a reservoir sample of the training set.
struct KnnModel {
  std::size_t n_classes = 0;
  std::size_t k = 1;
  Matrix reference;
  std::vector<int> reference_labels;

  static KnnModel fit(const TrainingSet& data, const KnnConfig& config, std::uint64_t seed);
  void predict_proba(const Matrix& x, Matrix& out) const;
  bool operator==(const KnnModel&) const = default;
};

/// Used when the training data holds a single class.
struct ConstantModel {
  std::size_t n_classes = 0;
  int label = 0;

  void predict_proba(const Matrix& x, Matrix& out) const;
  bool operator==(const ConstantModel&) const = default;
};

using FittedClassifier = std::variant<DecisionTreeModel, NaiveBayesModel, LogisticModel, KnnModel, ConstantModel>;

FittedClassifier fit_classifier(const TrainingSet& data, const ClassifierConfig& config, std::uint64_t seed);
Matrix predict_proba(const FittedClassifier& model, const Matrix& x);

}  // namespace driftml
