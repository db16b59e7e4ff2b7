#include "driftml/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace driftml {

std::string_view metric_name(Metric m) {
  return m == Metric::Accuracy ? "accuracy" : "normalized_auc";
}

Metric parse_metric(std::string_view name) {
  if (name == "accuracy") return Metric::Accuracy;
  if (name == "normalized_auc" || name == "auc") return Metric::NormalizedAuc;
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

double accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.empty()) throw std::invalid_argument("accuracy of an empty batch");
  if (y_true.size() != y_pred.size()) throw std::invalid_argument("accuracy: length mismatch");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) hits += y_true[i] == y_pred[i];
  return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

double normalized_auc(std::span<const int> y_true, std::span<const double> positive_scores) {
  if (y_true.empty()) throw std::invalid_argument("AUC of an empty batch");
  if (y_true.size() != positive_scores.size()) throw std::invalid_argument("AUC: length mismatch");
  const std::size_t n = y_true.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return positive_scores[a] < positive_scores[b]; });
  double rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && positive_scores[order[j]] == positive_scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      const int y = y_true[order[k]];
      if (y != 0 && y != 1) throw std::invalid_argument("AUC requires binary labels");
      if (y == 1) {
        rank_sum += midrank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return kUndefinedScore;
  const double np = static_cast<double>(n_pos);
  const double auc = (rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
  return 2.0 * auc - 1.0;
}

double score(Metric metric, std::span<const int> y_true, const Matrix& proba) {
  if (proba.rows() != y_true.size()) throw std::invalid_argument("score: row count mismatch");
  if (metric == Metric::Accuracy) {
    const auto pred = argmax_rows(proba);
    return accuracy(y_true, pred);
  }
  if (proba.cols() != 2) throw std::invalid_argument("normalized AUC requires a binary problem");
  std::vector<double> pos(proba.rows());
  for (std::size_t r = 0; r < proba.rows(); ++r) pos[r] = proba(r, 1);
  return normalized_auc(y_true, pos);
}

}  // namespace driftml
