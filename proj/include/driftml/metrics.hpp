#pragma once

#include <limits>
#include <span>
#include <string_view>

#include "driftml/matrix.hpp"

namespace driftml {

enum class Metric { Accuracy, NormalizedAuc };

std::string_view metric_name(Metric m);
/// Accepts "accuracy" and "normalized_auc" (alias "auc").
Metric parse_metric(std::string_view name);

/// Returned for scores that are undefined, such as AUC on a single-class batch.
inline constexpr double kUndefinedScore = std::numeric_limits<double>::quiet_NaN();

double accuracy(std::span<const int> y_true, std::span<const int> y_pred);

/// 2*AUC - 1 for binary labels (class 1 positive), using midranks for tied
/// scores. kUndefinedScore if only one class is present.
double normalized_auc(std::span<const int> y_true, std::span<const double> positive_scores);

/// Accuracy of the row argmax, or normalized AUC of column 1 (two-column input only).
double score(Metric metric, std::span<const int> y_true, const Matrix& proba);

}  // namespace driftml
