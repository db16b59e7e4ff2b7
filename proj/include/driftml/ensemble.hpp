#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "driftml/data.hpp"
#include "driftml/matrix.hpp"
#include "driftml/metrics.hpp"
#include "driftml/search.hpp"

namespace driftml {

class EnsembleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultEnsembleRounds = 50;

/// Weighted vote over library members. weights[i] is the share of
/// selection_trace entries equal to member_refs[i].
struct EnsembleModel {
  std::vector<std::size_t> member_refs;  // ascending library indices
  std::vector<double> weights;
  std::size_t rounds = 0;
  std::vector<std::size_t> selection_trace;
  double validation_score = 0.0;

  bool operator==(const EnsembleModel&) const = default;
};

/// Builds member_refs/weights/rounds from a trace of picked library indices.
EnsembleModel ensemble_from_trace(std::vector<std::size_t> trace);

/// Greedy forward selection with replacement. Each round adds the member that
/// maximizes the metric of the uniform average of the picks so far (lowest
/// index on ties); the best-scoring prefix of the trace is kept.
EnsembleModel select_ensemble(const ModelLibrary& lib, std::size_t rounds, Metric metric);

/// The full greedy pick sequence before the best prefix is cut.
std::vector<std::size_t> greedy_trace(const ModelLibrary& lib, std::size_t rounds, Metric metric);

/// Weighted average of the members' stored validation predictions.
Matrix ensemble_validation_proba(const EnsembleModel& ens, const ModelLibrary& lib);

Matrix ensemble_predict_proba(const EnsembleModel& ens, const ModelLibrary& lib, const Batch& batch);
std::vector<int> ensemble_predict(const EnsembleModel& ens, const ModelLibrary& lib, const Batch& batch);

/// One line per member: library index, weight, config.
std::string ensemble_summary(const EnsembleModel& ens, const ModelLibrary& lib);

}  // namespace driftml
