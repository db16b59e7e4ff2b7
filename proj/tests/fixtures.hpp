#pragma once

#include <memory>
#include <random>
#include <vector>

#include "driftml/data.hpp"
#include "driftml/search.hpp"

namespace fixtures {

using namespace driftml;

inline SchemaPtr numeric_schema(std::size_t n_features, std::size_t n_classes = 2) {
  std::vector<FeatureSpec> f;
  for (std::size_t i = 0; i < n_features; ++i) f.push_back({"x" + std::to_string(i), FeatureKind::Numeric, {}});
  std::vector<std::string> classes;
  for (std::size_t c = 0; c < n_classes; ++c) classes.push_back("c" + std::to_string(c));
  return std::make_shared<const Schema>(std::move(f), LabelSpec{"y", classes});
}

inline Batch make_batch(SchemaPtr schema, const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
                        std::size_t index = 0) {
  Batch b{std::move(schema), {}, index};
  for (std::size_t i = 0; i < rows.size(); ++i)
    b.instances.push_back({rows[i], i < labels.size() ? std::optional<int>(labels[i]) : std::nullopt});
  return b;
}

/// Two numeric features, label = x0 + x1 > 0 with some overlap.
inline Batch linear_batch(std::size_t n, std::uint64_t seed, std::size_t index = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Batch b{numeric_schema(2), {}, index};
  for (std::size_t i = 0; i < n; ++i) {
    const double a = g(rng), c = g(rng);
    b.instances.push_back({{a, c}, (a + c + 0.3 * g(rng)) > 0 ? 1 : 0});
  }
  return b;
}

/// Mixed schema with a categorical column, missing values and three classes.
inline Batch mixed_batch(std::size_t n, std::uint64_t seed) {
  std::vector<FeatureSpec> f = {{"num", FeatureKind::Numeric, {}},
                                {"cat", FeatureKind::Categorical, {"a", "b", "c", "d"}},
                                {"noise", FeatureKind::Numeric, {}}};
  auto schema = std::make_shared<const Schema>(std::move(f), LabelSpec{"y", {"p", "q", "r"}});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> lvl(0, 3);
  std::bernoulli_distribution miss(0.05);
  Batch b{schema, {}, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const double x = u(rng);
    const int c = lvl(rng);
    const int y = c == 3 ? 2 : (x > 0 ? 1 : 0);
    b.instances.push_back({{miss(rng) ? kMissing : x, miss(rng) ? kMissing : static_cast<double>(c), u(rng)}, y});
  }
  return b;
}

/// Library with hand-set validation predictions and no fitted models.
inline ModelLibrary synthetic_library(const std::vector<Matrix>& proba, const std::vector<int>& labels, Metric metric) {
  ModelLibrary lib;
  lib.metric = metric;
  lib.validation_labels = labels;
  for (const auto& p : proba) lib.members.push_back({nullptr, p, score(metric, labels, p)});
  return lib;
}

}  // namespace fixtures
