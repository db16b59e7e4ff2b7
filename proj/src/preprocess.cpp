#include "driftml/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace driftml {

namespace {

constexpr std::size_t kMiBins = 10;

double most_frequent_value(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double best = values.front();
  std::size_t best_count = 0;
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    if (j - i > best_count) {
      best_count = j - i;
      best = values[i];
    }
    i = j;
  }
  return best;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

Encoder Encoder::fit(const Batch& train, const PipelineConfig& config) {
  const auto& schema = *train.schema;
  std::vector<FeatureEncoding> features;
  std::vector<ColumnInfo> columns;
  features.reserve(schema.feature_count());

  for (std::size_t f = 0; f < schema.feature_count(); ++f) {
    const auto& spec = schema.feature(f);
    FeatureEncoding enc;
    enc.kind = spec.kind;
    enc.first_column = columns.size();

    if (spec.kind == FeatureKind::Numeric) {
      std::vector<double> observed;
      observed.reserve(train.size());
      for (const auto& inst : train.instances)
        if (!is_missing(inst.values[f])) observed.push_back(inst.values[f]);
      if (observed.empty()) {
        enc.fill = 0.0;
      } else if (config.imputation == Imputation::Mean) {
        enc.fill = std::accumulate(observed.begin(), observed.end(), 0.0) / static_cast<double>(observed.size());
      } else {
        enc.fill = most_frequent_value(observed);
      }
      if (config.scaling == Scaling::Standardize && !train.empty()) {
        double sum = 0.0;
        for (const auto& inst : train.instances) sum += is_missing(inst.values[f]) ? enc.fill : inst.values[f];
        const double mean = sum / static_cast<double>(train.size());
        double ss = 0.0;
        for (const auto& inst : train.instances) {
          const double d = (is_missing(inst.values[f]) ? enc.fill : inst.values[f]) - mean;
          ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(train.size()));
        enc.center = mean;
        enc.scale = sd > 1e-12 ? sd : 1.0;
      }
      enc.width = 1;
      columns.push_back({false, 0});
    } else {
      const std::size_t n_levels = spec.levels.size();
      std::vector<std::size_t> counts(n_levels, 0);
      for (const auto& inst : train.instances) {
        const double v = inst.values[f];
        if (!is_missing(v) && !is_unseen(v)) ++counts[static_cast<std::size_t>(v)];
      }
      // All-missing columns fall back to level 0.
      enc.fill = static_cast<double>(std::max_element(counts.begin(), counts.end()) - counts.begin());
      if (config.one_hot) {
        enc.one_hot = true;
        enc.level_slot.assign(n_levels, -1);
        if (n_levels <= kMaxOneHotLevels) {
          std::iota(enc.level_slot.begin(), enc.level_slot.end(), 0);
          enc.width = n_levels;
        } else {
          std::vector<std::size_t> order(n_levels);
          std::iota(order.begin(), order.end(), 0);
          std::stable_sort(order.begin(), order.end(),
                           [&counts](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
          std::vector<std::size_t> kept(order.begin(), order.begin() + (kMaxOneHotLevels - 1));
          std::sort(kept.begin(), kept.end());
          for (std::size_t s = 0; s < kept.size(); ++s) enc.level_slot[kept[s]] = static_cast<int>(s);
          enc.other_slot = static_cast<int>(kMaxOneHotLevels - 1);
          enc.width = kMaxOneHotLevels;
        }
        for (std::size_t c = 0; c < enc.width; ++c) columns.push_back({true, 2});
      } else {
        enc.width = 1;
        columns.push_back({true, n_levels});
      }
    }
    features.push_back(std::move(enc));
  }
  return Encoder(std::move(features), std::move(columns));
}

Matrix Encoder::transform(const Batch& batch) const {
  Matrix out(batch.size(), columns_.size(), 0.0);
  for (std::size_t r = 0; r < batch.size(); ++r) {
    const auto& values = batch.instances[r].values;
    auto row = out.row(r);
    for (std::size_t f = 0; f < features_.size(); ++f) {
      const auto& enc = features_[f];
      const double v = values[f];
      if (enc.kind == FeatureKind::Numeric) {
        row[enc.first_column] = ((is_missing(v) ? enc.fill : v) - enc.center) / enc.scale;
        continue;
      }
      const double n_levels = static_cast<double>(enc.one_hot ? enc.level_slot.size()
                                                              : columns_[enc.first_column].cardinality);
      const bool unknown = is_unseen(v) || (!is_missing(v) && (v < 0.0 || v >= n_levels));
      if (!enc.one_hot) {
        row[enc.first_column] = (is_missing(v) || unknown) ? enc.fill : v;
        continue;
      }
      if (unknown) {
        if (enc.other_slot >= 0) row[enc.first_column + static_cast<std::size_t>(enc.other_slot)] = 1.0;
        continue;
      }
      const auto level = static_cast<std::size_t>(is_missing(v) ? enc.fill : v);
      const int slot = enc.level_slot[level] >= 0 ? enc.level_slot[level] : enc.other_slot;
      row[enc.first_column + static_cast<std::size_t>(slot)] = 1.0;
    }
  }
  return out;
}

double mutual_information(const Matrix& x, std::size_t column, const ColumnInfo& info, std::span<const int> labels,
                          std::size_t n_classes) {
  const std::size_t n = x.rows();
  if (n == 0) return 0.0;
  std::vector<std::size_t> bin(n, 0);
  std::size_t n_bins = 0;
  if (info.discrete) {
    n_bins = std::max<std::size_t>(info.cardinality, 1);
    for (std::size_t r = 0; r < n; ++r) {
      const double v = x(r, column);
      bin[r] = std::min(n_bins - 1, static_cast<std::size_t>(std::max(0.0, v)));
    }
  } else {
    std::vector<double> sorted(n);
    for (std::size_t r = 0; r < n; ++r) sorted[r] = x(r, column);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> cuts;
    for (std::size_t j = 1; j < kMiBins; ++j) {
      const double q = sorted[j * n / kMiBins];
      if (cuts.empty() || q > cuts.back()) cuts.push_back(q);
    }
    n_bins = cuts.size() + 1;
    for (std::size_t r = 0; r < n; ++r)
      bin[r] = static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), x(r, column)) - cuts.begin());
  }
  std::vector<double> joint(n_bins * n_classes, 0.0), pb(n_bins, 0.0), pc(n_classes, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto c = static_cast<std::size_t>(labels[r]);
    joint[bin[r] * n_classes + c] += 1.0;
    pb[bin[r]] += 1.0;
    pc[c] += 1.0;
  }
  const double dn = static_cast<double>(n);
  double mi = 0.0;
  for (std::size_t b = 0; b < n_bins; ++b)
    for (std::size_t c = 0; c < n_classes; ++c) {
      const double j = joint[b * n_classes + c];
      if (j > 0) mi += (j / dn) * std::log(j * dn / (pb[b] * pc[c]));
    }
  return std::max(0.0, mi);
}

std::vector<std::size_t> select_columns(const SelectorConfig& selector, const Matrix& x,
                                        std::span<const ColumnInfo> columns, std::span<const int> labels,
                                        std::size_t n_classes) {
  const std::size_t d = x.cols();
  std::vector<std::size_t> all(d);
  std::iota(all.begin(), all.end(), 0);
  if (d == 0) return all;

  return std::visit(
      overloaded{
          [&](const NoSelection&) { return all; },
          [&](const VarianceThreshold& s) {
            std::vector<double> var(d, 0.0);
            const double n = static_cast<double>(std::max<std::size_t>(x.rows(), 1));
            for (std::size_t c = 0; c < d; ++c) {
              double sum = 0.0;
              for (std::size_t r = 0; r < x.rows(); ++r) sum += x(r, c);
              const double mean = sum / n;
              double ss = 0.0;
              for (std::size_t r = 0; r < x.rows(); ++r) ss += (x(r, c) - mean) * (x(r, c) - mean);
              var[c] = ss / n;
            }
            std::vector<std::size_t> kept;
            for (std::size_t c = 0; c < d; ++c)
              if (var[c] > s.threshold) kept.push_back(c);
            if (kept.empty()) kept.push_back(static_cast<std::size_t>(std::max_element(var.begin(), var.end()) - var.begin()));
            return kept;
          },
          [&](const TopKMutualInfo& s) {
            std::vector<double> mi(d);
            for (std::size_t c = 0; c < d; ++c) mi[c] = mutual_information(x, c, columns[c], labels, n_classes);
            std::vector<std::size_t> order = all;
            std::stable_sort(order.begin(), order.end(), [&mi](std::size_t a, std::size_t b) { return mi[a] > mi[b]; });
            order.resize(std::min(s.k, d));
            std::sort(order.begin(), order.end());
            return order;
          },
      },
      selector);
}

Matrix take_columns(const Matrix& x, std::span<const std::size_t> columns) {
  Matrix out(x.rows(), columns.size());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto src = x.row(r);
    auto dst = out.row(r);
    for (std::size_t j = 0; j < columns.size(); ++j) dst[j] = src[columns[j]];
  }
  return out;
}

}  // namespace driftml
