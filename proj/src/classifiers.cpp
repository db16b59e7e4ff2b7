#include "driftml/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace driftml {

namespace {

double impurity(std::span<const double> counts, double total, SplitCriterion criterion) {
  if (total <= 0) return 0.0;
  double acc = 0.0;
  if (criterion == SplitCriterion::Gini) {
    for (double c : counts) acc += (c / total) * (c / total);
    return 1.0 - acc;
  }
  for (double c : counts)
    if (c > 0) acc -= (c / total) * std::log2(c / total);
  return acc;
}

class TreeBuilder {
 public:
  TreeBuilder(const TrainingSet& data, const DecisionTreeConfig& config, DecisionTreeModel& model)
      : data_(data), config_(config), model_(model) {}

  int build(std::vector<std::size_t>& rows, int depth) {
    const std::size_t nc = data_.n_classes;
    std::vector<double> counts(nc, 0.0);
    for (auto r : rows) counts[static_cast<std::size_t>(data_.y[r])] += 1.0;
    const double n = static_cast<double>(rows.size());
    const double parent = impurity(counts, n, config_.criterion);

    const int node_id = static_cast<int>(model_.nodes.size());
    model_.nodes.push_back({});

    const bool can_split = depth < config_.max_depth && rows.size() >= 2 * config_.min_leaf && parent > 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;
    if (can_split) {
      double best_score = parent - 1e-12;
      std::vector<std::pair<double, std::size_t>> sorted(rows.size());
      std::vector<double> left(nc), right(nc);
      for (std::size_t f = 0; f < data_.x.cols(); ++f) {
        for (std::size_t i = 0; i < rows.size(); ++i) sorted[i] = {data_.x(rows[i], f), rows[i]};
        std::sort(sorted.begin(), sorted.end());
        if (sorted.front().first == sorted.back().first) continue;
        std::fill(left.begin(), left.end(), 0.0);
        right = counts;
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
          const auto c = static_cast<std::size_t>(data_.y[sorted[i].second]);
          left[c] += 1.0;
          right[c] -= 1.0;
          const std::size_t nl = i + 1;
          const std::size_t nr = sorted.size() - nl;
          if (nl < config_.min_leaf) continue;
          if (nr < config_.min_leaf) break;
          const double lo = sorted[i].first;
          const double hi = sorted[i + 1].first;
          if (!(lo < hi)) continue;
          const double dl = static_cast<double>(nl);
          const double dr = static_cast<double>(nr);
          const double score =
              (dl * impurity(left, dl, config_.criterion) + dr * impurity(right, dr, config_.criterion)) / n;
          if (score < best_score) {
            best_score = score;
            best_feature = static_cast<int>(f);
            double mid = lo + (hi - lo) / 2.0;
            if (!(mid < hi)) mid = lo;
            best_threshold = mid;
          }
        }
      }
    }

    if (best_feature < 0) {
      auto& node = model_.nodes[static_cast<std::size_t>(node_id)];
      node.dist_offset = model_.leaf_dist.size();
      for (double c : counts) model_.leaf_dist.push_back(c / n);
      return node_id;
    }

    const auto f = static_cast<std::size_t>(best_feature);
    auto mid = std::stable_partition(rows.begin(), rows.end(),
                                     [&](std::size_t r) { return data_.x(r, f) <= best_threshold; });
    std::vector<std::size_t> left_rows(rows.begin(), mid);
    std::vector<std::size_t> right_rows(mid, rows.end());
    rows.clear();
    rows.shrink_to_fit();
    const int l = build(left_rows, depth + 1);
    const int r = build(right_rows, depth + 1);
    auto& node = model_.nodes[static_cast<std::size_t>(node_id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = r;
    return node_id;
  }

 private:
  const TrainingSet& data_;
  const DecisionTreeConfig& config_;
  DecisionTreeModel& model_;
};

void softmax_inplace(std::span<double> z) {
  const double mx = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

DecisionTreeModel DecisionTreeModel::fit(const TrainingSet& data, const DecisionTreeConfig& config) {
  DecisionTreeModel model;
  model.n_classes = data.n_classes;
  std::vector<std::size_t> rows(data.x.rows());
  std::iota(rows.begin(), rows.end(), 0);
  TreeBuilder(data, config, model).build(rows, 0);
  return model;
}

void DecisionTreeModel::predict_proba(const Matrix& x, Matrix& out) const {
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::size_t node = 0;
    while (nodes[node].feature >= 0) {
      const auto& n = nodes[node];
      node = static_cast<std::size_t>(x(r, static_cast<std::size_t>(n.feature)) <= n.threshold ? n.left : n.right);
    }
    std::copy_n(leaf_dist.begin() + static_cast<std::ptrdiff_t>(nodes[node].dist_offset), n_classes,
                out.row(r).begin());
  }
}

std::size_t DecisionTreeModel::depth() const {
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t deepest = 0;
  // Children always have larger ids than their parent.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (nodes[i].feature >= 0) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return deepest;
}

NaiveBayesModel NaiveBayesModel::fit(const TrainingSet& data, const NaiveBayesConfig& config) {
  NaiveBayesModel m;
  const std::size_t nc = data.n_classes;
  const std::size_t d = data.x.cols();
  const std::size_t n = data.x.rows();
  m.n_classes = nc;
  m.columns.assign(data.columns.begin(), data.columns.end());
  m.class_count.assign(nc, 0.0);
  for (std::size_t r = 0; r < n; ++r) m.class_count[static_cast<std::size_t>(data.y[r])] += 1.0;

  m.table_offset.assign(d, 0);
  m.mean.assign(d * nc, 0.0);
  m.variance.assign(d * nc, 0.0);

  double max_var = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const auto& info = m.columns[j];
    if (info.discrete) {
      const std::size_t card = std::max<std::size_t>(info.cardinality, 1);
      m.table_offset[j] = m.log_likelihood.size();
      std::vector<double> counts(nc * card, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        const auto v = std::min(card - 1, static_cast<std::size_t>(std::max(0.0, data.x(r, j))));
        counts[static_cast<std::size_t>(data.y[r]) * card + v] += 1.0;
      }
      for (std::size_t c = 0; c < nc; ++c)
        for (std::size_t v = 0; v < card; ++v)
          m.log_likelihood.push_back(std::log((counts[c * card + v] + config.laplace_alpha) /
                                              (m.class_count[c] + config.laplace_alpha * static_cast<double>(card))));
    } else {
      double sum = 0.0, sq = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        const auto c = static_cast<std::size_t>(data.y[r]);
        m.mean[j * nc + c] += data.x(r, j);
        sum += data.x(r, j);
      }
      for (std::size_t c = 0; c < nc; ++c)
        if (m.class_count[c] > 0) m.mean[j * nc + c] /= m.class_count[c];
      const double overall = n ? sum / static_cast<double>(n) : 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        const auto c = static_cast<std::size_t>(data.y[r]);
        const double dv = data.x(r, j) - m.mean[j * nc + c];
        m.variance[j * nc + c] += dv * dv;
        sq += (data.x(r, j) - overall) * (data.x(r, j) - overall);
      }
      for (std::size_t c = 0; c < nc; ++c)
        if (m.class_count[c] > 0) m.variance[j * nc + c] /= m.class_count[c];
      if (n) max_var = std::max(max_var, sq / static_cast<double>(n));
    }
  }
  const double smoothing = std::max(1e-9 * max_var, 1e-12);
  for (std::size_t j = 0; j < d; ++j)
    if (!m.columns[j].discrete)
      for (std::size_t c = 0; c < nc; ++c) m.variance[j * nc + c] += smoothing;
  return m;
}

void NaiveBayesModel::predict_proba(const Matrix& x, Matrix& out) const {
  constexpr double kLog2Pi = 1.8378770664093453;
  const double total = std::accumulate(class_count.begin(), class_count.end(), 0.0);
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> logp(n_classes);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < n_classes; ++c) {
      if (class_count[c] <= 0) {
        logp[c] = neg_inf;
        continue;
      }
      double lp = std::log(class_count[c] / total);
      for (std::size_t j = 0; j < columns.size(); ++j) {
        const double v = x(r, j);
        if (columns[j].discrete) {
          const std::size_t card = std::max<std::size_t>(columns[j].cardinality, 1);
          const auto level = std::min(card - 1, static_cast<std::size_t>(std::max(0.0, v)));
          lp += log_likelihood[table_offset[j] + c * card + level];
        } else {
          const double mu = mean[j * n_classes + c];
          const double var = variance[j * n_classes + c];
          lp += -0.5 * (kLog2Pi + std::log(var) + (v - mu) * (v - mu) / var);
        }
      }
      logp[c] = lp;
    }
    const double mx = *std::max_element(logp.begin(), logp.end());
    double sum = 0.0;
    auto row = out.row(r);
    for (std::size_t c = 0; c < n_classes; ++c) {
      row[c] = logp[c] == neg_inf ? 0.0 : std::exp(logp[c] - mx);
      sum += row[c];
    }
    for (auto& v : row) v /= sum;
  }
}

LogisticModel LogisticModel::fit(const TrainingSet& data, const LogisticSgdConfig& config, std::uint64_t seed) {
  LogisticModel m;
  const std::size_t nc = data.n_classes;
  const std::size_t d = data.x.cols();
  const std::size_t stride = d + 1;
  m.n_classes = nc;
  m.n_features = d;
  m.weights.assign(nc * stride, 0.0);

  std::vector<std::size_t> order(data.x.rows());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::vector<double> z(nc);
  const double lr = config.learning_rate;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (auto r : order) {
      auto xr = data.x.row(r);
      for (std::size_t c = 0; c < nc; ++c) {
        const double* w = &m.weights[c * stride];
        double acc = w[d];
        for (std::size_t j = 0; j < d; ++j) acc += w[j] * xr[j];
        z[c] = acc;
      }
      softmax_inplace(z);
      for (std::size_t c = 0; c < nc; ++c) {
        const double g = z[c] - (static_cast<std::size_t>(data.y[r]) == c ? 1.0 : 0.0);
        double* w = &m.weights[c * stride];
        for (std::size_t j = 0; j < d; ++j) w[j] -= lr * (g * xr[j] + config.l2 * w[j]);
        w[d] -= lr * g;
      }
    }
    m.loss_history.push_back(m.loss(data, config.l2));
  }
  return m;
}

double LogisticModel::loss(const TrainingSet& data, double l2) const {
  const std::size_t stride = n_features + 1;
  std::vector<double> z(n_classes);
  double total = 0.0;
  for (std::size_t r = 0; r < data.x.rows(); ++r) {
    auto xr = data.x.row(r);
    for (std::size_t c = 0; c < n_classes; ++c) {
      const double* w = &weights[c * stride];
      double acc = w[n_features];
      for (std::size_t j = 0; j < n_features; ++j) acc += w[j] * xr[j];
      z[c] = acc;
    }
    const double mx = *std::max_element(z.begin(), z.end());
    double lse = 0.0;
    for (double v : z) lse += std::exp(v - mx);
    total += mx + std::log(lse) - z[static_cast<std::size_t>(data.y[r])];
  }
  double reg = 0.0;
  for (std::size_t c = 0; c < n_classes; ++c)
    for (std::size_t j = 0; j < n_features; ++j) reg += weights[c * stride + j] * weights[c * stride + j];
  const double n = static_cast<double>(std::max<std::size_t>(data.x.rows(), 1));
  return total / n + 0.5 * l2 * reg;
}

void LogisticModel::predict_proba(const Matrix& x, Matrix& out) const {
  const std::size_t stride = n_features + 1;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto xr = x.row(r);
    auto row = out.row(r);
    for (std::size_t c = 0; c < n_classes; ++c) {
      const double* w = &weights[c * stride];
      double acc = w[n_features];
      for (std::size_t j = 0; j < n_features; ++j) acc += w[j] * xr[j];
      row[c] = acc;
    }
    softmax_inplace(row);
  }
}

KnnModel KnnModel::fit(const TrainingSet& data, const KnnConfig& config, std::uint64_t seed) {
  KnnModel m;
  m.n_classes = data.n_classes;
  const std::size_t n = data.x.rows();
  const std::size_t cap = std::min(n, config.max_reference_points);
  std::vector<std::size_t> slots(cap);
  std::iota(slots.begin(), slots.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = cap; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    const auto j = pick(rng);
    if (j < cap) slots[j] = i;
  }
  m.k = std::min(config.k, std::max<std::size_t>(cap, 1));
  m.reference = Matrix(cap, data.x.cols());
  m.reference_labels.resize(cap);
  for (std::size_t s = 0; s < cap; ++s) {
    auto src = data.x.row(slots[s]);
    std::copy(src.begin(), src.end(), m.reference.row(s).begin());
    m.reference_labels[s] = data.y[slots[s]];
  }
  return m;
}

void KnnModel::predict_proba(const Matrix& x, Matrix& out) const {
  const std::size_t m = reference.rows();
  const std::size_t d = reference.cols();
  const std::size_t k_eff = std::min(k, m);
  std::vector<std::pair<double, std::size_t>> dist(m);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto q = x.row(r);
    for (std::size_t i = 0; i < m; ++i) {
      const double* ref = &reference.data()[i * d];
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = q[j] - ref[j];
        acc += diff * diff;
      }
      dist[i] = {acc, i};
    }
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_eff - 1), dist.end());
    auto row = out.row(r);
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t i = 0; i < k_eff; ++i)
      row[static_cast<std::size_t>(reference_labels[dist[i].second])] += 1.0 / static_cast<double>(k_eff);
  }
}

void ConstantModel::predict_proba(const Matrix& x, Matrix& out) const {
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto row = out.row(r);
    std::fill(row.begin(), row.end(), 0.0);
    row[static_cast<std::size_t>(label)] = 1.0;
  }
}

FittedClassifier fit_classifier(const TrainingSet& data, const ClassifierConfig& config, std::uint64_t seed) {
  std::vector<std::size_t> present(data.n_classes, 0);
  for (int c : data.y) ++present[static_cast<std::size_t>(c)];
  if (std::count_if(present.begin(), present.end(), [](std::size_t v) { return v > 0; }) == 1)
    return ConstantModel{data.n_classes, static_cast<int>(std::find_if(present.begin(), present.end(),
                                                                       [](std::size_t v) { return v > 0; }) -
                                                          present.begin())};
  return std::visit(overloaded{
                        [&](const DecisionTreeConfig& c) -> FittedClassifier { return DecisionTreeModel::fit(data, c); },
                        [&](const NaiveBayesConfig& c) -> FittedClassifier { return NaiveBayesModel::fit(data, c); },
                        [&](const LogisticSgdConfig& c) -> FittedClassifier {
                          return LogisticModel::fit(data, c, seed);
                        },
                        [&](const KnnConfig& c) -> FittedClassifier { return KnnModel::fit(data, c, seed); },
                    },
                    config);
}

Matrix predict_proba(const FittedClassifier& model, const Matrix& x) {
  return std::visit(
      [&x](const auto& m) {
        Matrix out(x.rows(), m.n_classes);
        m.predict_proba(x, out);
        return out;
      },
      model);
}

}  // namespace driftml
