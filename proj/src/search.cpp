#include "driftml/search.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

namespace driftml {

void SearchBudget::validate() const {
  if (max_candidates < 1) throw SearchError("max_candidates must be at least 1");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
    throw SearchError("validation_fraction must be in (0, 1)");
  if (max_seconds && !(*max_seconds > 0.0)) throw SearchError("max_seconds must be positive");
}

std::size_t ModelLibrary::best_index() const {
  if (members.empty()) throw SearchError("empty library");
  std::size_t best = 0;
  for (std::size_t i = 1; i < members.size(); ++i) {
    const double s = members[i].validation_score;
    const double b = members[best].validation_score;
    if (!std::isnan(s) && (std::isnan(b) || s > b)) best = i;
  }
  return best;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::vector<std::vector<std::size_t>> rows_by_class(const Batch& data) {
  std::vector<std::vector<std::size_t>> by_class(data.schema->class_count());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& lab = data.instances[i].label;
    if (!lab) throw SearchError("search data must be labeled");
    by_class[static_cast<std::size_t>(*lab)].push_back(i);
  }
  return by_class;
}

std::size_t classes_present(const Batch& data) {
  std::size_t n = 0;
  for (const auto& rows : rows_by_class(data)) n += !rows.empty();
  return n;
}

}  // namespace

HoldoutSplit stratified_holdout(const Batch& data, double validation_fraction, std::uint64_t seed) {
  auto by_class = rows_by_class(data);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> fit_rows, val_rows;
  for (auto& rows : by_class) {
    if (rows.empty()) continue;
    std::shuffle(rows.begin(), rows.end(), rng);
    auto n_val = static_cast<std::size_t>(std::llround(validation_fraction * static_cast<double>(rows.size())));
    if (rows.size() == 1) n_val = 0;
    n_val = std::min(n_val, rows.size() - 1);
    val_rows.insert(val_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_val));
    fit_rows.insert(fit_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_val), rows.end());
  }
  if (val_rows.empty()) {
    // Move one instance of the largest class so validation is never empty.
    auto largest = std::max_element(by_class.begin(), by_class.end(),
                                    [](const auto& a, const auto& b) { return a.size() < b.size(); });
    if (largest->size() < 2) throw SearchError("not enough data for a validation split");
    const auto moved = largest->back();
    val_rows.push_back(moved);
    fit_rows.erase(std::find(fit_rows.begin(), fit_rows.end(), moved));
  }
  std::sort(fit_rows.begin(), fit_rows.end());
  std::sort(val_rows.begin(), val_rows.end());
  return {data.subset(fit_rows), data.subset(val_rows)};
}

Batch stratified_sample(const Batch& data, std::size_t cap, std::uint64_t seed) {
  if (data.size() <= cap) return data;
  auto by_class = rows_by_class(data);
  std::mt19937_64 rng(seed);
  const double fraction = static_cast<double>(cap) / static_cast<double>(data.size());
  std::vector<std::size_t> picked;
  for (auto& rows : by_class) {
    if (rows.empty()) continue;
    std::shuffle(rows.begin(), rows.end(), rng);
    auto take = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(rows.size())));
    take = std::max<std::size_t>(take, 1);
    picked.insert(picked.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
  }
  std::sort(picked.begin(), picked.end());
  if (picked.size() > cap) picked.resize(cap);
  return data.subset(picked);
}

PipelineConfig sample_config(std::mt19937_64& rng) {
  using H = HyperparameterSpace;
  auto uniform = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto log_uniform = [&](double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); };
  auto int_between = [&rng](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  auto log_int = [&](std::size_t lo, std::size_t hi) {
    const double v = std::floor(log_uniform(static_cast<double>(lo), static_cast<double>(hi) + 1.0));
    return std::clamp(static_cast<std::size_t>(v), lo, hi);
  };

  PipelineConfig c;
  const auto family = static_cast<ClassifierFamily>(int_between(0, kClassifierFamilyCount - 1));
  c.scaling = int_between(0, 1) ? Scaling::Standardize : Scaling::None;
  c.imputation = int_between(0, 1) ? Imputation::Mean : Imputation::Mode;
  c.one_hot = int_between(0, 1) == 1;
  switch (int_between(0, 2)) {
    case 0: c.selector = NoSelection{}; break;
    case 1: c.selector = VarianceThreshold{uniform(0.0, H::kMaxVarianceThreshold)}; break;
    default: c.selector = TopKMutualInfo{int_between(1, H::kMaxTopK)}; break;
  }
  switch (family) {
    case ClassifierFamily::DecisionTree:
      c.classifier = DecisionTreeConfig{
          static_cast<int>(log_int(static_cast<std::size_t>(H::kMinDepth), static_cast<std::size_t>(H::kMaxDepth))),
          log_int(1, H::kMaxMinLeaf), int_between(0, 1) ? SplitCriterion::Entropy : SplitCriterion::Gini};
      break;
    case ClassifierFamily::NaiveBayes:
      c.classifier = NaiveBayesConfig{log_uniform(H::kMinAlpha, H::kMaxAlpha)};
      break;
    case ClassifierFamily::LogisticSgd:
      c.classifier = LogisticSgdConfig{log_uniform(H::kMinLearningRate, H::kMaxLearningRate),
                                       log_uniform(H::kMinL2, H::kMaxL2), int_between(H::kMinEpochs, H::kMaxEpochs)};
      break;
    case ClassifierFamily::Knn:
      c.classifier = KnnConfig{2 * int_between(0, (H::kMaxK - 1) / 2) + 1,
                               log_int(H::kMinReferencePoints, H::kMaxReferencePoints)};
      break;
  }
  return c;
}

LibraryMember evaluate_member(PipelinePtr model, const Batch& validation, std::span<const int> labels, Metric metric) {
  LibraryMember m;
  m.validation_proba = predict_proba(*model, validation);
  m.validation_score = score(metric, labels, m.validation_proba);
  m.model = std::move(model);
  return m;
}

namespace {

// Runs task(i) for i in [0, n) on a small worker pool; stop() is polled before
// each claim.
template <class Task, class Stop>
void parallel_for(std::size_t n, Task&& task, Stop&& stop) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (;;) {
      if (stop()) return;
      const auto i = next.fetch_add(1);
      if (i >= n) return;
      task(i);
    }
  };
  if (workers == 1) {
    loop();
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(loop);
}

}  // namespace

ModelLibrary run_search(const Batch& train, const SearchBudget& budget, std::span<const PipelineConfig> portfolio) {
  budget.validate();
  if (!train.schema) throw SearchError("training batch has no schema");
  if (train.size() < 10) throw SearchError("search needs at least 10 training instances");
  if (classes_present(train) < 2) throw SearchError("search needs at least 2 classes in the training data");

  const auto start = std::chrono::steady_clock::now();
  auto split = stratified_holdout(train, budget.validation_fraction, derive_seed(budget.seed, 0));

  std::vector<PipelineConfig> candidates;
  for (std::size_t i = 0; i < portfolio.size() && candidates.size() < budget.max_candidates; ++i)
    candidates.push_back(portfolio[i]);
  std::mt19937_64 rng(derive_seed(budget.seed, 1));
  while (candidates.size() < budget.max_candidates) candidates.push_back(sample_config(rng));

  ModelLibrary lib;
  lib.metric = budget.metric;
  lib.validation_labels = split.validation.labels();
  std::vector<std::optional<LibraryMember>> results(candidates.size());

  auto deadline_passed = [&] {
    if (!budget.max_seconds) return false;
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    return elapsed.count() >= *budget.max_seconds;
  };
  parallel_for(
      candidates.size(),
      [&](std::size_t i) {
        try {
          auto model = std::make_shared<const TrainedPipeline>(
              fit(candidates[i], split.fit, derive_seed(budget.seed, 100 + i)));
          results[i] = evaluate_member(std::move(model), split.validation, lib.validation_labels, budget.metric);
        } catch (const std::exception& e) {
          spdlog::warn("candidate {} ({}) failed: {}", i, to_text(candidates[i]), e.what());
        }
      },
      deadline_passed);

  for (auto& r : results)
    if (r) lib.members.push_back(std::move(*r));
  if (lib.members.empty()) throw SearchError("search finished without a single successful fit");
  lib.validation_set = std::move(split.validation);
  lib.train_set = train;
  return lib;
}

ModelLibrary rescore_library(const ModelLibrary& lib, const Batch& new_validation) {
  if (new_validation.empty()) throw SearchError("cannot rescore on an empty batch");
  if (!new_validation.schema) throw SearchError("validation batch has no schema");
  if (!lib.empty() && !new_validation.schema->compatible_with(*lib.members.front().model->schema()))
    throw DataError("schema mismatch between library and validation batch");
  ModelLibrary out;
  out.metric = lib.metric;
  out.train_set = lib.train_set;
  out.validation_set = new_validation;
  out.validation_labels = new_validation.labels();
  out.members.reserve(lib.size());
  for (const auto& m : lib.members)
    out.members.push_back(evaluate_member(m.model, new_validation, out.validation_labels, lib.metric));
  return out;
}

std::string library_manifest(const ModelLibrary& lib) {
  std::ostringstream os;
  os << "# members=" << lib.size() << " metric=" << metric_name(lib.metric)
     << " validation=" << lib.validation_set.size() << " train=" << lib.train_set.size() << '\n';
  char buf[32];
  for (std::size_t i = 0; i < lib.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6f", lib.members[i].validation_score);
    os << i << '\t' << buf << '\t' << to_text(lib.members[i].model->config()) << '\n';
  }
  return os.str();
}

}  // namespace driftml
