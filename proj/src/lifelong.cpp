#include "driftml/lifelong.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <set>

namespace driftml {

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Base: return "base";
    case Strategy::Replacement: return "replacement";
    case Strategy::WUAll: return "wu-all";
    case Strategy::WULatest: return "wu-latest";
    case Strategy::AddNew: return "add-new";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  for (auto s : kAllStrategies)
    if (strategy_name(s) == name) return s;
  if (name == "wu-batch") return Strategy::WULatest;
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

std::vector<double> RunReport::metrics() const {
  std::vector<double> out;
  out.reserve(batches.size());
  for (const auto& b : batches) out.push_back(b.metric);
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Seed streams, offset by batch index so adaptations never share randomness.
constexpr std::uint64_t kReplacementStream = 1'000'000;
constexpr std::uint64_t kWeightUpdateStream = 2'000'000;
constexpr std::uint64_t kAddNewFitStream = 3'000'000;
constexpr std::uint64_t kAddNewSampleStream = 4'000'000;

SearchBudget budget_for(const LifelongOptions& options, std::uint64_t seed) {
  SearchBudget b = options.budget;
  b.metric = options.metric;
  b.seed = seed;
  return b;
}

Batch all_data(const RunState& state, const Batch& current) {
  std::vector<Batch> parts = state.stored_data;
  parts.push_back(current);
  return concatenate(parts);
}

std::size_t distinct_labels(const Batch& b) {
  std::set<int> seen;
  for (const auto& inst : b.instances)
    if (inst.label) seen.insert(*inst.label);
  return seen.size();
}

void note(RunState& state, std::size_t batch, const std::string& what) {
  spdlog::info("batch {}: {}", batch, what);
  state.notes.push_back("batch " + std::to_string(batch) + ": " + what);
}

void reselect(RunState& state, const Batch& validation, const AdaptContext& ctx) {
  auto lib = rescore_library(state.library, validation);
  auto ens = select_ensemble(lib, ctx.options.ensemble_rounds, ctx.options.metric);
  state.library = std::move(lib);
  state.ensemble = std::move(ens);
}

}  // namespace

RunState initial_state(const Batch& train, const LifelongOptions& options) {
  RunState state;
  state.library = run_search(train, budget_for(options, options.budget.seed), options.portfolio);
  state.ensemble = select_ensemble(state.library, options.ensemble_rounds, options.metric);
  state.detector = FhddmState(options.detector);
  state.stored_data.push_back(train);
  return state;
}

RunState adapt_replacement(RunState state, const Batch& current, const AdaptContext& ctx) {
  state.detector.reset();
  try {
    const Batch data = all_data(state, current);
    auto lib = run_search(data, budget_for(ctx.options, derive_seed(ctx.options.budget.seed,
                                                                    kReplacementStream + ctx.batch_index)),
                          ctx.options.portfolio);
    auto ens = select_ensemble(lib, ctx.options.ensemble_rounds, ctx.options.metric);
    state.library = std::move(lib);
    state.ensemble = std::move(ens);
  } catch (const std::exception& e) {
    note(state, ctx.batch_index, std::string("replacement failed, keeping previous ensemble: ") + e.what());
  }
  return state;
}

RunState adapt_weight_update(RunState state, const Batch& current, WeightScope scope, const AdaptContext& ctx) {
  state.detector.reset();
  const Batch validation =
      scope == WeightScope::Latest
          ? current
          : stratified_sample(all_data(state, current), ctx.options.validation_cap,
                              derive_seed(ctx.options.budget.seed, kWeightUpdateStream + ctx.batch_index));
  if (validation.empty() || distinct_labels(validation) < 2) {
    note(state, ctx.batch_index, "weight update skipped: validation data holds a single class");
    return state;
  }
  try {
    reselect(state, validation, ctx);
  } catch (const std::exception& e) {
    note(state, ctx.batch_index, std::string("weight update failed: ") + e.what());
  }
  return state;
}

RunState adapt_add_new(RunState state, const Batch& current, const AdaptContext& ctx) {
  state.detector.reset();
  const Batch data = all_data(state, current);
  const auto& portfolio = ctx.options.portfolio;
  const std::size_t n_new = std::min(ctx.options.add_new_candidates, portfolio.size());
  std::size_t added = 0;
  for (std::size_t i = 0; i < n_new; ++i) {
    try {
      const auto seed = derive_seed(ctx.options.budget.seed, kAddNewFitStream + ctx.batch_index * 1000 + i);
      LibraryMember m;
      m.model = std::make_shared<const TrainedPipeline>(fit(portfolio[i], data, seed));
      state.library.members.push_back(std::move(m));
      ++added;
    } catch (const std::exception& e) {
      spdlog::warn("add-new candidate {} failed: {}", i, e.what());
    }
  }
  if (added == 0) note(state, ctx.batch_index, "add-new fitted no models, falling back to weight update on all data");

  const Batch sampled = stratified_sample(
      data, ctx.options.validation_cap, derive_seed(ctx.options.budget.seed, kAddNewSampleStream + ctx.batch_index));
  const bool usable = distinct_labels(sampled) >= 2;
  if (!usable) note(state, ctx.batch_index, "add-new kept the previous validation set: new sample holds a single class");
  const Batch validation = usable ? sampled : state.library.validation_set;
  reselect(state, validation, ctx);
  return state;
}

RunReport run_lifelong(const Batch& train, std::span<const Batch> test_batches, const LifelongOptions& options,
                       RunObserver* observer) {
  if (!train.schema) throw LifelongError("training batch has no schema");
  RunReport report;
  report.strategy = options.strategy;
  report.metric = options.metric;

  auto t0 = Clock::now();
  RunState state;
  try {
    state = initial_state(train, options);
  } catch (const std::exception& e) {
    throw LifelongError(std::string("initial search failed: ") + e.what());
  }
  report.initial_search_ms = ms_since(t0);

  for (std::size_t t = 0; t < test_batches.size(); ++t) {
    const Batch& batch = test_batches[t];
    if (!batch.schema || !batch.schema->compatible_with(*train.schema))
      throw LifelongError("batch " + std::to_string(batch.index) + " does not match the training schema");

    BatchRecord rec;
    rec.batch = batch.index;

    // Predict on a copy without labels.
    t0 = Clock::now();
    const Batch hidden = batch.without_labels();
    const Matrix proba = ensemble_predict_proba(state.ensemble, state.library, hidden);
    const std::vector<int> predictions = argmax_rows(proba);
    rec.predict_ms = ms_since(t0);
    if (observer) observer->on_predicted(batch.index, hidden, predictions);

    std::vector<int> labels;
    try {
      labels = batch.labels();
    } catch (const DataError& e) {
      throw LifelongError("batch " + std::to_string(batch.index) + ": " + e.what());
    }
    rec.metric = score(options.metric, labels, proba);
    state.metrics_per_batch.push_back(rec.metric);
    if (observer) observer->on_scored(batch.index, rec.metric);
    if (observer) observer->on_labels_revealed(batch.index);

    for (std::size_t j = 0; j < predictions.size(); ++j) {
      const auto signal = state.detector.step(predictions[j] == labels[j]);
      if (signal.drift) {
        rec.drift = true;
        rec.drift_offset = j;
        state.drift_events.push_back({batch.index, j});
        break;
      }
    }

    if (rec.drift) {
      t0 = Clock::now();
      const AdaptContext ctx{options, batch.index};
      switch (options.strategy) {
        case Strategy::Base: break;
        case Strategy::Replacement: state = adapt_replacement(std::move(state), batch, ctx); break;
        case Strategy::WUAll: state = adapt_weight_update(std::move(state), batch, WeightScope::All, ctx); break;
        case Strategy::WULatest:
          state = adapt_weight_update(std::move(state), batch, WeightScope::Latest, ctx);
          break;
        case Strategy::AddNew: state = adapt_add_new(std::move(state), batch, ctx); break;
      }
      rec.adapted = options.strategy != Strategy::Base;
      rec.adapt_ms = ms_since(t0);
      if (observer && rec.adapted) observer->on_adapted(batch.index, state);
    }
    state.stored_data.push_back(batch);

    if (std::isnan(rec.metric)) {
      ++report.excluded_batches;
      note(state, batch.index, "metric undefined (single-class batch), excluded from the mean");
    }
    report.total_predict_ms += rec.predict_ms;
    report.total_adapt_ms += rec.adapt_ms;
    report.batches.push_back(rec);
  }

  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& b : report.batches)
    if (!std::isnan(b.metric)) {
      sum += b.metric;
      ++counted;
    }
  report.mean_metric = counted ? sum / static_cast<double>(counted) : kUndefinedScore;
  report.drift_events = state.drift_events;
  report.notes = state.notes;
  return report;
}

}  // namespace driftml
