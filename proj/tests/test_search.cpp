#include <doctest.h>

#include <cmath>
#include <random>

#include "driftml/search.hpp"
#include "driftml/stagger.hpp"
#include "fixtures.hpp"

using namespace driftml;

TEST_CASE("budget of three with a three-config portfolio yields three members") {
  const auto train = fixtures::linear_batch(120, 1);
  auto portfolio = default_config_portfolio();
  portfolio.resize(3);
  SearchBudget b;
  b.max_candidates = 3;
  const auto lib = run_search(train, b, portfolio);
  REQUIRE(lib.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(lib.members[i].model->config() == portfolio[i]);
}

TEST_CASE("search is deterministic without a time limit") {
  const auto train = fixtures::mixed_batch(200, 2);
  SearchBudget b;
  b.max_candidates = 20;
  b.seed = 77;
  const auto portfolio = default_config_portfolio();
  const auto a = run_search(train, b, portfolio);
  const auto c = run_search(train, b, portfolio);
  REQUIRE(a.size() == c.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.members[i].validation_score == c.members[i].validation_score);
    CHECK(a.members[i].validation_proba == c.members[i].validation_proba);
    CHECK(to_text(a.members[i].model->config()) == to_text(c.members[i].model->config()));
  }
}

TEST_CASE("concept-1 stagger data is learned almost perfectly") {
  auto cfg = default_stagger_config(1000, 5);
  cfg.drift_points.clear();
  cfg.concept_schedule = {{1, false}};
  const auto train = generate_stagger(cfg);
  SearchBudget b;
  b.max_candidates = 16;
  const auto lib = run_search(train, b, default_config_portfolio());
  CHECK(lib.members[lib.best_index()].validation_score >= 0.95);

  // Oracle: a plain depth-2 tree fitted directly expresses the conjunction.
  PipelineConfig tree;
  tree.classifier = DecisionTreeConfig{2, 1, SplitCriterion::Gini};
  const auto direct = fit(tree, train, 1);
  CHECK(accuracy(train.labels(), predict(direct, train)) == 1.0);
}

TEST_CASE("search never ends below the best portfolio member") {
  const auto train = fixtures::mixed_batch(250, 3);
  const auto portfolio = default_config_portfolio();
  SearchBudget only_portfolio;
  only_portfolio.max_candidates = portfolio.size();
  SearchBudget wider = only_portfolio;
  wider.max_candidates = portfolio.size() + 10;
  const auto a = run_search(train, only_portfolio, portfolio);
  const auto b = run_search(train, wider, portfolio);
  CHECK(b.members[b.best_index()].validation_score >= a.members[a.best_index()].validation_score);
}

TEST_CASE("library scores are reproducible from stored predictions") {
  const auto lib = run_search(fixtures::mixed_batch(200, 4), SearchBudget{}, default_config_portfolio());
  for (const auto& m : lib.members) CHECK(score(lib.metric, lib.validation_labels, m.validation_proba) == m.validation_score);
}

TEST_CASE("rescoring") {
  const auto train = fixtures::linear_batch(300, 8);
  SearchBudget b;
  b.max_candidates = 6;
  const auto lib = run_search(train, b, default_config_portfolio());

  SUBCASE("against the original validation set is idempotent") {
    const auto again = rescore_library(lib, lib.validation_set);
    REQUIRE(again.size() == lib.size());
    for (std::size_t i = 0; i < lib.size(); ++i)
      CHECK(std::abs(again.members[i].validation_score - lib.members[i].validation_score) <= 1e-12);
  }

  SUBCASE("a memorizing member collapses on flipped labels") {
    PipelineConfig knn1;
    knn1.classifier = KnnConfig{1, 4096};
    auto memorizer = std::make_shared<const TrainedPipeline>(fit(knn1, train, 1));
    ModelLibrary one;
    one.metric = Metric::Accuracy;
    one.members.push_back(evaluate_member(memorizer, train, train.labels(), Metric::Accuracy));
    one.validation_set = train;
    one.validation_labels = train.labels();
    CHECK(one.members[0].validation_score == 1.0);

    Batch flipped = train;
    for (auto& inst : flipped.instances) inst.label = 1 - *inst.label;
    const auto re = rescore_library(one, flipped);
    CHECK(re.size() == 1);
    CHECK(re.members[0].validation_score < 0.5);
    CHECK(re.members[0].model == memorizer);
  }
}

TEST_CASE("sample_config") {
  std::mt19937_64 rng(1);
  bool seen[kClassifierFamilyCount] = {};
  for (int i = 0; i < 1000; ++i) {
    const auto c = sample_config(rng);
    REQUIRE_NOTHROW(validate(c));
    seen[static_cast<std::size_t>(family_of(c.classifier))] = true;
  }
  for (bool s : seen) CHECK(s);

  std::mt19937_64 a(5), b(5);
  CHECK(sample_config(a) == sample_config(b));
}

TEST_CASE("stratified holdout keeps class proportions and order") {
  const auto data = fixtures::linear_batch(301, 12);
  const auto split = stratified_holdout(data, 0.33, 4);
  CHECK(split.fit.size() + split.validation.size() == data.size());
  auto positives = [](const Batch& b) {
    std::size_t n = 0;
    for (const auto& i : b.instances) n += *i.label == 1;
    return static_cast<double>(n) / static_cast<double>(b.size());
  };
  CHECK(std::abs(positives(split.validation) - positives(data)) < 0.02);
  CHECK(fingerprint(split.fit) == fingerprint(stratified_holdout(data, 0.33, 4).fit));

  const auto sample = stratified_sample(data, 100, 9);
  CHECK(sample.size() <= 100);
  CHECK(sample.size() >= 98);
  CHECK(fingerprint(stratified_sample(data, 1000, 9)) == fingerprint(data));
}

TEST_CASE("search input checks") {
  SearchBudget b;
  CHECK_THROWS_AS(run_search(fixtures::linear_batch(5, 1), b, default_config_portfolio()), SearchError);
  b.validation_fraction = 1.5;
  CHECK_THROWS(b.validate());
}
