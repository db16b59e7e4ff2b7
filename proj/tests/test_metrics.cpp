#include <doctest.h>

#include <cmath>
#include <random>

#include "driftml/metrics.hpp"

using namespace driftml;

TEST_CASE("perfect predictions") {
  const std::vector<int> y = {0, 1, 1, 0};
  CHECK(accuracy(y, y) == 1.0);
  CHECK(normalized_auc(y, std::vector<double>{0.1, 0.9, 0.8, 0.2}) == 1.0);
}

TEST_CASE("two-point auc") {
  CHECK(normalized_auc(std::vector<int>{1, 0}, std::vector<double>{0.9, 0.1}) == 1.0);
  CHECK(normalized_auc(std::vector<int>{1, 0}, std::vector<double>{0.1, 0.9}) == -1.0);
  CHECK(normalized_auc(std::vector<int>{1, 0}, std::vector<double>{0.5, 0.5}) == 0.0);
}

TEST_CASE("auc with ties uses midranks") {
  // Pairs (pos, neg): (0.8 vs 0.8)=0.5, (0.8 vs 0.2)=1, (0.4 vs 0.8)=0, (0.4 vs 0.2)=1 -> AUC 2.5/4.
  const std::vector<int> y = {1, 1, 0, 0};
  const std::vector<double> s = {0.8, 0.4, 0.8, 0.2};
  CHECK(normalized_auc(y, s) == doctest::Approx(2.0 * 2.5 / 4.0 - 1.0));
}

TEST_CASE("auc agrees with pair counting on random data") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    std::vector<int> y(n);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<int>(rng() % 2);
      s[i] = static_cast<double>(rng() % 5) / 4.0;
    }
    double wins = 0, pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (y[i] == 1 && y[j] == 0) {
          pairs += 1;
          wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
        }
    const double got = normalized_auc(y, s);
    if (pairs == 0) CHECK(std::isnan(got));
    else CHECK(got == doctest::Approx(2.0 * wins / pairs - 1.0).epsilon(1e-12));
  }
}

TEST_CASE("single-class batch gives the undefined sentinel") {
  CHECK(std::isnan(normalized_auc(std::vector<int>{1, 1, 1}, std::vector<double>{0.2, 0.5, 0.9})));
}

TEST_CASE("coin-flip predictions on balanced labels") {
  std::mt19937_64 rng(2018);
  std::bernoulli_distribution coin(0.5);
  const std::size_t n = 10000;
  std::vector<int> y(n), pred(n);
  Matrix proba(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = static_cast<int>(i % 2);
    const double p = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    proba(i, 1) = p;
    proba(i, 0) = 1.0 - p;
    pred[i] = coin(rng);
  }
  CHECK(std::abs(accuracy(y, pred) - 0.5) <= 0.05);
  CHECK(std::abs(score(Metric::NormalizedAuc, y, proba)) <= 0.05);
  CHECK(std::abs(score(Metric::Accuracy, y, proba) - 0.5) <= 0.05);
}

TEST_CASE("metric names") {
  CHECK(parse_metric("accuracy") == Metric::Accuracy);
  CHECK(parse_metric("normalized_auc") == Metric::NormalizedAuc);
  CHECK(parse_metric("auc") == Metric::NormalizedAuc);
  CHECK_THROWS(parse_metric("f1"));
  CHECK_THROWS(accuracy(std::vector<int>{}, std::vector<int>{}));
}
