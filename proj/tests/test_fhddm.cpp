#include <doctest.h>

#include <cmath>
#include <random>

#include "driftml/fhddm.hpp"
#include "fhddm_oracle.hpp"

using namespace driftml;

namespace {

std::optional<std::size_t> run(FhddmState& d, const std::vector<bool>& stream) {
  for (std::size_t t = 0; t < stream.size(); ++t)
    if (d.step(stream[t]).drift) return t;
  return std::nullopt;
}

}  // namespace

TEST_CASE("epsilon for n=25, delta=1e-7") {
  FhddmState d;
  CHECK(std::abs(d.epsilon() - 0.5677692) <= 1e-7);
  CHECK(d.epsilon() == std::sqrt(std::log(1e7) / 50.0));
}

TEST_CASE("constant correct stream never drifts") {
  FhddmState d;
  for (int i = 0; i < 100; ++i) CHECK_FALSE(d.step(true).drift);
  CHECK(d.mu_max() == 1.0);
}

TEST_CASE("25 correct then errors: alarm on the 15th error") {
  std::vector<bool> stream(25, true);
  stream.resize(60, false);
  FhddmState d;
  const auto at = run(d, stream);
  REQUIRE(at.has_value());
  CHECK(*at == 25 + 14);
  CHECK(at == oracle::first_alarm(stream, 25, 1e-7));
}

TEST_CASE("reset") {
  FhddmState d;
  for (int i = 0; i < 30; ++i) d.step(i < 25);
  const double eps = d.epsilon();
  d.reset();
  CHECK(d.window_size() == 0);
  CHECK(d.mu_max() == 0.0);
  CHECK(d.epsilon() == eps);
  CHECK(fhddm_reset(d) == d);
  for (int i = 0; i < 200; ++i) CHECK_FALSE(d.step(true).drift);
}

TEST_CASE("no alarm before the window is full") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {1u, 5u, 25u, 40u}) {
    FhddmState d({n, 1e-7});
    for (int k = 0; k < 3; ++k) {
      for (std::size_t i = 0; i + 1 < n; ++i) CHECK_FALSE(d.step(rng() % 2).drift);
      d.reset();
    }
  }
}

TEST_CASE("matches the brute-force simulation on random streams") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng() % 30;
    const double delta = std::pow(10.0, -1.0 - static_cast<double>(rng() % 8));
    std::bernoulli_distribution before(0.6 + 0.4 * (rng() % 100) / 100.0);
    std::bernoulli_distribution after((rng() % 100) / 100.0);
    const std::size_t cut = rng() % 200;
    std::vector<bool> stream;
    for (std::size_t t = 0; t < 300; ++t) stream.push_back(t < cut ? before(rng) : after(rng));
    FhddmState d({n, delta});
    CHECK(run(d, stream) == oracle::first_alarm(stream, n, delta));
  }
}

TEST_CASE("bounded-variation streams never alarm") {
  // Window means stay within one window-step of each other, far below epsilon.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    FhddmState d;
    const int period = 2 + static_cast<int>(rng() % 5);
    for (int t = 0; t < 1000; ++t) CHECK_FALSE(d.step(t % period != 0).drift);
  }
}

TEST_CASE("abrupt drop is caught within a window of the drop") {
  for (double a : {0.95, 1.0}) {
    for (double b : {0.0, 0.2, 0.3}) {
      if (a - b <= hoeffding_epsilon(25, 1e-7)) continue;
      std::vector<bool> stream;
      for (int t = 0; t < 100; ++t) stream.push_back((t % 20) < a * 20);
      for (int t = 0; t < 100; ++t) stream.push_back((t % 10) < b * 10);
      FhddmState d;
      const auto at = run(d, stream);
      REQUIRE(at.has_value());
      CHECK(*at >= 100);
      CHECK(*at < 100 + 2 * 25);
    }
  }
}

TEST_CASE("step is pure") {
  FhddmState d;
  for (int i = 0; i < 40; ++i) d.step(i % 3 != 0);
  const auto [a, sa] = fhddm_step(d, false);
  const auto [b, sb] = fhddm_step(d, false);
  CHECK(a == b);
  CHECK(sa.drift == sb.drift);
  CHECK(sa.at_instance == sb.at_instance);
}

TEST_CASE("invalid detector settings") {
  CHECK_THROWS(FhddmState({0, 1e-7}));
  CHECK_THROWS(FhddmState({25, 0.0}));
  CHECK_THROWS(FhddmState({25, 1.0}));
}
